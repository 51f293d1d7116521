#include "shift/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace shift {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string token;
  while (std::getline(in, token, sep)) fields.push_back(token);
  return fields;
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

PointCloud read_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cloud file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty cloud file: " + path);
  const auto header = split(strip(line), ',');
  if (header.size() < 3 || strip(header[0]) != "x" || strip(header[1]) != "y" ||
      strip(header[2]) != "z") {
    throw ConfigError("cloud CSV must start with header x,y,z[,a]: " + path);
  }
  const bool has_attr = header.size() >= 4 && strip(header[3]) == "a";

  PointCloud cloud;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() < 3 || (has_attr && fields.size() < 4)) {
      throw ConfigError("cloud CSV line " + std::to_string(line_no) + ": too few fields");
    }
    try {
      cloud.points.emplace_back(std::stod(fields[0]), std::stod(fields[1]),
                                std::stod(fields[2]));
      if (has_attr) cloud.attributes.push_back(std::stod(fields[3]));
    } catch (const std::exception&) {
      throw ConfigError("cloud CSV line " + std::to_string(line_no) + ": bad number");
    }
  }
  return cloud;
}

PointCloud read_cloud_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cloud file: " + path);
  std::string line;
  if (!std::getline(in, line) || strip(line) != "ply") {
    throw ConfigError("not a PLY file: " + path);
  }
  std::size_t vertex_count = 0;
  std::vector<std::string> properties;
  bool ascii = false;
  bool in_vertex_element = false;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line == "end_header") break;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = (fmt == "ascii");
    } else if (word == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      in_vertex_element = (name == "vertex");
      if (in_vertex_element) vertex_count = count;
    } else if (word == "property" && in_vertex_element) {
      std::string type, name;
      ls >> type >> name;
      properties.push_back(name);
    }
  }
  if (!ascii) throw ConfigError("only ASCII PLY is supported: " + path);
  int ix = -1, iy = -1, iz = -1;
  for (std::size_t k = 0; k < properties.size(); ++k) {
    if (properties[k] == "x") ix = static_cast<int>(k);
    if (properties[k] == "y") iy = static_cast<int>(k);
    if (properties[k] == "z") iz = static_cast<int>(k);
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    throw ConfigError("PLY needs x,y,z vertex properties: " + path);
  }
  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  for (std::size_t k = 0; k < vertex_count && std::getline(in, line); ++k) {
    std::istringstream ls(line);
    std::vector<double> vals(properties.size(), 0.0);
    for (auto& v : vals) {
      if (!(ls >> v)) throw ConfigError("PLY vertex row malformed: " + path);
    }
    cloud.points.emplace_back(vals[static_cast<std::size_t>(ix)],
                              vals[static_cast<std::size_t>(iy)],
                              vals[static_cast<std::size_t>(iz)]);
  }
  return cloud;
}

PointCloud read_cloud(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "ply") return read_cloud_ply(path);
  return read_cloud_csv(path);
}

void write_cloud_csv(const PointCloud& cloud, const std::string& path) {
  std::ostringstream out;
  out << (cloud.has_attributes() ? "x,y,z,a\n" : "x,y,z\n");
  out.precision(17);
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const Vec3& p = cloud.points[k];
    out << p.x() << ',' << p.y() << ',' << p.z();
    if (cloud.has_attributes()) out << ',' << cloud.attributes[k];
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::string elevation_to_json(const ElevationMap& map) {
  json j;
  j["origin"] = {map.origin().x(), map.origin().y()};
  j["resolution"] = map.resolution();
  j["rows"] = map.rows();
  j["cols"] = map.cols();
  j["data"] = map.data();
  std::vector<int> mask(map.mask().begin(), map.mask().end());
  j["mask"] = mask;
  return j.dump();
}

ElevationMap elevation_from_json(const std::string& text) {
  const json j = json::parse(text);
  ElevationMap map(Vec2(j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()),
                   j.at("resolution").get<double>(), j.at("rows").get<int>(),
                   j.at("cols").get<int>());
  const auto& data = j.at("data");
  const auto& mask = j.at("mask");
  if (static_cast<int>(data.size()) != map.rows() * map.cols()) {
    throw ConfigError("elevation JSON: data size mismatch");
  }
  for (int i = 0; i < map.rows(); ++i) {
    for (int jj = 0; jj < map.cols(); ++jj) {
      const std::size_t idx = static_cast<std::size_t>(i * map.cols() + jj);
      map.at(i, jj) = data[idx].get<double>();
      map.set_valid(i, jj, mask[idx].get<int>() != 0);
    }
  }
  return map;
}

void write_elevation(const ElevationMap& map, const std::string& path) {
  write_text_file(path, elevation_to_json(map));
}

ElevationMap read_elevation(const std::string& path) {
  return elevation_from_json(read_text_file(path));
}

std::string semantic_to_json(const SemanticField& field) {
  json j;
  j["origin"] = {field.origin.x(), field.origin.y()};
  j["resolution"] = field.resolution;
  j["rows"] = field.rows;
  j["cols"] = field.cols;
  j["data"] = field.values;
  return j.dump();
}

SemanticField semantic_from_json(const std::string& text) {
  const json j = json::parse(text);
  SemanticField field;
  field.origin = Vec2(j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>());
  field.resolution = j.at("resolution").get<double>();
  field.rows = j.at("rows").get<int>();
  field.cols = j.at("cols").get<int>();
  field.values = j.at("data").get<std::vector<double>>();
  if (static_cast<int>(field.values.size()) != field.rows * field.cols) {
    throw ConfigError("semantic JSON: data size mismatch");
  }
  for (const double v : field.values) {
    if (v < 0.0 || v > 1.0) throw ConfigError("semantic JSON: value outside [0,1]");
  }
  return field;
}

void write_semantic(const SemanticField& field, const std::string& path) {
  write_text_file(path, semantic_to_json(field));
}

SemanticField read_semantic(const std::string& path) {
  return semantic_from_json(read_text_file(path));
}

std::string coverage_path_to_json(const CoveragePath& path) {
  json list = json::array();
  for (const auto& wp : path.waypoints) {
    list.push_back({{"x", wp.position.x()},
                    {"y", wp.position.y()},
                    {"z", wp.position.z()},
                    {"row", wp.row},
                    {"col", wp.col}});
  }
  return list.dump();
}

std::string timed_path_to_jsonl(const TimedPath& path) {
  std::ostringstream out;
  for (const auto& pt : path.points) {
    json j{{"x", pt.position.x()}, {"y", pt.position.y()}, {"z", pt.position.z()},
           {"t_dwell", pt.t_dwell}, {"v", pt.v}};
    if (pt.window_id >= 0) {
      j["window_id"] = pt.window_id;
    } else {
      j["window_id"] = nullptr;
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

TimedPath timed_path_from_jsonl(const std::string& text) {
  TimedPath path;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    const json j = json::parse(line);
    TimedPoint pt;
    pt.position = Vec3(j.at("x").get<double>(), j.at("y").get<double>(),
                       j.at("z").get<double>());
    pt.t_dwell = j.at("t_dwell").get<double>();
    pt.v = j.at("v").get<double>();
    if (j.contains("window_id") && !j.at("window_id").is_null()) {
      pt.window_id = j.at("window_id").get<int>();
    }
    path.points.push_back(pt);
  }
  return path;
}

std::string astar_path_to_json(const AStarResult& result) {
  json list = json::array();
  for (std::size_t k = 0; k < result.points.size(); ++k) {
    list.push_back({{"x", result.points[k].x()},
                    {"y", result.points[k].y()},
                    {"z", result.points[k].z()},
                    {"row", result.cells[k].first},
                    {"col", result.cells[k].second},
                    {"d", result.clearances[k]}});
  }
  return list.dump();
}

std::string tree_dump_to_json(const IkdTree& tree) {
  json list = json::array();
  for (const auto& node : tree.dump()) {
    list.push_back({{"x", node.point.x()},
                    {"y", node.point.y()},
                    {"z", node.point.z()},
                    {"axis", node.axis},
                    {"live", node.live}});
  }
  return list.dump();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace shift
