#include "shift/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shift {

std::uint64_t RandomStream::next_raw() {
  // splitmix64; stable across platforms.
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::uniform() {
  return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomStream::normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double two_pi = 6.283185307179586;
  spare_ = mag * std::sin(two_pi * u2);
  has_spare_ = true;
  return mean + stddev * mag * std::cos(two_pi * u2);
}

int RandomStream::uniform_int(int lo, int hi) {
  const int span = hi - lo + 1;
  return lo + static_cast<int>(uniform() * span) % span;
}

namespace {

TerrainKind terrain_kind_from(const std::string& name) {
  if (name == "flat") return TerrainKind::kFlat;
  if (name == "paraboloid") return TerrainKind::kParaboloid;
  if (name == "ridged") return TerrainKind::kRidged;
  throw ConfigError("unknown terrain type: " + name);
}

SemanticKind semantic_kind_from(const std::string& name) {
  if (name == "uniform") return SemanticKind::kUniform;
  if (name == "gradient") return SemanticKind::kGradient;
  if (name == "patches") return SemanticKind::kPatches;
  throw ConfigError("unknown semantic type: " + name);
}

Vec2 pair_from(const Config& cfg, const std::string& key, Vec2 fallback) {
  if (!cfg.has(key)) return fallback;
  const auto nums = Config::parse_numbers(cfg.get_string(key));
  if (nums.size() != 2) throw ConfigError("config key " + key + ": expected two numbers");
  return {nums[0], nums[1]};
}

}  // namespace

ScenarioSpec ScenarioSpec::from_config(const Config& cfg) {
  ScenarioSpec spec;
  spec.terrain = terrain_kind_from(cfg.get_string("terrain.type", "flat"));
  spec.origin = pair_from(cfg, "terrain.origin", spec.origin);
  spec.extent = pair_from(cfg, "terrain.extent", spec.extent);
  if (spec.extent.x() <= 0.0 || spec.extent.y() <= 0.0) {
    throw ConfigError("terrain.extent must be positive");
  }
  spec.base_z = cfg.get_double("terrain.base_z", spec.base_z);
  spec.paraboloid_coeff = cfg.get_double("terrain.curvature", spec.paraboloid_coeff);
  spec.ridge_amplitude = cfg.get_double("terrain.ridge_amplitude", spec.ridge_amplitude);
  spec.ridge_frequency = cfg.get_double("terrain.ridge_frequency", spec.ridge_frequency);
  const Vec2 samples = pair_from(cfg, "terrain.samples",
                                 Vec2(spec.samples_x, spec.samples_y));
  spec.samples_x = static_cast<int>(samples.x());
  spec.samples_y = static_cast<int>(samples.y());
  if (spec.samples_x < 4 || spec.samples_y < 4) {
    throw ConfigError("terrain.samples must be at least 4,4");
  }
  spec.noise_sigma = cfg.get_double("terrain.noise_sigma", spec.noise_sigma);
  spec.spike_count = cfg.get_int("terrain.spike_count", spec.spike_count);
  spec.spike_magnitude = cfg.get_double("terrain.spike_magnitude", spec.spike_magnitude);

  spec.semantic = semantic_kind_from(cfg.get_string("semantic.type", "uniform"));
  spec.uniform_level = cfg.get_double("semantic.level", spec.uniform_level);
  spec.gradient_from = cfg.get_double("semantic.gradient_from", spec.gradient_from);
  spec.gradient_to = cfg.get_double("semantic.gradient_to", spec.gradient_to);
  spec.background_level = cfg.get_double("semantic.background", spec.background_level);
  for (const auto& value : cfg.get_all("semantic.patch")) {
    const auto nums = Config::parse_numbers(value);
    if (nums.size() != 4) {
      throw ConfigError("semantic.patch expects cx,cy,radius,level: " + value);
    }
    spec.patches.push_back({{nums[0], nums[1]}, nums[2], nums[3]});
  }
  spec.random_patches = cfg.get_int("semantic.random_patches", spec.random_patches);
  spec.patch_level_min = cfg.get_double("semantic.patch_level_min", spec.patch_level_min);
  spec.patch_level_max = cfg.get_double("semantic.patch_level_max", spec.patch_level_max);
  spec.patch_radius_min = cfg.get_double("semantic.patch_radius_min", spec.patch_radius_min);
  spec.patch_radius_max = cfg.get_double("semantic.patch_radius_max", spec.patch_radius_max);
  spec.grid_resolution = cfg.get_double("semantic.resolution", spec.grid_resolution);
  if (spec.grid_resolution <= 0.0) throw ConfigError("semantic.resolution must be positive");

  for (const auto& value : cfg.get_all("obstacles.cylinder")) {
    const auto nums = Config::parse_numbers(value);
    if (nums.size() != 4) {
      throw ConfigError("obstacles.cylinder expects cx,cy,radius,height: " + value);
    }
    spec.static_cylinders.push_back({{nums[0], nums[1]}, nums[2], nums[3], 0.0});
  }
  for (const auto& value : cfg.get_all("obstacles.event")) {
    // time, add|remove, cx, cy, radius, height
    std::vector<std::string> fields;
    std::istringstream in(value);
    std::string token;
    while (std::getline(in, token, ',')) {
      const auto b = token.find_first_not_of(" \t");
      const auto e = token.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? "" : token.substr(b, e - b + 1));
    }
    if (fields.size() != 6 || (fields[1] != "add" && fields[1] != "remove")) {
      throw ConfigError("obstacles.event expects time,add|remove,cx,cy,radius,height: " + value);
    }
    ScenarioSpec::DynamicEvent ev;
    try {
      ev.time = std::stod(fields[0]);
      ev.add = (fields[1] == "add");
      ev.cylinder = {{std::stod(fields[2]), std::stod(fields[3])},
                     std::stod(fields[4]), std::stod(fields[5]), 0.0};
    } catch (const std::exception&) {
      throw ConfigError("obstacles.event malformed: " + value);
    }
    spec.dynamic_events.push_back(ev);
  }
  spec.random_cylinders = cfg.get_int("obstacles.random_cylinders", spec.random_cylinders);
  spec.obstacle_density = cfg.get_double("obstacles.density", spec.obstacle_density);
  spec.cylinder_radius = cfg.get_double("obstacles.cylinder_radius", spec.cylinder_radius);
  spec.cylinder_height = cfg.get_double("obstacles.cylinder_height", spec.cylinder_height);
  spec.obstacle_point_spacing =
      cfg.get_double("obstacles.point_spacing", spec.obstacle_point_spacing);

  spec.robot_radius = cfg.get_double("robot.radius", spec.robot_radius);
  return spec;
}

double terrain_height(const ScenarioSpec& spec, double x, double y) {
  const double cx = spec.origin.x() + 0.5 * spec.extent.x();
  const double cy = spec.origin.y() + 0.5 * spec.extent.y();
  switch (spec.terrain) {
    case TerrainKind::kFlat:
      return spec.base_z;
    case TerrainKind::kParaboloid:
      return spec.base_z + spec.paraboloid_coeff *
                               ((x - cx) * (x - cx) + (y - cy) * (y - cy));
    case TerrainKind::kRidged:
      // ridge_frequency is cycles per meter.
      return spec.base_z +
             spec.ridge_amplitude *
                 std::sin(6.283185307179586 * spec.ridge_frequency * (x - spec.origin.x())) *
                 std::cos(6.283185307179586 * spec.ridge_frequency * (y - spec.origin.y()));
  }
  return spec.base_z;
}

std::vector<Vec3> sample_cylinder(const Cylinder& cyl, double point_spacing) {
  std::vector<Vec3> points;
  const double circumference = 6.283185307179586 * cyl.radius;
  const int n_angles = std::max(8, static_cast<int>(std::ceil(circumference / point_spacing)));
  const int n_heights = std::max(2, static_cast<int>(std::ceil(cyl.height / point_spacing)) + 1);
  points.reserve(static_cast<std::size_t>(n_angles) * static_cast<std::size_t>(n_heights));
  for (int h = 0; h < n_heights; ++h) {
    const double z = cyl.base_z + cyl.height * static_cast<double>(h) /
                                      static_cast<double>(n_heights - 1);
    for (int a = 0; a < n_angles; ++a) {
      const double ang = 6.283185307179586 * static_cast<double>(a) /
                         static_cast<double>(n_angles);
      points.emplace_back(cyl.center.x() + cyl.radius * std::cos(ang),
                          cyl.center.y() + cyl.radius * std::sin(ang), z);
    }
  }
  return points;
}

Aabb cylinder_box(const Cylinder& cyl) {
  const double pad = 1e-6;
  Aabb box;
  box.min = Vec3(cyl.center.x() - cyl.radius - pad, cyl.center.y() - cyl.radius - pad,
                 cyl.base_z - pad);
  box.max = Vec3(cyl.center.x() + cyl.radius + pad, cyl.center.y() + cyl.radius + pad,
                 cyl.base_z + cyl.height + pad);
  return box;
}

bool ScenarioData::blocked_by_static(double x, double y) const {
  for (const auto& cyl : static_cylinders) {
    const double dx = x - cyl.center.x();
    const double dy = y - cyl.center.y();
    const double r = cyl.radius + spec.robot_radius;
    if (dx * dx + dy * dy <= r * r) return true;
  }
  return false;
}

ScenarioData generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  ScenarioData data;
  data.spec = spec;
  data.seed = seed;
  RandomStream rng(seed);

  // Terrain cloud on a regular sample grid, with optional noise and spikes.
  const int nx = spec.samples_x;
  const int ny = spec.samples_y;
  data.cloud.points.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int iy = 0; iy < ny; ++iy) {
    const double y = spec.origin.y() + spec.extent.y() * static_cast<double>(iy) /
                                           static_cast<double>(ny - 1);
    for (int ix = 0; ix < nx; ++ix) {
      const double x = spec.origin.x() + spec.extent.x() * static_cast<double>(ix) /
                                             static_cast<double>(nx - 1);
      double z = terrain_height(spec, x, y);
      if (spec.noise_sigma > 0.0) z += rng.normal(0.0, spec.noise_sigma);
      data.cloud.points.emplace_back(x, y, z);
    }
  }
  for (int s = 0; s < spec.spike_count; ++s) {
    const int ix = rng.uniform_int(1, nx - 2);
    const int iy = rng.uniform_int(1, ny - 2);
    const std::size_t idx = static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
                            static_cast<std::size_t>(ix);
    data.cloud.points[idx].z() += spec.spike_magnitude * (rng.uniform() < 0.5 ? -1.0 : 1.0);
  }

  // Semantic grid matching the elevation-map footprint at the same resolution.
  SemanticField field;
  field.origin = spec.origin;
  field.resolution = spec.grid_resolution;
  field.cols = static_cast<int>(std::floor(spec.extent.x() / spec.grid_resolution + 1e-9)) + 1;
  field.rows = static_cast<int>(std::floor(spec.extent.y() / spec.grid_resolution + 1e-9)) + 1;
  field.values.assign(static_cast<std::size_t>(field.rows) * static_cast<std::size_t>(field.cols),
                      0.0);

  std::vector<SemanticPatch> patches = spec.patches;
  for (int p = 0; p < spec.random_patches; ++p) {
    SemanticPatch patch;
    patch.radius = rng.uniform(spec.patch_radius_min, spec.patch_radius_max);
    const double margin = patch.radius + 0.5;
    patch.center =
        Vec2(rng.uniform(spec.origin.x() + margin, spec.origin.x() + spec.extent.x() - margin),
             rng.uniform(spec.origin.y() + margin, spec.origin.y() + spec.extent.y() - margin));
    patch.level = rng.uniform(spec.patch_level_min, spec.patch_level_max);
    patches.push_back(patch);
  }

  for (int i = 0; i < field.rows; ++i) {
    const double y = field.origin.y() + field.resolution * i;
    for (int j = 0; j < field.cols; ++j) {
      const double x = field.origin.x() + field.resolution * j;
      double a = 0.0;
      switch (spec.semantic) {
        case SemanticKind::kUniform:
          a = spec.uniform_level;
          break;
        case SemanticKind::kGradient: {
          const double t = (x - spec.origin.x()) / spec.extent.x();
          a = spec.gradient_from + (spec.gradient_to - spec.gradient_from) * t;
          break;
        }
        case SemanticKind::kPatches: {
          a = spec.background_level;
          // Cell takes a patch level when its center lies inside the disk.
          for (const auto& patch : patches) {
            const double dx = x - patch.center.x();
            const double dy = y - patch.center.y();
            if (dx * dx + dy * dy <= patch.radius * patch.radius) a = patch.level;
          }
          break;
        }
      }
      field.at(i, j) = std::clamp(a, 0.0, 1.0);
    }
  }
  data.semantic = std::move(field);

  // Obstacles: configured cylinders plus a random field when requested.
  data.static_cylinders = spec.static_cylinders;
  int n_random = spec.random_cylinders;
  if (spec.obstacle_density > 0.0) {
    n_random = static_cast<int>(std::round(spec.obstacle_density * spec.extent.x() *
                                           spec.extent.y()));
  }
  for (int c = 0; c < n_random; ++c) {
    Cylinder cyl;
    cyl.radius = spec.cylinder_radius;
    cyl.height = spec.cylinder_height;
    const double margin = cyl.radius + 0.3;
    cyl.center =
        Vec2(rng.uniform(spec.origin.x() + margin, spec.origin.x() + spec.extent.x() - margin),
             rng.uniform(spec.origin.y() + margin, spec.origin.y() + spec.extent.y() - margin));
    data.static_cylinders.push_back(cyl);
  }
  for (auto& cyl : data.static_cylinders) {
    cyl.base_z = terrain_height(spec, cyl.center.x(), cyl.center.y());
    ObstacleEvent ev;
    ev.time = 0.0;
    ev.add = true;
    ev.points = sample_cylinder(cyl, spec.obstacle_point_spacing);
    ev.box = cylinder_box(cyl);
    data.events.push_back(std::move(ev));
  }
  for (const auto& dyn : spec.dynamic_events) {
    Cylinder cyl = dyn.cylinder;
    cyl.base_z = terrain_height(spec, cyl.center.x(), cyl.center.y());
    ObstacleEvent ev;
    ev.time = dyn.time;
    ev.add = dyn.add;
    ev.points = dyn.add ? sample_cylinder(cyl, spec.obstacle_point_spacing)
                        : std::vector<Vec3>{};
    ev.box = cylinder_box(cyl);
    data.events.push_back(std::move(ev));
  }
  std::stable_sort(data.events.begin(), data.events.end(),
                   [](const ObstacleEvent& a, const ObstacleEvent& b) {
                     return a.time < b.time;
                   });
  return data;
}

}  // namespace shift
