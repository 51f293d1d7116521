#pragma once

#include "shift/astar.hpp"
#include "shift/elevation_map.hpp"
#include "shift/ikd_tree.hpp"
#include "shift/landmark.hpp"
#include "shift/rficp.hpp"
#include "shift/types.hpp"

#include <string>

namespace shift {

/// CSV with header x,y,z[,a]. Throws ConfigError on malformed input.
PointCloud read_cloud_csv(const std::string& path);

/// ASCII PLY with x,y,z vertex properties.
PointCloud read_cloud_ply(const std::string& path);

/// Dispatch on the file extension (.csv or .ply).
PointCloud read_cloud(const std::string& path);

void write_cloud_csv(const PointCloud& cloud, const std::string& path);

std::string elevation_to_json(const ElevationMap& map);
ElevationMap elevation_from_json(const std::string& text);
void write_elevation(const ElevationMap& map, const std::string& path);
ElevationMap read_elevation(const std::string& path);

std::string semantic_to_json(const SemanticField& field);
SemanticField semantic_from_json(const std::string& text);
void write_semantic(const SemanticField& field, const std::string& path);
SemanticField read_semantic(const std::string& path);

/// JSON list of {x,y,z,row,col}.
std::string coverage_path_to_json(const CoveragePath& path);

/// JSON lines, one {x,y,z,t_dwell,v,window_id} object per waypoint.
/// window_id is null for untouched points. Deterministic per input.
std::string timed_path_to_jsonl(const TimedPath& path);
TimedPath timed_path_from_jsonl(const std::string& text);

/// A* path export: CoveragePath schema plus the per-point distance value.
std::string astar_path_to_json(const AStarResult& result);

/// IKD-tree node list for the dump-tree debug command.
std::string tree_dump_to_json(const IkdTree& tree);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace shift
