#pragma once

#include "shift/config.hpp"
#include "shift/rficp.hpp"
#include "shift/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace shift {

/// Deterministic random stream (xy-uniform, Box-Muller normals) so scenario
/// regeneration is bit-identical for a given seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double stddev = 1.0);
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::uint64_t next_raw();
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Cylinder {
  Vec2 center{Vec2::Zero()};
  double radius = 0.0;
  double height = 0.0;
  double base_z = 0.0;
};

struct ObstacleEvent {
  double time = 0.0;
  bool add = true;
  std::vector<Vec3> points;
  Aabb box;
};

enum class TerrainKind { kFlat, kParaboloid, kRidged };
enum class SemanticKind { kUniform, kGradient, kPatches };

struct SemanticPatch {
  Vec2 center{Vec2::Zero()};
  double radius = 0.0;
  double level = 0.0;
};

struct ScenarioSpec {
  TerrainKind terrain = TerrainKind::kFlat;
  Vec2 origin{Vec2::Zero()};
  Vec2 extent{10.0, 10.0};
  double base_z = 0.0;
  double paraboloid_coeff = 0.05;
  double ridge_amplitude = 0.3;
  double ridge_frequency = 0.5;
  int samples_x = 50, samples_y = 50;
  double noise_sigma = 0.0;
  int spike_count = 0;
  double spike_magnitude = 1.0;

  SemanticKind semantic = SemanticKind::kUniform;
  double uniform_level = 0.0;
  double gradient_from = 0.0, gradient_to = 1.0;
  double background_level = 0.0;
  std::vector<SemanticPatch> patches;
  int random_patches = 0;
  double patch_level_min = 0.35, patch_level_max = 0.95;
  double patch_radius_min = 1.0, patch_radius_max = 2.0;
  double grid_resolution = 0.4;

  std::vector<Cylinder> static_cylinders;
  struct DynamicEvent {
    double time = 0.0;
    bool add = true;
    Cylinder cylinder;
  };
  std::vector<DynamicEvent> dynamic_events;
  int random_cylinders = 0;
  double obstacle_density = 0.0;  // obs/m^2, overrides random_cylinders when > 0
  double cylinder_radius = 0.15;
  double cylinder_height = 1.0;
  double obstacle_point_spacing = 0.1;

  double robot_radius = 0.2;

  static ScenarioSpec from_config(const Config& cfg);
};

struct ScenarioData {
  ScenarioSpec spec;
  std::uint64_t seed = 0;
  PointCloud cloud;
  SemanticField semantic;
  std::vector<ObstacleEvent> events;         // sorted by time
  std::vector<Cylinder> static_cylinders;    // placed (includes random ones)

  /// True when (x,y) lies inside a static cylinder footprint inflated by the
  /// robot radius; such cells are unreachable for coverage.
  bool blocked_by_static(double x, double y) const;
};

/// Terrain height of the spec's analytic surface (noise- and spike-free).
double terrain_height(const ScenarioSpec& spec, double x, double y);

/// Sampled terrain cloud, semantic grid and obstacle timeline; bit-identical
/// for equal (spec, seed).
ScenarioData generate_scenario(const ScenarioSpec& spec, std::uint64_t seed);

/// Surface point samples of a cylinder for the obstacle tree.
std::vector<Vec3> sample_cylinder(const Cylinder& cyl, double point_spacing);

/// Bounding box used to remove a cylinder's points from the tree.
Aabb cylinder_box(const Cylinder& cyl);

}  // namespace shift
