#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "pushrl/types.hpp"

namespace pushrl {

inline constexpr const char* kVersionString = "0.1.0";

std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

/// Shortest representation that round-trips a double exactly.
std::string format_double(double v);

struct Provenance {
  std::uint64_t seed{0};
  std::uint64_t config_hash{0};
};

/// CSV file with '#'-prefixed provenance header lines (version, seed,
/// config hash) followed by the column header.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const Provenance& prov, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// Per-step world/reward/constraint trace of one episode, dumpable to a
/// binary file and replayable as CSV.
struct TrajectoryStep {
  double time{0.0};
  double obj_x{0}, obj_y{0}, obj_yaw{0}, tilt_angle{0}, tilt_axis_yaw{0};
  std::uint8_t toppled{0};
  double base_x{0}, base_y{0}, base_yaw{0}, base_height{0}, base_roll{0}, base_pitch{0};
  double ee_x{0}, ee_y{0}, ee_z{0};
  std::int32_t face_index{-1};
  std::uint8_t in_contact{0};
  double r1{0}, r2{0}, r3{0}, r4{0}, total_reward{0};
  std::uint32_t violated_mask{0};
  std::uint8_t success{0};
  double delta{0};
};

struct Trajectory {
  std::uint64_t episode_index{0};
  Provenance provenance;
  std::vector<TrajectoryStep> steps;
};

void save_trajectory(const std::string& path, const Trajectory& traj);
Trajectory load_trajectory(const std::string& path);  // throws std::runtime_error

const std::vector<std::string>& trajectory_csv_columns();
void trajectory_to_csv(const Trajectory& traj, const std::string& path);

}  // namespace pushrl
