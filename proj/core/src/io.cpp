#include "pushrl/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace pushrl {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const Provenance& prov,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::trunc), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open CSV file for writing: " + path);
  out_ << "# pushrl " << kVersionString << "\n";
  out_ << "# seed " << prov.seed << "\n";
  out_ << "# config_hash " << hash_hex(prov.config_hash) << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

namespace {

constexpr char kTrajMagic[8] = {'P', 'U', 'S', 'H', 'T', 'R', 'A', 'J'};
constexpr std::uint32_t kTrajVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

struct TrajReader {
  const std::string& d;
  std::size_t pos{0};
  std::string path;

  void need(std::size_t n) {
    if (pos + n > d.size()) throw std::runtime_error("trajectory '" + path + "': truncated file");
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(d[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(d[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

void save_trajectory(const std::string& path, const Trajectory& traj) {
  std::string out;
  out.append(kTrajMagic, 8);
  put_u32(out, kTrajVersion);
  put_u64(out, traj.episode_index);
  put_u64(out, traj.provenance.seed);
  put_u64(out, traj.provenance.config_hash);
  put_u64(out, traj.steps.size());
  for (const TrajectoryStep& s : traj.steps) {
    for (double v : {s.time, s.obj_x, s.obj_y, s.obj_yaw, s.tilt_angle, s.tilt_axis_yaw})
      put_f64(out, v);
    put_u32(out, s.toppled);
    for (double v : {s.base_x, s.base_y, s.base_yaw, s.base_height, s.base_roll, s.base_pitch,
                     s.ee_x, s.ee_y, s.ee_z})
      put_f64(out, v);
    put_u32(out, static_cast<std::uint32_t>(s.face_index));
    put_u32(out, s.in_contact);
    for (double v : {s.r1, s.r2, s.r3, s.r4, s.total_reward}) put_f64(out, v);
    put_u32(out, s.violated_mask);
    put_u32(out, s.success);
    put_f64(out, s.delta);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open trajectory file for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open trajectory file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string data = ss.str();
  TrajReader r{data, 0, path};
  r.need(8);
  if (std::memcmp(data.data(), kTrajMagic, 8) != 0)
    throw std::runtime_error("trajectory '" + path + "': bad magic");
  r.pos += 8;
  if (r.u32() != kTrajVersion) throw std::runtime_error("trajectory '" + path + "': bad version");

  Trajectory traj;
  traj.episode_index = r.u64();
  traj.provenance.seed = r.u64();
  traj.provenance.config_hash = r.u64();
  const std::uint64_t n = r.u64();
  traj.steps.resize(n);
  for (auto& s : traj.steps) {
    s.time = r.f64();
    s.obj_x = r.f64();
    s.obj_y = r.f64();
    s.obj_yaw = r.f64();
    s.tilt_angle = r.f64();
    s.tilt_axis_yaw = r.f64();
    s.toppled = static_cast<std::uint8_t>(r.u32());
    s.base_x = r.f64();
    s.base_y = r.f64();
    s.base_yaw = r.f64();
    s.base_height = r.f64();
    s.base_roll = r.f64();
    s.base_pitch = r.f64();
    s.ee_x = r.f64();
    s.ee_y = r.f64();
    s.ee_z = r.f64();
    s.face_index = static_cast<std::int32_t>(r.u32());
    s.in_contact = static_cast<std::uint8_t>(r.u32());
    s.r1 = r.f64();
    s.r2 = r.f64();
    s.r3 = r.f64();
    s.r4 = r.f64();
    s.total_reward = r.f64();
    s.violated_mask = r.u32();
    s.success = static_cast<std::uint8_t>(r.u32());
    s.delta = r.f64();
  }
  return traj;
}

const std::vector<std::string>& trajectory_csv_columns() {
  static const std::vector<std::string> cols = {
      "time",       "obj_x",      "obj_y",      "obj_yaw",   "tilt_angle", "tilt_axis_yaw",
      "toppled",    "base_x",     "base_y",     "base_yaw",  "base_height", "base_roll",
      "base_pitch", "ee_x",       "ee_y",       "ee_z",      "contact_face", "in_contact",
      "r1",         "r2",         "r3",         "r4",        "total_reward", "violated_mask",
      "success",    "delta"};
  return cols;
}

void trajectory_to_csv(const Trajectory& traj, const std::string& path) {
  CsvWriter csv(path, traj.provenance, trajectory_csv_columns());
  for (const TrajectoryStep& s : traj.steps) {
    csv.row({format_double(s.time), format_double(s.obj_x), format_double(s.obj_y),
             format_double(s.obj_yaw), format_double(s.tilt_angle), format_double(s.tilt_axis_yaw),
             std::to_string(static_cast<int>(s.toppled)), format_double(s.base_x),
             format_double(s.base_y), format_double(s.base_yaw), format_double(s.base_height),
             format_double(s.base_roll), format_double(s.base_pitch), format_double(s.ee_x),
             format_double(s.ee_y), format_double(s.ee_z), std::to_string(s.face_index),
             std::to_string(static_cast<int>(s.in_contact)), format_double(s.r1),
             format_double(s.r2), format_double(s.r3), format_double(s.r4),
             format_double(s.total_reward), std::to_string(s.violated_mask),
             std::to_string(static_cast<int>(s.success)), format_double(s.delta)});
  }
}

}  // namespace pushrl
