#include "pushrl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace pushrl {

namespace {

constexpr char kMagic[8] = {'P', 'U', 'S', 'H', 'R', 'L', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_vec(std::string& out, const VecX& v) {
  put_u64(out, static_cast<std::uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) put_f64(out, v[i]);
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  VecX vec() {
    const std::uint64_t n = u64();
    if (n > (data_.size() - pos_) / 8) fail("truncated parameter block");
    VecX v(static_cast<Eigen::Index>(n));
    for (std::uint64_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = f64();
    return v;
  }

  void expect_magic() {
    need(8);
    if (std::memcmp(data_.data(), kMagic, 8) != 0) fail("bad magic, not a checkpoint file");
    pos_ += 8;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw CheckpointError("checkpoint '" + path_ + "': " + why);
  }

 private:
  void need(std::size_t n) {
    if (pos_ + n > data_.size()) fail("unexpected end of file");
  }

  const std::string& data_;
  std::string path_;
  std::size_t pos_{0};
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::string out;
  out.append(kMagic, 8);
  put_u32(out, kVersion);
  put_u64(out, ckpt.actor_spec_hash);
  put_u64(out, ckpt.critic_spec_hash);
  put_u64(out, ckpt.iteration);
  put_u64(out, ckpt.seed);
  put_u64(out, ckpt.config_hash);
  put_vec(out, ckpt.actor_params);
  put_vec(out, ckpt.critic_params);
  put_u32(out, ckpt.has_optimizer ? 1 : 0);
  if (ckpt.has_optimizer) {
    put_vec(out, ckpt.actor_adam.m);
    put_vec(out, ckpt.actor_adam.v);
    put_u64(out, static_cast<std::uint64_t>(ckpt.actor_adam.t));
    put_vec(out, ckpt.critic_adam.m);
    put_vec(out, ckpt.critic_adam.v);
    put_u64(out, static_cast<std::uint64_t>(ckpt.critic_adam.t));
    for (std::uint64_t w : ckpt.trainer_rng_state) put_u64(out, w);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw CheckpointError("checkpoint '" + path + "': cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw CheckpointError("checkpoint '" + path + "': write failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("checkpoint '" + path + "': cannot open");
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string data = ss.str();

  Reader r(data, path);
  r.expect_magic();
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    r.fail("unsupported version " + std::to_string(version) + ", expected " +
           std::to_string(kVersion));
  }
  Checkpoint ckpt;
  ckpt.actor_spec_hash = r.u64();
  ckpt.critic_spec_hash = r.u64();
  ckpt.iteration = r.u64();
  ckpt.seed = r.u64();
  ckpt.config_hash = r.u64();
  ckpt.actor_params = r.vec();
  ckpt.critic_params = r.vec();
  ckpt.has_optimizer = r.u32() != 0;
  if (ckpt.has_optimizer) {
    ckpt.actor_adam.m = r.vec();
    ckpt.actor_adam.v = r.vec();
    ckpt.actor_adam.t = static_cast<long>(r.u64());
    ckpt.critic_adam.m = r.vec();
    ckpt.critic_adam.v = r.vec();
    ckpt.critic_adam.t = static_cast<long>(r.u64());
    for (auto& w : ckpt.trainer_rng_state) w = r.u64();
  }
  return ckpt;
}

void verify_spec_hashes(const Checkpoint& ckpt, const MlpSpec& actor_spec,
                        const MlpSpec& critic_spec) {
  char buf[64];
  if (ckpt.actor_spec_hash != actor_spec.hash()) {
    std::snprintf(buf, sizeof(buf), "%016llx vs expected %016llx",
                  static_cast<unsigned long long>(ckpt.actor_spec_hash),
                  static_cast<unsigned long long>(actor_spec.hash()));
    throw CheckpointError(std::string("checkpoint actor spec-hash mismatch: ") + buf);
  }
  if (ckpt.critic_spec_hash != critic_spec.hash()) {
    std::snprintf(buf, sizeof(buf), "%016llx vs expected %016llx",
                  static_cast<unsigned long long>(ckpt.critic_spec_hash),
                  static_cast<unsigned long long>(critic_spec.hash()));
    throw CheckpointError(std::string("checkpoint critic spec-hash mismatch: ") + buf);
  }
}

}  // namespace pushrl
