#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "pushrl/net.hpp"

namespace pushrl {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Versioned little-endian snapshot of the actor/critic parameters plus,
/// for resumable training, the optimizer moments and trainer rng state.
struct Checkpoint {
  std::uint64_t iteration{0};
  std::uint64_t actor_spec_hash{0};
  std::uint64_t critic_spec_hash{0};
  std::uint64_t seed{0};
  std::uint64_t config_hash{0};
  VecX actor_params;
  VecX critic_params;
  bool has_optimizer{false};
  AdamState actor_adam;
  AdamState critic_adam;
  std::array<std::uint64_t, 4> trainer_rng_state{};
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);

/// Throws CheckpointError on missing file, bad magic, or version mismatch.
Checkpoint load_checkpoint(const std::string& path);

/// Throws CheckpointError naming both hashes when the checkpoint was
/// produced by a different network specification.
void verify_spec_hashes(const Checkpoint& ckpt, const MlpSpec& actor_spec,
                        const MlpSpec& critic_spec);

}  // namespace pushrl
