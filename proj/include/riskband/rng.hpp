#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace riskband {

/// Everything needed to regenerate every random draw of a computation.
struct SeedRecord {
  std::uint64_t master = 0;
  std::string scheme = "counter-stream-per-replicate";
  std::string algorithm = "philox4x32-10";

  bool operator==(const SeedRecord&) const = default;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// The Philox4x32 bijection with 10 rounds.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

/// Uniform random bit generator over one Philox stream. Stream `s` of key `k`
/// is the sequence of blocks with counter (i_lo, i_hi, s_lo, s_hi), i = 0, 1, ...
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  PhiloxEngine(std::uint64_t key, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

/// Derives an independent 64-bit seed from (seed, tag, index) by SplitMix64
/// finalisation. Used to give Monte Carlo runs and sub-tasks their own keys.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

}  // namespace riskband
