#pragma once

#include <cstdint>
#include <random>

namespace cyberbond {

/// Role of a per-path stream. Gaps and severities draw from separate streams
/// so that bumping one distribution leaves the other's draws untouched.
enum class StreamRole : std::uint64_t { Frequency = 1, Severity = 2, Auxiliary = 3 };

/// SplitMix64 finalizer; used to decorrelate (seed, index, role) keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    StreamRole role) noexcept {
  return mix64(mix64(master) ^ mix64(index * 0x2545f4914f6cdd1dULL +
                                     static_cast<std::uint64_t>(role)));
}

/// Single-consumer uniform source. Every draw consumes exactly one 64-bit
/// word, so inverse-transform samplers keep draws aligned across parameter
/// bumps (common random numbers).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream for_path(std::uint64_t master_seed, std::uint64_t path_index,
                               StreamRole role) {
    return RandomStream(derive_seed(master_seed, path_index, role));
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_word() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cyberbond
