#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace skclt {

// Part of the reproducibility contract: bumped whenever the bit stream of
// NormalStream or derive_seed changes. Recorded in every output artifact.
inline constexpr std::string_view kGeneratorVersion = "mt19937_64+marsaglia-polar/splitmix64-v1";

// Splittable seed derivation: a SplitMix64 finalizer applied to a mix of the
// base seed and a stream index. Independent of thread scheduling.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

// Bit-reproducible stream of uniforms and standard normals.
//
// std::normal_distribution is implementation-defined, so normals come from
// the Marsaglia polar method on top of std::mt19937_64 (whose output sequence
// is fixed by the standard) with an explicit 53-bit uniform conversion.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace skclt
