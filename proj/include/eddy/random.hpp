#pragma once

#include <cstdint>
#include <random>

namespace eddy {

/// Noise sources that get their own substream within one realization.
enum class StreamTag : std::uint64_t {
  Brownian = 1,          // W driving the position
  OUDriver = 2,          // β driving η
  InitialEta = 3,        // stationary draw of η(0)
  ObservationNoise = 4,  // measurement errors
  ShearExact = 5,        // W for the exact shear sampler
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the substream (master, realization, tag). Each coordinate is folded
/// through the mixer in turn so nearby indices give unrelated seeds.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t realization,
                                       StreamTag tag) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ mix64(realization + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ mix64(static_cast<std::uint64_t>(tag) * 0x8cb92ba72f3d8dd7ULL));
  return h;
}

/// A standard-normal generator bound to one substream.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t master, std::uint64_t realization, StreamTag tag)
      : engine_(substream_seed(master, realization, tag)) {}

  double operator()() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace eddy
