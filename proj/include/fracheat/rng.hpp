#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace fracheat {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from a parent seed and a stream index.
/// Streams are keyed only by (parent, index), so a mode or path keeps its
/// stream regardless of how many siblings are drawn or which thread draws it.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// Standard-normal source for one stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed);

  double operator()();
  void fill(std::span<double> out);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace fracheat
