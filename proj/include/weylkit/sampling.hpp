#pragma once

#include "weylkit/space.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace weylkit {

/// Platform-stable random numbers: std::mt19937_64 output is fully specified,
/// the std distributions are not, so uniform/normal are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::int64_t integer(std::int64_t lo, std::int64_t hi);  // inclusive

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Halton sequence in [0,1)^dim with a Cranley-Patterson shift drawn from seed.
std::vector<Vector> halton_points(int dim, std::size_t count, std::uint64_t seed);

/// Quasi-random points in the Euclidean ball of the given radius.
std::vector<Vector> ball_points(int dim, std::size_t count, double radius, std::uint64_t seed);

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Each index is
/// processed exactly once; results must be written to per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// WEYLKIT_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

}  // namespace weylkit
