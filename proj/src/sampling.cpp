#include "weylkit/sampling.hpp"

#include "weylkit/errors.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace weylkit {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                           47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107};

double radical_inverse(std::size_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::size_t>(base));
    i /= static_cast<std::size_t>(base);
    f *= inv;
  }
  return r;
}

}  // namespace

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

std::vector<Vector> halton_points(int dim, std::size_t count, std::uint64_t seed) {
  if (dim > static_cast<int>(std::size(kPrimes))) {
    throw ValidationError("halton_points: dimension too large");
  }
  Rng rng(seed);
  Vector shift(dim);
  for (int k = 0; k < dim; ++k) shift[k] = rng.uniform();
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vector p(dim);
    for (int k = 0; k < dim; ++k) {
      const double x = radical_inverse(i + 1, kPrimes[k]) + shift[k];
      p[k] = x - std::floor(x);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vector> ball_points(int dim, std::size_t count, double radius, std::uint64_t seed) {
  // Box-Muller pairs give a direction, the last coordinate the radius.
  const int pairs = (dim + 1) / 2;
  const auto raw = halton_points(2 * pairs + 1, count, seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (const auto& h : raw) {
    Vector g(2 * pairs);
    for (int p = 0; p < pairs; ++p) {
      const double u1 = std::max(h[2 * p], 1e-300);
      const double r = std::sqrt(-2.0 * std::log(u1));
      g[2 * p] = r * std::cos(2.0 * std::numbers::pi * h[2 * p + 1]);
      g[2 * p + 1] = r * std::sin(2.0 * std::numbers::pi * h[2 * p + 1]);
    }
    Vector dir = g.head(dim);
    const double n = dir.norm();
    if (n == 0.0) {
      dir = Vector::Zero(dim);
    } else {
      dir /= n;
    }
    const double rad = radius * std::pow(h[2 * pairs], 1.0 / dim);
    out.push_back(rad * dir);
  }
  return out;
}

unsigned worker_count() {
  if (const char* env = std::getenv("WEYLKIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace weylkit
