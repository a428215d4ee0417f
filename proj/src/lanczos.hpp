#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace weylkit::detail {

struct LanczosResult {
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest eigenvalue of a Hermitian positive semidefinite operator given by
/// its action. Three-term Lanczos without a stored basis; the top Ritz value
/// is nondecreasing and does not exceed the true top eigenvalue beyond
/// rounding.
LanczosResult lanczos_top_eigenvalue(
    std::size_t n, const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply,
    double tol, int max_iterations, std::uint64_t seed);

}  // namespace weylkit::detail
