#include "lanczos.hpp"

#include "weylkit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace weylkit::detail {

namespace {

// Number of eigenvalues of the tridiagonal (alpha, beta) below x, from the
// signs of the LDL^T pivots of T - x I.
std::size_t count_below(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double off = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1] / d;
    d = alpha[i] - x - off;
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

double top_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta, double lower) {
  const std::size_t k = alpha.size();
  double hi = -HUGE_VAL;
  double lo = HUGE_VAL;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < k ? std::abs(beta[i]) : 0.0);
    hi = std::max(hi, alpha[i] + r);
    lo = std::min(lo, alpha[i] - r);
  }
  // Interlacing: the top Ritz value never decreases as the matrix grows.
  if (lower > lo && count_below(alpha, beta, lower) < k) lo = lower;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(std::abs(hi), std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(alpha, beta, mid) < k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// |last component| of the unit eigenvector of T for its top eigenvalue theta,
// by two steps of inverse iteration with a shift just above theta (T - sI is
// then negative definite and the LDL^T solve needs no pivoting).
double last_component(const std::vector<double>& alpha, const std::vector<double>& beta, double theta) {
  const std::size_t k = alpha.size();
  const double shift = theta + 1e-13 * std::max(std::abs(theta), 1e-300);
  std::vector<double> d(k), y(k, 1.0);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < k; ++i) {
      const double l = i == 0 ? 0.0 : beta[i - 1] / d[i - 1];
      d[i] = alpha[i] - shift - (i == 0 ? 0.0 : l * beta[i - 1]);
      if (i > 0) y[i] -= l * y[i - 1];
    }
    y[k - 1] /= d[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) y[i] = (y[i] - beta[i] * y[i + 1]) / d[i];
    double nrm = 0.0;
    for (double v : y) nrm = std::max(nrm, std::abs(v));
    for (double& v : y) v /= nrm;
  }
  double nrm2 = 0.0;
  for (double v : y) nrm2 += v * v;
  return std::abs(y[k - 1]) / std::sqrt(nrm2);
}

}  // namespace

LanczosResult lanczos_top_eigenvalue(
    std::size_t n, const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply,
    double tol, int max_iterations, std::uint64_t seed) {
  using CVec = Eigen::VectorXcd;
  const auto dim = static_cast<Eigen::Index>(n);

  Rng rng(seed);
  CVec q(dim);
  for (Eigen::Index i = 0; i < dim; ++i) q[i] = {rng.normal(), rng.normal()};
  q.normalize();
  CVec q_prev = CVec::Zero(dim);
  CVec w(dim);

  LanczosResult res;
  std::vector<double> alpha, beta;
  double theta_prev = -HUGE_VAL;
  int stagnant = 0;

  while (res.iterations < max_iterations) {
    apply(q, w);
    ++res.iterations;
    double a = q.dot(w).real();
    w -= a * q;
    if (!beta.empty()) w -= beta.back() * q_prev;
    // One local correction keeps w orthogonal to q to working precision.
    const std::complex<double> c = q.dot(w);
    w -= c * q;
    a += c.real();
    alpha.push_back(a);
    const double b = w.norm();

    const double theta = top_eigenvalue(alpha, beta, theta_prev);
    res.eigenvalue = std::max(res.eigenvalue, theta);
    const double scale = std::max(std::abs(theta), std::abs(a));

    if (scale == 0.0 || b <= 1e-13 * scale || dim == 1) {
      // Invariant subspace reached: theta is exact.
      res.converged = true;
      break;
    }
    if (b * last_component(alpha, beta, theta) <= tol * std::abs(theta)) {
      res.converged = true;
      break;
    }
    // Clustered spectra (dense unitary spectra) rarely give small residuals;
    // the Ritz value itself settles much earlier.
    if (theta - theta_prev <= 1e-3 * tol * std::abs(theta)) {
      if (++stagnant >= 25) {
        res.converged = true;
        break;
      }
    } else {
      stagnant = 0;
    }
    theta_prev = theta;
    beta.push_back(b);
    q_prev.swap(q);
    q = w / b;
  }
  return res;
}

}  // namespace weylkit::detail
