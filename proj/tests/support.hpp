#pragma once

// Generators and independent oracles shared by the test programs.

#include "weylkit/measure.hpp"
#include "weylkit/phase_space.hpp"
#include "weylkit/representation.hpp"
#include "weylkit/sampling.hpp"
#include "weylkit/space.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

namespace wt {

using namespace weylkit;

inline constexpr double kPi = std::numbers::pi;

inline Matrix standard_j(int m) {
  Matrix j = Matrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    j(i, m + i) = 1.0;
    j(m + i, i) = -1.0;
  }
  return j;
}

/// sigma = B^T J B with B of shape rank x D; rank < D gives a kernel.
inline Matrix random_sigma(Rng& rng, int dim, int rank) {
  Matrix b(rank, dim);
  for (int r = 0; r < rank; ++r) {
    for (int c = 0; c < dim; ++c) b(r, c) = rng.uniform(-1.0, 1.0);
  }
  Matrix s = b.transpose() * standard_j(rank / 2) * b;
  return 0.5 * (s - s.transpose());
}

inline SpacePtr random_space(Rng& rng, int dim, int rank) {
  Vector step(dim);
  for (int i = 0; i < dim; ++i) step[i] = rng.uniform(0.5, 1.5);
  return make_space(PreSymplecticSpace(random_sigma(rng, dim, rank), step));
}

inline SpacePtr standard_space(int half_dim, double step = 1.0) {
  return make_space(PreSymplecticSpace::standard(half_dim, step));
}

inline LatticeCoord random_coord(Rng& rng, int dim, int range) {
  LatticeCoord c(static_cast<std::size_t>(dim));
  for (auto& x : c) x = rng.integer(-range, range);
  return c;
}

inline Complex random_weight(Rng& rng) { return {rng.normal(), rng.normal()}; }

inline Measure random_discrete(const SpacePtr& space, Rng& rng, int atoms, int range) {
  Measure m(space);
  for (int i = 0; i < atoms; ++i) m.add_atom(random_coord(rng, space->dim(), range), random_weight(rng));
  return m;
}

inline Measure random_positive(const SpacePtr& space, Rng& rng, int atoms, int range) {
  Measure m(space);
  for (int i = 0; i < atoms; ++i) m.add_atom(random_coord(rng, space->dim(), range), rng.uniform(0.1, 1.0));
  return m;
}

inline Vector random_vector(Rng& rng, int dim, double scale = 1.0) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = scale * rng.uniform(-1.0, 1.0);
  return v;
}

/// f^T sigma g by explicit loops.
inline double sigma_oracle(const Matrix& s, const Vector& f, const Vector& g) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) acc += f[i] * s(i, j) * g[j];
  }
  return acc;
}

inline Vector point_of(const PreSymplecticSpace& space, const LatticeCoord& c) {
  Vector p(space.dim());
  for (int i = 0; i < space.dim(); ++i) p[i] = static_cast<double>(c[static_cast<std::size_t>(i)]) * space.lattice_step()[i];
  return p;
}

/// Twisted convolution of discrete measures by direct double summation.
inline std::map<LatticeCoord, Complex> star_oracle(double hbar, const Measure& mu, const Measure& nu) {
  std::map<LatticeCoord, Complex> out;
  const auto& sp = mu.space();
  for (const auto& [a, z] : mu.atoms()) {
    for (const auto& [b, w] : nu.atoms()) {
      LatticeCoord c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
      const double s = sigma_oracle(sp.sigma_matrix(), point_of(sp, a), point_of(sp, b));
      out[c] += z * w * std::exp(Complex(0.0, -0.5 * hbar * s));
    }
  }
  return out;
}

inline double l1_between(const std::map<LatticeCoord, Complex>& a, const std::map<LatticeCoord, Complex>& b) {
  std::map<LatticeCoord, Complex> diff = a;
  for (const auto& [c, z] : b) diff[c] -= z;
  double total = 0.0;
  for (const auto& [c, z] : diff) total += std::abs(z);
  return total;
}

inline double l1_between(const Measure& a, const Measure& b) { return norm1(subtract(a, b)); }

/// Normalized Gaussian wave packet on the grid, centered at x0 with momentum p0.
inline ComplexVector gaussian_vector(const SchrodingerRep& rep, double width, const Vector& x0, const Vector& p0) {
  const auto& g = rep.grid();
  const auto& xs = rep.axis_positions();
  const std::size_t n = g.points_per_axis;
  ComplexVector psi(static_cast<Eigen::Index>(rep.state_size()));
  for (std::size_t flat = 0; flat < rep.state_size(); ++flat) {
    std::size_t rest = flat;
    double r2 = 0.0, phase = 0.0;
    for (int a = g.half_dim - 1; a >= 0; --a) {
      const double x = xs[rest % n];
      rest /= n;
      r2 += (x - x0[a]) * (x - x0[a]);
      phase += p0[a] * x;
    }
    psi[static_cast<Eigen::Index>(flat)] = std::polar(std::exp(-r2 / (2.0 * width * width)), phase);
  }
  return psi / psi.norm();
}

/// Band-limited random vector: random DFT coefficients on the lowest |k| modes.
inline ComplexVector band_limited_vector(const SchrodingerRep& rep, Rng& rng, double kmax) {
  const auto& ks = rep.axis_momenta();
  const auto& g = rep.grid();
  const std::size_t n = g.points_per_axis;
  ComplexVector hat(static_cast<Eigen::Index>(rep.state_size()));
  for (std::size_t flat = 0; flat < rep.state_size(); ++flat) {
    std::size_t rest = flat;
    bool inside = true;
    for (int a = 0; a < g.half_dim; ++a) {
      inside = inside && std::abs(ks[rest % n]) <= kmax;
      rest /= n;
    }
    hat[static_cast<Eigen::Index>(flat)] = inside ? random_weight(rng) : Complex{};
  }
  // Synthesize by direct inverse DFT along each axis (independent of FFTW).
  ComplexVector psi = hat;
  const auto& xs = rep.axis_positions();
  std::size_t stride = 1;
  for (int a = g.half_dim - 1; a >= 0; --a) {
    ComplexVector next(psi.size());
    for (std::size_t flat = 0; flat < rep.state_size(); ++flat) {
      const std::size_t j = (flat / stride) % n;
      const std::size_t base = flat - j * stride;
      Complex acc{};
      for (std::size_t m = 0; m < n; ++m) {
        acc += psi[static_cast<Eigen::Index>(base + m * stride)] * std::polar(1.0, ks[m] * (xs[j] + g.half_length));
      }
      next[static_cast<Eigen::Index>(flat)] = acc;
    }
    psi = next;
    stride *= n;
  }
  return psi / psi.norm();
}

}  // namespace wt
