#include "weylkit/states.hpp"

#include "weylkit/errors.hpp"

#include <cmath>

namespace weylkit {

QuantumState QuantumState::gaussian(Matrix s) {
  // Reuse the semi-norm validation (square, symmetric, PSD).
  SeminormSpec check(s, 1.0);
  return QuantumState(Gaussian{std::move(s)});
}

QuantumState QuantumState::character(Vector F) {
  if (F.size() == 0 || !F.allFinite()) throw ValidationError("character state: F must be a finite vector");
  return QuantumState(Character{std::move(F)});
}

int QuantumState::dim() const {
  if (const auto* g = std::get_if<Gaussian>(&kind_)) return static_cast<int>(g->s.rows());
  return static_cast<int>(std::get<Character>(kind_).F.size());
}

Complex char_fn_eval(const QuantumState& state, const Vector& f) {
  if (f.size() != state.dim()) throw ValidationError("char_fn_eval: f has wrong dimension");
  if (const auto* g = std::get_if<QuantumState::Gaussian>(&state.kind())) {
    return {std::exp(-0.25 * f.dot(g->s * f)), 0.0};
  }
  return std::polar(1.0, std::get<QuantumState::Character>(state.kind()).F.dot(f));
}

bool gaussian_bound_holds(const PreSymplecticSpace& space, const QuantumState& state, double hbar) {
  if (state.dim() != space.dim()) throw ValidationError("state: dimension does not match space");
  if (hbar == 0.0) return true;
  if (const auto* g = std::get_if<QuantumState::Gaussian>(&state.kind())) {
    // |hbar sigma(f,g)| <= sqrt(s(f,f) s(g,g)) is compatibility with c = 1/|hbar|.
    return verify_compat(space, SeminormSpec(g->s, 1.0 / std::abs(hbar))).ok;
  }
  return space.sigma_matrix().isZero(0.0);
}

PsdResult psd_check(const PreSymplecticSpace& space, const QuantumState& state, double hbar,
                    const std::vector<Vector>& probes, double tol) {
  if (probes.empty() || probes.size() > 64) throw ValidationError("probes: between 1 and 64 required");
  if (state.dim() != space.dim()) throw ValidationError("state: dimension does not match space");
  const auto n = static_cast<Eigen::Index>(probes.size());
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector& fi = probes[static_cast<std::size_t>(i)];
      const Vector& fj = probes[static_cast<std::size_t>(j)];
      gram(i, j) = std::polar(1.0, 0.5 * hbar * sigma_eval(space, fi, fj)) * char_fn_eval(state, fj - fi);
    }
  }
  // Hermitian part; the matrix is Hermitian up to roundoff.
  const Eigen::MatrixXcd herm = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  PsdResult r;
  r.min_eig = es.eigenvalues().minCoeff();
  r.ok = r.min_eig >= -tol;
  return r;
}

Complex state_expectation(const QuantumState& state, const Measure& mu) {
  Complex total{0.0, 0.0};
  for (const auto& [c, z] : mu.atoms()) total += z * char_fn_eval(state, mu.point(c));
  if (const auto& d = mu.density()) {
    Complex dens{0.0, 0.0};
    for (std::size_t i = 0; i < d->samples.size(); ++i) {
      if (d->samples[i] == Complex{}) continue;
      dens += d->samples[i] * char_fn_eval(state, mu.point(d->box.coord(i)));
    }
    total += dens * mu.cell_volume();
  }
  return total;
}

StateBound state_norm_lower_bound(const QuantumState& state, double hbar, const Measure& mu) {
  const double re = state_expectation(state, star(hbar, involution(mu), mu)).real();
  StateBound b;
  b.admissible = re >= -1e-10;
  b.value = std::sqrt(std::max(0.0, re));
  return b;
}

std::vector<Vector> witness_probes(int dim, const std::vector<double>& scales) {
  std::vector<Vector> out{Vector::Zero(dim)};
  for (double t : scales) {
    for (int k = 0; k < dim; ++k) out.push_back(t * Vector::Unit(dim, k));
  }
  return out;
}

}  // namespace weylkit
