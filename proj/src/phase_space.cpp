#include "weylkit/phase_space.hpp"

#include "weylkit/errors.hpp"
#include "weylkit/sampling.hpp"

#include "exact_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace weylkit {

namespace {

void require_point(const Vector& F, int dim) {
  if (F.size() != dim) {
    throw ValidationError("phase point: expected " + std::to_string(dim) + " components");
  }
}

double default_radius(const PreSymplecticSpace& space) {
  return 8.0 * std::numbers::pi / space.lattice_step().minCoeff();
}

}  // namespace

Complex fourier_eval(const PhaseSpaceFunction& fn, const PhasePoint& F) {
  const Measure& mu = fn.backing();
  require_point(F.F, mu.dim());
  detail::ExactComplexSum atoms;
  for (const auto& [c, z] : mu.atoms()) atoms.add(z * std::polar(1.0, F.F.dot(mu.point(c))));
  Complex total = atoms.value();
  if (const auto& d = mu.density()) {
    detail::ExactComplexSum dens;
    for (std::size_t i = 0; i < d->samples.size(); ++i) {
      if (d->samples[i] == Complex{}) continue;
      dens.add(d->samples[i] * std::polar(1.0, F.F.dot(mu.point(d->box.coord(i)))));
    }
    total += dens.value() * mu.cell_volume();
  }
  return total;
}

Complex fourier_eval(const PointMeasure& mu, const Vector& F) {
  require_point(F, mu.space().dim());
  detail::ExactComplexSum total;
  for (const auto& a : mu.atoms()) total.add(a.weight * std::polar(1.0, F.dot(a.point)));
  return total.value();
}

PhaseSpaceFunction deformed_product(double hbar, const PhaseSpaceFunction& a,
                                    const PhaseSpaceFunction& b) {
  return PhaseSpaceFunction(star(hbar, a.backing(), b.backing()));
}

SupNormEstimate maximize_modulus(const std::function<Complex(const Vector&)>& g, int dim,
                                 double radius_default, const SamplingConfig& sampling) {
  if (sampling.count < 1) throw ValidationError("sampling.count: must be >= 1");
  const double radius = sampling.radius.value_or(radius_default);
  if (!(radius > 0.0)) throw ValidationError("sampling.radius: must be positive");

  Vector best = Vector::Zero(dim);
  double best_val = std::abs(g(best));
  for (const auto& p : ball_points(dim, sampling.count, radius, sampling.seed)) {
    const double v = std::abs(g(p));
    if (v > best_val) {
      best_val = v;
      best = p;
    }
  }

  // Coordinate-wise golden-section around the best sample; the bracket is a
  // couple of mean sample spacings wide.
  const double half_width =
      2.0 * radius / std::pow(static_cast<double>(sampling.count), 1.0 / dim);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int pass = 0; pass < 8; ++pass) {
    const double before = best_val;
    for (int k = 0; k < dim; ++k) {
      auto along = [&](double t) {
        Vector p = best;
        p[k] = t;
        return std::abs(g(p));
      };
      double a = best[k] - half_width, b = best[k] + half_width;
      double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
      double f1 = along(x1), f2 = along(x2);
      for (int it = 0; it < sampling.refine_iterations; ++it) {
        if (f1 > f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - inv_phi * (b - a);
          f1 = along(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (b - a);
          f2 = along(x2);
        }
      }
      const double x = f1 > f2 ? x1 : x2;
      const double fx = std::max(f1, f2);
      if (fx > best_val) {
        best_val = fx;
        best[k] = x;
      }
    }
    if (!(best_val > before * (1.0 + 1e-15))) break;
  }
  return SupNormEstimate{best_val, PhasePoint{best}, 0.0};
}

SupNormEstimate sup_norm_estimate(const PhaseSpaceFunction& fn, const SamplingConfig& sampling) {
  const Measure& mu = fn.backing();
  auto est = maximize_modulus([&fn](const Vector& F) { return fourier_eval(fn, PhasePoint{F}); },
                              mu.dim(), default_radius(mu.space()), sampling);
  est.upper_bound = norm1(mu);
  // |mu-hat| <= ||mu||_1; a sample exceeding it is rounding in the modulus.
  est.lower_bound = std::min(est.lower_bound, est.upper_bound);
  return est;
}

SupNormEstimate sup_norm_estimate(const PointMeasure& mu, const SamplingConfig& sampling) {
  auto est = maximize_modulus([&mu](const Vector& F) { return fourier_eval(mu, F); },
                              mu.space().dim(), default_radius(mu.space()), sampling);
  est.upper_bound = norm1(mu);
  est.lower_bound = std::min(est.lower_bound, est.upper_bound);
  return est;
}

ComplexVector differential(const PhaseSpaceFunction& fn, const PhasePoint& F) {
  const Measure& mu = fn.backing();
  require_point(F.F, mu.dim());
  first_moment_check(mu);
  const Complex i{0.0, 1.0};
  ComplexVector out = ComplexVector::Zero(mu.dim());
  for (const auto& [c, z] : mu.atoms()) {
    const Vector f = mu.point(c);
    out += (i * z * std::polar(1.0, F.F.dot(f))) * f.cast<Complex>();
  }
  if (const auto& d = mu.density()) {
    ComplexVector dens = ComplexVector::Zero(mu.dim());
    for (std::size_t k = 0; k < d->samples.size(); ++k) {
      if (d->samples[k] == Complex{}) continue;
      const Vector f = mu.point(d->box.coord(k));
      dens += (i * d->samples[k] * std::polar(1.0, F.F.dot(f))) * f.cast<Complex>();
    }
    out += dens * mu.cell_volume();
  }
  return out;
}

ComplexVector project_quotient(const ComplexVector& v, const SeminormSpec& spec) {
  if (v.size() != spec.dim()) throw ValidationError("project_quotient: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(spec.gram());
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  ComplexVector out = v;
  for (int i = 0; i < spec.dim(); ++i) {
    if (scale > 0.0 && es.eigenvalues()[i] > 1e-12 * scale) continue;
    const ComplexVector k = es.eigenvectors().col(i).cast<Complex>();
    out -= k * k.dot(v);
  }
  return out;
}

Complex function_bracket(const PhaseSpaceFunction& a, const PhaseSpaceFunction& b, const PhasePoint& F) {
  const Matrix& s = a.backing().space().sigma_matrix();
  const ComplexVector da = differential(a, F);
  const ComplexVector db = differential(b, F);
  const Vector a1 = da.real(), a2 = da.imag(), b1 = db.real(), b2 = db.imag();
  auto sig = [&s](const Vector& x, const Vector& y) { return x.dot(s * y); };
  const Complex i{0.0, 1.0};
  return -sig(a1, b1) - i * sig(a1, b2) - i * sig(a2, b1) + sig(a2, b2);
}

}  // namespace weylkit
