#include "weylkit/measure.hpp"

#include "weylkit/errors.hpp"

#include "exact_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace weylkit {

namespace {

LatticeCoord add_coords(const LatticeCoord& a, const LatticeCoord& b) {
  LatticeCoord out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

void require_same_space(const Measure& a, const Measure& b, const char* op) {
  if (a.space_ptr() != b.space_ptr() && !(a.space() == b.space())) {
    throw ValidationError(std::string(op) + ": measures live on different spaces");
  }
}

LatticeBox bounding_box(const LatticeBox& a, const LatticeBox& b) {
  LatticeBox out;
  out.ranges.resize(a.ranges.size());
  for (std::size_t i = 0; i < a.ranges.size(); ++i) {
    out.ranges[i] = {std::min(a.ranges[i].first, b.ranges[i].first),
                     std::max(a.ranges[i].second, b.ranges[i].second)};
  }
  return out;
}

LatticeBox minkowski_sum(const LatticeBox& a, const LatticeBox& b) {
  LatticeBox out;
  out.ranges.resize(a.ranges.size());
  for (std::size_t i = 0; i < a.ranges.size(); ++i) {
    out.ranges[i] = {a.ranges[i].first + b.ranges[i].first, a.ranges[i].second + b.ranges[i].second};
  }
  return out;
}

LatticeBox point_box(const LatticeCoord& c) {
  LatticeBox out;
  for (auto v : c) out.ranges.emplace_back(v, v);
  return out;
}

/// Physical points of every cell of a density, as columns.
Matrix cell_points(const Measure& mu, const GridDensity& d) {
  Matrix pts(mu.dim(), static_cast<Eigen::Index>(d.samples.size()));
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    pts.col(static_cast<Eigen::Index>(i)) = mu.point(d.box.coord(i));
  }
  return pts;
}

// Bilinear product: every pair (f from mu, g from nu) contributes
// z_f w_g kernel(sigma(f, g)) at f + g. Summation order is fixed by the
// loop structure, independent of scheduling.
template <class Kernel>
Measure twisted_product(const Measure& mu, const Measure& nu, Kernel kernel) {
  require_same_space(mu, nu, "product");
  const Matrix& s = mu.space().sigma_matrix();
  Measure out(mu.space_ptr());

  for (const auto& [a, za] : mu.atoms()) {
    const Vector sa = s.transpose() * mu.point(a);  // sigma(f, g) = sa . g
    for (const auto& [b, wb] : nu.atoms()) {
      out.add_atom(add_coords(a, b), za * wb * kernel(sa.dot(mu.point(b))));
    }
  }

  const auto& dl = mu.density();
  const auto& dr = nu.density();
  if (!dl && !dr) return out;

  std::optional<LatticeBox> box;
  auto extend = [&box](const LatticeBox& b) { box = box ? bounding_box(*box, b) : b; };
  if (dr) {
    for (const auto& [a, za] : mu.atoms()) extend(minkowski_sum(point_box(a), dr->box));
  }
  if (dl) {
    for (const auto& [b, wb] : nu.atoms()) extend(minkowski_sum(dl->box, point_box(b)));
  }
  if (dl && dr) extend(minkowski_sum(dl->box, dr->box));
  if (!box) return out;

  GridDensity res{*box, std::vector<Complex>(box->cell_count(), Complex{0.0, 0.0})};
  auto target = [&res](const LatticeCoord& c) -> Complex& { return res.samples[*res.box.index(c)]; };

  if (dr) {
    const Matrix pr = cell_points(nu, *dr);
    for (const auto& [a, za] : mu.atoms()) {
      const Vector sa = s.transpose() * mu.point(a);
      const Vector phases = pr.transpose() * sa;
      for (std::size_t j = 0; j < dr->samples.size(); ++j) {
        if (dr->samples[j] == Complex{}) continue;
        target(add_coords(a, dr->box.coord(j))) +=
            za * dr->samples[j] * kernel(phases[static_cast<Eigen::Index>(j)]);
      }
    }
  }
  if (dl) {
    const Matrix pl = cell_points(mu, *dl);
    for (const auto& [b, wb] : nu.atoms()) {
      const Vector sb = s * nu.point(b);  // sigma(f, g) = f . (s g)
      const Vector phases = pl.transpose() * sb;
      for (std::size_t i = 0; i < dl->samples.size(); ++i) {
        if (dl->samples[i] == Complex{}) continue;
        target(add_coords(dl->box.coord(i), b)) +=
            dl->samples[i] * wb * kernel(phases[static_cast<Eigen::Index>(i)]);
      }
    }
  }
  if (dl && dr) {
    const double vol = mu.cell_volume();
    const Matrix pl = cell_points(mu, *dl);
    const Matrix spr = s * cell_points(nu, *dr);
    std::vector<LatticeCoord> rcoords(dr->samples.size());
    for (std::size_t j = 0; j < rcoords.size(); ++j) rcoords[j] = dr->box.coord(j);
    for (std::size_t i = 0; i < dl->samples.size(); ++i) {
      const Complex phi = dl->samples[i];
      if (phi == Complex{}) continue;
      const LatticeCoord ci = dl->box.coord(i);
      const Vector sig = spr.transpose() * pl.col(static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < dr->samples.size(); ++j) {
        const Complex psi = dr->samples[j];
        if (psi == Complex{}) continue;
        target(add_coords(ci, rcoords[j])) +=
            phi * psi * vol * kernel(sig[static_cast<Eigen::Index>(j)]);
      }
    }
  }
  out.add_density(res);
  return out;
}

template <class Fn>
Measure map_weights(const Measure& mu, Fn fn) {
  Measure out(mu.space_ptr());
  for (const auto& [c, z] : mu.atoms()) out.add_atom(c, fn(mu.point(c), z));
  if (const auto& d = mu.density()) {
    GridDensity nd = *d;
    for (std::size_t i = 0; i < nd.samples.size(); ++i) {
      nd.samples[i] = fn(mu.point(nd.box.coord(i)), nd.samples[i]);
    }
    out.add_density(nd);
  }
  return out;
}

}  // namespace

std::size_t LatticeBox::cell_count() const {
  std::size_t n = 1;
  for (const auto& [lo, hi] : ranges) n *= static_cast<std::size_t>(hi - lo + 1);
  return n;
}

LatticeCoord LatticeBox::coord(std::size_t index) const {
  LatticeCoord c(ranges.size());
  for (std::size_t k = ranges.size(); k-- > 0;) {
    const auto extent = static_cast<std::size_t>(ranges[k].second - ranges[k].first + 1);
    c[k] = ranges[k].first + static_cast<std::int64_t>(index % extent);
    index /= extent;
  }
  return c;
}

std::optional<std::size_t> LatticeBox::index(const LatticeCoord& c) const {
  if (c.size() != ranges.size()) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const auto [lo, hi] = ranges[k];
    if (c[k] < lo || c[k] > hi) return std::nullopt;
    idx = idx * static_cast<std::size_t>(hi - lo + 1) + static_cast<std::size_t>(c[k] - lo);
  }
  return idx;
}

Measure::Measure(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw ValidationError("measure: missing space");
}

Measure Measure::delta(SpacePtr space, const LatticeCoord& at, Complex weight) {
  Measure m(std::move(space));
  m.add_atom(at, weight);
  return m;
}

Measure Measure::density(SpacePtr space, LatticeBox box, std::vector<Complex> samples) {
  Measure m(std::move(space));
  m.add_density(GridDensity{std::move(box), std::move(samples)});
  return m;
}

bool Measure::is_zero() const {
  if (!atoms_.empty()) return false;
  if (!density_) return true;
  return std::all_of(density_->samples.begin(), density_->samples.end(),
                     [](const Complex& z) { return z == Complex{}; });
}

void Measure::add_atom(const LatticeCoord& at, Complex weight) {
  if (static_cast<int>(at.size()) != dim()) {
    throw ValidationError("atom coord: expected " + std::to_string(dim()) + " components");
  }
  if (!std::isfinite(weight.real()) || !std::isfinite(weight.imag())) {
    throw NumericError("atom weight is not finite");
  }
  auto [it, inserted] = atoms_.try_emplace(at, weight);
  if (!inserted) it->second += weight;
  if (it->second == Complex{}) atoms_.erase(it);
}

void Measure::add_density(const GridDensity& d) {
  if (d.box.dim() != dim()) throw ValidationError("density.box: dimension does not match space");
  for (const auto& [lo, hi] : d.box.ranges) {
    if (hi < lo) throw ValidationError("density.box: empty range (hi < lo)");
  }
  if (d.samples.size() != d.box.cell_count()) {
    throw ValidationError("density.samples: expected " + std::to_string(d.box.cell_count()) +
                          " samples, got " + std::to_string(d.samples.size()));
  }
  if (!density_) {
    density_ = d;
    return;
  }
  if (density_->box == d.box) {
    for (std::size_t i = 0; i < d.samples.size(); ++i) density_->samples[i] += d.samples[i];
    return;
  }
  GridDensity merged{bounding_box(density_->box, d.box), {}};
  merged.samples.assign(merged.box.cell_count(), Complex{});
  for (const GridDensity* src : {static_cast<const GridDensity*>(&*density_), &d}) {
    for (std::size_t i = 0; i < src->samples.size(); ++i) {
      merged.samples[*merged.box.index(src->box.coord(i))] += src->samples[i];
    }
  }
  density_ = std::move(merged);
}

Vector Measure::point(const LatticeCoord& c) const {
  const Vector& step = space_->lattice_step();
  Vector p(step.size());
  for (Eigen::Index i = 0; i < step.size(); ++i) p[i] = static_cast<double>(c[static_cast<std::size_t>(i)]) * step[i];
  return p;
}

double Measure::cell_volume() const { return space_->lattice_step().prod(); }

PointMeasure PointMeasure::from_measure(const Measure& mu) {
  PointMeasure out(mu.space_ptr());
  for (const auto& [c, z] : mu.atoms()) out.add(mu.point(c), z);
  if (const auto& d = mu.density()) {
    const double vol = mu.cell_volume();
    for (std::size_t i = 0; i < d->samples.size(); ++i) {
      if (d->samples[i] == Complex{}) continue;
      out.add(mu.point(d->box.coord(i)), d->samples[i] * vol);
    }
  }
  return out;
}

Measure involution(const Measure& mu) {
  Measure out(mu.space_ptr());
  for (const auto& [c, z] : mu.atoms()) {
    LatticeCoord neg(c.size());
    std::transform(c.begin(), c.end(), neg.begin(), [](auto v) { return -v; });
    out.add_atom(neg, std::conj(z));
  }
  if (const auto& d = mu.density()) {
    GridDensity r;
    for (const auto& [lo, hi] : d->box.ranges) r.box.ranges.emplace_back(-hi, -lo);
    r.samples.resize(d->samples.size());
    for (std::size_t i = 0; i < d->samples.size(); ++i) {
      LatticeCoord c = d->box.coord(i);
      for (auto& v : c) v = -v;
      r.samples[*r.box.index(c)] = std::conj(d->samples[i]);
    }
    out.add_density(r);
  }
  return out;
}

Measure star(double hbar, const Measure& mu, const Measure& nu) {
  if (!std::isfinite(hbar)) throw ValidationError("hbar: must be finite");
  return twisted_product(mu, nu, [hbar](double s) { return std::polar(1.0, -0.5 * hbar * s); });
}

PointMeasure star(double hbar, const PointMeasure& mu, const PointMeasure& nu) {
  if (!std::isfinite(hbar)) throw ValidationError("hbar: must be finite");
  const Matrix& s = mu.space().sigma_matrix();
  PointMeasure out(mu.space_ptr());
  for (const auto& a : mu.atoms()) {
    const Vector sa = s.transpose() * a.point;
    for (const auto& b : nu.atoms()) {
      out.add(a.point + b.point, a.weight * b.weight * std::polar(1.0, -0.5 * hbar * sa.dot(b.point)));
    }
  }
  return out;
}

// Sums are correctly rounded, so norms depend only on the multiset of weights
// (the involution permutes atoms).
double norm1(const Measure& mu) {
  detail::ExactSum atoms;
  for (const auto& [c, z] : mu.atoms()) atoms.add(std::abs(z));
  double total = atoms.value();
  if (const auto& d = mu.density()) {
    detail::ExactSum dens;
    for (const auto& z : d->samples) dens.add(std::abs(z));
    total += dens.value() * mu.cell_volume();
  }
  return total;
}

double norm1(const PointMeasure& mu) {
  detail::ExactSum total;
  for (const auto& a : mu.atoms()) total.add(std::abs(a.weight));
  return total.value();
}

Measure moment_measure(const Measure& mu, const SeminormSpec& spec, int m) {
  if (m < 0) throw ValidationError("moment order m: must be >= 0");
  if (m == 0) return mu;
  return map_weights(mu, [&spec, m](const Vector& f, Complex z) {
    return z * std::pow(seminorm_eval(spec, f), m);
  });
}

std::uint64_t binomial_sup(int n) {
  if (n < 0) throw ValidationError("moment order n: must be >= 0");
  const int k = n / 2;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

MomentProfile moment_norm(const Measure& mu, const SeminormSpec& spec, int n) {
  if (n < 0) throw ValidationError("moment order n: must be >= 0");
  MomentProfile p;
  p.n = n;
  p.c_n = binomial_sup(n);
  for (int m = 0; m <= n; ++m) {
    p.norms.push_back(norm1(moment_measure(mu, spec, m)));
    p.total += p.norms.back();
  }
  return p;
}

double first_moment_check(const Measure& mu) {
  double total = 0.0;
  for (const auto& [c, z] : mu.atoms()) total += std::abs(z) * mu.point(c).norm();
  if (const auto& d = mu.density()) {
    for (std::size_t i = 0; i < d->samples.size(); ++i) {
      total += std::abs(d->samples[i]) * mu.point(d->box.coord(i)).norm() * mu.cell_volume();
    }
  }
  if (!std::isfinite(total)) throw NumericError("first moment is not finite");
  return total;
}

Measure poisson_bracket0(const Measure& mu, const Measure& nu) {
  first_moment_check(mu);
  first_moment_check(nu);
  return twisted_product(mu, nu, [](double s) { return Complex{s, 0.0}; });
}

Measure scaled_commutator(double hbar, const Measure& mu, const Measure& nu) {
  if (hbar == 0.0 || !std::isfinite(hbar)) {
    throw ValidationError("hbar: scaled commutator needs hbar != 0 (use poisson_bracket0)");
  }
  // Per pair: (i/hbar)(e^{-i hbar s/2} - e^{+i hbar s/2}) = (2/hbar) sin(hbar s / 2).
  return twisted_product(mu, nu, [hbar](double s) {
    return Complex{2.0 / hbar * std::sin(0.5 * hbar * s), 0.0};
  });
}

Measure add(const Measure& mu, const Measure& nu) {
  require_same_space(mu, nu, "add");
  Measure out = mu;
  for (const auto& [c, z] : nu.atoms()) out.add_atom(c, z);
  if (const auto& d = nu.density()) out.add_density(*d);
  return out;
}

Measure scale(Complex z, const Measure& mu) {
  return map_weights(mu, [z](const Vector&, Complex w) { return z * w; });
}

Measure subtract(const Measure& mu, const Measure& nu) { return add(mu, scale(-1.0, nu)); }

Measure prune(const Measure& mu, double eps) {
  if (!(eps >= 0.0)) throw ValidationError("prune eps: must be >= 0");
  Measure out(mu.space_ptr());
  for (const auto& [c, z] : mu.atoms()) {
    if (std::abs(z) >= eps && z != Complex{}) out.add_atom(c, z);
  }
  if (const auto& d = mu.density()) {
    GridDensity nd = *d;
    bool any = false;
    for (auto& z : nd.samples) {
      if (std::abs(z) < eps) z = Complex{};
      any = any || z != Complex{};
    }
    if (any) out.add_density(nd);
  }
  return out;
}

double l1_distance(const PointMeasure& a, const PointMeasure& b, double point_tol) {
  std::vector<PointMeasure::Atom> all;
  all.reserve(a.atoms().size() + b.atoms().size());
  double scale = 1.0;
  for (const auto& x : a.atoms()) {
    all.push_back(x);
    scale = std::max(scale, x.point.cwiseAbs().maxCoeff());
  }
  for (const auto& x : b.atoms()) {
    all.push_back({x.point, -x.weight});
    scale = std::max(scale, x.point.cwiseAbs().maxCoeff());
  }
  const double tol = point_tol * scale;
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return std::lexicographical_compare(x.point.begin(), x.point.end(), y.point.begin(), y.point.end());
  });
  // Union-find over points within tol in the max norm.
  std::vector<std::size_t> parent(all.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[j].point[0] - all[i].point[0] > tol) break;
      if ((all[i].point - all[j].point).cwiseAbs().maxCoeff() <= tol) parent[find(j)] = find(i);
    }
  }
  std::map<std::size_t, Complex> clusters;
  for (std::size_t i = 0; i < all.size(); ++i) clusters[find(i)] += all[i].weight;
  double total = 0.0;
  for (const auto& [root, z] : clusters) total += std::abs(z);
  return total;
}

}  // namespace weylkit
