#include "weylkit/representation.hpp"

#include "fft.hpp"
#include "lanczos.hpp"
#include "weylkit/errors.hpp"
#include "weylkit/sampling.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace weylkit {

namespace {

constexpr double kPi = std::numbers::pi;

/// Calls fn(flat_index, axis_indices) over the N^d grid in row-major order.
template <class Fn>
void for_each_grid_point(int dims, std::size_t n, std::size_t total, Fn fn) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, idx);
    for (int a = dims - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < n) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
}

std::vector<std::vector<Complex>> axis_phases(const Vector& rate, const std::vector<double>& axis) {
  std::vector<std::vector<Complex>> out(static_cast<std::size_t>(rate.size()));
  for (Eigen::Index a = 0; a < rate.size(); ++a) {
    auto& row = out[static_cast<std::size_t>(a)];
    row.resize(axis.size());
    for (std::size_t j = 0; j < axis.size(); ++j) row[j] = std::polar(1.0, rate[a] * axis[j]);
  }
  return out;
}

/// prod_a e^{i rate_a axis[idx_a]} times scale over the grid.
ComplexVector phase_table(const SchrodingerRep& rep, const Vector& rate, const std::vector<double>& axis,
                          double scale) {
  const auto& g = rep.grid();
  const auto phases = axis_phases(rate, axis);
  ComplexVector out(static_cast<Eigen::Index>(rep.state_size()));
  for_each_grid_point(g.half_dim, g.points_per_axis, rep.state_size(),
                      [&](std::size_t flat, const std::vector<std::size_t>& idx) {
                        Complex p = scale;
                        for (std::size_t a = 0; a < idx.size(); ++a) p *= phases[a][idx[a]];
                        out[static_cast<Eigen::Index>(flat)] = p;
                      });
  return out;
}

/// out += coeff e^{iu.x} in
void accumulate_modulated(const SchrodingerRep& rep, const Vector& u, Complex coeff,
                          const ComplexVector& in, ComplexVector& out) {
  const auto& g = rep.grid();
  const auto phases = axis_phases(u, rep.axis_positions());
  for_each_grid_point(g.half_dim, g.points_per_axis, rep.state_size(),
                      [&](std::size_t flat, const std::vector<std::size_t>& idx) {
                        Complex p = coeff;
                        for (std::size_t a = 0; a < idx.size(); ++a) p *= phases[a][idx[a]];
                        out[static_cast<Eigen::Index>(flat)] += p * in[static_cast<Eigen::Index>(flat)];
                      });
}

/// psi(x + shift) from the DFT of psi.
ComplexVector translate(const SchrodingerRep& rep, const ComplexVector& psi_hat, const Vector& shift) {
  const auto& g = rep.grid();
  const auto phases = axis_phases(shift, rep.axis_momenta());
  ComplexVector out(psi_hat.size());
  const double norm = 1.0 / static_cast<double>(rep.state_size());
  for_each_grid_point(g.half_dim, g.points_per_axis, rep.state_size(),
                      [&](std::size_t flat, const std::vector<std::size_t>& idx) {
                        Complex p = norm;
                        for (std::size_t a = 0; a < idx.size(); ++a) p *= phases[a][idx[a]];
                        out[static_cast<Eigen::Index>(flat)] = p * psi_hat[static_cast<Eigen::Index>(flat)];
                      });
  rep.fft().backward(out.data());
  return out;
}

ComplexVector dft(const SchrodingerRep& rep, const ComplexVector& psi) {
  ComplexVector out = psi;
  rep.fft().forward(out.data());
  return out;
}

void require_state(const SchrodingerRep& rep, const ComplexVector& psi) {
  if (static_cast<std::size_t>(psi.size()) != rep.state_size()) {
    throw ValidationError("state vector: expected " + std::to_string(rep.state_size()) + " components");
  }
}

}  // namespace

GridSpec GridSpec::defaults(int half_dim) {
  if (half_dim <= 0) return GridSpec{0, 1, 1.0};
  if (half_dim == 1) return GridSpec{1, 1024, 20.0};
  if (half_dim == 2) return GridSpec{2, 256, 12.0};
  return GridSpec{half_dim, 32, 6.0};
}

double GridSpec::nyquist() const { return kPi / spacing(); }

std::size_t GridSpec::state_size() const {
  std::size_t n = 1;
  for (int a = 0; a < half_dim; ++a) n *= points_per_axis;
  return n;
}

void GridSpec::validate() const {
  if (half_dim < 0) throw ValidationError("grid: negative half dimension");
  if (half_dim == 0) return;
  const auto n = points_per_axis;
  if (n < 2 || (n & (n - 1)) != 0) throw ValidationError("grid.N: must be a power of two >= 2");
  if (!(half_length > 0.0) || !std::isfinite(half_length)) throw ValidationError("grid.L: must be positive");
  if (state_size() > (std::size_t{1} << 24)) throw ValidationError("grid: state space too large");
}

std::vector<Vector> default_characters(int kernel_dim, double min_step, std::size_t count, std::uint64_t seed) {
  if (kernel_dim == 0) return {Vector()};
  if (count == 0) throw ValidationError("characters: count must be >= 1");
  const double half = kPi / min_step;
  std::vector<Vector> out;
  for (auto& h : halton_points(kernel_dim, count, seed)) {
    out.push_back((2.0 * h.array() - 1.0).matrix() * half);
  }
  return out;
}

SchrodingerRep::SchrodingerRep(SpacePtr space, double hbar, GridSpec grid, std::vector<Vector> characters)
    : space_(std::move(space)), hbar_(hbar), grid_(grid), darboux_(darboux_decompose(*space_)),
      characters_(std::move(characters)) {
  if (hbar_ == 0.0 || !std::isfinite(hbar_)) {
    throw ValidationError("hbar: Schrodinger representation requires a finite nonzero hbar");
  }
  grid_.validate();
  if (grid_.half_dim != darboux_.half_rank()) {
    throw ValidationError("grid: half dimension " + std::to_string(grid_.half_dim) +
                          " does not match symplectic rank/2 = " + std::to_string(darboux_.half_rank()));
  }
  if (characters_.empty()) throw ValidationError("characters: at least one is required");
  for (const auto& c : characters_) {
    if (c.size() != darboux_.kernel_dim) {
      throw ValidationError("characters: expected vectors of length " + std::to_string(darboux_.kernel_dim));
    }
  }
  const double dx = grid_.spacing();
  const auto n = grid_.points_per_axis;
  for (std::size_t j = 0; j < n && grid_.half_dim > 0; ++j) {
    positions_.push_back(-grid_.half_length + static_cast<double>(j) * dx);
    const auto s = static_cast<double>(j < n / 2 ? static_cast<long long>(j)
                                                 : static_cast<long long>(j) - static_cast<long long>(n));
    momenta_.push_back(kPi / grid_.half_length * s);
  }
  fft_ = std::make_shared<const detail::FftPlan>(grid_.half_dim, static_cast<int>(n));
}

std::shared_ptr<const SchrodingerRep> SchrodingerRep::make(SpacePtr space, double hbar, const RepConfig& config) {
  const auto dec = darboux_decompose(*space);
  GridSpec grid = config.grid.value_or(GridSpec::defaults(dec.half_rank()));
  grid.half_dim = dec.half_rank();
  std::vector<Vector> chars = config.characters.value_or(default_characters(
      dec.kernel_dim, space->lattice_step().minCoeff(), config.character_count, config.seed));
  if (dec.kernel_dim == 0) chars = {Vector()};
  return std::make_shared<const SchrodingerRep>(std::move(space), hbar, grid, std::move(chars));
}

SchrodingerRep::Split SchrodingerRep::split(const Vector& f) const {
  if (f.size() != space_->dim()) throw ValidationError("weyl_apply: f has wrong dimension");
  const Vector c = darboux_.coordinates(f);
  const int m = darboux_.half_rank();
  Split s{c.head(m), c.segment(m, m), c.tail(darboux_.kernel_dim)};
  for (int a = 0; a < m; ++a) {
    if (std::abs(s.u[a]) >= grid_.nyquist()) {
      std::ostringstream msg;
      msg << "aliasing: |u| = " << std::abs(s.u[a]) << " outside the grid band pi/dx = " << grid_.nyquist();
      throw AliasingError(msg.str());
    }
    if (std::abs(hbar_ * s.v[a]) > grid_.half_length) {
      std::ostringstream msg;
      msg << "aliasing: translation |hbar v| = " << std::abs(hbar_ * s.v[a])
          << " exceeds the half box length L = " << grid_.half_length;
      throw AliasingError(msg.str());
    }
  }
  return s;
}

ComplexVector SchrodingerRep::weyl_apply(const Vector& f, const ComplexVector& psi, std::size_t character) const {
  require_state(*this, psi);
  if (character >= characters_.size()) throw ValidationError("weyl_apply: character index out of range");
  const Split s = split(f);
  const Complex coeff = std::polar(1.0, characters_[character].dot(s.k) + 0.5 * hbar_ * s.u.dot(s.v));
  const Vector shift = hbar_ * s.v;
  const ComplexVector moved = shift.isZero(0.0) ? psi : translate(*this, dft(*this, psi), shift);
  ComplexVector out = ComplexVector::Zero(psi.size());
  accumulate_modulated(*this, s.u, coeff, moved, out);
  return out;
}

RepOperator RepOperator::quantum(RepPtr rep, const PointMeasure& mu) {
  if (!rep) throw ValidationError("operator: missing representation");
  if (!(mu.space() == rep->space())) throw ValidationError("operator: measure and representation spaces differ");
  RepOperator op(rep, mu);
  std::map<std::vector<double>, std::size_t> by_shift;
  for (const auto& atom : mu.atoms()) {
    if (atom.weight == Complex{}) continue;
    auto s = rep->split(atom.point);
    const Vector shift = rep->hbar() * s.v;
    std::vector<double> key(shift.begin(), shift.end());
    auto [it, inserted] = by_shift.try_emplace(key, op.groups_.size());
    if (inserted) op.groups_.push_back(ShiftGroup{shift, {}, {}});
    op.groups_[it->second].terms.push_back(op.terms_.size());
    op.terms_.push_back(Term{atom.weight, atom.point, std::move(s.u), std::move(s.v), std::move(s.k)});
  }
  op.cache_tables();
  return op;
}

void RepOperator::cache_tables() {
  constexpr std::size_t kMaxCached = std::size_t{1} << 22;  // complex entries
  const std::size_t n = rep_->state_size();
  if ((terms_.size() + groups_.size()) * n > kMaxCached) return;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& g : groups_) {
    if (!g.shift.isZero(0.0)) g.multiplier = phase_table(*rep_, g.shift, rep_->axis_momenta(), inv_n);
  }
  modulation_.reserve(terms_.size());
  for (const auto& t : terms_) {
    modulation_.push_back(t.u.isZero(0.0) ? ComplexVector() : phase_table(*rep_, t.u, rep_->axis_positions(), 1.0));
  }
}

RepOperator RepOperator::classical(PointMeasure mu) { return RepOperator(nullptr, std::move(mu)); }

bool RepOperator::depends_on_character() const {
  for (const auto& t : terms_) {
    if (t.k.size() > 0 && !t.k.isZero(0.0)) return true;
  }
  return false;
}

std::size_t RepOperator::character_count() const { return rep_ ? rep_->characters().size() : 1; }

ComplexVector RepOperator::apply(const ComplexVector& psi, std::size_t character) const {
  if (!rep_) throw ValidationError("classical operator has no state-vector action");
  require_state(*rep_, psi);
  if (character >= rep_->characters().size()) throw ValidationError("apply: character index out of range");
  const Vector& chi = rep_->characters()[character];
  ComplexVector out = ComplexVector::Zero(psi.size());
  std::optional<ComplexVector> psi_hat;
  const bool cached = !modulation_.empty() || terms_.empty();
  for (const auto& group : groups_) {
    ComplexVector moved;
    if (group.shift.isZero(0.0)) {
      moved = psi;
    } else {
      if (!psi_hat) psi_hat = dft(*rep_, psi);
      if (cached) {
        moved = group.multiplier.cwiseProduct(*psi_hat);
        rep_->fft().backward(moved.data());
      } else {
        moved = translate(*rep_, *psi_hat, group.shift);
      }
    }
    for (std::size_t idx : group.terms) {
      const Term& t = terms_[idx];
      const Complex coeff = t.weight * std::polar(1.0, chi.dot(t.k) + 0.5 * rep_->hbar() * t.u.dot(t.v));
      if (!cached) {
        accumulate_modulated(*rep_, t.u, coeff, moved, out);
      } else if (modulation_[idx].size() == 0) {
        out += coeff * moved;
      } else {
        out += coeff * modulation_[idx].cwiseProduct(moved);
      }
    }
  }
  return out;
}

ComplexVector RepOperator::apply_adjoint(const ComplexVector& psi, std::size_t character) const {
  if (!rep_) throw ValidationError("classical operator has no state-vector action");
  require_state(*rep_, psi);
  if (character >= rep_->characters().size()) throw ValidationError("apply: character index out of range");
  const Vector& chi = rep_->characters()[character];
  const bool cached = !modulation_.empty() || terms_.empty();
  ComplexVector out = ComplexVector::Zero(psi.size());
  for (const auto& group : groups_) {
    ComplexVector acc = ComplexVector::Zero(psi.size());
    for (std::size_t idx : group.terms) {
      const Term& t = terms_[idx];
      const Complex coeff =
          std::conj(t.weight * std::polar(1.0, chi.dot(t.k) + 0.5 * rep_->hbar() * t.u.dot(t.v)));
      if (!cached) {
        accumulate_modulated(*rep_, -t.u, coeff, psi, acc);
      } else if (modulation_[idx].size() == 0) {
        acc += coeff * psi;
      } else {
        acc += coeff * modulation_[idx].conjugate().cwiseProduct(psi);
      }
    }
    if (group.shift.isZero(0.0)) {
      out += acc;
    } else if (cached) {
      rep_->fft().forward(acc.data());
      acc = group.multiplier.conjugate().cwiseProduct(acc);
      rep_->fft().backward(acc.data());
      out += acc;
    } else {
      out += translate(*rep_, dft(*rep_, acc), -group.shift);
    }
  }
  return out;
}

RepOperator RepOperator::adjoint() const {
  PointMeasure adj(backing_.space_ptr());
  for (const auto& a : backing_.atoms()) adj.add(-a.point, std::conj(a.weight));
  if (!rep_) return classical(std::move(adj));
  return quantum(rep_, adj);
}

double RepOperator::weight_sum() const { return norm1(backing_); }

RepOperator build_operator(const RepPtr& rep, const PointMeasure& mu) { return RepOperator::quantum(rep, mu); }

RepOperator build_operator(const RepPtr& rep, const Measure& mu) {
  return RepOperator::quantum(rep, PointMeasure::from_measure(mu));
}

RepOperator build_operator(const SpacePtr& space, double hbar, const RepConfig& config, const Measure& mu) {
  if (hbar == 0.0) return RepOperator::classical(PointMeasure::from_measure(mu));
  return build_operator(SchrodingerRep::make(space, hbar, config), mu);
}

NormResult operator_norm(const RepOperator& op, const NormOptions& options) {
  if (!(options.tol > 0.0)) throw ValidationError("tol: must be positive");
  NormResult res;
  res.upper_bound = op.weight_sum();
  if (op.is_classical()) {
    const auto est = sup_norm_estimate(op.backing(), options.sampling);
    res.norm = est.lower_bound;
    return res;
  }
  if (op.terms().empty()) return res;

  const std::size_t copies = op.depends_on_character() ? op.character_count() : 1;
  std::vector<detail::LanczosResult> per(copies);
  const std::size_t n = op.rep()->state_size();
  parallel_for(copies, [&](std::size_t c) {
    auto gram = [&](const ComplexVector& in, ComplexVector& out) { out = op.apply_adjoint(op.apply(in, c), c); };
    per[c] = detail::lanczos_top_eigenvalue(n, gram, options.tol, options.max_iterations, options.seed);
  });
  for (std::size_t c = 0; c < copies; ++c) {
    const double nrm = std::sqrt(std::max(0.0, per[c].eigenvalue));
    if (nrm > res.norm || c == 0) {
      res.norm = nrm;
      res.character = c;
    }
    res.iterations = std::max(res.iterations, per[c].iterations);
    res.converged = res.converged && per[c].converged;
  }
  return res;
}

double classical_norm(const Measure& mu, const SamplingConfig& sampling) {
  return sup_norm_estimate(PhaseSpaceFunction(mu), sampling).lower_bound;
}

Measure gauge_twist(const Measure& mu, const PhasePoint& F) {
  if (F.F.size() != mu.dim()) throw ValidationError("gauge_twist: F has wrong dimension");
  Measure out(mu.space_ptr());
  for (const auto& [c, z] : mu.atoms()) out.add_atom(c, z * std::polar(1.0, F.F.dot(mu.point(c))));
  if (const auto& d = mu.density()) {
    GridDensity nd = *d;
    for (std::size_t i = 0; i < nd.samples.size(); ++i) {
      nd.samples[i] *= std::polar(1.0, F.F.dot(mu.point(nd.box.coord(i))));
    }
    out.add_density(nd);
  }
  return out;
}

PointMeasure pushforward(const PointMeasure& mu, const HbarScaler& scaler, double hbar) {
  const Matrix t = scaler.matrix(hbar, mu.space().dim());
  PointMeasure out(mu.space_ptr());
  for (const auto& a : mu.atoms()) out.add(t * a.point, a.weight);
  return out;
}

PointMeasure pushforward(const Measure& mu, const HbarScaler& scaler, double hbar) {
  return pushforward(PointMeasure::from_measure(mu), scaler, hbar);
}

NormResult family_norm(const RepPtr& base_rep, const HbarScaler& scaler, double hbar, const Measure& mu,
                       const NormOptions& options) {
  if (base_rep->hbar() != 1.0) throw ValidationError("family_norm: base representation must have hbar = 1");
  if (!scaler.accepts(hbar)) throw ValidationError("hbar: outside the scaler domain");
  return operator_norm(RepOperator::quantum(base_rep, pushforward(mu, scaler, hbar)), options);
}

NormResult family_norm(const QuantizationFamily& family, const SpacePtr& space, double hbar, const Measure& mu,
                       const NormOptions& options) {
  return family_norm(SchrodingerRep::make(space, 1.0, family.base), family.scaler, hbar, mu, options);
}

}  // namespace weylkit
