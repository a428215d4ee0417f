#pragma once

// Schrodinger-type representations on a periodic position grid, with a
// finite family of characters for the degenerate directions of sigma.
//
//   (W(u,v) psi)(x) = e^{(i/2) hbar u.v} e^{i u.x} psi(x + hbar v)
//
// Translations are applied as discrete-Fourier multipliers, so they are exact
// trigonometric interpolation; multiplication by e^{iu.x} is exact for u on
// the dual lattice (pi/L) Z.

#include "weylkit/measure.hpp"
#include "weylkit/phase_space.hpp"
#include "weylkit/space.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace weylkit {

namespace detail {
class FftPlan;
}

struct GridSpec {
  int half_dim = 1;
  std::size_t points_per_axis = 1024;
  double half_length = 20.0;

  /// N=1024, L=20 for d=1; N=256, L=12 for d=2; N=32, L=6 beyond.
  static GridSpec defaults(int half_dim);

  double spacing() const { return 2.0 * half_length / static_cast<double>(points_per_axis); }
  /// Largest resolvable |u| per axis, pi / dx.
  double nyquist() const;
  std::size_t state_size() const;
  void validate() const;
};

struct RepConfig {
  std::optional<GridSpec> grid;
  std::size_t character_count = 256;
  std::uint64_t seed = 42;
  /// Explicit characters on ker(sigma) (kernel coordinates); overrides sampling.
  std::optional<std::vector<Vector>> characters;
};

class SchrodingerRep {
 public:
  SchrodingerRep(SpacePtr space, double hbar, GridSpec grid, std::vector<Vector> characters);
  static std::shared_ptr<const SchrodingerRep> make(SpacePtr space, double hbar, const RepConfig& config);

  const PreSymplecticSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const DarbouxDecomposition& decomposition() const { return darboux_; }
  double hbar() const { return hbar_; }
  const GridSpec& grid() const { return grid_; }
  const std::vector<Vector>& characters() const { return characters_; }
  std::size_t state_size() const { return grid_.state_size(); }

  /// Grid positions along one axis, x_j = -L + j dx.
  const std::vector<double>& axis_positions() const { return positions_; }
  /// DFT wave numbers along one axis (standard FFT ordering).
  const std::vector<double>& axis_momenta() const { return momenta_; }

  ComplexVector weyl_apply(const Vector& f, const ComplexVector& psi, std::size_t character = 0) const;

  /// Darboux split (u, v, k) of f with the band checks applied.
  struct Split {
    Vector u, v, k;
  };
  Split split(const Vector& f) const;

  const detail::FftPlan& fft() const { return *fft_; }

 private:
  SpacePtr space_;
  double hbar_;
  GridSpec grid_;
  DarbouxDecomposition darboux_;
  std::vector<Vector> characters_;
  std::vector<double> positions_;
  std::vector<double> momenta_;
  std::shared_ptr<const detail::FftPlan> fft_;
};

using RepPtr = std::shared_ptr<const SchrodingerRep>;

/// Default characters: Halton points in the cell [-pi/s, pi/s)^k, s = min lattice step.
std::vector<Vector> default_characters(int kernel_dim, double min_step, std::size_t count, std::uint64_t seed);

/// Pi_hbar(mu) as a lazy sum of weighted Weyl operators. With hbar = 0 it is
/// the classical multiplication operator by mu-hat (no state vectors).
class RepOperator {
 public:
  struct Term {
    Complex weight;
    Vector point;
    Vector u, v, k;
  };

  static RepOperator quantum(RepPtr rep, const PointMeasure& mu);
  static RepOperator classical(PointMeasure mu);

  bool is_classical() const { return !rep_; }
  const RepPtr& rep() const { return rep_; }
  const std::vector<Term>& terms() const { return terms_; }
  const PointMeasure& backing() const { return backing_; }

  /// Whether any term carries a nonzero kernel component (character-dependent).
  bool depends_on_character() const;
  std::size_t character_count() const;

  ComplexVector apply(const ComplexVector& psi, std::size_t character = 0) const;
  /// Exact adjoint of apply() on the grid. For u off the dual lattice this
  /// differs slightly from adjoint().apply().
  ComplexVector apply_adjoint(const ComplexVector& psi, std::size_t character = 0) const;
  /// Operator of the adjoint measure, f -> -f with conjugated weights.
  RepOperator adjoint() const;
  /// sum |weights| >= operator norm.
  double weight_sum() const;

 private:
  RepOperator(RepPtr rep, PointMeasure backing) : rep_(std::move(rep)), backing_(std::move(backing)) {}

  struct ShiftGroup {
    Vector shift;  // hbar v
    std::vector<std::size_t> terms;
    ComplexVector multiplier;  // DFT multiplier of the shift, empty if not cached
  };

  void cache_tables();

  RepPtr rep_;
  PointMeasure backing_;
  std::vector<Term> terms_;
  std::vector<ShiftGroup> groups_;
  std::vector<ComplexVector> modulation_;  // e^{iu.x} per term, empty if not cached
};

RepOperator build_operator(const RepPtr& rep, const Measure& mu);
RepOperator build_operator(const RepPtr& rep, const PointMeasure& mu);
/// hbar = 0 routes to the classical operator.
RepOperator build_operator(const SpacePtr& space, double hbar, const RepConfig& config, const Measure& mu);

struct NormResult {
  double norm = 0.0;
  int iterations = 0;
  double upper_bound = 0.0;
  bool converged = true;
  /// Index of the character attaining the maximum.
  std::size_t character = 0;
};

struct NormOptions {
  double tol = 1e-6;
  int max_iterations = 5000;
  std::uint64_t seed = 42;
  SamplingConfig sampling;  // classical operators
};

/// Largest singular value; max over character copies for degenerate sigma.
NormResult operator_norm(const RepOperator& op, const NormOptions& options = {});

/// ||Pi_0(mu)|| = sup |mu-hat|.
double classical_norm(const Measure& mu, const SamplingConfig& sampling = {});

/// Each weight multiplied by e^{iF.f}.
Measure gauge_twist(const Measure& mu, const PhasePoint& F);

struct QuantizationFamily {
  HbarScaler scaler;
  RepConfig base;
};

/// Image of mu under f -> T_hbar f (off-lattice in general).
PointMeasure pushforward(const PointMeasure& mu, const HbarScaler& scaler, double hbar);
PointMeasure pushforward(const Measure& mu, const HbarScaler& scaler, double hbar);

/// ||Pi_1(pushforward(mu, T_hbar))||, i.e. the norm in Pi_hbar = Pi_1 o beta_hbar.
NormResult family_norm(const QuantizationFamily& family, const SpacePtr& space, double hbar,
                       const Measure& mu, const NormOptions& options = {});
NormResult family_norm(const RepPtr& base_rep, const HbarScaler& scaler, double hbar, const Measure& mu,
                       const NormOptions& options = {});

}  // namespace weylkit
