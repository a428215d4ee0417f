#pragma once

// Finite complex measures on E realized as lattice atoms plus gridded
// densities, with the twisted convolution, involution, moment norms and the
// Poisson bracket.

#include "weylkit/space.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace weylkit {

using Complex = std::complex<double>;
using LatticeCoord = std::vector<std::int64_t>;

/// Inclusive integer ranges [lo, hi] per dimension.
struct LatticeBox {
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;

  int dim() const { return static_cast<int>(ranges.size()); }
  std::size_t cell_count() const;
  /// Row-major: the last dimension varies fastest.
  LatticeCoord coord(std::size_t index) const;
  std::optional<std::size_t> index(const LatticeCoord& c) const;

  friend bool operator==(const LatticeBox&, const LatticeBox&) = default;
};

/// Riemann discretization of an absolutely continuous measure: sample value
/// (density) at each lattice point, mass = sample * cell_volume.
struct GridDensity {
  LatticeBox box;
  std::vector<Complex> samples;
};

class Measure {
 public:
  using AtomMap = std::map<LatticeCoord, Complex>;

  explicit Measure(SpacePtr space);

  static Measure zero(SpacePtr space) { return Measure(std::move(space)); }
  static Measure delta(SpacePtr space, const LatticeCoord& at, Complex weight = 1.0);
  static Measure density(SpacePtr space, LatticeBox box, std::vector<Complex> samples);

  const PreSymplecticSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int dim() const { return space_->dim(); }

  const AtomMap& atoms() const { return atoms_; }
  const std::optional<GridDensity>& density() const { return density_; }

  bool is_discrete() const { return !density_.has_value(); }
  /// True when no atoms and no density samples remain.
  bool is_zero() const;

  /// Accumulates weight at the lattice point; exact zeros are removed.
  void add_atom(const LatticeCoord& at, Complex weight);
  /// Adds a density, enlarging the stored box to the union when needed.
  void add_density(const GridDensity& d);

  Vector point(const LatticeCoord& c) const;
  double cell_volume() const;

 private:
  SpacePtr space_;
  AtomMap atoms_;
  std::optional<GridDensity> density_;
};

/// Off-lattice discrete measure (real coordinates). Images of lattice
/// measures under T_hbar live here; coincident points are not merged.
class PointMeasure {
 public:
  struct Atom {
    Vector point;
    Complex weight;
  };

  explicit PointMeasure(SpacePtr space) : space_(std::move(space)) {}

  /// Density cells become atoms carrying mass sample * cell_volume.
  static PointMeasure from_measure(const Measure& mu);

  const PreSymplecticSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  void add(Vector point, Complex weight) { atoms_.push_back({std::move(point), weight}); }

 private:
  SpacePtr space_;
  std::vector<Atom> atoms_;
};

/// Summary of ||mu||_kappa^n = sum_{m<=n} ||mu_kappa^m||_1.
struct MomentProfile {
  int n = 0;
  std::vector<double> norms;
  double total = 0.0;
  std::uint64_t c_n = 1;
};

Measure involution(const Measure& mu);

/// Twisted convolution with multiplier exp(-(i/2) hbar sigma(f, g)).
Measure star(double hbar, const Measure& mu, const Measure& nu);
PointMeasure star(double hbar, const PointMeasure& mu, const PointMeasure& nu);

double norm1(const Measure& mu);
double norm1(const PointMeasure& mu);

Measure moment_measure(const Measure& mu, const SeminormSpec& spec, int m);
MomentProfile moment_norm(const Measure& mu, const SeminormSpec& spec, int n);

/// max_k binomial(n, k) = binomial(n, floor(n/2)).
std::uint64_t binomial_sup(int n);

/// {mu, nu}_0: atom pairs contribute sigma(f, g) delta(f + g).
Measure poisson_bracket0(const Measure& mu, const Measure& nu);

/// {mu, nu}_hbar = (i/hbar)(mu *_hbar nu - nu *_hbar mu).
Measure scaled_commutator(double hbar, const Measure& mu, const Measure& nu);

Measure add(const Measure& mu, const Measure& nu);
Measure subtract(const Measure& mu, const Measure& nu);
Measure scale(Complex z, const Measure& mu);
/// Drops atoms / zeroes samples with |z| < eps (eps = 0: exact zeros only).
Measure prune(const Measure& mu, double eps = 0.0);

/// sum |z_k| over clusters of atoms of (a - b) whose points agree within
/// point_tol (relative to the largest coordinate magnitude).
double l1_distance(const PointMeasure& a, const PointMeasure& b, double point_tol = 1e-9);

/// Euclidean first moment sum |z_k| |f_k|; throws NumericError if not finite.
double first_moment_check(const Measure& mu);

}  // namespace weylkit
