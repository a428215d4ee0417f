#pragma once

// States on the Weyl algebra through their characteristic functions
// C(f) = <omega, W(f)>.

#include "weylkit/measure.hpp"
#include "weylkit/phase_space.hpp"

#include <variant>
#include <vector>

namespace weylkit {

class QuantumState {
 public:
  struct Gaussian {
    Matrix s;  // C(f) = exp(-f^T s f / 4)
  };
  struct Character {
    Vector F;  // C(f) = exp(i F.f)
  };

  static QuantumState gaussian(Matrix s);
  static QuantumState character(Vector F);

  bool is_gaussian() const { return std::holds_alternative<Gaussian>(kind_); }
  const std::variant<Gaussian, Character>& kind() const { return kind_; }
  int dim() const;

 private:
  explicit QuantumState(std::variant<Gaussian, Character> k) : kind_(std::move(k)) {}
  std::variant<Gaussian, Character> kind_;
};

Complex char_fn_eval(const QuantumState& state, const Vector& f);

/// Whether hbar^2 sigma(f,g)^2 <= s(f,f) s(g,g) for all f, g (exact, through
/// the generalized eigenvalue problem). Always true for character states at hbar = 0.
bool gaussian_bound_holds(const PreSymplecticSpace& space, const QuantumState& state, double hbar);

struct PsdResult {
  bool ok = false;
  double min_eig = 0.0;
};

/// Gram matrix M_ij = e^{(i/2) hbar sigma(f_i, f_j)} C(f_j - f_i) must be PSD.
PsdResult psd_check(const PreSymplecticSpace& space, const QuantumState& state, double hbar,
                    const std::vector<Vector>& probes, double tol = 1e-10);

/// <omega, mu> = integral of C dmu.
Complex state_expectation(const QuantumState& state, const Measure& mu);

struct StateBound {
  double value = 0.0;
  /// False when Re <omega, mu* mu> < -1e-10 (state inadmissible at this hbar).
  bool admissible = true;
};

/// sqrt(Re <omega, mu* *_hbar mu>), a lower bound for ||Pi(mu)|| in any
/// representation containing omega.
StateBound state_norm_lower_bound(const QuantumState& state, double hbar, const Measure& mu);

/// Probe sets for psd_check: {0} together with t e_k for each coordinate
/// direction and each t in scales. For a Gaussian violating the uncertainty
/// bound these expose a negative eigenvalue.
std::vector<Vector> witness_probes(int dim, const std::vector<double>& scales);

}  // namespace weylkit
