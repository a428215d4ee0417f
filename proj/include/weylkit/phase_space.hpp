#pragma once

// Fourier transforms of measures as functions on the phase space E',
// deformed products, differentials and the function-side Poisson bracket.

#include "weylkit/measure.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace weylkit {

using ComplexVector = Eigen::VectorXcd;

/// A point F of E' = (R^D)^*, paired with f as F . f.
struct PhasePoint {
  Vector F;
};

/// mu-hat, identified with its backing measure.
class PhaseSpaceFunction {
 public:
  explicit PhaseSpaceFunction(Measure backing) : backing_(std::move(backing)) {}
  const Measure& backing() const { return backing_; }

 private:
  Measure backing_;
};

struct SamplingConfig {
  std::size_t count = 4096;
  /// Defaults to 8 pi / min(lattice_step).
  std::optional<double> radius;
  std::uint64_t seed = 42;
  int refine_iterations = 60;
};

struct SupNormEstimate {
  double lower_bound = 0.0;
  PhasePoint at;
  /// Trivial bound ||mu||_1.
  double upper_bound = 0.0;
};

Complex fourier_eval(const PhaseSpaceFunction& fn, const PhasePoint& F);
Complex fourier_eval(const PointMeasure& mu, const Vector& F);

PhaseSpaceFunction deformed_product(double hbar, const PhaseSpaceFunction& a,
                                    const PhaseSpaceFunction& b);

SupNormEstimate sup_norm_estimate(const PhaseSpaceFunction& fn, const SamplingConfig& sampling = {});
SupNormEstimate sup_norm_estimate(const PointMeasure& mu, const SamplingConfig& sampling = {});

/// d_F mu-hat = i sum z e^{iF.f} f (complex cotangent vector, raw coordinates).
ComplexVector differential(const PhaseSpaceFunction& fn, const PhasePoint& F);

/// Removes the ker(gram) component (the varsigma-quotient class of a cotangent
/// vector); identity when gram is nonsingular.
ComplexVector project_quotient(const ComplexVector& v, const SeminormSpec& spec);

/// {A, B}[F] = -sigma(dA_1, dB_1) - i sigma(dA_1, dB_2) - i sigma(dA_2, dB_1) + sigma(dA_2, dB_2).
Complex function_bracket(const PhaseSpaceFunction& a, const PhaseSpaceFunction& b, const PhasePoint& F);

/// Generic sup estimate of |g| used by both measure types: samples {0} and a
/// quasi-random ball, then coordinate-wise golden-section refinement.
SupNormEstimate maximize_modulus(const std::function<Complex(const Vector&)>& g, int dim,
                                 double default_radius, const SamplingConfig& sampling);

}  // namespace weylkit
