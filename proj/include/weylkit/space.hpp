#pragma once

// Pre-symplectic arena: the truncated test-function space R^D with a
// (possibly degenerate) antisymmetric form, quadratic semi-norms, the
// Darboux normal form and the hbar-scaling maps.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace weylkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// E = R^D with sigma(f, g) = f^T * sigma * g. Atoms of discrete measures
/// sit on the lattice coord (.) lattice_step.
class PreSymplecticSpace {
 public:
  PreSymplecticSpace(Matrix sigma, Vector lattice_step);

  /// Standard symplectic form on R^{2d} in (u_1..u_d, v_1..v_d) ordering,
  /// i.e. sigma((u,v),(u',v')) = u.v' - v.u'.
  static PreSymplecticSpace standard(int half_dim, double step = 1.0);

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Matrix& sigma_matrix() const { return sigma_; }
  const Vector& lattice_step() const { return step_; }

  friend bool operator==(const PreSymplecticSpace& a, const PreSymplecticSpace& b) {
    return a.sigma_ == b.sigma_ && a.step_ == b.step_;
  }

 private:
  Matrix sigma_;
  Vector step_;
};

using SpacePtr = std::shared_ptr<const PreSymplecticSpace>;

inline SpacePtr make_space(PreSymplecticSpace s) {
  return std::make_shared<const PreSymplecticSpace>(std::move(s));
}

/// Quadratic semi-norm varsigma(f) = sqrt(f^T gram f) together with the
/// constant c of the compatibility bound |sigma(f,g)| <= c varsigma(f) varsigma(g).
class SeminormSpec {
 public:
  SeminormSpec(Matrix gram, double compat_c);
  static SeminormSpec euclidean(int dim, double compat_c = 1.0);

  const Matrix& gram() const { return gram_; }
  double compat_c() const { return c_; }
  int dim() const { return static_cast<int>(gram_.rows()); }

 private:
  Matrix gram_;
  double c_;
};

struct CompatResult {
  bool ok = false;
  /// sup |sigma(f,g)| / (c varsigma(f) varsigma(g)); +inf when ker(gram) is
  /// not contained in ker(sigma).
  double worst_ratio = 0.0;
  /// Witness pair attaining worst_ratio (populated when !ok).
  std::optional<std::pair<Vector, Vector>> witness;
};

enum class ScalerKind { sqrt_scaling, split_scaling };

/// The linear maps T_hbar with sigma(T f, T g) = hbar sigma(f, g).
class HbarScaler {
 public:
  using ThetaFn = std::function<double(double)>;

  static HbarScaler sqrt_scaling();

  /// theta_+(h) = sign(h) |h|^p, theta_-(h) = |h|^{1-p}. p = 1 gives the
  /// map u + jv -> hbar u + jv on the (+1, -1) eigenspaces of C.
  static HbarScaler split_scaling(const PreSymplecticSpace& space, Matrix conjugation,
                                  double theta_plus_exponent);
  static HbarScaler split_scaling(const PreSymplecticSpace& space, Matrix conjugation,
                                  ThetaFn theta_plus, ThetaFn theta_minus);

  ScalerKind kind() const { return kind_; }
  const std::optional<Matrix>& conjugation() const { return conjugation_; }
  /// Set when built from an exponent (needed for serialization).
  std::optional<double> theta_plus_exponent() const { return exponent_; }

  /// Whether hbar lies in the domain of this scaler (hbar != 0; > 0 for sqrt).
  bool accepts(double hbar) const;

  /// Matrix of T_hbar on R^dim. Throws ValidationError outside the domain.
  Matrix matrix(double hbar, int dim) const;

 private:
  HbarScaler() = default;

  ScalerKind kind_ = ScalerKind::sqrt_scaling;
  std::optional<Matrix> conjugation_;
  ThetaFn theta_plus_;
  ThetaFn theta_minus_;
  std::optional<double> exponent_;
};

/// basis^T sigma basis = diag(J_m, 0) with J_m = [[0, I_m], [-I_m, 0]].
struct DarbouxDecomposition {
  Matrix basis;
  Matrix inverse;
  int rank_symplectic = 0;
  int kernel_dim = 0;

  int half_rank() const { return rank_symplectic / 2; }
  /// Coordinates (u, v, k) of f in this basis.
  Vector coordinates(const Vector& f) const { return inverse * f; }
};

double sigma_eval(const PreSymplecticSpace& space, const Vector& f, const Vector& g);

/// Orthonormal basis of ker(sigma); singular values <= 1e-10 sigma_max are zero.
std::vector<Vector> kernel_basis(const PreSymplecticSpace& space);

DarbouxDecomposition darboux_decompose(const PreSymplecticSpace& space);

double seminorm_eval(const SeminormSpec& spec, const Vector& f);

CompatResult verify_compat(const PreSymplecticSpace& space, const SeminormSpec& spec);

Vector t_hbar_apply(const HbarScaler& scaler, double hbar, const Vector& f);

/// Standard symplectic block J_m (2m x 2m).
Matrix standard_symplectic(int half_dim);

}  // namespace weylkit
