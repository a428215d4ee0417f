#include "weylkit/space.hpp"

#include "weylkit/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace weylkit {

namespace {

constexpr double kKernelThreshold = 1e-10;

void require_dim(const Vector& f, int dim, const char* what) {
  if (f.size() != dim) {
    throw ValidationError(std::string(what) + ": expected vector of length " +
                          std::to_string(dim) + ", got " + std::to_string(f.size()));
  }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

PreSymplecticSpace::PreSymplecticSpace(Matrix sigma, Vector lattice_step)
    : sigma_(std::move(sigma)), step_(std::move(lattice_step)) {
  if (sigma_.rows() == 0 || sigma_.rows() != sigma_.cols()) {
    throw ValidationError("sigma: must be a non-empty square matrix");
  }
  if (!sigma_.allFinite()) throw ValidationError("sigma: non-finite entries");
  const double scale = max_abs(sigma_);
  if (max_abs(sigma_ + sigma_.transpose()) > 1e-14 * scale) {
    throw ValidationError("sigma: matrix is not antisymmetric");
  }
  if (step_.size() != sigma_.rows()) {
    throw ValidationError("lattice_step: length must equal dim");
  }
  for (Eigen::Index i = 0; i < step_.size(); ++i) {
    if (!(step_[i] > 0.0) || !std::isfinite(step_[i])) {
      throw ValidationError("lattice_step: components must be positive");
    }
  }
}

PreSymplecticSpace PreSymplecticSpace::standard(int half_dim, double step) {
  return PreSymplecticSpace(standard_symplectic(half_dim),
                            Vector::Constant(2 * half_dim, step));
}

Matrix standard_symplectic(int half_dim) {
  Matrix j = Matrix::Zero(2 * half_dim, 2 * half_dim);
  for (int i = 0; i < half_dim; ++i) {
    j(i, half_dim + i) = 1.0;
    j(half_dim + i, i) = -1.0;
  }
  return j;
}

SeminormSpec::SeminormSpec(Matrix gram, double compat_c) : gram_(std::move(gram)), c_(compat_c) {
  if (gram_.rows() == 0 || gram_.rows() != gram_.cols()) {
    throw ValidationError("seminorm.gram: must be a non-empty square matrix");
  }
  if (!gram_.allFinite()) throw ValidationError("seminorm.gram: non-finite entries");
  const double scale = max_abs(gram_);
  if (max_abs(gram_ - gram_.transpose()) > 1e-12 * scale) {
    throw ValidationError("seminorm.gram: matrix is not symmetric");
  }
  if (scale > 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * es.eigenvalues().cwiseAbs().maxCoeff()) {
      throw ValidationError("seminorm.gram: matrix is not positive semidefinite");
    }
  }
  if (!(c_ > 0.0) || !std::isfinite(c_)) {
    throw ValidationError("seminorm.c: must be a positive real");
  }
}

SeminormSpec SeminormSpec::euclidean(int dim, double compat_c) {
  return SeminormSpec(Matrix::Identity(dim, dim), compat_c);
}

double sigma_eval(const PreSymplecticSpace& space, const Vector& f, const Vector& g) {
  require_dim(f, space.dim(), "sigma_eval f");
  require_dim(g, space.dim(), "sigma_eval g");
  return f.dot(space.sigma_matrix() * g);
}

std::vector<Vector> kernel_basis(const PreSymplecticSpace& space) {
  const Matrix& s = space.sigma_matrix();
  const int d = space.dim();
  std::vector<Vector> out;
  Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  for (int i = 0; i < d; ++i) {
    if (smax == 0.0 || sv[i] <= kKernelThreshold * smax) {
      out.push_back(svd.matrixV().col(i));
    }
  }
  return out;
}

DarbouxDecomposition darboux_decompose(const PreSymplecticSpace& space) {
  const Matrix& s = space.sigma_matrix();
  const int d = space.dim();
  const auto kernel = kernel_basis(space);
  const int kdim = static_cast<int>(kernel.size());
  const int rank = d - kdim;

  Matrix kmat(d, kdim);
  for (int i = 0; i < kdim; ++i) kmat.col(i) = kernel[static_cast<std::size_t>(i)];

  // Pool: canonical basis projected onto ker(sigma)^perp, so that an already
  // standard sigma yields the identity basis.
  std::vector<Vector> pool;
  const Matrix proj = Matrix::Identity(d, d) - kmat * kmat.transpose();
  for (int i = 0; i < d; ++i) {
    Vector w = proj.col(i);
    if (w.norm() > 1e-8) pool.push_back(std::move(w));
  }

  const int m = rank / 2;
  Matrix es(d, m), fs(d, m);
  for (int pair = 0; pair < m; ++pair) {
    // Largest remaining vector as e; its strongest sigma-partner as f.
    std::size_t ie = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
      if (pool[i].norm() > pool[ie].norm() * (1.0 + 1e-12)) ie = i;
    }
    Vector e = pool[ie] / pool[ie].norm();
    std::size_t jf = ie;
    double best = 0.0;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const double val = std::abs(e.dot(s * pool[j]));
      if (val > best * (1.0 + 1e-12)) {
        best = val;
        jf = j;
      }
    }
    if (jf == ie || best == 0.0) {
      throw NumericError("darboux_decompose: failed to find a symplectic partner");
    }
    Vector f = pool[jf];
    double pairing = e.dot(s * f);
    // Symmetric rescaling so sigma(e, f) = 1.
    const double root = std::sqrt(std::abs(pairing));
    e /= root;
    f /= root * (pairing > 0 ? 1.0 : -1.0);
    pairing = e.dot(s * f);
    f /= pairing;

    std::vector<Vector> next;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (j == ie || j == jf) continue;
      Vector w = pool[j];
      w += f.dot(s * w) * e - e.dot(s * w) * f;
      if (w.norm() > 1e-8) next.push_back(std::move(w));
    }
    // Re-orthonormalize the remainder for conditioning; sigma-orthogonality to
    // (e, f) is preserved under linear combinations.
    if (!next.empty()) {
      Matrix w(d, static_cast<Eigen::Index>(next.size()));
      for (std::size_t j = 0; j < next.size(); ++j) w.col(static_cast<Eigen::Index>(j)) = next[j];
      Eigen::ColPivHouseholderQR<Matrix> qr(w);
      qr.setThreshold(1e-10);
      const auto r = qr.rank();
      const Matrix q = qr.householderQ() * Matrix::Identity(d, r);
      next.clear();
      for (Eigen::Index j = 0; j < r; ++j) next.push_back(q.col(j));
    }
    pool = std::move(next);
    es.col(pair) = e;
    fs.col(pair) = f;
  }

  DarbouxDecomposition out;
  out.basis.resize(d, d);
  out.basis << es, fs, kmat;
  out.rank_symplectic = rank;
  out.kernel_dim = kdim;
  out.inverse = out.basis.fullPivLu().inverse();
  return out;
}

double seminorm_eval(const SeminormSpec& spec, const Vector& f) {
  require_dim(f, spec.dim(), "seminorm_eval f");
  return std::sqrt(std::max(0.0, f.dot(spec.gram() * f)));
}

CompatResult verify_compat(const PreSymplecticSpace& space, const SeminormSpec& spec) {
  if (spec.dim() != space.dim()) {
    throw ValidationError("verify_compat: seminorm dimension does not match space");
  }
  const Matrix& s = space.sigma_matrix();
  const int d = space.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(spec.gram());
  const Vector& lam = es.eigenvalues();
  const double gscale = lam.cwiseAbs().maxCoeff();
  const double sscale = max_abs(s);

  std::vector<int> range_idx;
  CompatResult out;
  for (int i = 0; i < d; ++i) {
    if (gscale > 0.0 && lam[i] > 1e-12 * gscale) {
      range_idx.push_back(i);
      continue;
    }
    const Vector k = es.eigenvectors().col(i);
    const Vector sk = s * k;
    if (sk.norm() > kKernelThreshold * std::max(sscale, 1e-300) && sscale > 0.0) {
      out.ok = false;
      out.worst_ratio = std::numeric_limits<double>::infinity();
      out.witness = std::make_pair(k, Vector(sk / sk.norm()));
      return out;
    }
  }
  if (range_idx.empty()) {
    out.ok = true;
    out.worst_ratio = 0.0;
    return out;
  }
  const int r = static_cast<int>(range_idx.size());
  Matrix w(d, r);
  for (int j = 0; j < r; ++j) {
    w.col(j) = es.eigenvectors().col(range_idx[static_cast<std::size_t>(j)]) /
               std::sqrt(lam[range_idx[static_cast<std::size_t>(j)]]);
  }
  const Matrix reduced = w.transpose() * s * w;
  Eigen::JacobiSVD<Matrix> svd(reduced, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double opnorm = svd.singularValues()[0];
  out.worst_ratio = opnorm / spec.compat_c();
  out.ok = out.worst_ratio <= 1.0 + 1e-10;
  if (!out.ok) {
    out.witness = std::make_pair(Vector(w * svd.matrixU().col(0)), Vector(w * svd.matrixV().col(0)));
  }
  return out;
}

HbarScaler HbarScaler::sqrt_scaling() {
  HbarScaler s;
  s.kind_ = ScalerKind::sqrt_scaling;
  return s;
}

HbarScaler HbarScaler::split_scaling(const PreSymplecticSpace& space, Matrix conjugation,
                                     double theta_plus_exponent) {
  if (!std::isfinite(theta_plus_exponent)) {
    throw ValidationError("scaler.theta_plus_exponent: must be finite");
  }
  const double p = theta_plus_exponent;
  auto plus = [p](double h) { return (h < 0 ? -1.0 : 1.0) * std::pow(std::abs(h), p); };
  auto minus = [p](double h) { return std::pow(std::abs(h), 1.0 - p); };
  HbarScaler s = split_scaling(space, std::move(conjugation), plus, minus);
  s.exponent_ = p;
  return s;
}

HbarScaler HbarScaler::split_scaling(const PreSymplecticSpace& space, Matrix conjugation,
                                     ThetaFn theta_plus, ThetaFn theta_minus) {
  const int d = space.dim();
  if (conjugation.rows() != d || conjugation.cols() != d) {
    throw ValidationError("scaler.conjugation: must be a dim x dim matrix");
  }
  const double cscale = std::max(1.0, max_abs(conjugation));
  if (max_abs(conjugation * conjugation - Matrix::Identity(d, d)) > 1e-12 * cscale * cscale) {
    throw ValidationError("scaler.conjugation: C^2 must be the identity");
  }
  // sigma(Cf, g) = -sigma(f, Cg)  <=>  C^T sigma = -sigma C
  const Matrix& s = space.sigma_matrix();
  if (max_abs(conjugation.transpose() * s + s * conjugation) >
      1e-12 * cscale * std::max(1.0, max_abs(s))) {
    throw ValidationError("scaler.conjugation: sigma(Cf,g) = -sigma(f,Cg) violated");
  }
  HbarScaler out;
  out.kind_ = ScalerKind::split_scaling;
  out.conjugation_ = std::move(conjugation);
  out.theta_plus_ = std::move(theta_plus);
  out.theta_minus_ = std::move(theta_minus);
  return out;
}

bool HbarScaler::accepts(double hbar) const {
  if (!std::isfinite(hbar) || hbar == 0.0) return false;
  return kind_ != ScalerKind::sqrt_scaling || hbar > 0.0;
}

Matrix HbarScaler::matrix(double hbar, int dim) const {
  if (!std::isfinite(hbar) || hbar == 0.0) {
    throw ValidationError("hbar: T_hbar requires a finite nonzero hbar");
  }
  if (kind_ == ScalerKind::sqrt_scaling) {
    if (hbar < 0.0) {
      throw ValidationError("hbar: sqrt scaling requires hbar > 0 (negative hbar gives an anti-isomorphism)");
    }
    return std::sqrt(hbar) * Matrix::Identity(dim, dim);
  }
  const Matrix& c = *conjugation_;
  const int d = static_cast<int>(c.rows());
  if (d != dim) throw ValidationError("scaler.conjugation: dimension does not match space");
  const double tp = theta_plus_(hbar);
  const double tm = theta_minus_(hbar);
  if (std::abs(tp * tm - hbar) > 1e-12 * std::abs(hbar)) {
    throw ValidationError("scaler: theta_plus(hbar) * theta_minus(hbar) must equal hbar");
  }
  const Matrix id = Matrix::Identity(d, d);
  return tp * 0.5 * (id + c) + tm * 0.5 * (id - c);
}

Vector t_hbar_apply(const HbarScaler& scaler, double hbar, const Vector& f) {
  if (scaler.kind() == ScalerKind::sqrt_scaling) {
    if (!scaler.accepts(hbar)) {
      throw ValidationError("hbar: sqrt scaling requires hbar > 0 (negative hbar gives an anti-isomorphism)");
    }
    return std::sqrt(hbar) * f;
  }
  return scaler.matrix(hbar, static_cast<int>(f.size())) * f;
}

}  // namespace weylkit
