#include "doctest.h"
#include "support.hpp"

#include "weylkit/errors.hpp"
#include "weylkit/states.hpp"

using namespace wt;

namespace {

LatticeCoord lc(std::initializer_list<std::int64_t> xs) { return LatticeCoord(xs); }

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// hbar^2 sigma(f,g)^2 <= s(f,f) s(g,g) over all probe pairs.
bool bound_on_pairs(const PreSymplecticSpace& sp, const Matrix& s, double h, const std::vector<Vector>& probes) {
  for (const auto& f : probes) {
    for (const auto& g : probes) {
      const double sg = sigma_oracle(sp.sigma_matrix(), f, g);
      if (h * h * sg * sg > f.dot(s * f) * g.dot(s * g) * (1 + 1e-12)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("characteristic function examples") {
  const auto g = QuantumState::gaussian(Matrix::Identity(2, 2));
  CHECK(char_fn_eval(g, Vector::Zero(2)) == Complex(1.0, 0.0));
  CHECK(char_fn_eval(g, v2(0.0, 2.0)).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const auto c = QuantumState::character(v2(0.4, -1.0));
  CHECK(char_fn_eval(c, Vector::Zero(2)) == Complex(1.0, 0.0));
  CHECK(std::abs(std::abs(char_fn_eval(c, v2(3.0, 1.5))) - 1.0) < 1e-15);
  CHECK_THROWS_AS(char_fn_eval(c, Vector::Zero(3)), ValidationError);
  CHECK_THROWS_AS(QuantumState::gaussian(diag2(1.0, -1.0)), ValidationError);
}

TEST_CASE("gaussian_bound_holds") {
  const auto sp = PreSymplecticSpace::standard(1);
  for (double h : {0.25, 1.0, 3.0}) {
    CHECK(gaussian_bound_holds(sp, QuantumState::gaussian(h * Matrix::Identity(2, 2)), h));
    CHECK(gaussian_bound_holds(sp, QuantumState::gaussian(h * Matrix::Identity(2, 2)), -h));
    CHECK_FALSE(gaussian_bound_holds(sp, QuantumState::gaussian(0.9 * h * Matrix::Identity(2, 2)), h));
    CHECK(gaussian_bound_holds(sp, QuantumState::gaussian(diag2(2.0 * h, 0.5 * h)), h));
    CHECK_FALSE(gaussian_bound_holds(sp, QuantumState::gaussian(diag2(2.0 * h, 0.4 * h)), h));
  }
  CHECK(gaussian_bound_holds(sp, QuantumState::character(v2(1, 2)), 0.0));
  CHECK_FALSE(gaussian_bound_holds(sp, QuantumState::character(v2(1, 2)), 0.5));
}

TEST_CASE("psd_check examples") {
  const auto sp = PreSymplecticSpace::standard(1);
  Rng rng(3);
  for (double h : {0.5, 1.0, 2.0}) {
    std::vector<Vector> probes{Vector::Zero(2)};
    for (int i = 0; i < 12; ++i) probes.push_back(random_vector(rng, 2, 2.0));
    const auto ok = psd_check(sp, QuantumState::gaussian(h * Matrix::Identity(2, 2)), h, probes);
    CHECK(ok.ok);
    CHECK(ok.min_eig >= -1e-10);
  }
  std::vector<Vector> random_probes;
  for (int i = 0; i < 10; ++i) random_probes.push_back(random_vector(rng, 2, 3.0));
  CHECK(psd_check(sp, QuantumState::character(v2(0.3, 0.7)), 0.0, random_probes).ok);

  const auto bad = psd_check(sp, QuantumState::gaussian(0.1 * Matrix::Identity(2, 2)), 1.0, witness_probes(2, {0.25, 0.5, 1.0, 2.0}));
  CHECK_FALSE(bad.ok);
  CHECK(bad.min_eig < -1e-10);
}

TEST_CASE("psd_check agrees with the uncertainty bound on the witness probes") {
  const auto sp = PreSymplecticSpace::standard(1);
  const auto probes = witness_probes(2, {0.25, 0.5, 1.0, 2.0});
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const double h = rng.uniform(0.1, 3.0);
    const double a = h * rng.uniform(0.1, 4.0);
    // b chosen so that ab / h^2 avoids the critical band (0.9, 1).
    const double ratio = t % 2 ? rng.uniform(0.02, 0.9) : rng.uniform(1.0, 4.0);
    const Matrix s = diag2(a, ratio * h * h / a);
    const auto state = QuantumState::gaussian(s);
    const bool want = bound_on_pairs(sp, s, h, probes);
    CHECK(want == gaussian_bound_holds(sp, state, h));
    CHECK(psd_check(sp, state, h, probes).ok == want);
  }
}

TEST_CASE("state_expectation examples") {
  const auto sp = standard_space(1);
  const auto g = QuantumState::gaussian(diag2(1.0, 2.0));
  const LatticeCoord f = lc({1, -2});
  CHECK(state_expectation(g, Measure::delta(sp, f)) == char_fn_eval(g, point_of(*sp, f)));
  CHECK(state_expectation(g, Measure::delta(sp, lc({0, 0}))) == Complex(1.0, 0.0));
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Measure m = random_discrete(sp, rng, 6, 3);
    const auto c = QuantumState::character(random_vector(rng, 2, 2.0));
    CHECK(std::abs(state_expectation(c, m)) <= norm1(m) * (1 + 1e-15));
    CHECK(std::abs(state_expectation(g, m)) <= norm1(m) * (1 + 1e-15));
  }
}

TEST_CASE("state_norm_lower_bound examples") {
  const auto sp = standard_space(1);
  const double h = 0.5;
  const auto g = QuantumState::gaussian(h * Matrix::Identity(2, 2));
  CHECK(state_norm_lower_bound(g, h, Measure::delta(sp, lc({2, 3}))).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(state_norm_lower_bound(g, h, Measure::zero(sp)).value == 0.0);

  Measure mu(sp);
  mu.add_atom(lc({0, 0}), 1.0);
  mu.add_atom(lc({1, 1}), 1.0);
  // mu* mu = 2 delta(0) + delta(f) + delta(-f) with sigma(f, -f) = 0.
  const double want = std::sqrt(2.0 + 2.0 * char_fn_eval(g, v2(1, 1)).real());
  const auto b = state_norm_lower_bound(g, h, mu);
  CHECK(b.admissible);
  CHECK(b.value == doctest::Approx(want).epsilon(1e-14));
  CHECK(b.value <= 2.0);
}

TEST_CASE("state bounds never exceed operator norms") {
  const auto sp = standard_space(1);
  Rng rng(11);
  NormOptions opts;
  opts.tol = 1e-8;
  RepConfig cfg;
  cfg.grid = GridSpec{1, 256, 12.0};
  for (int t = 0; t < 10; ++t) {
    const double h = rng.uniform(0.2, 1.0);
    const auto state = QuantumState::gaussian(diag2(h * 2.0, h * 0.6));
    const Measure mu = random_discrete(sp, rng, 4, 2);
    const auto b = state_norm_lower_bound(state, h, mu);
    CHECK(b.admissible);
    const NormResult r = operator_norm(build_operator(sp, h, cfg, mu), opts);
    CHECK(b.value <= r.norm + 2e-6);
  }
}

TEST_CASE("witness_probes") {
  const auto p = witness_probes(3, {0.5, 2.0});
  CHECK(p.size() == 7);
  CHECK(p[0].norm() == 0.0);
  CHECK(p[4][0] == 2.0);
}
