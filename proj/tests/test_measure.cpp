#include "doctest.h"
#include "support.hpp"

#include "weylkit/errors.hpp"

using namespace wt;

namespace {

LatticeCoord lc(std::initializer_list<std::int64_t> xs) { return LatticeCoord(xs); }

Complex weight_at(const Measure& m, const LatticeCoord& c) {
  const auto it = m.atoms().find(c);
  return it == m.atoms().end() ? Complex{} : it->second;
}

std::map<LatticeCoord, Complex> as_map(const Measure& m) { return {m.atoms().begin(), m.atoms().end()}; }

double total(const Measure& m, const SeminormSpec& sn, int n) { return moment_norm(m, sn, n).total; }

// Random positive-definite gram with the sharp compatibility constant.
SeminormSpec random_seminorm(Rng& rng, const PreSymplecticSpace& sp) {
  const int d = sp.dim();
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  }
  const Matrix gram = a.transpose() * a + 0.1 * Matrix::Identity(d, d);
  const double ratio = verify_compat(sp, SeminormSpec(gram, 1.0)).worst_ratio;
  return SeminormSpec(gram, std::max(ratio, 1e-300) * (1.0 + 1e-9));
}

}  // namespace

TEST_CASE("involution examples") {
  const auto sp = standard_space(1);
  const Measure d = involution(Measure::delta(sp, lc({2, -3})));
  CHECK(d.atoms().size() == 1);
  CHECK(weight_at(d, lc({-2, 3})) == Complex(1.0, 0.0));

  const Measure o = involution(Measure::delta(sp, lc({0, 0}), {2.0, 3.0}));
  CHECK(weight_at(o, lc({0, 0})) == Complex(2.0, -3.0));

  LatticeBox box{{{1, 2}, {-1, 0}}};
  std::vector<Complex> samples{{1, 1}, {2, 0}, {0, 3}, {4, -1}};
  const Measure rho = Measure::density(sp, box, samples);
  const Measure r = involution(rho);
  REQUIRE(r.density().has_value());
  const auto& rd = *r.density();
  CHECK(rd.box.ranges[0] == std::pair<std::int64_t, std::int64_t>{-2, -1});
  CHECK(rd.box.ranges[1] == std::pair<std::int64_t, std::int64_t>{0, 1});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    LatticeCoord c = box.coord(i);
    for (auto& x : c) x = -x;
    CHECK(rd.samples[*rd.box.index(c)] == std::conj(samples[i]));
  }
}

TEST_CASE("involution is an isometric involution") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto sp = random_space(rng, 2 + 2 * static_cast<int>(rng.integer(0, 2)), 2);
    const Measure m = random_discrete(sp, rng, 12, 4);
    CHECK(norm1(involution(m)) == norm1(m));
    CHECK(as_map(involution(involution(m))) == as_map(m));
  }
}

TEST_CASE("star examples") {
  const auto sp = standard_space(1);
  const Measure p = star(0.5, Measure::delta(sp, lc({1, 0})), Measure::delta(sp, lc({0, 1})));
  const Complex w = weight_at(p, lc({1, 1}));
  CHECK(w.real() == doctest::Approx(std::cos(0.25)).epsilon(1e-15));
  CHECK(w.imag() == doctest::Approx(-std::sin(0.25)).epsilon(1e-15));
  CHECK(std::abs(w - Complex(0.968912, -0.247404)) < 1e-6);

  Rng rng(1);
  const Measure mu = random_discrete(sp, rng, 7, 3);
  for (double h : {0.0, 0.3, -2.0, 17.0}) {
    CHECK(as_map(star(h, Measure::delta(sp, lc({0, 0})), mu)) == as_map(mu));
    CHECK(as_map(star(h, mu, Measure::delta(sp, lc({0, 0})))) == as_map(mu));
  }

  const Measure z = star(0.0, Measure::delta(sp, lc({2, 1})), Measure::delta(sp, lc({-1, 5})));
  CHECK(weight_at(z, lc({1, 6})) == Complex(1.0, 0.0));
}

TEST_CASE("star matches the naive double sum") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const int dim = 2 * static_cast<int>(rng.integer(1, 3));
    const auto sp = random_space(rng, dim, 2 * static_cast<int>(rng.integer(0, dim / 2)));
    const Measure mu = random_discrete(sp, rng, 8, 3);
    const Measure nu = random_discrete(sp, rng, 8, 3);
    const double h = rng.uniform(-3.0, 3.0);
    const double err = l1_between(as_map(star(h, mu, nu)), star_oracle(h, mu, nu));
    CHECK(err <= 1e-12 * norm1(mu) * norm1(nu));
  }
}

TEST_CASE("star on densities is the Riemann convolution") {
  const auto sp = make_space(PreSymplecticSpace(standard_symplectic(1), Vector::Constant(2, 0.5)));
  LatticeBox box{{{0, 1}, {0, 2}}};
  std::vector<Complex> a{{1, 0}, {0, 1}, {2, 0}, {1, -1}, {0.5, 0}, {0, 0}};
  const Measure rho = Measure::density(sp, box, a);
  const Measure at = Measure::delta(sp, lc({1, -1}), {0.0, 2.0});
  // Atom times density and density times density, both against the
  // atomized oracle (a density cell is an atom of mass sample * volume).
  auto atomize = [&](const Measure& m) {
    Measure out(sp);
    for (const auto& [c, z] : m.atoms()) out.add_atom(c, z);
    if (m.density()) {
      for (std::size_t i = 0; i < m.density()->samples.size(); ++i) {
        out.add_atom(m.density()->box.coord(i), m.density()->samples[i] * m.cell_volume());
      }
    }
    return out;
  };
  for (double h : {0.0, 0.7}) {
    for (const auto& [x, y] : {std::pair{rho, at}, std::pair{at, rho}, std::pair{rho, rho}}) {
      const Measure got = atomize(star(h, x, y));
      const auto want = star_oracle(h, atomize(x), atomize(y));
      CHECK(l1_between(as_map(got), want) < 1e-13);
    }
  }
}

TEST_CASE("norm1 examples") {
  const auto sp = standard_space(1);
  Measure m(sp);
  m.add_atom(lc({1, 0}), 2.0);
  m.add_atom(lc({0, 1}), Complex(0.0, -3.0));
  CHECK(norm1(m) == 5.0);
  CHECK(norm1(Measure::delta(sp, lc({4, 4}))) == 1.0);

  Matrix s3 = Matrix::Zero(3, 3);
  s3(0, 1) = 1.0;
  s3(1, 0) = -1.0;
  const auto sp3 = make_space(PreSymplecticSpace(s3, Vector::Constant(3, 0.5)));
  LatticeBox box{{{0, 1}, {0, 1}, {0, 1}}};
  const Measure u = Measure::density(sp3, box, std::vector<Complex>(8, 1.0));
  CHECK(u.cell_volume() == 0.125);
  CHECK(norm1(u) == 1.0);
}

TEST_CASE("moment examples") {
  const auto sp = standard_space(1);
  const auto eu = SeminormSpec::euclidean(2);
  const Measure d = Measure::delta(sp, lc({3, 4}), {0.0, 2.0});
  CHECK(as_map(moment_measure(d, eu, 0)) == as_map(d));
  CHECK(weight_at(moment_measure(d, eu, 2), lc({3, 4})) == Complex(0.0, 50.0));
  CHECK(moment_measure(Measure::delta(sp, lc({0, 0}), 7.0), eu, 3).is_zero());

  Rng rng(2);
  const Measure r = random_discrete(sp, rng, 6, 3);
  CHECK(moment_norm(r, eu, 0).total == norm1(r));

  const auto p = moment_norm(Measure::delta(sp, lc({3, 4})), eu, 2);
  CHECK(p.total == doctest::Approx(1.0 + 5.0 + 25.0).epsilon(1e-15));
  CHECK(p.norms.size() == 3);
  CHECK(binomial_sup(4) == 6);
  CHECK(binomial_sup(0) == 1);
  CHECK(binomial_sup(5) == 10);
  CHECK(binomial_sup(20) == 184756);
}

TEST_CASE("moment norms are submultiplicative up to c_n") {
  Rng rng(23);
  for (int t = 0; t < 60; ++t) {
    const int dim = 2 * static_cast<int>(rng.integer(1, 2));
    const auto sp = random_space(rng, dim, dim);
    const auto sn = random_seminorm(rng, *sp);
    const Measure mu = random_discrete(sp, rng, 5, 3);
    const Measure nu = random_discrete(sp, rng, 5, 3);
    const double h = rng.uniform(-2.0, 2.0);
    for (int n = 0; n <= 4; ++n) {
      const double lhs = total(star(h, mu, nu), sn, n);
      CHECK(lhs <= static_cast<double>(binomial_sup(n)) * total(mu, sn, n) * total(nu, sn, n) + 1e-10);
    }
  }
}

TEST_CASE("poisson_bracket0 examples") {
  const auto sp = standard_space(1);
  const Measure b = poisson_bracket0(Measure::delta(sp, lc({1, 0})), Measure::delta(sp, lc({0, 2})));
  CHECK(b.atoms().size() == 1);
  CHECK(weight_at(b, lc({1, 2})) == Complex(2.0, 0.0));

  const Measure f = Measure::delta(sp, lc({3, -1}));
  CHECK(poisson_bracket0(f, f).is_zero());

  Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    const LatticeCoord a = random_coord(rng, 2, 4), c = random_coord(rng, 2, 4);
    const Measure x = poisson_bracket0(Measure::delta(sp, a), Measure::delta(sp, c));
    const double s = sigma_oracle(sp->sigma_matrix(), point_of(*sp, a), point_of(*sp, c));
    CHECK(weight_at(x, lc({a[0] + c[0], a[1] + c[1]})) == Complex(s, 0.0));
  }
}

TEST_CASE("Poisson structure of the bracket") {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const int dim = 2 * static_cast<int>(rng.integer(1, 2));
    const auto sp = random_space(rng, dim, 2 * static_cast<int>(rng.integer(0, dim / 2)));
    const Measure a = random_discrete(sp, rng, 4, 2);
    const Measure b = random_discrete(sp, rng, 4, 2);
    const Measure c = random_discrete(sp, rng, 4, 2);
    auto br = [](const Measure& x, const Measure& y) { return poisson_bracket0(x, y); };
    auto st = [](const Measure& x, const Measure& y) { return star(0.0, x, y); };

    CHECK(norm1(add(br(a, b), br(b, a))) <= 1e-10);
    CHECK(l1_between(involution(br(a, b)), br(involution(a), involution(b))) <= 1e-10);
    CHECK(norm1(add(add(br(a, br(b, c)), br(b, br(c, a))), br(c, br(a, b)))) <= 1e-10);
    CHECK(l1_between(br(a, st(b, c)), add(st(br(a, b), c), st(b, br(a, c)))) <= 1e-10);
  }
}

TEST_CASE("bracket moment bound") {
  Rng rng(37);
  for (int t = 0; t < 60; ++t) {
    const int dim = 2 * static_cast<int>(rng.integer(1, 2));
    const auto sp = random_space(rng, dim, dim);
    const auto sn = random_seminorm(rng, *sp);
    const Measure mu = random_discrete(sp, rng, 5, 3);
    const Measure nu = random_discrete(sp, rng, 5, 3);
    for (int n = 1; n <= 4; ++n) {
      const double lhs = total(poisson_bracket0(mu, nu), sn, n - 1);
      const double rhs = sn.compat_c() * static_cast<double>(binomial_sup(n - 1)) * total(mu, sn, n) * total(nu, sn, n);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("scaled_commutator examples") {
  const auto sp = standard_space(1);
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const LatticeCoord a = random_coord(rng, 2, 4), c = random_coord(rng, 2, 4);
    const double h = rng.uniform(0.01, 2.0);
    const double s = sigma_oracle(sp->sigma_matrix(), point_of(*sp, a), point_of(*sp, c));
    const Measure x = scaled_commutator(h, Measure::delta(sp, a), Measure::delta(sp, c));
    // Expanded from the definition, not the sine form.
    const Complex want = Complex(0.0, 1.0 / h) * (std::exp(Complex(0.0, -h * s / 2)) - std::exp(Complex(0.0, h * s / 2)));
    CHECK(std::abs(weight_at(x, lc({a[0] + c[0], a[1] + c[1]})) - want) <= 1e-12 * (1.0 + std::abs(s)));
  }
  const Measure m = random_discrete(sp, rng, 5, 3);
  CHECK(norm1(scaled_commutator(0.3, m, m)) <= 1e-13);
  CHECK_THROWS_AS(scaled_commutator(0.0, m, m), ValidationError);
}

TEST_CASE("linear helpers") {
  const auto sp = standard_space(1);
  const LatticeCoord f = lc({1, 2});
  CHECK(add(Measure::delta(sp, f), Measure::delta(sp, f, -1.0)).is_zero());
  CHECK(weight_at(scale(2.0, Measure::delta(sp, f)), f) == Complex(2.0, 0.0));

  Measure small(sp);
  small.add_atom(f, 1e-20);
  small.add_atom(lc({0, 0}), 1.0);
  const Measure pr = prune(small, 1e-15);
  CHECK(pr.atoms().size() == 1);
  CHECK(pr.atoms().count(f) == 0);
}

TEST_CASE("measures reject mismatched input") {
  const auto a = standard_space(1);
  const auto b = standard_space(2);
  CHECK_THROWS_AS(add(Measure::delta(a, lc({0, 0})), Measure::delta(b, lc({0, 0, 0, 0}))), ValidationError);
  Measure m(a);
  CHECK_THROWS_AS(m.add_atom(lc({1, 2, 3}), 1.0), ValidationError);
  CHECK_THROWS_AS(m.add_atom(lc({1, 2}), Complex(NAN, 0.0)), NumericError);
  CHECK_THROWS_AS(Measure::density(a, LatticeBox{{{0, 1}, {0, 1}}}, std::vector<Complex>(3)), ValidationError);
  CHECK_THROWS_AS(Measure::density(a, LatticeBox{{{1, 0}, {0, 1}}}, std::vector<Complex>()), ValidationError);
  CHECK_THROWS_AS(star(NAN, m, m), ValidationError);
}

TEST_CASE("pushforward intertwines the products") {
  Rng rng(43);
  const auto sp = standard_space(1);
  Matrix c = Matrix::Identity(2, 2);
  c(1, 1) = -1.0;
  for (int t = 0; t < 40; ++t) {
    const Measure mu = random_discrete(sp, rng, 5, 3);
    const Measure nu = random_discrete(sp, rng, 5, 3);
    const double h = rng.uniform(0.05, 2.0);
    for (const auto& sc : {HbarScaler::sqrt_scaling(), HbarScaler::split_scaling(*sp, c, 1.0)}) {
      const PointMeasure lhs = pushforward(star(h, mu, nu), sc, h);
      const PointMeasure rhs = star(1.0, pushforward(mu, sc, h), pushforward(nu, sc, h));
      CHECK(l1_distance(lhs, rhs) <= 1e-12 * norm1(mu) * norm1(nu));
    }
  }
}
