#include "doctest.h"
#include "support.hpp"

using namespace wt;

namespace {

LatticeCoord lc(std::initializer_list<std::int64_t> xs) { return LatticeCoord(xs); }

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Direct sum over atoms.
Complex fourier_oracle(const Measure& m, const Vector& F) {
  Complex acc{};
  for (const auto& [c, z] : m.atoms()) {
    double phase = 0.0;
    for (int i = 0; i < m.dim(); ++i) phase += F[i] * static_cast<double>(c[static_cast<std::size_t>(i)]) * m.space().lattice_step()[i];
    acc += z * std::polar(1.0, phase);
  }
  return acc;
}

}  // namespace

TEST_CASE("fourier_eval examples") {
  const auto sp = standard_space(1);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const LatticeCoord f = random_coord(rng, 2, 5);
    const Vector F = random_vector(rng, 2, 3.0);
    const Complex got = fourier_eval(PhaseSpaceFunction(Measure::delta(sp, f)), PhasePoint{F});
    CHECK(std::abs(got - std::polar(1.0, F.dot(point_of(*sp, f)))) < 1e-14);

    Measure pair(sp);
    pair.add_atom(f, 1.0);
    pair.add_atom(lc({-f[0], -f[1]}), 1.0);
    if (f[0] == 0 && f[1] == 0) continue;
    const Complex c = fourier_eval(PhaseSpaceFunction(pair), PhasePoint{F});
    CHECK(c.real() == doctest::Approx(2.0 * std::cos(F.dot(point_of(*sp, f)))).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(c.imag()) < 1e-14);
  }
  const Measure m = random_discrete(sp, rng, 9, 4);
  Complex mass{};
  for (const auto& [c, z] : m.atoms()) mass += z;
  CHECK(std::abs(fourier_eval(PhaseSpaceFunction(m), PhasePoint{Vector::Zero(2)}) - mass) < 1e-14);
  for (int t = 0; t < 20; ++t) {
    const Vector F = random_vector(rng, 2, 5.0);
    CHECK(std::abs(fourier_eval(PhaseSpaceFunction(m), PhasePoint{F}) - fourier_oracle(m, F)) < 1e-12);
  }
}

TEST_CASE("fourier_eval on densities is the Riemann sum") {
  const auto sp = make_space(PreSymplecticSpace(standard_symplectic(1), v2(0.5, 0.25)));
  const Measure rho = Measure::density(sp, LatticeBox{{{-1, 1}, {0, 1}}}, {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, -1}, {3, 0}});
  const Vector F = v2(0.7, -1.3);
  Complex want{};
  for (std::size_t i = 0; i < 6; ++i) {
    want += rho.density()->samples[i] * rho.cell_volume() * std::polar(1.0, F.dot(rho.point(rho.density()->box.coord(i))));
  }
  CHECK(std::abs(fourier_eval(PhaseSpaceFunction(rho), PhasePoint{F}) - want) < 1e-14);
}

TEST_CASE("deformed_product") {
  const auto sp = standard_space(1);
  Rng rng(5);
  const Measure f = Measure::delta(sp, lc({1, 0}));
  const Measure g = Measure::delta(sp, lc({0, 1}));
  const auto p = deformed_product(0.5, PhaseSpaceFunction(f), PhaseSpaceFunction(g));
  const Vector F = v2(0.3, 0.9);
  const Complex want = std::polar(1.0, -0.25) * std::polar(1.0, F.dot(v2(1, 1)));
  CHECK(std::abs(fourier_eval(p, PhasePoint{F}) - want) < 1e-14);

  const Measure a = random_discrete(sp, rng, 5, 3);
  const Measure b = random_discrete(sp, rng, 5, 3);
  const auto pa = PhaseSpaceFunction(a), pb = PhaseSpaceFunction(b);
  const auto p0 = deformed_product(0.0, pa, pb);
  for (int t = 0; t < 30; ++t) {
    const PhasePoint X{random_vector(rng, 2, 4.0)};
    CHECK(std::abs(fourier_eval(p0, X) - fourier_eval(pa, X) * fourier_eval(pb, X)) < 1e-12 * norm1(a) * norm1(b));
    const auto id = deformed_product(1.7, PhaseSpaceFunction(Measure::delta(sp, lc({0, 0}))), pa);
    CHECK(fourier_eval(id, X) == fourier_eval(pa, X));
  }
}

TEST_CASE("sup_norm_estimate examples") {
  const auto sp = standard_space(1);
  Rng rng(7);
  const Measure pos = random_positive(sp, rng, 6, 3);
  const auto e = sup_norm_estimate(PhaseSpaceFunction(pos));
  CHECK(e.lower_bound == norm1(pos));
  CHECK(e.upper_bound == norm1(pos));

  Measure two(sp);
  two.add_atom(lc({0, 0}), 1.0);
  two.add_atom(lc({1, 0}), 1.0);
  const auto t2 = sup_norm_estimate(PhaseSpaceFunction(two));
  CHECK(t2.lower_bound == 2.0);
  CHECK(t2.at.F.norm() == 0.0);

  Measure diff(sp);
  diff.add_atom(lc({0, 0}), 1.0);
  diff.add_atom(lc({1, 0}), -1.0);
  const auto d = sup_norm_estimate(PhaseSpaceFunction(diff));
  CHECK(d.lower_bound == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(d.lower_bound <= 2.0 + 1e-15);
  // The reported maximizer attains the reported value.
  CHECK(std::abs(fourier_eval(PhaseSpaceFunction(diff), d.at)) == doctest::Approx(d.lower_bound).epsilon(1e-15));
}

TEST_CASE("positive measures: sup, value at zero and total variation agree exactly") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const int dim = 2 * static_cast<int>(rng.integer(1, 2));
    const auto sp = random_space(rng, dim, 2 * static_cast<int>(rng.integer(0, dim / 2)));
    const Measure mu = random_positive(sp, rng, 8, 3);
    const Complex at0 = fourier_eval(PhaseSpaceFunction(mu), PhasePoint{Vector::Zero(dim)});
    CHECK(at0 == Complex(norm1(mu), 0.0));
    SamplingConfig cfg;
    cfg.count = 256;
    CHECK(sup_norm_estimate(PhaseSpaceFunction(mu), cfg).lower_bound == norm1(mu));
  }
}

TEST_CASE("sup_norm_estimate is deterministic and below the trivial bound") {
  const auto sp = standard_space(1);
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const Measure m = random_discrete(sp, rng, 5, 3);
    SamplingConfig cfg;
    cfg.count = 512;
    const auto a = sup_norm_estimate(PhaseSpaceFunction(m), cfg);
    const auto b = sup_norm_estimate(PhaseSpaceFunction(m), cfg);
    CHECK(a.lower_bound == b.lower_bound);
    CHECK(a.lower_bound <= norm1(m) * (1 + 1e-15));
    CHECK(std::abs(fourier_eval(PhaseSpaceFunction(m), a.at)) == a.lower_bound);
  }
}

TEST_CASE("differential examples and finite differences") {
  const auto sp = standard_space(1);
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const LatticeCoord f = random_coord(rng, 2, 4);
    const Vector F = random_vector(rng, 2, 2.0);
    const ComplexVector d = differential(PhaseSpaceFunction(Measure::delta(sp, f)), PhasePoint{F});
    const Vector pf = point_of(*sp, f);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(d[i] - Complex(0.0, 1.0) * std::polar(1.0, F.dot(pf)) * pf[i]) < 1e-14 * (1 + pf.norm()));
    }
  }
  CHECK(differential(PhaseSpaceFunction(Measure::delta(sp, lc({0, 0}), 3.0)), PhasePoint{v2(1, 2)}).norm() == 0.0);

  const double step = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const auto fn = PhaseSpaceFunction(random_discrete(sp, rng, 5, 3));
    const Vector F = random_vector(rng, 2, 2.0);
    const ComplexVector d = differential(fn, PhasePoint{F});
    ComplexVector fd(2);
    for (int i = 0; i < 2; ++i) {
      Vector e = Vector::Zero(2);
      e[i] = step;
      fd[i] = (fourier_eval(fn, PhasePoint{F + e}) - fourier_eval(fn, PhasePoint{F - e})) / (2 * step);
    }
    CHECK((d - fd).norm() <= 1e-6 * d.norm());
  }
}

TEST_CASE("function_bracket") {
  const auto sp = standard_space(1);
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const LatticeCoord f = random_coord(rng, 2, 3), g = random_coord(rng, 2, 3);
    const Vector F = random_vector(rng, 2, 2.0);
    const Vector pf = point_of(*sp, f), pg = point_of(*sp, g);
    const Complex got = function_bracket(PhaseSpaceFunction(Measure::delta(sp, f)), PhaseSpaceFunction(Measure::delta(sp, g)), PhasePoint{F});
    const Complex want = sigma_oracle(sp->sigma_matrix(), pf, pg) * std::polar(1.0, F.dot(pf + pg));
    CHECK(std::abs(got - want) < 1e-12 * (1 + std::abs(want)));
  }
  for (int t = 0; t < 20; ++t) {
    const int dim = 2 * static_cast<int>(rng.integer(1, 2));
    const auto s = random_space(rng, dim, 2 * static_cast<int>(rng.integer(0, dim / 2)));
    const Measure a = random_discrete(s, rng, 5, 3), b = random_discrete(s, rng, 5, 3);
    const PhasePoint F{random_vector(rng, dim, 2.0)};
    const Complex got = function_bracket(PhaseSpaceFunction(a), PhaseSpaceFunction(b), F);
    CHECK(std::abs(got - fourier_eval(PhaseSpaceFunction(poisson_bracket0(a, b)), F)) <= 1e-10);
    CHECK(std::abs(function_bracket(PhaseSpaceFunction(a), PhaseSpaceFunction(a), F)) <= 1e-10);
  }
}

TEST_CASE("project_quotient removes the null directions") {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1.0;
  ComplexVector v(2);
  v << Complex(1, 2), Complex(3, 4);
  const ComplexVector p = project_quotient(v, SeminormSpec(g, 1.0));
  CHECK(p[0] == Complex(1, 2));
  CHECK(std::abs(p[1]) < 1e-15);
  CHECK((project_quotient(v, SeminormSpec::euclidean(2)) - v).norm() == 0.0);
}
