#include "weylkit/verify.hpp"

#include "weylkit/errors.hpp"
#include "weylkit/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace weylkit {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  std::string tmp(s);
  try {
    std::size_t pos = 0;
    double v = std::stod(tmp, &pos);
    if (pos != tmp.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("hbar-grid: bad " + std::string(what) + " '" + tmp + "'");
  }
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Verdict make_verdict(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? VerdictStatus::pass : VerdictStatus::fail, std::move(detail)};
}

void check_spec(const SweepSpec& spec, bool needs_nu) {
  if (spec.hbar_grid.empty()) throw ValidationError("hbar_grid: must be nonempty");
  if (!std::is_sorted(spec.hbar_grid.begin(), spec.hbar_grid.end())) {
    throw ValidationError("hbar_grid: must be sorted");
  }
  for (double h : spec.hbar_grid) {
    if (!std::isfinite(h)) throw ValidationError("hbar_grid: values must be finite");
  }
  if (needs_nu) {
    if (!spec.nu) throw ValidationError("nu: required for this sweep mode");
    if (!(spec.nu->space() == spec.mu.space())) throw ValidationError("nu: space differs from mu");
  }
  if (!(spec.tol > 0.0)) throw ValidationError("tol: must be positive");
}

NormOptions norm_options(const SweepSpec& spec) {
  NormOptions o;
  o.tol = spec.tol;
  o.seed = spec.seed;
  o.sampling = spec.sampling;
  return o;
}

bool in_range(double h, std::pair<double, double> r) { return h >= r.first && h <= r.second; }

// Fit verdict shared by the rate sweeps. All-zero data has no slope to fit.
void attach_fit(SweepReport& report, std::pair<double, double> range, std::optional<std::pair<double, double>> target) {
  bool all_zero = true;
  for (const auto& r : report.rows) {
    if (r.flag.empty() && in_range(r.hbar, range) && r.value != 0.0) all_zero = false;
  }
  if (all_zero) {
    if (target) report.verdicts.push_back({"slope", VerdictStatus::not_applicable, "identically zero"});
    return;
  }
  try {
    report.fit = slope_fit(report.rows, range);
  } catch (const ValidationError& e) {
    if (target) report.verdicts.push_back(make_verdict("slope", false, e.what()));
    return;
  }
  if (target) {
    const double err = std::abs(report.fit->slope - target->first);
    report.verdicts.push_back(make_verdict("slope", err <= target->second,
                                           "slope " + fmt(report.fit->slope) + ", expected " +
                                               fmt(target->first) + " +- " + fmt(target->second)));
  }
}

// Values must not increase as hbar decreases through the fit range.
Verdict monotone_verdict(const SweepReport& report, std::pair<double, double> range) {
  const SweepRow* prev = nullptr;
  for (const auto& r : report.rows) {
    if (!r.flag.empty() || !in_range(r.hbar, range)) continue;
    if (prev && prev->value > r.value * (1.0 + 1e-9) + std::numeric_limits<double>::min()) {
      return make_verdict("monotone", false, "increase towards 0 at hbar " + fmt(prev->hbar));
    }
    prev = &r;
  }
  return make_verdict("monotone", true, "");
}

const SweepRow* smallest_positive(const SweepReport& report) {
  for (const auto& r : report.rows) {
    if (r.flag.empty() && r.hbar > 0.0) return &r;
  }
  return nullptr;
}

SeminormSpec seminorm_for(const SweepSpec& spec) {
  return spec.seminorm ? *spec.seminorm : SeminormSpec::euclidean(spec.mu.dim());
}

// sum over atom pairs of |z| |w| |sigma(f, g)|^power
double pair_sum(const Measure& mu, const Measure& nu, int power) {
  const PointMeasure a = PointMeasure::from_measure(mu);
  const PointMeasure b = PointMeasure::from_measure(nu);
  double total = 0.0;
  for (const auto& x : a.atoms()) {
    for (const auto& y : b.atoms()) {
      total += std::abs(x.weight) * std::abs(y.weight) *
               std::pow(std::abs(sigma_eval(mu.space(), x.point, y.point)), power);
    }
  }
  return total;
}

bool is_positive(const Measure& mu) {
  for (const auto& [c, z] : mu.atoms()) {
    if (z.imag() != 0.0 || z.real() < 0.0) return false;
  }
  if (const auto& d = mu.density()) {
    for (const auto& z : d->samples) {
      if (z.imag() != 0.0 || z.real() < 0.0) return false;
    }
  }
  return true;
}

using DifferenceFn = Measure (*)(double, const Measure&, const Measure&);

Measure dirac_difference(double hbar, const Measure& mu, const Measure& nu) {
  return subtract(scaled_commutator(hbar, mu, nu), poisson_bracket0(mu, nu));
}

Measure vonneumann_difference(double hbar, const Measure& mu, const Measure& nu) {
  return subtract(star(hbar, mu, nu), star(0.0, mu, nu));
}

SweepReport operator_sweep(const SweepSpec& spec, SweepMode mode, DifferenceFn diff, double expected_slope) {
  check_spec(spec, true);
  SweepReport report;
  report.mode = mode;
  report.rows.resize(spec.hbar_grid.size());
  const NormOptions opts = norm_options(spec);
  parallel_for(spec.hbar_grid.size(), [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.hbar = spec.hbar_grid[i];
    if (row.hbar == 0.0) {
      row.flag = "skipped";
      return;
    }
    const Measure d = diff(row.hbar, spec.mu, *spec.nu);
    const double banach = norm1(d);
    row.aux.emplace_back("banach", banach);
    try {
      const RepPtr rep = SchrodingerRep::make(spec.mu.space_ptr(), row.hbar, spec.rep);
      const NormResult nr = operator_norm(build_operator(rep, d), opts);
      row.value = nr.norm;
      row.aux.emplace_back("iterations", nr.iterations);
      if (!nr.converged) row.flag = "unconverged";
    } catch (const AliasingError&) {
      row.flag = "aliased";
    }
  });

  bool contraction = true;
  std::string where;
  for (const auto& r : report.rows) {
    if (r.flag == "skipped" || r.flag == "aliased") continue;
    if (r.value > r.aux.front().second * (1.0 + spec.tol)) {
      contraction = false;
      where = "row hbar " + fmt(r.hbar);
      break;
    }
  }
  report.verdicts.push_back(make_verdict("contraction", contraction, where));
  attach_fit(report, spec.fit_range, std::nullopt);
  if (report.fit) {
    // A positive rate in hbar means the values vanish as hbar -> 0; the
    // expected rate is reported alongside.
    report.verdicts.push_back(make_verdict("vanishing", report.fit->slope > 0.5,
                                           "slope " + fmt(report.fit->slope) + " (Banach rate " +
                                               fmt(expected_slope) + ")"));
  } else {
    bool all_zero = true;
    for (const auto& r : report.rows) {
      if (r.flag.empty() && r.value != 0.0) all_zero = false;
    }
    report.verdicts.push_back(make_verdict("vanishing", all_zero, all_zero ? "identically zero" : "no fit"));
  }
  bool unconverged = false;
  for (const auto& r : report.rows) unconverged = unconverged || r.flag == "unconverged";
  if (unconverged) report.verdicts.push_back(make_verdict("converged", false, "norm iteration did not converge"));
  return report;
}

}  // namespace

std::string_view to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::dirac_banach: return "dirac-banach";
    case SweepMode::vonneumann_banach: return "vonneumann-banach";
    case SweepMode::dirac_operator: return "dirac-op";
    case SweepMode::vonneumann_operator: return "vonneumann-op";
    case SweepMode::rieffel: return "rieffel";
  }
  return "?";
}

SweepMode parse_sweep_mode(std::string_view text) {
  for (auto m : {SweepMode::dirac_banach, SweepMode::vonneumann_banach, SweepMode::dirac_operator,
                 SweepMode::vonneumann_operator, SweepMode::rieffel}) {
    if (to_string(m) == text) return m;
  }
  throw ValidationError("mode: unknown sweep mode '" + std::string(text) + "'");
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::not_applicable: return "n/a";
  }
  return "?";
}

bool SweepReport::passed() const {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const Verdict& v) { return v.status == VerdictStatus::fail; });
}

const Verdict* SweepReport::verdict(std::string_view name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool SdqReport::passed() const {
  return dirac_banach.passed() && vonneumann_banach.passed() && dirac_operator.passed() &&
         vonneumann_operator.passed() && rieffel.passed() && injective && banach_rieffel;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw ValidationError("hbar-grid: need 0 < lo <= hi and count >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> parse_hbar_grid(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ValidationError("hbar-grid: expected kind:..., e.g. log:1e-4:1:25");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  std::vector<double> out;
  if (kind == "list") {
    for (auto part : split_on(rest, ',')) out.push_back(parse_double(part, "value"));
  } else if (kind == "log" || kind == "lin") {
    auto parts = split_on(rest, ':');
    if (parts.size() != 3) throw ValidationError("hbar-grid: expected " + std::string(kind) + ":lo:hi:count");
    const double lo = parse_double(parts[0], "lower bound");
    const double hi = parse_double(parts[1], "upper bound");
    std::size_t count = 0;
    auto [p, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (ec != std::errc() || p != parts[2].data() + parts[2].size() || count == 0) {
      throw ValidationError("hbar-grid: bad count '" + std::string(parts[2]) + "'");
    }
    if (kind == "log") {
      out = log_grid(lo, hi, count);
    } else {
      if (hi < lo) throw ValidationError("hbar-grid: need lo <= hi");
      for (std::size_t i = 0; i < count; ++i) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
      }
    }
  } else {
    throw ValidationError("hbar-grid: unknown kind '" + std::string(kind) + "'");
  }
  std::sort(out.begin(), out.end());
  return out;
}

SlopeFit slope_fit(const std::vector<SweepRow>& rows, std::pair<double, double> decade_range) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (!r.flag.empty() || !in_range(r.hbar, decade_range) || !(r.hbar > 0.0)) continue;
    if (!(r.value > 0.0) || !std::isfinite(r.value)) continue;
    xs.push_back(std::log(r.hbar));
    ys.push_back(std::log(r.value));
  }
  const std::size_t n = xs.size();
  if (n < 5) throw ValidationError("slope_fit: fewer than 5 usable rows (" + std::to_string(n) + ")");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("slope_fit: rows need distinct hbar values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.used = n;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double res = ys[i] - my - fit.slope * (xs[i] - mx);
    ssr += res * res;
  }
  fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

SweepReport dirac_banach_sweep(const SweepSpec& spec) {
  check_spec(spec, true);
  const Measure& mu = spec.mu;
  const Measure& nu = *spec.nu;
  first_moment_check(mu);
  first_moment_check(nu);
  SweepReport report;
  report.mode = SweepMode::dirac_banach;
  report.rows.resize(spec.hbar_grid.size());
  const double bracket = norm1(poisson_bracket0(mu, nu));
  parallel_for(spec.hbar_grid.size(), [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.hbar = spec.hbar_grid[i];
    row.aux.emplace_back("bracket_norm1", bracket);
    if (row.hbar == 0.0) {
      row.flag = "skipped";
      return;
    }
    row.value = norm1(dirac_difference(row.hbar, mu, nu));
  });

  attach_fit(report, spec.fit_range, std::make_pair(2.0, 0.15));
  report.verdicts.push_back(monotone_verdict(report, spec.fit_range));
  const SeminormSpec sn = seminorm_for(spec);
  const double threshold = 1e-8 * moment_norm(mu, sn, 1).total * moment_norm(nu, sn, 1).total;
  if (const SweepRow* r = smallest_positive(report)) {
    report.verdicts.push_back(make_verdict("limit", r->value < threshold || r->value == 0.0,
                                           "value " + fmt(r->value) + " at hbar " + fmt(r->hbar) +
                                               ", threshold " + fmt(threshold)));
  }
  // Taylor remainder of the sine kernel: |s - (2/h) sin(h s / 2)| <= h^2 |s|^3 / 24.
  const double cubic = pair_sum(mu, nu, 3);
  bool rate_ok = true;
  for (const auto& r : report.rows) {
    if (!r.flag.empty()) continue;
    if (r.value > r.hbar * r.hbar * cubic / 24.0 * (1.0 + 1e-9) + 1e-15 * bracket) rate_ok = false;
  }
  report.verdicts.push_back(make_verdict("rate_bound", rate_ok, "hbar^2/24 sum |z||w||sigma|^3"));
  return report;
}

SweepReport vonneumann_banach_sweep(const SweepSpec& spec) {
  check_spec(spec, true);
  const Measure& mu = spec.mu;
  const Measure& nu = *spec.nu;
  SweepReport report;
  report.mode = SweepMode::vonneumann_banach;
  report.rows.resize(spec.hbar_grid.size());
  parallel_for(spec.hbar_grid.size(), [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.hbar = spec.hbar_grid[i];
    row.value = norm1(vonneumann_difference(row.hbar, mu, nu));
  });

  attach_fit(report, spec.fit_range, std::make_pair(1.0, 0.15));
  // |e^{-i h s/2} - 1| <= |h s| / 2 per pair.
  const double linear = pair_sum(mu, nu, 1);
  const double scale = norm1(mu) * norm1(nu);
  bool limit_ok = true;
  for (const auto& r : report.rows) {
    if (r.value > 0.5 * std::abs(r.hbar) * linear * (1.0 + 1e-9) + 1e-15 * scale) limit_ok = false;
  }
  report.verdicts.push_back(make_verdict("limit", limit_ok, "value <= |hbar|/2 sum |z||w||sigma|"));
  return report;
}

SweepReport dirac_operator_sweep(const SweepSpec& spec) {
  return operator_sweep(spec, SweepMode::dirac_operator, &dirac_difference, 2.0);
}

SweepReport vonneumann_operator_sweep(const SweepSpec& spec) {
  return operator_sweep(spec, SweepMode::vonneumann_operator, &vonneumann_difference, 1.0);
}

SweepReport rieffel_sweep(const SweepSpec& spec) {
  check_spec(spec, false);
  const Measure& mu = spec.mu;
  const double mass = norm1(mu);
  const HbarScaler scaler = spec.scaler ? *spec.scaler : HbarScaler::sqrt_scaling();
  const NormOptions opts = norm_options(spec);
  RepPtr base;
  if (spec.use_family) base = SchrodingerRep::make(mu.space_ptr(), 1.0, spec.rep);

  SweepReport report;
  report.mode = SweepMode::rieffel;
  report.rows.resize(spec.hbar_grid.size());
  parallel_for(spec.hbar_grid.size(), [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.hbar = spec.hbar_grid[i];
    row.aux.emplace_back("norm1", mass);
    if (row.hbar == 0.0) {
      row.value = classical_norm(mu, spec.sampling);
      row.flag = "classical";
      return;
    }
    try {
      NormResult nr;
      if (spec.use_family) {
        nr = family_norm(base, scaler, row.hbar, mu, opts);
      } else {
        nr = operator_norm(build_operator(SchrodingerRep::make(mu.space_ptr(), row.hbar, spec.rep), mu), opts);
      }
      row.value = nr.norm;
      row.aux.emplace_back("iterations", nr.iterations);
      if (!nr.converged) row.flag = "unconverged";
    } catch (const AliasingError&) {
      row.flag = "aliased";
    }
  });

  // Quantum rows usable for the continuity proxies, in grid order.
  std::vector<const SweepRow*> q;
  for (const auto& r : report.rows) {
    if (r.flag.empty()) q.push_back(&r);
  }
  const double noise = 10.0 * spec.tol * mass;
  auto seg_slope = [&](std::size_t a, std::size_t b) {
    return std::abs(q[b]->value - q[a]->value) / (q[b]->hbar - q[a]->hbar);
  };
  bool lsc = true, usc = true;
  double modulus = 0.0;
  std::string lsc_detail, usc_detail;
  for (std::size_t i = 1; i + 1 < q.size(); ++i) {
    // Modulus from the segments just outside the triple, so that a jump at
    // the middle point does not enlarge its own tolerance.
    double c = 0.0;
    if (i >= 2) c = std::max(c, seg_slope(i - 2, i - 1));
    if (i + 2 < q.size()) c = std::max(c, seg_slope(i + 1, i + 2));
    modulus = std::max(modulus, c);
    const double step = std::max(q[i]->hbar - q[i - 1]->hbar, q[i + 1]->hbar - q[i]->hbar);
    const double slack = c * step + noise;
    const double lo = std::min(q[i - 1]->value, q[i + 1]->value);
    const double hi = std::max(q[i - 1]->value, q[i + 1]->value);
    if (lsc && q[i]->value > lo + slack) {
      lsc = false;
      lsc_detail = "jump up at hbar " + fmt(q[i]->hbar);
    }
    if (usc && q[i]->value < hi - slack) {
      usc = false;
      usc_detail = "jump down at hbar " + fmt(q[i]->hbar);
    }
  }
  if (q.size() >= 3) {
    report.verdicts.push_back(make_verdict("lower_semicontinuity", lsc, lsc_detail));
    report.verdicts.push_back(make_verdict("continuity", lsc && usc,
                                           (lsc && usc) ? "modulus " + fmt(modulus) : lsc_detail + usc_detail));
  } else {
    report.verdicts.push_back({"lower_semicontinuity", VerdictStatus::not_applicable, "fewer than 3 rows"});
  }

  const SweepRow* first = nullptr;
  for (const auto* r : q) {
    if (r->hbar > 0.0) {
      first = r;
      break;
    }
  }
  if (is_positive(mu) && first) {
    const double err = std::abs(first->value - mass);
    report.verdicts.push_back(make_verdict("endpoint", err <= spec.endpoint_tol,
                                           "|norm - ||mu||_1| = " + fmt(err) + " at hbar " + fmt(first->hbar)));
  } else {
    report.verdicts.push_back({"endpoint", VerdictStatus::not_applicable, "mu not positive"});
  }

  bool bounded = true;
  for (const auto& r : report.rows) {
    if (r.flag == "aliased") continue;
    if (r.value > mass * (1.0 + spec.tol)) bounded = false;
  }
  report.verdicts.push_back(make_verdict("bounded", bounded, "norm <= ||mu||_1"));
  bool unconverged = false;
  for (const auto& r : report.rows) unconverged = unconverged || r.flag == "unconverged";
  if (unconverged) report.verdicts.push_back(make_verdict("converged", false, "norm iteration did not converge"));
  return report;
}

SweepReport run_sweep(const SweepSpec& spec) {
  switch (spec.mode) {
    case SweepMode::dirac_banach: return dirac_banach_sweep(spec);
    case SweepMode::vonneumann_banach: return vonneumann_banach_sweep(spec);
    case SweepMode::dirac_operator: return dirac_operator_sweep(spec);
    case SweepMode::vonneumann_operator: return vonneumann_operator_sweep(spec);
    case SweepMode::rieffel: return rieffel_sweep(spec);
  }
  throw ValidationError("mode: unknown");
}

SdqReport weyl_algebra_sdq_check(const SweepSpec& spec) {
  check_spec(spec, true);
  if (!spec.mu.is_discrete() || !spec.nu->is_discrete()) {
    throw ValidationError("mu, nu: must be discrete for the Weyl algebra check");
  }
  SdqReport out;
  out.dirac_banach = dirac_banach_sweep(spec);
  out.vonneumann_banach = vonneumann_banach_sweep(spec);
  out.dirac_operator = dirac_operator_sweep(spec);
  out.vonneumann_operator = vonneumann_operator_sweep(spec);
  out.rieffel = rieffel_sweep(spec);

  const double ref = norm1(spec.mu);
  out.banach_rieffel = true;
  for (double h : spec.hbar_grid) {
    // ||mu *_hbar delta(0)||_1 at each grid point.
    const Measure unit = Measure::delta(spec.mu.space_ptr(), LatticeCoord(static_cast<std::size_t>(spec.mu.dim()), 0));
    if (norm1(star(h, spec.mu, unit)) != ref) out.banach_rieffel = false;
  }

  double h = 1.0;
  for (double x : spec.hbar_grid) {
    if (x != 0.0) {
      h = x;
      break;
    }
  }
  out.injective = true;
  try {
    const RepPtr rep = SchrodingerRep::make(spec.mu.space_ptr(), h, spec.rep);
    for (const Measure* m : {&spec.mu, &*spec.nu}) {
      const RepOperator op = build_operator(rep, *m);
      if (op.terms().size() != m->atoms().size()) out.injective = false;
      const auto& t = op.terms();
      for (std::size_t i = 0; i < t.size() && out.injective; ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
          const double gap = (t[i].u - t[j].u).cwiseAbs().sum() + (t[i].v - t[j].v).cwiseAbs().sum() +
                             (t[i].k - t[j].k).cwiseAbs().sum();
          if (!(gap > 1e-12)) {
            out.injective = false;
            break;
          }
        }
      }
    }
  } catch (const AliasingError&) {
    out.injective = false;
  }
  return out;
}

}  // namespace weylkit
