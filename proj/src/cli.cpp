#include "weylkit/cli.hpp"

#include "weylkit/errors.hpp"
#include "weylkit/io.hpp"
#include "weylkit/phase_space.hpp"
#include "weylkit/representation.hpp"
#include "weylkit/states.hpp"
#include "weylkit/verify.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace weylkit::cli {

namespace {

using io::Json;

struct Options {
  std::string mu, nu, space, state, out, at, twist, mode, grid = "log:1e-4:1:25", format = "csv";
  std::string scales = "0.25,0.5,1,2";
  double hbar = 0.0;
  double tol = 1e-6;
  double endpoint_tol = 1e-2;
  double radius = 0.0;
  int n = 1;
  std::size_t samples = 4096;
  std::size_t characters = 0;
  std::string grid_spec;
  std::uint64_t seed = 42;
  bool direct = false;
};

const std::set<std::string> kFileOptions = {"--mu", "--nu", "--space", "--state"};

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(part, &pos);
      if (pos != part.size() || !std::isfinite(v)) throw std::invalid_argument("");
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(field + ": bad number '" + part + "'");
    }
  }
  if (out.empty()) throw ValidationError(field + ": empty list");
  return out;
}

Vector parse_point(const std::string& text, int dim, const std::string& field) {
  const auto xs = parse_list(text, field);
  if (static_cast<int>(xs.size()) != dim) {
    throw ValidationError(field + ": expected " + std::to_string(dim) + " comma-separated values");
  }
  return Eigen::Map<const Vector>(xs.data(), dim);
}

std::string digest_of(const CLI::App& sub) {
  Json inputs = Json::object();
  Json options = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name();
    if (name == "--out" || name == "--help") continue;
    const auto& res = opt->results();
    std::string joined;
    for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? " " : "") + res[i];
    if (kFileOptions.count(name)) {
      inputs[name] = io::read_json_file(joined);
    } else {
      options[name] = joined;
    }
  }
  Json all = {{"command", sub.get_name()}, {"inputs", inputs}, {"options", options}};
  return io::sha256_hex(io::canonical_dump(all));
}

class Output {
 public:
  Output(std::ostream& fallback, const std::string& path) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("--out: cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ostream& fallback_;
  std::ofstream file_;
};

RepConfig rep_config(const io::SpaceBundle& b, const Options& o, const CLI::App& sub) {
  RepConfig cfg = b.rep ? *b.rep : RepConfig{};
  if (sub.count("--grid") > 0) {
    GridSpec g;
    g.half_dim = darboux_decompose(*b.space).half_rank();
    bool has_n = false, has_l = false;
    std::stringstream ss(o.grid_spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
      const auto eq = part.find('=');
      const std::string key = part.substr(0, eq);
      if (eq == std::string::npos || (key != "N" && key != "L")) {
        throw ValidationError("--grid: expected N=<int>,L=<real>, got '" + part + "'");
      }
      const double v = parse_list(part.substr(eq + 1), "--grid")[0];
      if (key == "N") {
        if (!(v >= 2.0) || v != std::floor(v) || v > 1e9) throw ValidationError("--grid: N must be an integer >= 2");
        g.points_per_axis = static_cast<std::size_t>(v);
        has_n = true;
      } else {
        g.half_length = v;
        has_l = true;
      }
    }
    if (!has_n || !has_l) throw ValidationError("--grid: both N and L are required");
    try {
      g.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("--grid: ") + e.what());
    }
    cfg.grid = g;
  }
  if (sub.count("--characters") > 0) {
    if (o.characters == 0) throw ValidationError("--characters: must be >= 1");
    cfg.characters.reset();
    cfg.character_count = o.characters;
  }
  if (sub.count("--seed") > 0) cfg.seed = o.seed;
  return cfg;
}

SamplingConfig sampling_config(const Options& o, const CLI::App& sub) {
  SamplingConfig s;
  s.count = o.samples;
  s.seed = o.seed;
  if (sub.count("--radius") > 0) {
    if (!(o.radius > 0.0)) throw ValidationError("--radius: must be positive");
    s.radius = o.radius;
  }
  if (s.count == 0) throw ValidationError("--samples: must be >= 1");
  return s;
}

Json measure_result(const Measure& m, const io::SpaceBundle& b) { return {{"measure", io::measure_to_json(m, b)}}; }

Json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

std::vector<std::string> subcommands() {
  return {"star",          "bracket", "commutator", "involution", "norm1",      "moment-norm", "fourier-eval", "supnorm",
          "diff",          "rep-norm", "sweep",     "psd-check",  "state-bound", "gauge-twist", "darboux"};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"weylkit: Weyl deformation quantization over pre-symplectic spaces"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  Options o;

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("--out", o.out, "Write output to this file instead of stdout");
    subs[name] = s;
    return s;
  };
  auto mu_opt = [&](CLI::App* s) { s->add_option("--mu,--measure", o.mu, "Measure JSON file")->required(); };
  auto nu_opt = [&](CLI::App* s) { s->add_option("--nu", o.nu, "Second measure JSON file")->required(); };
  auto hbar_opt = [&](CLI::App* s) { s->add_option("--hbar", o.hbar, "Deformation parameter")->required(); };
  auto sampling_opts = [&](CLI::App* s) {
    s->add_option("--samples", o.samples, "Sample count for sup-norm estimates");
    s->add_option("--radius", o.radius, "Sampling radius in phase space");
    s->add_option("--seed", o.seed, "Random seed");
  };
  auto rep_opts = [&](CLI::App* s) {
    s->add_option("--grid", o.grid_spec, "Position grid, N=<points per axis>,L=<half-length>");
    s->add_option("--characters", o.characters, "Characters sampled on ker sigma");
    s->add_option("--tol", o.tol, "Relative tolerance of the norm iteration");
  };

  {
    auto* s = add("star", "Twisted convolution mu *_hbar nu");
    hbar_opt(s), mu_opt(s), nu_opt(s);
  }
  {
    auto* s = add("bracket", "Poisson bracket {mu, nu}_0");
    mu_opt(s), nu_opt(s);
  }
  {
    auto* s = add("commutator", "Scaled commutator (i/hbar)(mu *_hbar nu - nu *_hbar mu)");
    hbar_opt(s), mu_opt(s), nu_opt(s);
  }
  mu_opt(add("involution", "Involution mu*"));
  mu_opt(add("norm1", "Total variation norm"));
  {
    auto* s = add("moment-norm", "Moment norms ||mu||^n for the space semi-norm (Euclidean if absent)");
    mu_opt(s);
    s->add_option("--n", o.n, "Moment order")->required()->check(CLI::Range(0, 64));
  }
  {
    auto* s = add("fourier-eval", "Evaluate mu-hat at a phase-space point");
    mu_opt(s);
    s->add_option("--at", o.at, "Point F, comma separated")->required();
  }
  {
    auto* s = add("supnorm", "Estimate sup |mu-hat|");
    mu_opt(s);
    sampling_opts(s);
  }
  {
    auto* s = add("diff", "Differential of mu-hat at a point");
    mu_opt(s);
    s->add_option("--at", o.at, "Point F, comma separated")->required();
  }
  {
    auto* s = add("rep-norm", "Operator norm of Pi_hbar(mu) in the Schrodinger representation");
    hbar_opt(s), mu_opt(s), rep_opts(s), sampling_opts(s);
  }
  {
    auto* s = add("sweep", "hbar-sweep of a quantization condition");
    s->add_option("--mode", o.mode, "dirac-banach | vonneumann-banach | dirac-op | vonneumann-op | rieffel")
        ->required();
    mu_opt(s);
    s->add_option("--nu", o.nu, "Second measure JSON file (Dirac and von Neumann modes)");
    s->add_option("--hbar-grid", o.grid, "log:lo:hi:count, lin:lo:hi:count or list:a,b,...");
    s->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--endpoint-tol", o.endpoint_tol, "Endpoint tolerance (rieffel)");
    s->add_flag("--direct", o.direct, "Rieffel: representation at each hbar instead of the scaled family");
    rep_opts(s), sampling_opts(s);
  }
  {
    auto* s = add("psd-check", "Positivity of a state's Gram matrix on probe points");
    s->add_option("--space", o.space, "Space JSON file")->required();
    s->add_option("--state", o.state, "State JSON file")->required();
    hbar_opt(s);
    s->add_option("--scales", o.scales, "Probe scales t for {0} and t e_k");
  }
  {
    auto* s = add("state-bound", "Lower bound sqrt(Re <omega, mu* *_hbar mu>)");
    s->add_option("--state", o.state, "State JSON file")->required();
    hbar_opt(s), mu_opt(s);
  }
  {
    auto* s = add("gauge-twist", "Multiply weights by exp(i F.f)");
    mu_opt(s);
    s->add_option("--F", o.twist, "Point F, comma separated")->required();
  }
  add("darboux", "Darboux basis of the space")->add_option("--space", o.space, "Space JSON file")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  try {
    const std::string digest = digest_of(*sub);
    auto load = [](const std::string& path) { return io::parse_measure(io::read_json_file(path)); };
    Json result = Json::object();
    int code = 0;

    if (cmd == "star" || cmd == "bracket" || cmd == "commutator") {
      auto a = load(o.mu);
      auto b = load(o.nu);
      Measure m = cmd == "star"      ? star(o.hbar, a.measure, b.measure)
                  : cmd == "bracket" ? poisson_bracket0(a.measure, b.measure)
                                     : scaled_commutator(o.hbar, a.measure, b.measure);
      result = measure_result(m, a.space);
    } else if (cmd == "involution") {
      auto a = load(o.mu);
      result = measure_result(involution(a.measure), a.space);
    } else if (cmd == "norm1") {
      result["norm1"] = norm1(load(o.mu).measure);
    } else if (cmd == "moment-norm") {
      auto a = load(o.mu);
      const SeminormSpec sn = a.space.seminorm ? *a.space.seminorm : SeminormSpec::euclidean(a.measure.dim());
      const MomentProfile p = moment_norm(a.measure, sn, o.n);
      result = {{"n", p.n}, {"norms", p.norms}, {"total", p.total}, {"c_n", p.c_n}};
    } else if (cmd == "fourier-eval") {
      auto a = load(o.mu);
      const PhasePoint F{parse_point(o.at, a.measure.dim(), "--at")};
      result["value"] = complex_json(fourier_eval(PhaseSpaceFunction(a.measure), F));
    } else if (cmd == "supnorm") {
      auto a = load(o.mu);
      const SupNormEstimate e = sup_norm_estimate(PhaseSpaceFunction(a.measure), sampling_config(o, *sub));
      result = {{"lower_bound", e.lower_bound}, {"upper_bound", e.upper_bound}, {"at", io::vector_to_json(e.at.F)}};
    } else if (cmd == "diff") {
      auto a = load(o.mu);
      const PhasePoint F{parse_point(o.at, a.measure.dim(), "--at")};
      const ComplexVector d = differential(PhaseSpaceFunction(a.measure), F);
      Json arr = Json::array();
      for (Eigen::Index i = 0; i < d.size(); ++i) arr.push_back(io::complex_to_json(d[i]));
      result["differential"] = std::move(arr);
    } else if (cmd == "rep-norm") {
      auto a = load(o.mu);
      NormOptions opts;
      opts.tol = o.tol;
      opts.seed = o.seed;
      opts.sampling = sampling_config(o, *sub);
      if (!(o.tol > 0.0)) throw ValidationError("--tol: must be positive");
      const RepOperator op = build_operator(a.space.space, o.hbar, rep_config(a.space, o, *sub), a.measure);
      const NormResult r = operator_norm(op, opts);
      result = {{"norm", r.norm},           {"iterations", r.iterations}, {"upper_bound", r.upper_bound},
                {"converged", r.converged}, {"character", r.character},   {"norm1", norm1(a.measure)}};
      if (!r.converged) code = 1;
    } else if (cmd == "sweep") {
      auto a = load(o.mu);
      SweepSpec spec{parse_hbar_grid(o.grid), a.measure};
      spec.mode = parse_sweep_mode(o.mode);
      if (!o.nu.empty()) spec.nu = load(o.nu).measure;
      spec.rep = rep_config(a.space, o, *sub);
      spec.scaler = a.space.scaler;
      spec.use_family = !o.direct;
      spec.seminorm = a.space.seminorm;
      spec.tol = o.tol;
      spec.endpoint_tol = o.endpoint_tol;
      spec.sampling = sampling_config(o, *sub);
      spec.seed = o.seed;
      const SweepReport report = run_sweep(spec);
      for (const auto& row : report.rows) {
        if (row.flag == "unconverged") code = 1;
      }
      Output dest(out, o.out);
      if (o.format == "csv") {
        dest.stream() << "# version 1 command sweep inputs_digest " << digest << '\n';
        io::write_csv(report, dest.stream());
      } else {
        Json j = io::report_to_json(report);
        j["version"] = 1;
        j["command"] = cmd;
        j["inputs_digest"] = digest;
        dest.stream() << io::canonical_dump(j) << '\n';
      }
      if (code != 0) err << "error: norm iteration did not converge on some rows\n";
      return code;
    } else if (cmd == "psd-check") {
      const io::SpaceBundle b = io::parse_space(io::read_json_file(o.space));
      const QuantumState st = io::parse_state(io::read_json_file(o.state));
      if (st.dim() != b.space->dim()) throw ValidationError("--state: dimension does not match the space");
      const auto probes = witness_probes(b.space->dim(), parse_list(o.scales, "--scales"));
      const PsdResult r = psd_check(*b.space, st, o.hbar, probes);
      result = {{"ok", r.ok},
                {"min_eig", r.min_eig},
                {"probes", probes.size()},
                {"bound_holds", gaussian_bound_holds(*b.space, st, o.hbar)}};
    } else if (cmd == "state-bound") {
      auto a = load(o.mu);
      const QuantumState st = io::parse_state(io::read_json_file(o.state));
      if (st.dim() != a.measure.dim()) throw ValidationError("--state: dimension does not match the measure");
      const StateBound r = state_norm_lower_bound(st, o.hbar, a.measure);
      result = {{"value", r.value}, {"admissible", r.admissible}};
    } else if (cmd == "gauge-twist") {
      auto a = load(o.mu);
      const PhasePoint F{parse_point(o.twist, a.measure.dim(), "--F")};
      result = measure_result(gauge_twist(a.measure, F), a.space);
    } else if (cmd == "darboux") {
      const io::SpaceBundle b = io::parse_space(io::read_json_file(o.space));
      const DarbouxDecomposition d = darboux_decompose(*b.space);
      result = {{"basis", io::matrix_to_json(d.basis)},
                {"inverse", io::matrix_to_json(d.inverse)},
                {"rank_symplectic", d.rank_symplectic},
                {"kernel_dim", d.kernel_dim}};
    }

    result["version"] = 1;
    result["command"] = cmd;
    result["inputs_digest"] = digest;
    Output dest(out, o.out);
    dest.stream() << io::canonical_dump(result) << '\n';
    if (code != 0) err << "error: norm iteration did not converge\n";
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace weylkit::cli
