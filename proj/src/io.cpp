#include "weylkit/io.hpp"

#include "weylkit/errors.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace weylkit::io {

namespace {

std::string path_of(std::string_view prefix, std::string_view field) {
  return prefix.empty() ? std::string(field) : std::string(prefix) + "." + std::string(field);
}

const Json& require(const Json& j, std::string_view prefix, const char* key) {
  if (!j.is_object()) throw ValidationError(std::string(prefix) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path_of(prefix, key) + ": missing");
  return *it;
}

double get_double(const Json& j, std::string_view field) {
  if (!j.is_number()) throw ValidationError(std::string(field) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(std::string(field) + ": must be finite");
  return v;
}

std::int64_t get_int(const Json& j, std::string_view field) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  }
  throw ValidationError(std::string(field) + ": expected an integer");
}

void append_canonical(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        append_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        append_canonical(e, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else if (v == 0.0) {
        out += '0';
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
      }
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Matrix json_to_matrix(const Json& j, std::string_view field) {
  if (!j.is_array() || j.empty()) throw ValidationError(std::string(field) + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ValidationError(std::string(field) + ": expected rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(std::string(field) + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = get_double(row[static_cast<std::size_t>(c)], field);
  }
  return m;
}

Vector json_to_vector(const Json& j, std::string_view field) {
  if (!j.is_array()) throw ValidationError(std::string(field) + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = get_double(j[i], field);
  return v;
}

SpaceBundle parse_space(const Json& j) {
  const std::string pre = "space";
  if (!j.is_object()) throw ValidationError("space: expected an object");
  const std::int64_t dim = get_int(require(j, pre, "dim"), "space.dim");
  if (dim < 1 || dim > 64) throw ValidationError("space.dim: must be between 1 and 64");
  Matrix sigma = json_to_matrix(require(j, pre, "sigma"), "space.sigma");
  if (sigma.rows() != dim || sigma.cols() != dim) throw ValidationError("space.sigma: must be dim x dim");
  Vector step = json_to_vector(require(j, pre, "lattice_step"), "space.lattice_step");
  if (step.size() != dim) throw ValidationError("space.lattice_step: must have dim entries");

  SpaceBundle b;
  b.space = make_space(PreSymplecticSpace(std::move(sigma), std::move(step)));

  if (auto it = j.find("seminorm"); it != j.end()) {
    Matrix gram = json_to_matrix(require(*it, "space.seminorm", "gram"), "space.seminorm.gram");
    if (gram.rows() != dim || gram.cols() != dim) throw ValidationError("space.seminorm.gram: must be dim x dim");
    b.seminorm = SeminormSpec(std::move(gram), get_double(require(*it, "space.seminorm", "c"), "space.seminorm.c"));
  }

  if (auto it = j.find("scaler"); it != j.end()) {
    const Json& kind = require(*it, "space.scaler", "kind");
    if (!kind.is_string()) throw ValidationError("space.scaler.kind: expected a string");
    if (kind == "sqrt") {
      b.scaler = HbarScaler::sqrt_scaling();
    } else if (kind == "split") {
      Matrix conj = json_to_matrix(require(*it, "space.scaler", "conjugation"), "space.scaler.conjugation");
      if (conj.rows() != dim || conj.cols() != dim) {
        throw ValidationError("space.scaler.conjugation: must be dim x dim");
      }
      const double p = get_double(require(*it, "space.scaler", "theta_plus_exponent"),
                                  "space.scaler.theta_plus_exponent");
      b.scaler = HbarScaler::split_scaling(*b.space, std::move(conj), p);
    } else {
      throw ValidationError("space.scaler.kind: expected sqrt or split");
    }
  }

  if (auto it = j.find("representation"); it != j.end()) {
    const Json& r = *it;
    if (!r.is_object()) throw ValidationError("space.representation: expected an object");
    RepConfig cfg;
    const bool has_n = r.contains("N");
    const bool has_l = r.contains("L");
    if (has_n != has_l) throw ValidationError("space.representation: N and L go together");
    if (has_n) {
      GridSpec g;
      g.half_dim = darboux_decompose(*b.space).half_rank();
      const std::int64_t n = get_int(r["N"], "space.representation.N");
      if (n < 2) throw ValidationError("space.representation.N: must be a power of two >= 2");
      g.points_per_axis = static_cast<std::size_t>(n);
      g.half_length = get_double(r["L"], "space.representation.L");
      try {
        g.validate();
      } catch (const ValidationError& e) {
        throw ValidationError(std::string("space.representation: ") + e.what());
      }
      cfg.grid = g;
    }
    if (auto c = r.find("characters"); c != r.end()) {
      if (c->is_array()) {
        std::vector<Vector> chars;
        for (const auto& e : *c) chars.push_back(json_to_vector(e, "space.representation.characters"));
        cfg.characters = std::move(chars);
      } else {
        const std::int64_t count = get_int(*c, "space.representation.characters");
        if (count < 1) throw ValidationError("space.representation.characters: must be >= 1");
        cfg.character_count = static_cast<std::size_t>(count);
      }
    }
    if (auto s = r.find("seed"); s != r.end()) {
      const std::int64_t seed = get_int(*s, "space.representation.seed");
      if (seed < 0) throw ValidationError("space.representation.seed: must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(seed);
    }
    b.rep = std::move(cfg);
  }
  return b;
}

Json space_to_json(const SpaceBundle& b) {
  Json j;
  j["dim"] = b.space->dim();
  j["sigma"] = matrix_to_json(b.space->sigma_matrix());
  j["lattice_step"] = vector_to_json(b.space->lattice_step());
  if (b.seminorm) {
    j["seminorm"] = {{"gram", matrix_to_json(b.seminorm->gram())}, {"c", b.seminorm->compat_c()}};
  }
  if (b.scaler) {
    if (b.scaler->kind() == ScalerKind::sqrt_scaling) {
      j["scaler"] = {{"kind", "sqrt"}};
    } else {
      if (!b.scaler->theta_plus_exponent()) {
        throw ValidationError("scaler: only exponent-form split scalers can be written");
      }
      j["scaler"] = {{"kind", "split"},
                     {"conjugation", matrix_to_json(*b.scaler->conjugation())},
                     {"theta_plus_exponent", *b.scaler->theta_plus_exponent()}};
    }
  }
  if (b.rep) {
    Json r = Json::object();
    if (b.rep->grid) {
      r["N"] = b.rep->grid->points_per_axis;
      r["L"] = b.rep->grid->half_length;
    }
    if (b.rep->characters) {
      Json cs = Json::array();
      for (const auto& c : *b.rep->characters) cs.push_back(vector_to_json(c));
      r["characters"] = std::move(cs);
    } else {
      r["characters"] = b.rep->character_count;
    }
    r["seed"] = b.rep->seed;
    j["representation"] = std::move(r);
  }
  return j;
}

MeasureFile parse_measure(const Json& j) {
  if (!j.is_object()) throw ValidationError("measure: expected an object");
  SpaceBundle bundle = parse_space(require(j, "measure", "space"));
  const SpacePtr space = bundle.space;
  const int dim = space->dim();
  Measure mu(space);
  if (auto it = j.find("discrete"); it != j.end()) {
    if (!it->is_array()) throw ValidationError("discrete: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string pre = "discrete[" + std::to_string(i) + "]";
      const Json& a = (*it)[i];
      const Json& coord = require(a, pre, "coord");
      if (!coord.is_array() || static_cast<int>(coord.size()) != dim) {
        throw ValidationError(pre + ".coord: must have dim integer entries");
      }
      LatticeCoord c;
      for (const auto& e : coord) c.push_back(get_int(e, pre + ".coord"));
      const double re = a.contains("re") ? get_double(a["re"], pre + ".re") : 0.0;
      const double im = a.contains("im") ? get_double(a["im"], pre + ".im") : 0.0;
      mu.add_atom(c, {re, im});
    }
  }
  if (auto it = j.find("density"); it != j.end()) {
    const Json& box = require(*it, "density", "box");
    if (!box.is_array() || static_cast<int>(box.size()) != dim) {
      throw ValidationError("density.box: must have one [lo, hi] pair per dimension");
    }
    LatticeBox lb;
    for (const auto& r : box) {
      if (!r.is_array() || r.size() != 2) throw ValidationError("density.box: entries must be [lo, hi]");
      const std::int64_t lo = get_int(r[0], "density.box");
      const std::int64_t hi = get_int(r[1], "density.box");
      if (hi < lo) throw ValidationError("density.box: need lo <= hi");
      if (hi - lo > 1 << 20) throw ValidationError("density.box: range too large");
      lb.ranges.emplace_back(lo, hi);
    }
    const Json& samples = require(*it, "density", "samples");
    if (!samples.is_array() || samples.size() != lb.cell_count()) {
      throw ValidationError("density.samples: expected " + std::to_string(lb.cell_count()) + " [re, im] pairs");
    }
    std::vector<Complex> s;
    s.reserve(samples.size());
    for (const auto& e : samples) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("density.samples: entries must be [re, im]");
      s.emplace_back(get_double(e[0], "density.samples"), get_double(e[1], "density.samples"));
    }
    mu.add_density(GridDensity{std::move(lb), std::move(s)});
  }
  return MeasureFile{std::move(bundle), std::move(mu)};
}

Json measure_to_json(const Measure& mu, const SpaceBundle& space) {
  Json j;
  j["space"] = space_to_json(space);
  Json atoms = Json::array();
  for (const auto& [c, z] : mu.atoms()) {
    atoms.push_back({{"coord", c}, {"re", z.real()}, {"im", z.imag()}});
  }
  j["discrete"] = std::move(atoms);
  if (const auto& d = mu.density()) {
    Json box = Json::array();
    for (const auto& [lo, hi] : d->box.ranges) box.push_back(Json::array({lo, hi}));
    Json samples = Json::array();
    for (const auto& z : d->samples) samples.push_back(complex_to_json(z));
    j["density"] = {{"box", std::move(box)}, {"samples", std::move(samples)}};
  }
  return j;
}

QuantumState parse_state(const Json& j) {
  const Json& kind = require(j, "state", "kind");
  if (kind == "gaussian") return QuantumState::gaussian(json_to_matrix(require(j, "state", "s"), "state.s"));
  if (kind == "character") return QuantumState::character(json_to_vector(require(j, "state", "F"), "state.F"));
  throw ValidationError("state.kind: expected gaussian or character");
}

Json state_to_json(const QuantumState& s) {
  if (const auto* g = std::get_if<QuantumState::Gaussian>(&s.kind())) {
    return {{"kind", "gaussian"}, {"s", matrix_to_json(g->s)}};
  }
  return {{"kind", "character"}, {"F", vector_to_json(std::get<QuantumState::Character>(s.kind()).F)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

std::string canonical_dump(const Json& j) {
  std::string out;
  append_canonical(j, out);
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("sha256: digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

Json report_to_json(const SweepReport& r) {
  Json j;
  j["mode"] = std::string(to_string(r.mode));
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json aux = Json::object();
    for (const auto& [k, v] : row.aux) aux[k] = v;
    rows.push_back({{"hbar", row.hbar}, {"value", row.value}, {"flag", row.flag}, {"aux", std::move(aux)}});
  }
  j["rows"] = std::move(rows);
  if (r.fit) {
    j["fit"] = {{"slope", r.fit->slope}, {"stderr", r.fit->std_error}, {"used", r.fit->used}};
  } else {
    j["fit"] = nullptr;
  }
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"name", v.name}, {"status", std::string(to_string(v.status))}, {"detail", v.detail}});
  }
  j["verdicts"] = std::move(verdicts);
  j["passed"] = r.passed();
  return j;
}

void write_csv(const SweepReport& r, std::ostream& os) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto clean = [](std::string s) {
    for (char& c : s) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
  };
  os << "hbar,value,flag\n";
  for (const auto& row : r.rows) os << num(row.hbar) << ',' << num(row.value) << ',' << row.flag << '\n';
  if (r.fit) {
    os << "slope," << num(r.fit->slope) << ",fit\n";
    os << "stderr," << num(r.fit->std_error) << ",fit\n";
  } else {
    os << "slope,nan,no fit\n";
    os << "stderr,nan,no fit\n";
  }
  for (const auto& v : r.verdicts) {
    os << "verdict:" << clean(v.name) << ',' << to_string(v.status) << ',' << clean(v.detail) << '\n';
  }
}

}  // namespace weylkit::io
