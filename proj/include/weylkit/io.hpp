#pragma once

// JSON files for spaces, measures and states; canonical dumps and digests;
// sweep report writers.

#include "weylkit/measure.hpp"
#include "weylkit/representation.hpp"
#include "weylkit/states.hpp"
#include "weylkit/verify.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace weylkit::io {

using Json = nlohmann::json;

/// A space file with its optional companions.
///
///   {"dim": 2, "sigma": [[0,1],[-1,0]], "lattice_step": [1,1],
///    "seminorm": {"gram": [[..]], "c": 1},
///    "scaler": {"kind": "sqrt"} | {"kind": "split", "conjugation": [[..]], "theta_plus_exponent": 1},
///    "representation": {"N": 1024, "L": 20, "characters": 256 | [[..]], "seed": 42}}
struct SpaceBundle {
  SpacePtr space;
  std::optional<SeminormSpec> seminorm;
  std::optional<HbarScaler> scaler;
  std::optional<RepConfig> rep;
};

SpaceBundle parse_space(const Json& j);
Json space_to_json(const SpaceBundle& b);

/// {"space": {...}, "discrete": [{"coord": [..], "re": x, "im": y}],
///  "density": {"box": [[lo, hi], ..], "samples": [[re, im], ..]}}
/// Box ranges are inclusive; samples are row-major, last axis fastest.
struct MeasureFile {
  SpaceBundle space;
  Measure measure;
};

MeasureFile parse_measure(const Json& j);
Json measure_to_json(const Measure& mu, const SpaceBundle& space);

/// {"kind": "gaussian", "s": [[..]]} or {"kind": "character", "F": [..]}
QuantumState parse_state(const Json& j);
Json state_to_json(const QuantumState& s);

Json matrix_to_json(const Matrix& m);
Json vector_to_json(const Vector& v);
Json complex_to_json(Complex z);
Matrix json_to_matrix(const Json& j, std::string_view field);
Vector json_to_vector(const Json& j, std::string_view field);

/// Throws ValidationError naming the path when missing or malformed.
Json read_json_file(const std::filesystem::path& path);

/// Sorted keys, no whitespace, doubles as %.17g (non-finite as null).
std::string canonical_dump(const Json& j);
std::string sha256_hex(std::string_view data);

Json report_to_json(const SweepReport& r);
/// Columns hbar,value,flag; footer rows slope, stderr and one per verdict.
void write_csv(const SweepReport& r, std::ostream& os);

}  // namespace weylkit::io
