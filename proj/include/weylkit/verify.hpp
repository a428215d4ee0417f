#pragma once

// hbar-sweeps checking the Dirac, von Neumann and Rieffel conditions of a
// strict deformation quantization, in the total-variation (Banach) version
// and in operator norm.

#include "weylkit/measure.hpp"
#include "weylkit/representation.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weylkit {

enum class SweepMode { dirac_banach, vonneumann_banach, dirac_operator, vonneumann_operator, rieffel };

std::string_view to_string(SweepMode mode);
/// Accepts the CLI spellings: dirac-banach, vonneumann-banach, dirac-op, vonneumann-op, rieffel.
SweepMode parse_sweep_mode(std::string_view text);

enum class VerdictStatus { pass, fail, not_applicable };
std::string_view to_string(VerdictStatus s);

struct Verdict {
  std::string name;
  VerdictStatus status = VerdictStatus::not_applicable;
  std::string detail;
};

struct SweepRow {
  double hbar = 0.0;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> aux;
  /// Empty, or one of: aliased, unconverged, classical, skipped.
  std::string flag;
};

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  std::size_t used = 0;
};

struct SweepReport {
  SweepMode mode = SweepMode::dirac_banach;
  std::vector<SweepRow> rows;
  std::optional<SlopeFit> fit;
  std::vector<Verdict> verdicts;

  /// No verdict failed.
  bool passed() const;
  const Verdict* verdict(std::string_view name) const;
};

struct SweepSpec {
  SweepSpec(std::vector<double> grid, Measure m) : hbar_grid(std::move(grid)), mu(std::move(m)) {}

  std::vector<double> hbar_grid;
  Measure mu;
  std::optional<Measure> nu;
  SweepMode mode = SweepMode::dirac_banach;
  RepConfig rep;
  /// Rieffel: scaler of the family Pi_hbar = Pi_1 o beta_hbar (default sqrt scaling).
  std::optional<HbarScaler> scaler;
  /// Rieffel: false evaluates Schrodinger representations at each hbar directly.
  bool use_family = true;
  /// Semi-norm for the moment threshold of the Dirac limit (default Euclidean, c = 1).
  std::optional<SeminormSpec> seminorm;
  std::pair<double, double> fit_range{1e-4, 1e-1};
  double tol = 1e-6;
  double endpoint_tol = 1e-2;
  SamplingConfig sampling;
  std::uint64_t seed = 42;
};

/// log:lo:hi:count, lin:lo:hi:count or list:a,b,c (sorted, duplicates kept).
std::vector<double> parse_hbar_grid(std::string_view text);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Least squares on (log hbar, log value) over rows with hbar in decade_range,
/// positive finite value and no flag. Needs >= 5 usable rows.
SlopeFit slope_fit(const std::vector<SweepRow>& rows, std::pair<double, double> decade_range);

SweepReport dirac_banach_sweep(const SweepSpec& spec);
SweepReport vonneumann_banach_sweep(const SweepSpec& spec);
SweepReport dirac_operator_sweep(const SweepSpec& spec);
SweepReport vonneumann_operator_sweep(const SweepSpec& spec);
SweepReport rieffel_sweep(const SweepSpec& spec);
/// Dispatches on spec.mode.
SweepReport run_sweep(const SweepSpec& spec);

struct SdqReport {
  SweepReport dirac_banach;
  SweepReport vonneumann_banach;
  SweepReport dirac_operator;
  SweepReport vonneumann_operator;
  SweepReport rieffel;
  /// Distinct atoms map to distinct Weyl operator terms.
  bool injective = false;
  /// ||mu||_1 is bit-identical across the grid.
  bool banach_rieffel = false;

  bool passed() const;
};

/// Dirac, von Neumann (Banach and operator norm) and Rieffel sweeps for
/// discrete measures, plus an injectivity check of the quantization map.
SdqReport weyl_algebra_sdq_check(const SweepSpec& spec);

}  // namespace weylkit
