#pragma once

// Golden CLI invocations shared by the CLI tests and the acceptance binary.
// Arguments of the form "@x" name files in the test data directory.

#include <string>
#include <vector>

namespace wt {

inline std::string data(const std::string& name) { return std::string(WEYLKIT_TEST_DATA) + "/" + name; }

struct GoldenCase {
  std::string name;
  std::vector<std::string> args;
};

inline std::vector<std::string> expand(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) out.push_back(a.size() > 1 && a[0] == '@' ? data(a.substr(1)) : a);
  return out;
}

inline const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = {
      {"star", {"star", "--hbar", "0.5", "--mu", "@a.json", "--nu", "@b.json"}},
      {"star_density", {"star", "--hbar", "0.25", "--mu", "@dens.json", "--nu", "@dens.json"}},
      {"bracket", {"bracket", "--mu", "@a.json", "--nu", "@b.json"}},
      {"commutator", {"commutator", "--hbar", "0.1", "--mu", "@a.json", "--nu", "@b.json"}},
      {"involution", {"involution", "--measure", "@dens.json"}},
      {"norm1", {"norm1", "--mu", "@dens.json"}},
      {"moment_norm", {"moment-norm", "--mu", "@b.json", "--n", "3"}},
      {"fourier_eval", {"fourier-eval", "--mu", "@b.json", "--at", "0.3,-1.2"}},
      {"supnorm", {"supnorm", "--mu", "@b.json", "--samples", "256", "--seed", "3"}},
      {"diff", {"diff", "--mu", "@a.json", "--at", "0.5,0.25"}},
      {"rep_norm", {"rep-norm", "--measure", "@r.json", "--hbar", "0.1", "--grid", "N=256,L=10", "--tol", "1e-8"}},
      {"rep_norm_classical", {"rep-norm", "--measure", "@a.json", "--hbar", "0", "--samples", "256"}},
      {"sweep_dirac_banach", {"sweep", "--mode", "dirac-banach", "--mu", "@a.json", "--nu", "@b.json"}},
      {"sweep_vonneumann_banach", {"sweep", "--mode", "vonneumann-banach", "--mu", "@a.json", "--nu", "@b.json", "--format", "json"}},
      {"sweep_dirac_op", {"sweep", "--mode", "dirac-op", "--mu", "@a.json", "--nu", "@b.json", "--hbar-grid", "log:1e-3:1:7", "--grid", "N=128,L=8"}},
      {"sweep_vonneumann_op", {"sweep", "--mode", "vonneumann-op", "--mu", "@a.json", "--nu", "@b.json", "--hbar-grid", "list:0.01,0.1,1", "--grid", "N=128,L=8", "--format", "json"}},
      {"sweep_rieffel", {"sweep", "--mode", "rieffel", "--mu", "@r.json", "--hbar-grid", "list:0,0.05,0.2,0.5,1", "--samples", "256"}},
      {"psd_check", {"psd-check", "--space", "@plane.json", "--state", "@gauss.json", "--hbar", "0.5"}},
      {"psd_check_violated", {"psd-check", "--space", "@plane.json", "--state", "@squeezed.json", "--hbar", "1"}},
      {"state_bound", {"state-bound", "--state", "@char.json", "--hbar", "0", "--mu", "@b.json"}},
      {"gauge_twist", {"gauge-twist", "--mu", "@a.json", "--F", "0.5,-0.25"}},
      {"darboux", {"darboux", "--space", "@space3.json"}},
  };
  return cases;
}

}  // namespace wt
