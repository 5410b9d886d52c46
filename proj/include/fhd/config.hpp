#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhd/driver.hpp"
#include "fhd/verify.hpp"

namespace fhd {

/// Batch run settings read from a flat `key = value` file.
struct RunConfig {
  std::string study = "convergence";
  ElementPair pair = ElementPair::l0;
  std::vector<int> levels{4, 8, 16, 32, 64, 128};
  MaterialParams params;
  int picard_iters = 2;
  int oseen_iters = 2;
  int quad_bump = 2;
  std::uint64_t seed = 42;
  std::string out_csv;
  std::string out_json;

  StudyOptions study_options() const;
};

/// Parse error; `line` is 1-based, 0 for whole-file problems.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Keys: study, pair, levels, mu0, Ms, gamma, chi0, rho, eta, picard_iters,
/// oseen_iters, quad_bump, seed, out_csv, out_json. `#` starts a comment.
/// chi0 sets gamma = 3 chi0 / Ms and may not be combined with gamma.
RunConfig parse_config(const std::string& text);

/// Reads and parses a file; a missing file is a ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace fhd
