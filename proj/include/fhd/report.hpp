#pragma once

#include <ostream>
#include <string>

#include "fhd/config.hpp"
#include "fhd/properties.hpp"
#include "fhd/verify.hpp"

namespace fhd {

extern const char* const kCsvHeader;

/// Header, one row per completed level, `order_pairwise` (last pair) and
/// `order_lsq` footers, and a `# FAILED at N=...` trailer for aborted studies.
/// Errors use 6 significant digits, curl_inf 4 digits in scientific notation.
void write_csv(const StudyReport& report, std::ostream& out);
std::string to_csv(const StudyReport& report);

/// Mirror of the CSV plus run settings and per-level solver diagnostics.
std::string to_json(const StudyReport& report, const RunConfig& cfg);

/// One line per property: PASS/FAIL, name, detail.
void write_property_lines(const std::vector<PropertyResult>& results, std::ostream& out);

}  // namespace fhd
