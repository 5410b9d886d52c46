#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "fhd/report.hpp"

using namespace fhd;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

int fields(const std::string& line) {
  int n = 1;
  for (char c : line) n += c == ',';
  return n;
}

StudyReport small_study() {
  StudyOptions o;
  o.levels = {4, 8, 16};
  return run_convergence_study(o);
}

}  // namespace

TEST_CASE("CSV layout") {
  const StudyReport r = small_study();
  const auto lines = lines_of(to_csv(r));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "N,h,err_phi_h1,err_H_hcurl,err_M_l2,err_u_h1h,err_p_l2,curl_inf");
  CHECK(lines[1].rfind("4,0.353553,0.394", 0) == 0);
  CHECK(lines[4].rfind("order_pairwise,,", 0) == 0);
  CHECK(lines[5].rfind("order_lsq,,", 0) == 0);
  for (const auto& l : lines) CHECK(fields(l) == 8);
  CHECK(lines[4].back() == ',');
  // curl_inf in scientific notation with 4 significant digits.
  const std::string curl = lines[2].substr(lines[2].rfind(',') + 1);
  CHECK(curl.find('e') == 5);
  CHECK(to_csv(r) == to_csv(r));
}

TEST_CASE("failed study trailer") {
  StudyReport r = small_study();
  r.rows.resize(1);
  for (auto& o : r.orders) o.reset();
  r.failed = true;
  r.failed_level = 8;
  r.failure = "solver failure in stage 'oseen'";
  const auto lines = lines_of(to_csv(r));
  REQUIRE(lines.size() == 3);
  CHECK(lines[2] == "# FAILED at N=8: solver failure in stage 'oseen'");
}

TEST_CASE("JSON mirror") {
  const StudyReport r = small_study();
  RunConfig cfg;
  cfg.levels = {4, 8, 16};
  const auto j = nlohmann::json::parse(to_json(r, cfg));
  CHECK(j["pair"] == "l0");
  CHECK(j["rows"].size() == 3);
  CHECK(j["rows"][0]["N"] == 4);
  CHECK(j["rows"][2]["err_phi_h1"].get<double>() == r.rows[2].err[kPhi]);
  CHECK(j["rows"][0]["diagnostics"]["solves"].size() > 0);
  CHECK(j["orders"]["err_u_h1h"]["pairwise"].size() == 2);
  CHECK(j["failed"] == false);
  CHECK(j["params"]["gamma"] == 1.0);
}

TEST_CASE("property lines") {
  std::ostringstream os;
  write_property_lines({{"a", true, 0.0, 1.0, "fine"}, {"b", false, 2.0, 1.0, "bad"}}, os);
  CHECK(os.str() == "PASS a: fine\nFAIL b: bad\n");
}
