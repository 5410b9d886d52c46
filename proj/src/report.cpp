#include "fhd/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace fhd {

const char* const kCsvHeader = "N,h,err_phi_h1,err_H_hcurl,err_M_l2,err_u_h1h,err_p_l2,curl_inf";

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string e3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

void write_csv(const StudyReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const LevelRow& r : report.rows) {
    out << r.N << ',' << g6(r.h);
    for (double e : r.err) out << ',' << g6(e);
    out << ',' << e3(r.curl_inf) << '\n';
  }
  if (report.rows.size() >= 2) {
    for (const bool lsq : {false, true}) {
      out << (lsq ? "order_lsq" : "order_pairwise") << ',';
      for (const auto& fit : report.orders) {
        out << ',';
        if (fit) out << g6(lsq ? fit->least_squares : fit->pairwise.back());
      }
      out << ",\n";
    }
  }
  if (report.failed) out << "# FAILED at N=" << report.failed_level << ": " << report.failure << '\n';
}

std::string to_csv(const StudyReport& report) {
  std::ostringstream os;
  write_csv(report, os);
  return os.str();
}

std::string to_json(const StudyReport& report, const RunConfig& cfg) {
  using nlohmann::json;
  json j;
  j["study"] = cfg.study;
  j["case"] = report.case_name;
  j["pair"] = to_string(report.pair);
  j["levels"] = cfg.levels;
  j["params"] = {{"mu0", cfg.params.mu0}, {"Ms", cfg.params.Ms},   {"gamma", cfg.params.gamma},
                 {"chi0", cfg.params.chi0()}, {"rho", cfg.params.rho}, {"eta", cfg.params.eta}};
  j["picard_iters"] = cfg.picard_iters;
  j["oseen_iters"] = cfg.oseen_iters;
  j["quad_bump"] = cfg.quad_bump;

  json rows = json::array();
  for (const LevelRow& r : report.rows) {
    json row;
    row["N"] = r.N;
    row["h"] = r.h;
    for (int c = 0; c < kNumErrorColumns; ++c) row[column_name(c)] = r.err[c];
    row["curl_inf"] = r.curl_inf;
    row["seconds"] = r.seconds;
    const FhdDiagnostics& d = r.diag;
    json solves = json::array();
    for (const StageReport& s : d.solves) {
      solves.push_back({{"stage", s.stage},
                        {"status", to_string(s.report.status)},
                        {"relative_residual", s.report.relative_residual},
                        {"count", s.report.factor_or_iter_count}});
    }
    json energy = json::array();
    for (const EnergyCheck& e : d.energy) energy.push_back({{"viscous_energy", e.viscous_energy}, {"work", e.work}});
    row["diagnostics"] = {{"solves", solves},
                          {"picard_increments", d.picard_increments},
                          {"oseen_increments", d.oseen_increments},
                          {"picard_sweep_residual", d.picard_sweep_residual},
                          {"picard_nonlinear_residual", d.picard_nonlinear_residual},
                          {"grad_phi_norm", d.grad_phi_norm},
                          {"grad_u_norm", d.grad_u_norm},
                          {"max_saturation_ratio", d.max_saturation_ratio},
                          {"divergence_residual", d.divergence_residual},
                          {"energy", energy}};
    rows.push_back(row);
  }
  j["rows"] = rows;

  json orders = json::object();
  for (int c = 0; c < kNumErrorColumns; ++c) {
    if (report.orders[c]) {
      orders[column_name(c)] = {{"pairwise", report.orders[c]->pairwise},
                                {"least_squares", report.orders[c]->least_squares}};
    }
  }
  j["orders"] = orders;
  j["failed"] = report.failed;
  if (report.failed) {
    j["failed_level"] = report.failed_level;
    j["failure"] = report.failure;
  }
  return j.dump(2) + "\n";
}

void write_property_lines(const std::vector<PropertyResult>& results, std::ostream& out) {
  for (const PropertyResult& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
  }
}

}  // namespace fhd
