// Command-line front end. Talks to the kernel only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mockmod/mockmod.h"

namespace {

using json = nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct CString {
  char* p = nullptr;
  ~CString() { mockmod_string_free(p); }
};

int report_error(int status) {
  std::cerr << "mockmod: " << mockmod_status_name(status) << " error: " << mockmod_last_error() << "\n";
  return status == MOCKMOD_E_CONFIG || status == MOCKMOD_E_ARGUMENT || status == MOCKMOD_E_DOMAIN ||
                 status == MOCKMOD_E_VALIDATION
             ? kExitConfig
             : kExitFail;
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 1;
  double tol = -1.0;
  int trunc = 200;
  int jet_order = 0;
  std::string precision = "f64";
  std::string json_path;
  std::vector<int> ells, ks;
  std::vector<std::string> checks;
  int n_tau = 3, n_gamma = 10, workers = 0;
  bool verbose = false, no_timings = false;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void print_summary(const json& doc, bool verbose) {
  struct Row {
    int n = 0, failed = 0;
    double worst = 0.0, tol = 0.0;
    bool variant = false, unbounded = false;
    std::map<std::string, int> variants;
  };
  std::map<std::string, Row> rows;
  for (const auto& r : doc["reports"]) {
    Row& row = rows[r["check_id"].get<std::string>()];
    row.n += 1;
    const std::string verdict = r["verdict"];
    if (verdict == "fail") row.failed += 1;
    if (verdict == "variant") {
      row.variant = true;
      row.variants[r.value("variant", std::string("?"))] += 1;
    }
    if (r["residual"].is_null())
      row.unbounded = true;
    else if (verdict != "variant")
      row.worst = std::max(row.worst, r["residual"].get<double>());
    if (!r["tolerance"].is_null()) row.tol = r["tolerance"].get<double>();
  }
  std::printf("%-34s %5s %5s  %-10s %-10s\n", "check_id", "n", "fail", "max_resid", "tol");
  for (const auto& [id, row] : rows) {
    if (row.variant) {
      std::string vs;
      for (const auto& [name, count] : row.variants) vs += (vs.empty() ? "" : "; ") + name + " x" + std::to_string(count);
      std::printf("%-34s %5d %5s  variant: %s\n", id.c_str(), row.n, "-", vs.c_str());
      continue;
    }
    std::printf("%-34s %5d %5d  %-10s %-10s\n", id.c_str(), row.n, row.failed,
                row.unbounded ? "inf" : fmt(row.worst).c_str(), fmt(row.tol).c_str());
  }
  for (const auto& r : doc["reports"]) {
    const bool failed = r["verdict"] == "fail";
    if (!failed && !verbose) continue;
    std::string params;
    for (const auto& [k, v] : r["params"].items()) params += " " + k + "=" + v.get<std::string>();
    std::printf("%s %s residual=%s tol=%s%s%s\n", failed ? "FAIL" : r["verdict"].get<std::string>().c_str(),
                r["check_id"].get<std::string>().c_str(),
                r["residual"].is_null() ? "inf" : fmt(r["residual"].get<double>()).c_str(),
                fmt(r["tolerance"].get<double>()).c_str(), params.c_str(),
                r.contains("note") ? ("  # " + r["note"].get<std::string>()).c_str() : "");
  }
  const auto& s = doc["summary"];
  std::printf("%d reports: %d passed, %d failed, %d variants: %s\n", s["reports"].get<int>(), s["passed"].get<int>(),
              s["failed"].get<int>(), s["variants"].get<int>(), s["exit_code"].get<int>() == 0 ? "PASS" : "FAIL");
}

int run_verify(const VerifyArgs& a) {
  mockmod_config* raw = nullptr;
  if (int st = mockmod_config_new(&raw); st != MOCKMOD_OK) return report_error(st);
  std::unique_ptr<mockmod_config, decltype(&mockmod_config_free)> cfg(raw, mockmod_config_free);
  int st = mockmod_config_set_suite(cfg.get(), a.suite.c_str());
  if (st == MOCKMOD_OK) st = mockmod_config_set_seed(cfg.get(), a.seed);
  if (st == MOCKMOD_OK) st = mockmod_config_set_trunc(cfg.get(), a.trunc);
  if (st == MOCKMOD_OK) st = mockmod_config_set_jet_order(cfg.get(), a.jet_order);
  if (st == MOCKMOD_OK) st = mockmod_config_set_precision(cfg.get(), a.precision.c_str());
  if (st == MOCKMOD_OK && a.tol != -1.0) st = mockmod_config_set_tol(cfg.get(), a.tol);
  if (st == MOCKMOD_OK) st = mockmod_config_set_samples(cfg.get(), a.n_tau, a.n_gamma);
  if (st == MOCKMOD_OK) st = mockmod_config_set_workers(cfg.get(), a.workers);
  for (int l : a.ells)
    if (st == MOCKMOD_OK) st = mockmod_config_add_ell(cfg.get(), l);
  for (int k : a.ks)
    if (st == MOCKMOD_OK) st = mockmod_config_add_k(cfg.get(), k);
  for (const auto& c : a.checks)
    if (st == MOCKMOD_OK) st = mockmod_config_add_check(cfg.get(), c.c_str());
  if (st != MOCKMOD_OK) return report_error(st);

  mockmod_result* res_raw = nullptr;
  if (st = mockmod_run(cfg.get(), &res_raw); st != MOCKMOD_OK) return report_error(st);
  std::unique_ptr<mockmod_result, decltype(&mockmod_result_free)> res(res_raw, mockmod_result_free);
  if (!a.json_path.empty()) {
    if (st = mockmod_result_write(res.get(), a.json_path.c_str(), a.no_timings ? 0 : 1); st != MOCKMOD_OK)
      return report_error(st);
  }
  CString text;
  if (st = mockmod_result_json(res.get(), 1, &text.p); st != MOCKMOD_OK) return report_error(st);
  print_summary(json::parse(text.p), a.verbose);
  return mockmod_result_exit_code(res.get());
}

int run_catalog(bool as_json) {
  CString text;
  if (int st = mockmod_catalog_json(&text.p); st != MOCKMOD_OK) return report_error(st);
  if (as_json) {
    std::cout << text.p << "\n";
    return 0;
  }
  for (const auto& e : json::parse(text.p))
    std::printf("%-34s %-7s %-22s %s%s\n", e["check_id"].get<std::string>().c_str(), e["suite"].get<std::string>().c_str(),
                e["group"].get<std::string>().c_str(), e["anchor"].get<std::string>().c_str(),
                e["adjudication"].get<bool>() ? "  [adjudication]" : "");
  return 0;
}

int run_expand(const std::string& object, std::int64_t T, int param) {
  CString text;
  if (int st = mockmod_expand(object.c_str(), T, param, &text.p); st != MOCKMOD_OK) return report_error(st);
  std::cout << text.p << "\n";
  return 0;
}

int run_eval(const std::string& fn, const std::vector<double>& tau, const std::vector<double>& args) {
  double re = 0.0, im = 0.0;
  const double t_re = tau.size() > 0 ? tau[0] : 0.0, t_im = tau.size() > 1 ? tau[1] : 1.0;
  if (int st = mockmod_eval(fn.c_str(), t_re, t_im, args.data(), static_cast<int>(args.size()), &re, &im); st != MOCKMOD_OK)
    return report_error(st);
  std::printf("%.17g %+.17gi\n", re, im);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification kernel for rank moments, Appell functions and the Joyce completion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mockmod_version());

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a check suite and report residuals");
  verify->add_option("suite", va.suite, "rank, joyce, appell, theta, duke or all")
      ->required()
      ->check(CLI::IsMember({"rank", "joyce", "appell", "theta", "duke", "all"}));
  verify->add_option("--seed", va.seed, "Sampling seed")->capture_default_str();
  verify->add_option("--tol", va.tol, "Replace every non-adjudication tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--trunc", va.trunc, "q-series truncation order")->capture_default_str()->check(CLI::Range(20, 2000));
  verify->add_option("--jet-order", va.jet_order, "Jet order for the Taylor completion checks (0: default)")
      ->check(CLI::Range(0, 40));
  verify->add_option("--precision", va.precision, "f64 or dd")->capture_default_str()->check(CLI::IsMember({"f64", "dd"}));
  verify->add_option("--json", va.json_path, "Write the JSON report to PATH");
  verify->add_option("--ell", va.ells, "Levels l (rank: 1..3, Appell: 1..3)")->delimiter(',');
  verify->add_option("--k", va.ks, "Joyce weights k (even, 2..12)")->delimiter(',');
  verify->add_option("--checks", va.checks, "Check groups to run, e.g. rank.transform")->delimiter(',');
  verify->add_option("--n-tau", va.n_tau, "Number of sampled tau")->capture_default_str();
  verify->add_option("--n-gamma", va.n_gamma, "Sampled matrices per tau besides S and T")->capture_default_str();
  verify->add_option("--workers", va.workers, "Worker threads (0: MOCKMOD_WORKERS or 1)");
  verify->add_flag("--verbose", va.verbose, "Print every report");
  verify->add_flag("--no-timings", va.no_timings, "Write runtime_ms as 0 in the JSON file");

  bool catalog_json = false;
  auto* catalog = app.add_subcommand("catalog", "List check ids with the identity each certifies");
  catalog->add_flag("--json", catalog_json, "Print the catalog as JSON");

  std::string object;
  std::int64_t T = 20;
  int param = 0;
  auto* expand = app.add_subcommand("expand", "Print an exact q-expansion as QSeries JSON");
  expand->add_option("--object", object, "eta, P, E2, rank-moment, joyce or theta")
      ->required()
      ->check(CLI::IsMember({"eta", "P", "E2", "rank-moment", "joyce", "theta"}));
  expand->add_option("--T", T, "Coefficients valid below q^T")->capture_default_str();
  expand->add_option("--param,--ell,--k", param,
                     "rank-moment: l; joyce: k; theta: 0 theta1, 1 theta3, 2 vartheta_{-1}, 3 vartheta_0");

  std::string fn;
  std::vector<double> tau{0.0, 1.0}, eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a special function at a point");
  eval->add_option("--fn", fn, "E, gammainc, eta, theta, E2, period, rank or joyce")
      ->required()
      ->check(CLI::IsMember({"E", "gammainc", "eta", "theta", "E2", "period", "rank", "joyce"}));
  eval->add_option("--tau", tau, "tau as RE,IM")->delimiter(',')->expected(2);
  eval->add_option("--args", eval_args, "Function arguments, comma separated (see mockmod.h)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*verify) return run_verify(va);
  if (*catalog) return run_catalog(catalog_json);
  if (*expand) return run_expand(object, T, param);
  if (*eval) return run_eval(fn, tau, eval_args);
  return kExitConfig;
}
