#include "mockmod/mockmod.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "mockmod/exactq.hpp"
#include "mockmod/harness.hpp"
#include "mockmod/joyce.hpp"
#include "mockmod/rank.hpp"
#include "mockmod/special.hpp"

struct mockmod_config {
  mockmod::harness::SuiteConfig cfg;
};

struct mockmod_result {
  mockmod::harness::SuiteConfig cfg;
  mockmod::harness::SuiteResult res;
};

namespace {

using namespace mockmod;

thread_local std::string g_last_error;

int set_error(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

class ArgError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs f, mapping kernel exceptions to status codes.
template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return MOCKMOD_OK;
  } catch (const Error& e) {
    return set_error(static_cast<int>(e.code()), e.what());
  } catch (const ArgError& e) {
    return set_error(MOCKMOD_E_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MOCKMOD_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MOCKMOD_E_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ArgError(what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double arg(const double* args, int nargs, int i, const char* fn) {
  if (args == nullptr || nargs <= i) throw ArgError(std::string(fn) + ": missing argument " + std::to_string(i + 1));
  return args[i];
}

int int_arg(const double* args, int nargs, int i, const char* fn) {
  const double x = arg(args, nargs, i, fn);
  if (x != std::floor(x) || std::abs(x) > 1e6) throw ArgError(std::string(fn) + ": argument must be an integer");
  return static_cast<int>(x);
}

cplx evaluate(const std::string& fn, const Tau& tau, const double* args, int nargs) {
  if (fn == "E") return special::gauss_E(arg(args, nargs, 0, "E"));
  if (fn == "gammainc") return special::upper_gamma(arg(args, nargs, 0, "gammainc"), arg(args, nargs, 1, "gammainc"));
  if (fn == "eta") return special::eta_value(tau);
  if (fn == "theta") return special::theta_value(cplx(arg(args, nargs, 0, "theta"), arg(args, nargs, 1, "theta")), tau);
  if (fn == "E2") return special::e2_value(tau, nargs > 0 && args != nullptr && args[0] != 0.0);
  if (fn == "period") {
    const int kind = int_arg(args, nargs, 0, "period");
    if (kind == 0) return special::period_integral(special::PeriodKind::eta, tau).value;
    if (kind == 1) return special::period_integral(special::PeriodKind::eta24, tau).value;
    if (kind == 2) return special::period_integral(special::PeriodKind::single_term, tau, int_arg(args, nargs, 1, "period")).value;
    throw ArgError("period: kind must be 0, 1 or 2");
  }
  if (fn == "rank") return rank::r_total(int_arg(args, nargs, 0, "rank"), tau).r_total;
  if (fn == "joyce") return joyce::joyce_hat(int_arg(args, nargs, 0, "joyce"), tau).total;
  throw ArgError("unknown function '" + fn + "' (expected E, gammainc, eta, theta, E2, period, rank or joyce)");
}

exactq::QSeries expansion(const std::string& object, std::int64_t T, int param) {
  if (T < 1 || T > 5000) throw ArgError("T must lie in [1, 5000]");
  if (object == "eta") return exactq::eta_expansion(T);
  if (object == "P") return exactq::partition_series(T);
  if (object == "E2") return exactq::e2_expansion(T);
  if (object == "rank-moment") {
    if (param < 0 || param > 4) throw ArgError("rank-moment: l must lie in [0, 4]");
    if (T > 1000) throw ArgError("rank-moment: T must be at most 1000");
    return exactq::rank_moment_series(exactq::rank_table(T - 1, false), param, T);
  }
  if (object == "joyce") return exactq::joyce_expansion(param, T);
  if (object == "theta") {
    using exactq::ThetaKind;
    static const ThetaKind kinds[] = {ThetaKind::theta1, ThetaKind::theta3, ThetaKind::vartheta_m1, ThetaKind::vartheta_0};
    if (param < 0 || param > 3) throw ArgError("theta: param must lie in [0, 3]");
    return exactq::theta_q_expansion(kinds[param], T);
  }
  throw ArgError("unknown object '" + object + "' (expected eta, P, E2, rank-moment, joyce or theta)");
}

}  // namespace

extern "C" {

const char* mockmod_version(void) { return "1.0.0"; }

const char* mockmod_status_name(int status) {
  if (status == MOCKMOD_E_ARGUMENT) return "argument";
  if (status < 0 || status > MOCKMOD_E_INTERNAL) return "unknown";
  return error_code_name(static_cast<ErrorCode>(status));
}

const char* mockmod_last_error(void) { return g_last_error.c_str(); }

void mockmod_string_free(char* s) { delete[] s; }

int mockmod_config_new(mockmod_config** out) {
  return guarded([&] {
    require(out != nullptr, "config_new: null output pointer");
    *out = new mockmod_config();
  });
}

void mockmod_config_free(mockmod_config* cfg) { delete cfg; }

int mockmod_config_set_suite(mockmod_config* cfg, const char* suite) {
  return guarded([&] {
    require(cfg != nullptr && suite != nullptr, "set_suite: null argument");
    cfg->cfg.suite = harness::parse_suite(suite);
  });
}

int mockmod_config_set_seed(mockmod_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg != nullptr, "set_seed: null config");
    cfg->cfg.seed = seed;
  });
}

int mockmod_config_set_trunc(mockmod_config* cfg, int trunc) {
  return guarded([&] {
    require(cfg != nullptr, "set_trunc: null config");
    if (trunc < 20 || trunc > 2000) fail(ErrorCode::config, "trunc must lie in [20, 2000]");
    cfg->cfg.trunc = trunc;
  });
}

int mockmod_config_set_jet_order(mockmod_config* cfg, int order) {
  return guarded([&] {
    require(cfg != nullptr, "set_jet_order: null config");
    if (order < 0 || order > 40) fail(ErrorCode::config, "jet order must lie in [0, 40]");
    cfg->cfg.jet_order = order;
  });
}

int mockmod_config_set_tol(mockmod_config* cfg, double tol) {
  return guarded([&] {
    require(cfg != nullptr, "set_tol: null config");
    if (!(tol > 0.0) || !std::isfinite(tol)) fail(ErrorCode::config, "tol must be a positive finite number");
    cfg->cfg.tol = tol;
  });
}

int mockmod_config_set_precision(mockmod_config* cfg, const char* precision) {
  return guarded([&] {
    require(cfg != nullptr && precision != nullptr, "set_precision: null argument");
    cfg->cfg.precision = parse_precision(precision);
  });
}

int mockmod_config_set_samples(mockmod_config* cfg, int n_tau, int n_gamma) {
  return guarded([&] {
    require(cfg != nullptr, "set_samples: null config");
    if (n_tau < 1 || n_tau > 50 || n_gamma < 0 || n_gamma > 100)
      fail(ErrorCode::config, "n_tau must lie in [1, 50] and n_gamma in [0, 100]");
    cfg->cfg.n_tau = n_tau;
    cfg->cfg.n_gamma = n_gamma;
  });
}

int mockmod_config_set_workers(mockmod_config* cfg, int workers) {
  return guarded([&] {
    require(cfg != nullptr, "set_workers: null config");
    if (workers < 0 || workers > 256) fail(ErrorCode::config, "workers must lie in [0, 256]");
    cfg->cfg.workers = workers;
  });
}

int mockmod_config_add_ell(mockmod_config* cfg, int ell) {
  return guarded([&] {
    require(cfg != nullptr, "add_ell: null config");
    if (ell < 1 || ell > 3) fail(ErrorCode::config, "level l must lie in {1, 2, 3}");
    cfg->cfg.ells.push_back(ell);
  });
}

int mockmod_config_add_k(mockmod_config* cfg, int k) {
  return guarded([&] {
    require(cfg != nullptr, "add_k: null config");
    if (k < 2 || k > 12 || k % 2 != 0) fail(ErrorCode::config, "Joyce weight k must be even in [2, 12]");
    cfg->cfg.ks.push_back(k);
  });
}

int mockmod_config_add_check(mockmod_config* cfg, const char* group) {
  return guarded([&] {
    require(cfg != nullptr && group != nullptr, "add_check: null argument");
    cfg->cfg.checks.emplace_back(group);
  });
}

int mockmod_run(const mockmod_config* cfg, mockmod_result** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "run: null argument");
    *out = nullptr;
    auto res = std::make_unique<mockmod_result>();
    res->cfg = cfg->cfg;
    res->res = harness::run_suite(cfg->cfg);
    *out = res.release();
  });
}

void mockmod_result_free(mockmod_result* res) { delete res; }

int mockmod_result_exit_code(const mockmod_result* res) { return res == nullptr ? 1 : res->res.exit_code; }

size_t mockmod_result_count(const mockmod_result* res) { return res == nullptr ? 0 : res->res.reports.size(); }

size_t mockmod_result_failed(const mockmod_result* res) {
  if (res == nullptr) return 0;
  size_t n = 0;
  for (const auto& r : res->res.reports) n += r.passed() ? 0 : 1;
  return n;
}

int mockmod_result_json(const mockmod_result* res, int timings, char** out) {
  return guarded([&] {
    require(res != nullptr && out != nullptr, "result_json: null argument");
    *out = dup_string(harness::to_json(res->cfg, res->res, timings != 0));
  });
}

int mockmod_result_write(const mockmod_result* res, const char* path, int timings) {
  return guarded([&] {
    require(res != nullptr && path != nullptr, "result_write: null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::io, std::string("cannot open '") + path + "' for writing");
    f << harness::to_json(res->cfg, res->res, timings != 0) << '\n';
    if (!f) fail(ErrorCode::io, std::string("write to '") + path + "' failed");
  });
}

int mockmod_catalog_json(char** out) {
  return guarded([&] {
    require(out != nullptr, "catalog_json: null output pointer");
    *out = dup_string(harness::catalog_json());
  });
}

int mockmod_expand(const char* object, int64_t T, int param, char** out) {
  return guarded([&] {
    require(object != nullptr && out != nullptr, "expand: null argument");
    *out = dup_string(exactq::to_json(expansion(object, T, param)));
  });
}

int mockmod_eval(const char* fn, double tau_re, double tau_im, const double* args, int nargs, double* out_re,
                 double* out_im) {
  return guarded([&] {
    require(fn != nullptr && out_re != nullptr && out_im != nullptr, "eval: null argument");
    require(nargs >= 0, "eval: negative argument count");
    const std::string name(fn);
    // E and gammainc ignore tau
    const bool tau_free = name == "E" || name == "gammainc";
    const Tau tau = tau_free ? Tau(0.0, 1.0) : Tau(tau_re, tau_im);
    const cplx v = evaluate(name, tau, args, nargs);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

}  // extern "C"
