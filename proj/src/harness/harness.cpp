#include "mockmod/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <thread>

#include <json.hpp>

#include "checks.hpp"
#include "mockmod/appell.hpp"
#include "mockmod/joyce.hpp"
#include "mockmod/rank.hpp"

namespace mockmod::harness {

namespace {

using json = nlohmann::ordered_json;

constexpr std::int64_t kEntryBound = 6;
constexpr double kMinImag = 0.2;
// Gamma_1(4) has c in 4Z, so Im(g tau) <= 1/(16 v) for c != 0 and the 0.2 floor
// cannot apply; these words use their own bounds.
constexpr std::int64_t kGamma14EntryBound = 12;
constexpr double kGamma14MinImag = 0.02;

// Uniform double in [0, 1) from the top 53 bits; platform independent.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int pick(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Mobius T_power(int e) { return validate_mobius(1, e, 0, 1); }

Mobius sample_gamma(std::mt19937_64& rng, const Tau& tau) {
  for (;;) {
    Mobius g = Mobius::identity();
    const int len = pick(rng, 1, 4);
    for (int i = 0; i < len; ++i) g = g * T_power(pick(rng, -2, 2)) * Mobius::S();
    g = g * T_power(pick(rng, -2, 2));
    if (g.c() == 0 || g.max_abs_entry() > kEntryBound) continue;
    if (g.apply(tau).v() < kMinImag) continue;
    return g;
  }
}

Mobius sample_gamma14(std::mt19937_64& rng, const Tau& tau) {
  const Mobius U = validate_mobius(1, 0, 4, 1);
  for (;;) {
    Mobius g = Mobius::identity();
    const int len = pick(rng, 1, 3);
    for (int i = 0; i < len; ++i) {
      const int e = pick(rng, -1, 1);
      const int f = rng() % 2 == 0 ? 1 : -1;
      g = g * T_power(e) * (f > 0 ? U : U.inverse());
    }
    g = g * T_power(pick(rng, -1, 1));
    if (g.c() == 0 || g.max_abs_entry() > kGamma14EntryBound) continue;
    if (g.apply(tau).v() < kGamma14MinImag) continue;
    return g;
  }
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
  x ^= x >> 31;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  return x;
}

cplx sample_z(std::mt19937_64& rng) { return {unit(rng) - 0.5, 0.6 * (unit(rng) - 0.5)}; }

struct Task {
  std::string group;
  std::string check_id;  // id used when the task throws
  std::vector<std::pair<std::string, std::string>> params;
  std::function<std::vector<Report>()> run;
};

struct Context {
  const SuiteConfig& cfg;
  std::vector<Sample> samples;
  std::vector<std::vector<Mobius>> gammas;  // per tau: S, T, then n_gamma sampled
  std::vector<int> rank_ells, appell_ells, ks;
};

std::vector<Report> one(Report r) { return {std::move(r)}; }

void add_tasks(Suite s, const Context& ctx, std::vector<Task>& tasks) {
  const SuiteConfig& cfg = ctx.cfg;
  auto add = [&](std::string group, std::string id, std::vector<std::pair<std::string, std::string>> params,
                 std::function<std::vector<Report>()> fn) {
    tasks.push_back({std::move(group), std::move(id), std::move(params), std::move(fn)});
  };
  auto tp = [](const Tau& t) { return std::pair<std::string, std::string>("tau", fmt_tau(t)); };
  auto gp = [](const Mobius& g) { return std::pair<std::string, std::string>("gamma", g.to_string()); };
  rank::CheckOptions ro;
  ro.trunc = cfg.trunc;
  ro.precision = cfg.precision;
  joyce::CheckOptions jo;
  jo.precision = cfg.precision;

  switch (s) {
    case Suite::theta: {
      add("theta.exact", "exactq.triple_product", {}, [] { return one(checks::triple_product(40)); });
      add("theta.exact", "exactq.rewritetheta", {}, [] { return one(checks::rewrite_theta(60)); });
      add("theta.incomplete_gamma", "special.incomplete_gamma", {}, [] { return one(checks::incomplete_gamma()); });
      for (std::size_t i = 0; i < ctx.samples.size(); ++i) {
        const Tau tau = ctx.samples[i].tau;
        std::mt19937_64 zr(mix(cfg.seed, 100 + i));
        const cplx z = sample_z(zr);
        add("theta.elliptic", "special.theta.elliptic", {tp(tau)}, [=] { return one(checks::theta_elliptic(tau, z)); });
        add("theta.lowering", "special.lowering.calibration", {tp(tau)},
            [=] { return one(checks::lowering_calibration(tau)); });
        const int order = cfg.jet_order > 0 ? cfg.jet_order : 12;
        for (const Mobius& g : ctx.gammas[i]) {
          add("theta.modular", "special.theta.modular", {gp(g), tp(tau)},
              [=] { return one(checks::theta_modular(g, tau, z)); });
          add("theta.e2", "special.e2.transform", {gp(g), tp(tau)}, [=] {
            return std::vector<Report>{checks::e2_transform(g, tau), checks::e2hat_transform(g, tau)};
          });
          add("theta.eta", "special.eta.multiplier", {gp(g), tp(tau)}, [=] { return one(checks::eta_multiplier(g, tau)); });
          add("theta.theta8", "jets.theta8.psi", {gp(g), tp(tau)},
              [=] { return checks::theta8_completions(g, tau, order); });
        }
      }
      break;
    }
    case Suite::appell: {
      for (std::size_t i = 0; i < ctx.samples.size(); ++i) {
        const Tau tau = ctx.samples[i].tau;
        std::mt19937_64 zr(mix(cfg.seed, 200 + i));
        const cplx z1 = sample_z(zr), z2 = sample_z(zr), zr1 = sample_z(zr);
        for (int ell : ctx.appell_ells) {
          const appell::AppellPoint p{ell, z1, z2, tau};
          add("appell.elliptic", "appell.elliptic", {tp(tau), {"ell", std::to_string(ell)}}, [=] {
            std::vector<Report> out;
            for (const auto& sh : {std::array<int, 4>{1, 0, 0, 0}, std::array<int, 4>{0, 1, 0, 0},
                                   std::array<int, 4>{0, 0, 1, 0}, std::array<int, 4>{0, 0, 0, 1},
                                   std::array<int, 4>{1, 1, -1, 2}})
              out.push_back(appell::check_elliptic(p, sh[0], sh[1], sh[2], sh[3]));
            return out;
          });
          // a torsion point z1 = (tau + 1)/3, where A-hat can nearly vanish
          const appell::AppellPoint pt{ell, (tau.value() + 1.0) / 3.0, z2, tau};
          add("appell.elliptic", "appell.torsion", {tp(tau), {"ell", std::to_string(ell)}}, [=] {
            Report r = appell::check_elliptic(pt, 1, 0, 1, 1);
            r.check_id = "appell.torsion";
            return one(std::move(r));
          });
          for (const Mobius& g : ctx.gammas[i])
            add("appell.modular", "appell.modular", {gp(g), tp(tau), {"ell", std::to_string(ell)}},
                [=] { return one(appell::check_modular(p, g)); });
        }
        add("appell.rank_lerch", "appell.rank_lerch", {tp(tau)}, [=] { return one(checks::rank_lerch(zr1, tau)); });
        add("appell.S_even", "appell.S_even", {tp(tau)}, [=] { return one(checks::zwegers_even(z1, tau)); });
      }
      break;
    }
    case Suite::rank: {
      add("rank.exact", "exactq.rank_table", {}, [] { return one(checks::rank_table_enumeration(30)); });
      add("rank.exact", "exactq.rank_sum", {}, [] { return one(checks::rank_row_sums(60)); });
      add("rank.exact", "exactq.congruences", {}, [] { return one(checks::partition_congruences(100)); });
      add("rank.exact", "exactq.rank_specializations", {}, [] { return one(checks::rank_specializations(50)); });
      add("rank.exact", "exactq.taylor_r", {}, [] { return one(checks::taylor_r(30)); });
      for (std::size_t i = 0; i < ctx.samples.size(); ++i) {
        const Tau tau = ctx.samples[i].tau;
        for (int ell : ctx.rank_ells) {
          const std::pair<std::string, std::string> lp{"ell", std::to_string(ell)};
          for (const Mobius& g : ctx.gammas[i])
            add("rank.transform", "rank.transform.ST", {lp, gp(g), tp(tau)},
                [=] { return one(rank::check_rank_transform(ell, g, tau, ro)); });
          add("rank.lowering", "rank.lowering.Lsl", {lp, tp(tau)}, [=] { return rank::check_rank_lowering(ell, tau, ro); });
          add("rank.lowering", "rank.lowering.plus_holomorphic", {lp, tp(tau)},
              [=] { return one(rank::check_rank_plus_holomorphic(ell, tau, ro)); });
        }
        add("rank.lowering", "rank.lowering.ratio", {tp(tau)}, [=] { return one(rank::check_rank_lowering_ratio(tau, ro)); });
        add("rank.rhat", "rank.rhat.assembly", {tp(tau)}, [=] { return rank::rhat_checks(tau, ro); });
      }
      break;
    }
    case Suite::duke: {
      for (std::size_t i = 0; i < ctx.samples.size(); ++i) {
        const Tau tau = ctx.samples[i].tau;
        add("duke.match", "duke.match", {tp(tau)}, [=] { return rank::duke_check(tau, ro); });
        add("duke.single_term", "duke.single_term", {tp(tau)}, [=] { return rank::single_term_checks(tau, -2, 2); });
        add("duke.period", "special.period.eta", {tp(tau)}, [=] { return one(checks::period_eta(tau)); });
      }
      break;
    }
    case Suite::joyce: {
      add("joyce.exact", "exactq.comparebin", {}, [] { return one(checks::comparebin(12)); });
      for (std::size_t i = 0; i < ctx.samples.size(); ++i) {
        const Tau tau = ctx.samples[i].tau;
        for (int k : ctx.ks) {
          const std::pair<std::string, std::string> kp{"k", std::to_string(k)};
          for (const Mobius& g : ctx.gammas[i])
            add("joyce.transform", "joyce.transform", {kp, gp(g), tp(tau)},
                [=] { return one(joyce::check_joyce_transform(k, g, tau, jo)); });
          add("joyce.lowering", "joyce.lowering", {kp, tp(tau)}, [=] { return joyce::check_joyce_lowering(k, tau, jo); });
          add("joyce.appell_limit", "joyce.appell_limit", {kp, tp(tau)},
              [=] { return one(joyce::check_appell_limit(k, tau, jo)); });
          add("joyce.ghat", "joyce.ghat", {kp, tp(tau)}, [=] { return joyce::check_ghat(k, tau, jo); });
        }
        for (int nu : {-1, 0}) {
          const std::pair<std::string, std::string> np{"nu", std::to_string(nu)};
          add("joyce.s_nu", "joyce.s_nu", {np, tp(tau)}, [=] { return joyce::check_s_nu(nu, tau, jo); });
          add("joyce.heat", "joyce.heat", {np, tp(tau)}, [=] { return one(checks::heat_equation(nu, tau)); });
        }
        for (int ell : {1, 3, 5})
          add("joyce.theta_ln", "joyce.theta_ln", {{"ell", std::to_string(ell)}, tp(tau)},
              [=] { return joyce::check_theta_ln(ell, tau, jo); });
        for (const Mobius& g : ctx.gammas[i])
          add("joyce.im_identity", "joyce.im_identity", {gp(g), tp(tau)},
              [=] { return one(joyce::check_im_identity(g, tau, jo)); });
        std::mt19937_64 gr(mix(cfg.seed, 300 + i));
        const cplx z = sample_z(gr);
        std::vector<Mobius> g14{T_power(1), validate_mobius(1, 0, 4, 1)};
        for (int j = 0; j < cfg.n_gamma; ++j) g14.push_back(sample_gamma14(gr, tau));
        for (const Mobius& g : g14)
          add("joyce.gamma14", "joyce.gamma14", {gp(g), tp(tau)},
              [=] { return joyce::gamma1_4_theta_transform(g, tau, z, jo); });
      }
      break;
    }
    case Suite::all:
      break;
  }
}

std::vector<Suite> expand(Suite s) {
  if (s != Suite::all) return {s};
  return {Suite::rank, Suite::joyce, Suite::appell, Suite::theta, Suite::duke};
}

bool is_adjudication_id(const std::string& id) {
  static const std::string suffix = ".adjudication";
  return id.size() > suffix.size() && id.compare(id.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool group_selected(const std::string& group, const std::vector<std::string>& filters) {
  if (filters.empty()) return true;
  for (const auto& f : filters) {
    if (f == group) return true;
    if (group.size() > f.size() && group.compare(0, f.size(), f) == 0 && group[f.size()] == '.') return true;
  }
  return false;
}

void validate(const SuiteConfig& c, const std::vector<int>& rank_ells, const std::vector<int>& appell_ells,
              const std::vector<int>& ks) {
  if (c.trunc < 20 || c.trunc > 2000) fail(ErrorCode::config, "trunc must lie in [20, 2000]");
  if (c.jet_order < 0 || c.jet_order > 40) fail(ErrorCode::config, "jet order must lie in [0, 40]");
  if (c.tol == 0.0 || std::isnan(c.tol)) fail(ErrorCode::config, "tol must be positive");
  if (c.n_tau < 1 || c.n_tau > 50) fail(ErrorCode::config, "n_tau must lie in [1, 50]");
  if (c.n_gamma < 0 || c.n_gamma > 100) fail(ErrorCode::config, "n_gamma must lie in [0, 100]");
  if (c.workers < 0) fail(ErrorCode::config, "workers must be non-negative");
  for (int l : rank_ells)
    if (l < 1 || l > 3) fail(ErrorCode::config, "rank level l must lie in {1, 2, 3}");
  for (int l : appell_ells)
    if (l < 1 || l > 3) fail(ErrorCode::config, "Appell level l must lie in {1, 2, 3}");
  for (int k : ks)
    if (k < 2 || k > 12 || k % 2 != 0) fail(ErrorCode::config, "Joyce weight k must be even in [2, 12]");
}

json params_json(const std::vector<std::pair<std::string, std::string>>& params) {
  json p = json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return p;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json report_json(const Report& r, bool timings) {
  json j;
  j["check_id"] = r.check_id;
  j["params"] = params_json(r.params);
  j["residual"] = number_or_null(r.residual);
  j["tolerance"] = number_or_null(r.tolerance);
  j["verdict"] = verdict_name(r.verdict);
  j["runtime_ms"] = timings ? r.runtime_ms : 0;
  if (!r.variant.empty()) j["variant"] = r.variant;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

const char* suite_name(Suite s) noexcept {
  switch (s) {
    case Suite::rank: return "rank";
    case Suite::joyce: return "joyce";
    case Suite::appell: return "appell";
    case Suite::theta: return "theta";
    case Suite::duke: return "duke";
    case Suite::all: return "all";
  }
  return "all";
}

Suite parse_suite(const std::string& s) {
  for (Suite x : {Suite::rank, Suite::joyce, Suite::appell, Suite::theta, Suite::duke, Suite::all})
    if (s == suite_name(x)) return x;
  fail(ErrorCode::config, "unknown suite '" + s + "' (expected rank, joyce, appell, theta, duke or all)");
}

std::vector<Sample> sample_inputs(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    const Tau tau(unit(rng) - 0.5, 0.8 + 1.2 * unit(rng));
    out.push_back({tau, sample_gamma(rng, tau)});
  }
  return out;
}

std::vector<Mobius> sample_gammas(std::uint64_t seed, const Tau& tau, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Mobius> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_gamma(rng, tau));
  return out;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    const std::string ell_law = "theta elliptic law: theta(z + l tau + m) = (-1)^{l+m} q^{-l^2/2} zeta^{-l} theta(z)";
    const std::string taylor = "Taylor completions psi_n, rho_n of a Jacobi form transform with weight k + n";
    const std::string appell_ell = "elliptic law of the completed Appell function A-hat_l";
    const std::string lower_r = "lowering of r_{2l-1} is a theta-type weight 3/2 form times the level-3 theta";
    const std::string rhat = "R-hat = zeta^{1/2} q^{-1/24} R + non-holomorphic S-correction as a Jacobi form";
    const std::string nonhol = "non-holomorphic part of M as an eta period integral and incomplete gamma sum";
    const std::string jlower = "lowering of J-hat_k is a sum of theta_{l,nu} conj(theta_nu) terms";
    std::vector<CatalogEntry> e = {
        // theta
        {"exactq.triple_product", "theta", "theta.exact", "Jacobi triple product for theta(z; tau)", false},
        {"exactq.rewritetheta", "theta", "theta.exact", "vartheta_{-1} = -theta_1(2 tau), vartheta_0 = -theta_3(2 tau)", false},
        {"special.incomplete_gamma", "theta", "theta.incomplete_gamma",
         "Gamma(1/2, x) recursion and sgn(n) - E(n sqrt(2v)) as an incomplete gamma value", false},
        {"special.theta.elliptic", "theta", "theta.elliptic", ell_law, false},
        {"special.lowering.calibration", "theta", "theta.lowering",
         "lowering operator L = -2 i v^2 d/d(conj tau) on 1/v, E2-hat and eta", false},
        {"special.theta.modular", "theta", "theta.modular",
         "theta(z/(c tau + d); g tau) = psi^3 (c tau + d)^{1/2} e^{pi i c z^2/(c tau + d)} theta(z; tau)", false},
        {"special.e2.transform", "theta", "theta.e2", "E2 quasimodular transformation", false},
        {"special.e2hat.transform", "theta", "theta.e2", "E2-hat = E2 - 3/(pi v) has weight 2", false},
        {"special.eta.multiplier", "theta", "theta.eta", "eta multiplier psi(gamma) is a 24th root of unity", false},
        {"jets.theta8.psi", "theta", "theta.theta8", taylor, false},
        {"jets.theta8.rho", "theta", "theta.theta8", taylor, false},
        {"jets.theta_quotient.psi", "theta", "theta.theta8", taylor, false},
        {"jets.theta_quotient.rho", "theta", "theta.theta8", taylor, false},
        // appell
        {"appell.elliptic", "appell", "appell.elliptic", appell_ell, false},
        {"appell.torsion", "appell", "appell.elliptic", appell_ell, false},
        {"appell.modular", "appell", "appell.modular", "modular law of the completed Appell function A-hat_l", false},
        {"appell.rank_lerch", "appell", "appell.rank_lerch", "rank generating function through A_3(z, -tau; tau)", false},
        {"appell.S_even", "appell", "appell.S_even", "S(z; tau) is even in z", false},
        // rank
        {"exactq.rank_table", "rank", "rank.exact", "rank generating function R(zeta; q) = sum N(m, n) zeta^m q^n", false},
        {"exactq.rank_sum", "rank", "rank.exact", "sum_m N(m, n) = p(n)", false},
        {"exactq.congruences", "rank", "rank.exact", "Ramanujan congruences modulo 5, 7 and 11", false},
        {"exactq.rank_specializations", "rank", "rank.exact", "R(1; q) = P(q) and R(-1; q) = f(q)", false},
        {"exactq.taylor_r", "rank", "rank.exact", "Taylor expansion of R in z through the moment series N_{2l}", false},
        {"rank.transform.ST", "rank", "rank.transform",
         "r_{2l-1}(g tau) = psi(g)^{-1} (c tau + d)^{2l - 1/2} r_{2l-1}(tau)", false},
        {"rank.lowering.Lsl", "rank", "rank.lowering", lower_r, false},
        {"rank.lowering.Lsl.adjudication", "rank", "rank.lowering", lower_r, true},
        {"rank.lowering.plus_holomorphic", "rank", "rank.lowering", "r^+_{2l-1} is holomorphic", false},
        {"rank.lowering.ratio", "rank", "rank.lowering", lower_r, false},
        {"rank.rhat.assembly", "rank", "rank.rhat", rhat, false},
        {"rank.rhat.parity", "rank", "rank.rhat", rhat, false},
        {"rank.rhat.laurent", "rank", "rank.rhat", rhat, false},
        {"rank.rminus.bracket", "rank", "rank.rhat", "r^-_{2l-1} as the two-term S bracket", false},
        // duke
        {"duke.match", "duke", "duke.match", "r_1 / (2 pi i) = M^+ + non-holomorphic part", false},
        {"duke.mplus", "duke", "duke.match", "r^+_1 / (2 pi i) = M^+ in terms of N_2, eta and E2", false},
        {"duke.nonhol3", "duke", "duke.match", nonhol, false},
        {"duke.nonhol3.lhs_incomplete", "duke", "duke.match", nonhol, false},
        {"duke.nonhol3.rhs_incomplete", "duke", "duke.match", nonhol, false},
        {"duke.single_term", "duke", "duke.single_term",
         "int e^{2 pi i m w} (-i(tau + w))^{-3/2} dw = i sqrt(2 pi m) Gamma(-1/2, 4 pi m v) q^{-m}", false},
        {"special.period.eta", "duke", "duke.period", "eta period integral as a sum of single-term integrals", false},
        // joyce
        {"exactq.comparebin", "joyce", "joyce.exact", "gamma-function identity for the bracket coefficients", false},
        {"joyce.transform", "joyce", "joyce.transform", "J-hat_k(g tau) = (c tau + d)^k J-hat_k(tau)", false},
        {"joyce.lowering", "joyce", "joyce.lowering", jlower, false},
        {"joyce.lowering.adjudication", "joyce", "joyce.lowering", jlower, true},
        {"joyce.appell_limit", "joyce", "joyce.appell_limit", "J_k = g_{k-1}/2 from the Appell limit w -> 0", false},
        {"joyce.ghat", "joyce", "joyce.ghat", "g-hat_{k-1} = 2 J-hat_k from the completed Appell limit", false},
        {"joyce.difference", "joyce", "joyce.ghat", "g-hat_l - g_l as a theta times S jet", false},
        {"joyce.s_nu", "joyce", "joyce.s_nu", "s_nu as the z-derivative of S_nu at 0", false},
        {"joyce.s_nu.adjudication", "joyce", "joyce.s_nu", "s_nu as the z-derivative of S_nu at 0", true},
        {"joyce.heat", "joyce", "joyce.heat", "heat equation relating d^3/dz^3 S_nu and D s_nu", false},
        {"joyce.theta_ln", "joyce", "joyce.theta_ln", "almost-holomorphic expansion of theta_{l,nu}", false},
        {"joyce.theta_ln.adjudication", "joyce", "joyce.theta_ln", "almost-holomorphic expansion of theta_{l,nu}", true},
        {"joyce.im_identity", "joyce", "joyce.im_identity", "1/Im(g tau) = (c tau + d)^2 / v - 2 i c (c tau + d)", false},
        {"joyce.gamma14", "joyce", "joyce.gamma14", "vartheta*_nu transforms on Gamma_1(4) with multiplier chi_nu", false},
        {"joyce.gamma14.adjudication", "joyce", "joyce.gamma14",
         "vartheta*_nu transforms on Gamma_1(4) with multiplier chi_nu", true},
    };
    return e;
  }();
  return entries;
}

std::vector<std::string> groups(Suite s) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (Suite x : expand(s))
    for (const auto& e : catalog())
      if (e.suite == suite_name(x) && seen.insert(e.group).second) out.push_back(e.group);
  return out;
}

int workers_from_env() {
  const char* env = std::getenv("MOCKMOD_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 256) fail(ErrorCode::config, std::string("MOCKMOD_WORKERS must be an integer in [1, 256], got '") + env + "'");
  return static_cast<int>(n);
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  Context ctx{cfg, {}, {}, {}, {}, {}};
  ctx.rank_ells = cfg.ells.empty() ? std::vector<int>{1, 2, 3} : cfg.ells;
  ctx.appell_ells = cfg.ells.empty() ? std::vector<int>{2, 3} : cfg.ells;
  ctx.ks = cfg.ks.empty() ? std::vector<int>{2, 4, 6} : cfg.ks;
  validate(cfg, ctx.rank_ells, ctx.appell_ells, ctx.ks);
  const int workers = cfg.workers > 0 ? cfg.workers : workers_from_env();

  const auto known = groups(cfg.suite);
  for (const auto& f : cfg.checks) {
    const bool hit = std::any_of(known.begin(), known.end(), [&](const std::string& g) { return group_selected(g, {f}); });
    if (!hit) fail(ErrorCode::config, "unknown check group '" + f + "' for suite " + suite_name(cfg.suite));
  }

  ctx.samples = sample_inputs(cfg.seed, cfg.n_tau);
  for (std::size_t i = 0; i < ctx.samples.size(); ++i) {
    std::vector<Mobius> gs{Mobius::S(), Mobius::T()};
    for (const Mobius& g : sample_gammas(mix(cfg.seed, i + 1), ctx.samples[i].tau, cfg.n_gamma)) gs.push_back(g);
    ctx.gammas.push_back(std::move(gs));
  }

  std::vector<Task> all;
  for (Suite s : expand(cfg.suite)) add_tasks(s, ctx, all);
  std::vector<Task> tasks;
  for (auto& t : all)
    if (group_selected(t.group, cfg.checks)) tasks.push_back(std::move(t));

  std::vector<std::vector<Report>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      Stopwatch sw;
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& ex) {
        Report r = make_report(tasks[i].check_id, std::numeric_limits<double>::infinity(), 0.0);
        r.params = tasks[i].params;
        r.note = std::string("exception: ") + ex.what();
        r.runtime_ms = sw.elapsed_ms();
        results[i] = {std::move(r)};
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SuiteResult out;
  for (auto& rs : results)
    for (auto& r : rs) out.reports.push_back(std::move(r));
  for (auto& r : out.reports) {
    if (r.verdict == Verdict::variant || is_adjudication_id(r.check_id)) continue;
    // exact checks keep tolerance 0; an override never loosens agreement of rationals
    if (cfg.tol > 0.0 && r.check_id.rfind("exactq.", 0) != 0) {
      r.tolerance = cfg.tol;
      r.finalize();
    }
  }
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const Report& a, const Report& b) { return a.check_id < b.check_id; });
  out.exit_code = std::all_of(out.reports.begin(), out.reports.end(), [](const Report& r) { return r.passed(); }) ? 0 : 1;
  return out;
}

std::vector<CoverageRow> coverage(const std::vector<Report>& reports) {
  std::vector<CoverageRow> rows;
  std::map<std::string, std::size_t> index;
  for (const auto& e : catalog()) {
    auto [it, fresh] = index.emplace(e.anchor, rows.size());
    if (fresh) rows.push_back({e.anchor, {}, 0, 0});
    rows[it->second].check_ids.push_back(e.check_id);
  }
  std::map<std::string, std::size_t> by_id;
  for (const auto& e : catalog()) by_id[e.check_id] = index[e.anchor];
  for (const auto& r : reports) {
    auto it = by_id.find(r.check_id);
    if (it == by_id.end()) continue;
    rows[it->second].reports += 1;
    rows[it->second].failed += r.passed() ? 0 : 1;
  }
  return rows;
}

std::string report_to_json(const Report& r) { return report_json(r, true).dump(); }

std::string to_json(const SuiteConfig& cfg, const SuiteResult& result, bool timings) {
  json j;
  json c;
  c["suite"] = suite_name(cfg.suite);
  c["seed"] = cfg.seed;
  c["trunc"] = cfg.trunc;
  c["jet_order"] = cfg.jet_order;
  c["tol"] = number_or_null(cfg.tol > 0.0 ? cfg.tol : std::numeric_limits<double>::quiet_NaN());
  c["precision"] = precision_name(cfg.precision);
  c["ells"] = cfg.ells;
  c["ks"] = cfg.ks;
  c["checks"] = cfg.checks;
  c["n_tau"] = cfg.n_tau;
  c["n_gamma"] = cfg.n_gamma;
  j["config"] = c;

  int passed = 0, failed = 0, variants = 0;
  std::int64_t total_ms = 0;
  for (const auto& r : result.reports) {
    passed += r.verdict == Verdict::pass;
    failed += r.verdict == Verdict::fail;
    variants += r.verdict == Verdict::variant;
    total_ms += r.runtime_ms;
  }
  json s;
  s["reports"] = result.reports.size();
  s["passed"] = passed;
  s["failed"] = failed;
  s["variants"] = variants;
  s["exit_code"] = result.exit_code;
  s["runtime_ms"] = timings ? total_ms : 0;
  j["summary"] = s;

  json reps = json::array();
  for (const auto& r : result.reports) reps.push_back(report_json(r, timings));
  j["reports"] = reps;

  json cov = json::array();
  for (const auto& row : coverage(result.reports)) {
    if (row.reports == 0) continue;
    json x;
    x["anchor"] = row.anchor;
    x["check_ids"] = row.check_ids;
    x["reports"] = row.reports;
    x["failed"] = row.failed;
    cov.push_back(x);
  }
  j["coverage"] = cov;
  return j.dump(2);
}

std::string catalog_json() {
  json arr = json::array();
  for (const auto& e : catalog()) {
    json x;
    x["check_id"] = e.check_id;
    x["suite"] = e.suite;
    x["group"] = e.group;
    x["anchor"] = e.anchor;
    x["adjudication"] = e.adjudication;
    arr.push_back(x);
  }
  return arr.dump(2);
}

}  // namespace mockmod::harness
