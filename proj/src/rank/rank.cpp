#include "mockmod/rank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "mockmod/appell.hpp"
#include "mockmod/exactq.hpp"

namespace mockmod::rank {

namespace {

double factorial_d(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_ell(int ell, int lo, int hi) {
  if (ell < lo || ell > hi)
    fail(ErrorCode::domain, "rank: l must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// l = 3 checks are ill-conditioned in binary64 and always use compensated sums.
Precision effective(int ell, Precision p) { return ell >= 3 ? Precision::dd : p; }

double tol_or(const CheckOptions& o, double dflt) { return o.tol > 0.0 ? o.tol : dflt; }

void add_common(Report& r, const Tau& tau, const CheckOptions& o, Precision p) {
  r.add_param("tau", fmt_tau(tau));
  r.add_param("trunc", std::to_string(o.trunc));
  r.add_param("precision", precision_name(p));
}

double max_abs(const jets::Jet& j) {
  double m = 0.0;
  for (int a = 0; a <= j.order(); ++a)
    for (int b = 0; a + b <= j.order(); ++b) m = std::max(m, std::abs(j.coeff(a, b)));
  return m;
}

}  // namespace

MomentSeries::MomentSeries(int trunc) : trunc_(trunc) {
  if (trunc < 10) fail(ErrorCode::domain, "rank: truncation must be at least 10");
  const exactq::RankTable table = exactq::rank_table(trunc);
  for (int j = 0; j <= kMaxJ; ++j)
    series_.emplace_back(exactq::rank_moment_series(table, j, trunc).shifted(-1, 24));
}

const MomentSeries& MomentSeries::get(int trunc) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<MomentSeries>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(trunc);
  if (it == cache.end()) it = cache.emplace(trunc, std::unique_ptr<MomentSeries>(new MomentSeries(trunc))).first;
  return *it->second;
}

cplx MomentSeries::shifted_value(int j, const Tau& tau, Precision p) const {
  if (j < 0 || j > kMaxJ) fail(ErrorCode::domain, "rank: moment index out of range");
  return series_[static_cast<std::size_t>(j)].eval(tau, p).value;
}

cplx r_plus(int ell, const Tau& tau, int trunc, Precision p) {
  check_ell(ell, 0, MomentSeries::kMaxJ);
  const MomentSeries& ms = MomentSeries::get(trunc);
  const cplx e2 = special::e2_value(tau, false, p) / 8.0;
  std::vector<cplx> nj;
  for (int j = 0; j <= ell; ++j) nj.push_back(ms.shifted_value(j, tau, p) / factorial_d(2 * j));
  SeriesSum acc(p);
  for (int j = 0; j <= ell; ++j)
    for (int n = 0; j + n <= ell; ++n) {
      const int m = ell - j - n;
      const double b = exactq::bernoulli_half(2 * n).get_d() / (factorial_d(2 * n) * factorial_d(m));
      acc.add(b * std::pow(e2, m) * nj[static_cast<std::size_t>(j)]);
    }
  return std::pow(cplx(0.0, 2.0 * kPi), 2 * ell - 1) * acc.value();
}

jets::Jet shifted_S_jet(int sign, const Tau& tau, int order, Precision p) {
  if (sign != 1 && sign != -1) fail(ErrorCode::domain, "shifted_S_jet: sign must be +1 or -1");
  const double s = static_cast<double>(sign);
  jets::Jet j = jets::jet_product(jets::expand_block(jets::ExpLinear{cplx(0.0, -2.0 * kPi * s)}, tau, order, p),
                                  jets::zwegers_S_jet(3.0, s, 0.0, 3, tau, order, p));
  j *= q_power(tau, -1.0, 6.0);
  return j;
}

namespace {

jets::Jet gaussian_e2(const Tau& tau, int order, Precision p) {
  return jets::expand_block(jets::Gaussian{-0.5 * kPi * kPi * special::e2_value(tau, false, p)}, tau, order, p);
}

}  // namespace

cplx r_minus(int ell, const Tau& tau, Precision p) {
  check_ell(ell, 1, MomentSeries::kMaxJ);
  const int N = 2 * ell - 1;
  return jets::jet_product(shifted_S_jet(1, tau, N, p), gaussian_e2(tau, N, p)).coeff(N, 0);
}

cplx r_minus_bracket(int ell, const Tau& tau, Precision p) {
  check_ell(ell, 1, MomentSeries::kMaxJ);
  const int N = 2 * ell - 1;
  const jets::Jet b = 0.5 * (shifted_S_jet(1, tau, N, p) - shifted_S_jet(-1, tau, N, p));
  return jets::jet_product(b, gaussian_e2(tau, N, p)).coeff(N, 0);
}

RankCompletion r_total(int ell, const Tau& tau, int trunc, Precision p) {
  RankCompletion r;
  r.ell = ell;
  r.tau = tau;
  r.trunc = trunc;
  r.jet_order = std::max(0, 2 * ell - 1);
  r.r_plus = r_plus(ell, tau, trunc, p);
  r.r_minus = ell == 0 ? cplx(0.0, 0.0) : r_minus(ell, tau, p);
  r.r_total = r.r_plus + r.r_minus;
  return r;
}

Report check_rank_transform(int ell, const Mobius& g, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  check_ell(ell, 1, 3);
  const Precision p = effective(ell, o.precision);
  const RankCompletion rc = r_total(ell, tau, o.trunc, p);
  const cplx base = rc.r_total;
  // r^+ and r^- cancel exactly at fixed points such as tau = i; measure against the parts then
  const double scale = std::max(std::abs(base), std::abs(rc.r_plus));
  if (scale < 1e-10) fail(ErrorCode::numeric, "rank transform: |r(tau)| too small, resample tau");
  const cplx lhs = r_total(ell, g.apply(tau), o.trunc, p).r_total;
  const cplx rhs = principal_halfpower(g.automorphy(tau), 4 * ell - 1) / special::eta_multiplier(g, tau) * base;
  Report r = make_report("rank.transform.ST", std::abs(lhs - rhs) / scale, tol_or(o, 1e-6));
  r.add_param("ell", std::to_string(ell));
  r.add_param("gamma", g.to_string());
  add_common(r, tau, o, p);
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

std::vector<Report> check_rank_lowering(int ell, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  check_ell(ell, 1, 3);
  const Precision p = effective(ell, o.precision);
  const auto L = special::lowering_numeric([&](const Tau& t) { return r_total(ell, t, o.trunc, p).r_total; }, tau);
  const double v = tau.v();
  const cplx common = kI * std::sqrt(1.5) * std::sqrt(v) / factorial_d(ell - 1) *
                      std::pow(-0.5 * kPi * kPi * special::e2_value(tau, true, p), ell - 1);
  const cplx eta = special::eta_value(tau, p);
  // conj(eta(-conj(tau))) = eta(tau); conj(eta(tau)) = eta(-conj(tau))
  const std::pair<const char*, cplx> readings[] = {
      {"+conj(eta(tau))", common * std::conj(eta)},
      {"-conj(eta(tau))", -common * std::conj(eta)},
      {"+eta(tau)", common * eta},
      {"-eta(tau)", -common * eta},
  };
  std::string note;
  double best = 1e300;
  std::string winner;
  for (const auto& [name, val] : readings) {
    const double res = std::abs(L.value - val) / std::abs(L.value);
    note += std::string(note.empty() ? "" : "; ") + name + " residual " + fmt_double(res);
    if (res < best) {
      best = res;
      winner = name;
    }
  }
  Report r = make_report("rank.lowering.Lsl", best, tol_or(o, 1e-5));
  r.add_param("ell", std::to_string(ell));
  add_common(r, tau, o, p);
  r.variant = winner;
  r.note = L.noisy ? "finite-difference estimate flagged noisy" : "";
  r.runtime_ms = sw.elapsed_ms();
  Report adj = make_report("rank.lowering.Lsl.adjudication", best, tol_or(o, 1e-5));
  adj.params = r.params;
  adj.verdict = Verdict::variant;
  adj.variant = winner;
  adj.note = note;
  adj.runtime_ms = r.runtime_ms;
  return {r, adj};
}

Report check_rank_plus_holomorphic(int ell, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  check_ell(ell, 1, 3);
  const Precision p = effective(ell, o.precision);
  const auto L = special::lowering_numeric([&](const Tau& t) { return r_plus(ell, t, o.trunc, p); }, tau);
  const double scale = std::max(1.0, std::abs(r_plus(ell, tau, o.trunc, p)));
  Report r = make_report("rank.lowering.plus_holomorphic", std::abs(L.value) / scale, tol_or(o, 1e-7));
  r.add_param("ell", std::to_string(ell));
  add_common(r, tau, o, p);
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

Report check_rank_lowering_ratio(const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  const Precision p = o.precision;
  const auto L1 = special::lowering_numeric([&](const Tau& t) { return r_total(1, t, o.trunc, p).r_total; }, tau);
  const auto L2 = special::lowering_numeric([&](const Tau& t) { return r_total(2, t, o.trunc, p).r_total; }, tau);
  const cplx expect = -0.5 * kPi * kPi * special::e2_value(tau, true, p);
  Report r = make_report("rank.lowering.ratio", rel_residual(L2.value / L1.value, expect), tol_or(o, 1e-5));
  add_common(r, tau, o, p);
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

cplx incomplete_gamma_sum(const Tau& tau, Precision p) {
  const double v = tau.v();
  SeriesSum acc(p);
  for (int k = 0; k <= 80; ++k) {
    const int j = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;  // 0, -1, 1, -2, ...
    const double n = j - 1.0 / 6.0;
    const double x = 6.0 * kPi * n * n * v;
    // Gamma(-1/2, x) |q^{-3n^2/2}| = scaled * e^{-x + 3 pi n^2 v}
    const double mag = std::abs(n) * special::upper_gamma_scaled(-0.5, x).value_scaled * std::exp(-x + 3.0 * kPi * n * n * v);
    const double sg = ((j - 1) % 2 == 0) ? 1.0 : -1.0;
    acc.add(sg * mag * std::polar(1.0, 2.0 * kPi * std::fmod(-1.5 * n * n * tau.u(), 1.0)));
    if (k > 4 && mag < 1e-30 * std::abs(acc.value())) break;
  }
  return 3.0 / (2.0 * std::sqrt(kPi)) * acc.value();
}

cplx duke_nonholomorphic(const Tau& tau) {
  const auto I = special::period_integral(special::PeriodKind::eta24, Tau(tau.u() / 24.0, tau.v() / 24.0));
  return kI / (4.0 * std::sqrt(2.0) * kPi) * I.value;
}

std::vector<Report> duke_check(const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  const Precision p = o.precision;
  std::vector<Report> out;
  auto finish = [&](Report r) {
    add_common(r, tau, o, p);
    r.runtime_ms = sw.elapsed_ms();
    out.push_back(std::move(r));
  };
  const MomentSeries& ms = MomentSeries::get(o.trunc);
  const cplx eta = special::eta_value(tau, p);
  const cplx e2 = special::e2_value(tau, false, p);
  const cplx m_plus = 0.5 * ms.shifted_value(1, tau, p) - 1.0 / (24.0 * eta) + e2 / (8.0 * eta);
  const cplx nonhol = duke_nonholomorphic(tau);
  const RankCompletion r1 = r_total(1, tau, o.trunc, p);
  const cplx two_pi_i(0.0, 2.0 * kPi);
  const double match_scale = std::max(std::abs(m_plus + nonhol), std::abs(m_plus));
  finish(make_report("duke.match", std::abs(r1.r_total / two_pi_i - (m_plus + nonhol)) / match_scale, tol_or(o, 1e-7)));
  finish(make_report("duke.mplus", rel_residual(r1.r_plus / two_pi_i, m_plus), tol_or(o, 1e-10)));
  const cplx lhs = shifted_S_jet(1, tau, 1, p).coeff(1, 0) / two_pi_i;
  const cplx inc = incomplete_gamma_sum(tau, p);
  finish(make_report("duke.nonhol3", rel_residual(lhs, nonhol), tol_or(o, 1e-7)));
  finish(make_report("duke.nonhol3.lhs_incomplete", rel_residual(lhs, inc), tol_or(o, 1e-7)));
  finish(make_report("duke.nonhol3.rhs_incomplete", rel_residual(nonhol, inc), tol_or(o, 1e-7)));
  return out;
}

std::vector<Report> single_term_checks(const Tau& tau, int kmin, int kmax, double tol) {
  std::vector<Report> out;
  for (int k = kmin; k <= kmax; ++k) {
    Stopwatch sw;
    const double m = static_cast<double>((6 * k + 1) * (6 * k + 1));
    const auto I = special::period_integral(special::PeriodKind::single_term, tau, k);
    const cplx closed = 0.5 * kI * std::sqrt(kPi / 3.0) * std::sqrt(m) * special::upper_gamma(-0.5, kPi / 6.0 * m * tau.v()) *
                        q_power(tau, -m, 24.0);
    Report r = make_report("duke.single_term", rel_residual(I.value, closed), tol);
    r.add_param("k", std::to_string(k));
    r.add_param("tau", fmt_tau(tau));
    r.runtime_ms = sw.elapsed_ms();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Report> rhat_checks(const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  const Precision p = o.precision;
  const int N = 7;
  std::vector<Report> out;
  auto finish = [&](Report r) {
    add_common(r, tau, o, p);
    r.runtime_ms = sw.elapsed_ms();
    out.push_back(std::move(r));
  };
  using jets::Jet;
  const Jet G = gaussian_e2(tau, N, p);
  const Jet s = jets::expand_block(jets::ExpLinear{cplx(0.0, kPi)}, tau, N, p) -
                jets::expand_block(jets::ExpLinear{cplx(0.0, -kPi)}, tau, N, p);
  // (zeta^{1/2} - zeta^{-1/2}) R-hat, assembled from R and the two S terms
  const Jet h1 = jets::cauchy_taylor([&](cplx z) { return appell::rank_via_series(z, tau, p) * q_power(tau, -1.0, 24.0); }, N, tau);
  const Jet sb = 0.5 * (shifted_S_jet(1, tau, N, p) - shifted_S_jet(-1, tau, N, p));
  const Jet lhs = jets::jet_product(h1 + jets::jet_product(s, sb), G);
  // -(zeta^{1/2} - zeta^{-1/2}) A3-hat(z, 0) / eta
  const Jet h2 = jets::cauchy_taylor(
      [&](cplx z) {
        const cplx w = std::exp(kPi * kI * z) - std::exp(-kPi * kI * z);
        return -w * appell::appell_A({3, z, 0.0, tau}, p);
      },
      N, tau);
  const Tau t3(3.0 * tau.u(), 3.0 * tau.v());
  Jet comp(N, tau);
  for (int nu = 1; nu <= 2; ++nu) {
    const cplx th = special::theta_value(static_cast<double>(nu) * tau.value() + 1.0, t3, p);
    comp += th * jets::jet_product(jets::expand_block(jets::ExpLinear{cplx(0.0, 2.0 * kPi * nu)}, tau, N, p),
                                   jets::zwegers_S_jet(3.0, -static_cast<double>(nu), -1.0, 3, tau, N, p));
  }
  const Jet rhs = jets::jet_product(h2 - 0.5 * kI * jets::jet_product(s, comp), G) * (1.0 / special::eta_value(tau, p));
  const double scale = max_abs(lhs);
  double diff = 0.0, odd = 0.0;
  for (int a = 0; a <= N; ++a)
    for (int b = 0; a + b <= N; ++b) {
      diff = std::max(diff, std::abs(lhs.coeff(a, b) - rhs.coeff(a, b)));
      if ((a + b) % 2 == 1) odd = std::max(odd, std::abs(lhs.coeff(a, b)));
    }
  finish(make_report("rank.rhat.assembly", diff / scale, tol_or(o, 1e-8)));
  finish(make_report("rank.rhat.parity", odd / scale, tol_or(o, 1e-9)));
  // Laurent coefficients: [z^{2m}] of the assembled jet = sum_l s_{2m-2l+1} r_{2l-1}
  std::vector<cplx> r;
  for (int ell = 0; ell <= 3; ++ell) r.push_back(r_total(ell, tau, o.trunc, effective(ell, p)).r_total);
  double worst = 0.0;
  for (int m = 0; m <= 3; ++m) {
    cplx acc = 0.0;
    for (int ell = 0; ell <= m; ++ell) acc += s.coeff(2 * m - 2 * ell + 1, 0) * r[static_cast<std::size_t>(ell)];
    worst = std::max(worst, rel_residual(lhs.coeff(2 * m, 0), acc));
  }
  finish(make_report("rank.rhat.laurent", worst, tol_or(o, 1e-8)));
  double br = 0.0;
  for (int ell = 1; ell <= 3; ++ell) br = std::max(br, rel_residual(r_minus_bracket(ell, tau, p), r_minus(ell, tau, p)));
  finish(make_report("rank.rminus.bracket", br, tol_or(o, 1e-10)));
  return out;
}

}  // namespace mockmod::rank
