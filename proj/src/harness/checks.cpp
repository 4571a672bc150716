#include "checks.hpp"

#include <algorithm>
#include <cmath>

#include "mockmod/appell.hpp"
#include "mockmod/exactq.hpp"
#include "mockmod/jets.hpp"
#include "mockmod/joyce.hpp"
#include "mockmod/special.hpp"

namespace mockmod::harness::checks {

namespace {

Report finished(Report r, const Stopwatch& sw) {
  r.finalize();
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

Report exact_report(std::string id, bool ok, const Stopwatch& sw) {
  Report r = make_report(std::move(id), ok ? 0.0 : 1.0, 0.0);
  return finished(std::move(r), sw);
}

void add_point(Report& r, const Tau& tau) { r.add_param("tau", fmt_tau(tau)); }

void add_gamma(Report& r, const Mobius& g) { r.add_param("gamma", g.to_string()); }

std::vector<cplx> holomorphic_coeffs(const jets::Jet& j) {
  std::vector<cplx> c;
  for (int a = 0; a <= j.order(); ++a) c.push_back(j.coeff(a, 0));
  return c;
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

jets::Jet theta8_jet(const Tau& t, int order) {
  const jets::Jet th = jets::expand_block(jets::ThetaShifted{}, t, order);
  jets::Jet p = jets::Jet::constant(1.0, order, t);
  for (int i = 0; i < 8; ++i) p = jets::jet_product(p, th);
  return p;
}

}  // namespace

Report theta_elliptic(const Tau& tau, cplx z, double tol) {
  Stopwatch sw;
  const cplx base = special::theta_value(z, tau);
  double worst = 0.0;
  for (int l = -1; l <= 2; ++l) {
    for (int m = -1; m <= 2; ++m) {
      const cplx lhs = special::theta_value(z + double(l) * tau.value() + double(m), tau);
      const double sign = ((l + m) % 2 == 0) ? 1.0 : -1.0;
      const cplx rhs = sign * q_power(tau, -double(l * l), 2.0) * std::exp(-2.0 * kPi * kI * double(l) * z) * base;
      worst = std::max(worst, rel_residual(lhs, rhs));
    }
  }
  Report r = make_report("special.theta.elliptic", worst, tol);
  add_point(r, tau);
  r.add_param("z", fmt_cplx(z));
  r.add_param("shifts", "l, m in {-1, 0, 1, 2}");
  return finished(std::move(r), sw);
}

Report theta_modular(const Mobius& g, const Tau& tau, cplx z, double tol) {
  Stopwatch sw;
  const cplx j = g.automorphy(tau);
  const cplx psi = special::eta_multiplier(g, tau);
  const cplx lhs = special::theta_value(z / j, g.apply(tau));
  const cplx rhs = psi * psi * psi * principal_halfpower(j, 1) *
                   std::exp(kPi * kI * double(g.c()) * z * z / j) * special::theta_value(z, tau);
  Report r = make_report("special.theta.modular", rel_residual(lhs, rhs), tol);
  add_gamma(r, g);
  add_point(r, tau);
  r.add_param("z", fmt_cplx(z));
  return finished(std::move(r), sw);
}

Report e2_transform(const Mobius& g, const Tau& tau, double tol) {
  Stopwatch sw;
  const cplx j = g.automorphy(tau);
  const cplx lhs = special::e2_value(g.apply(tau));
  const cplx rhs = j * j * special::e2_value(tau) - 6.0 * kI * double(g.c()) / kPi * j;
  Report r = make_report("special.e2.transform", rel_residual(lhs, rhs), tol);
  add_gamma(r, g);
  add_point(r, tau);
  return finished(std::move(r), sw);
}

Report e2hat_transform(const Mobius& g, const Tau& tau, double tol) {
  Stopwatch sw;
  const cplx j = g.automorphy(tau);
  const cplx lhs = special::e2_value(g.apply(tau), true);
  const cplx rhs = j * j * special::e2_value(tau, true);
  // E2-hat has zeros in the fundamental domain, so scale by the holomorphic part too
  const double scale = std::max(std::abs(rhs), std::abs(j * j * special::e2_value(tau)));
  Report r = make_report("special.e2hat.transform", std::abs(lhs - rhs) / scale, tol);
  add_gamma(r, g);
  add_point(r, tau);
  return finished(std::move(r), sw);
}

Report eta_multiplier(const Mobius& g, const Tau& tau, double tol) {
  Stopwatch sw;
  const cplx raw = special::eta_multiplier_raw(g, tau);
  const cplx snapped = special::eta_multiplier(g, tau);
  const double res =
      std::max({std::abs(std::abs(raw) - 1.0), std::abs(std::pow(raw, 24) - 1.0), std::abs(snapped - raw)});
  Report r = make_report("special.eta.multiplier", res, tol);
  add_gamma(r, g);
  add_point(r, tau);
  r.note = "psi = " + fmt_cplx(snapped);
  return finished(std::move(r), sw);
}

Report incomplete_gamma(double tol) {
  Stopwatch sw;
  double worst = 0.0;
  for (double lx = -3.0; lx <= 2.5; lx += 0.25) {
    const double u = std::pow(10.0, lx);
    // Gamma(1/2, u) = -1/2 Gamma(-1/2, u) + u^{-1/2} e^{-u}, scaled by e^u
    const double lhs = special::upper_gamma(0.5, u, true);
    const double rhs = -0.5 * special::upper_gamma(-0.5, u, true) + 1.0 / std::sqrt(u);
    worst = std::max(worst, std::abs(lhs - rhs) * std::sqrt(u));
    // sgn(n) - E(sqrt(6v) n) = sgn(n) pi^{-1/2} Gamma(1/2, 6 pi n^2 v)
    for (double n : {-1.0 / 6.0, 5.0 / 6.0}) {
      const double v = u / (6.0 * kPi * n * n);
      const double a = special::sgn_minus_E(std::sqrt(6.0 * v) * n);
      const double b = (n > 0 ? 1.0 : -1.0) * special::upper_gamma(0.5, u) / std::sqrt(kPi);
      if (b != 0.0) worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  }
  Report r = make_report("special.incomplete_gamma", worst, tol);
  r.add_param("grid", "u = 10^x, x in [-3, 2.5] step 0.25");
  return finished(std::move(r), sw);
}

Report lowering_calibration(const Tau& tau, double tol) {
  Stopwatch sw;
  const auto inv_v = special::lowering_numeric([](const Tau& s) { return cplx(1.0 / s.v(), 0.0); }, tau);
  const auto e2h = special::lowering_numeric([](const Tau& s) { return special::e2_value(s, true); }, tau);
  const auto eta = special::lowering_numeric([](const Tau& s) { return special::eta_value(s); }, tau);
  const double res =
      std::max({std::abs(inv_v.value + 1.0), std::abs(e2h.value - 3.0 / kPi), std::abs(eta.value)});
  Report r = make_report("special.lowering.calibration", res, tol);
  add_point(r, tau);
  r.note = "L(1/v) = " + fmt_cplx(inv_v.value) + ", L(E2-hat) = " + fmt_cplx(e2h.value);
  return finished(std::move(r), sw);
}

std::vector<Report> theta8_completions(const Mobius& g, const Tau& tau, int order, double tol) {
  Stopwatch sw;
  const Tau gt = g.apply(tau);
  const cplx jt = g.automorphy(tau);
  const auto c0 = holomorphic_coeffs(theta8_jet(tau, order));
  const auto c1 = holomorphic_coeffs(theta8_jet(gt, order));
  // Coefficients vanish below z^8; residuals are measured against the jet scale
  // so the identically zero low orders enter as absolute checks.
  double worst_psi = 0.0, worst_rho = 0.0;
  for (int n = 0; n <= order; n += (n < 4 ? 1 : 2)) {
    const cplx f = std::pow(jt, 4 + n);
    const double scale = std::abs(f) * std::max(max_abs(c0), 1e-300);
    const cplx p0 = jets::taylor_completion_psi(c0, 4, tau, n), p1 = jets::taylor_completion_psi(c1, 4, gt, n);
    const cplx r0 = jets::taylor_completion_rho(c0, 4, tau, n), r1 = jets::taylor_completion_rho(c1, 4, gt, n);
    worst_psi = std::max(worst_psi, std::abs(p1 - f * p0) / scale);
    worst_rho = std::max(worst_rho, std::abs(r1 - f * r0) / scale);
  }
  // theta(2z)/theta(z): weight 0, index 3/2, trivial multiplier, nonzero from z^0 on
  auto quotient = [](const Tau& t) {
    return jets::cauchy_taylor(
        [&t](cplx z) { return special::theta_value(2.0 * z, t) / special::theta_value(z, t); }, 6, t, 0.2, 64);
  };
  const auto q0 = holomorphic_coeffs(quotient(tau));
  const auto q1 = holomorphic_coeffs(quotient(gt));
  double worst_qpsi = 0.0, worst_qrho = 0.0;
  for (int n = 0; n <= 4; ++n) {
    const cplx f = std::pow(jt, n);
    const double scale = std::abs(f) * max_abs(q0);
    worst_qpsi = std::max(worst_qpsi, std::abs(jets::taylor_completion_psi(q1, 1.5, gt, n) -
                                               f * jets::taylor_completion_psi(q0, 1.5, tau, n)) /
                                          scale);
    worst_qrho = std::max(worst_qrho, std::abs(jets::taylor_completion_rho(q1, 1.5, gt, n) -
                                               f * jets::taylor_completion_rho(q0, 1.5, tau, n)) /
                                          scale);
  }
  std::vector<Report> out;
  auto push = [&](const char* id, double res, const char* form, const char* orders) {
    Report r = make_report(id, res, tol);
    add_gamma(r, g);
    add_point(r, tau);
    r.add_param("form", form);
    r.add_param("n", orders);
    out.push_back(finished(std::move(r), sw));
  };
  push("jets.theta8.psi", worst_psi, "theta^8", "0..4, 6, 8, 10, 12");
  push("jets.theta8.rho", worst_rho, "theta^8", "0..4, 6, 8, 10, 12");
  push("jets.theta_quotient.psi", worst_qpsi, "theta(2z)/theta(z)", "0..4");
  push("jets.theta_quotient.rho", worst_qrho, "theta(2z)/theta(z)", "0..4");
  return out;
}

Report heat_equation(int nu, const Tau& tau, double tol) {
  Stopwatch sw;
  const jets::Jet j = jets::jet_product(jets::expand_block(jets::ExpLinear{cplx(0.0, -kPi * nu)}, tau, 3),
                                        jets::zwegers_S_jet(1.0, double(nu), 0.5, 2, tau, 3));
  const cplx d3 = 6.0 * q_power(tau, -double(nu * nu), 4.0) * j.coeff(3, 0);
  const cplx rhs = -std::pow(cplx(0.0, 2.0 * kPi), 2) * joyce::s_nu(nu, tau, 1);
  Report r = make_report("joyce.heat", rel_residual(d3, rhs), tol);
  r.add_param("nu", std::to_string(nu));
  add_point(r, tau);
  return finished(std::move(r), sw);
}

Report period_eta(const Tau& tau, double tol) {
  Stopwatch sw;
  const auto full = special::period_integral(special::PeriodKind::eta, tau);
  cplx sum = 0.0;
  for (int k = -8; k <= 8; ++k) sum += (k % 2 == 0 ? 1.0 : -1.0) * special::single_term_closed_form(k, tau);
  Report r = make_report("special.period.eta", rel_residual(full.value, sum), tol);
  add_point(r, tau);
  r.add_param("terms", "|k| <= 8");
  return finished(std::move(r), sw);
}

Report rank_lerch(cplx z, const Tau& tau, double tol) {
  Stopwatch sw;
  const cplx a = appell::rank_via_appell(z, tau), b = appell::rank_via_series(z, tau);
  Report r = make_report("appell.rank_lerch", rel_residual(a, b), tol);
  r.add_param("z", fmt_cplx(z));
  add_point(r, tau);
  return finished(std::move(r), sw);
}

Report zwegers_even(cplx z, const Tau& tau, double tol) {
  Stopwatch sw;
  const cplx a = appell::zwegers_S(z, tau), b = appell::zwegers_S(-z, tau);
  Report r = make_report("appell.S_even", rel_residual(a, b), tol);
  r.add_param("z", fmt_cplx(z));
  add_point(r, tau);
  return finished(std::move(r), sw);
}

Report triple_product(int order) {
  Stopwatch sw;
  Report r = exact_report("exactq.triple_product",
                          exactq::jacobi_theta_series(order) == exactq::triple_product_series(order), sw);
  r.add_param("order", std::to_string(order));
  return r;
}

Report rewrite_theta(int order) {
  Stopwatch sw;
  using exactq::ThetaKind;
  const auto t1 = exactq::theta_q_expansion(ThetaKind::theta1, order);
  const auto t3 = exactq::theta_q_expansion(ThetaKind::theta3, order);
  const bool m1 =
      exactq::theta_q_expansion(ThetaKind::vartheta_m1, order) == -t1.with_den(4).dilated(2).truncated(4 * order);
  const bool z0 = exactq::theta_q_expansion(ThetaKind::vartheta_0, order) == -t3.dilated(2).truncated(8 * order);
  Report r = exact_report("exactq.rewritetheta", m1 && z0, sw);
  r.add_param("order", std::to_string(order));
  if (!m1) r.note += "vartheta_{-1} differs; ";
  if (!z0) r.note += "vartheta_0 differs; ";
  return r;
}

Report rank_table_enumeration(int nmax) {
  Stopwatch sw;
  Report r = exact_report("exactq.rank_table", exactq::rank_table(nmax) == exactq::rank_table_enumerated(nmax), sw);
  r.add_param("nmax", std::to_string(nmax));
  return r;
}

Report rank_row_sums(int nmax) {
  Stopwatch sw;
  const auto t = exactq::rank_table(nmax);
  bool ok = true;
  for (int n = 0; n <= nmax; ++n) ok = ok && t.moment(0, n) == exactq::partition_number(n);
  Report r = exact_report("exactq.rank_sum", ok, sw);
  r.add_param("nmax", std::to_string(nmax));
  return r;
}

Report partition_congruences(int nmax) {
  Stopwatch sw;
  bool ok = true;
  std::string note;
  const int cases[3][2] = {{5, 4}, {7, 5}, {11, 6}};
  for (const auto& c : cases) {
    for (int n = 0; n <= nmax; ++n) {
      const exactq::Integer p = exactq::partition_number(std::int64_t(c[0]) * n + c[1]);
      if (p % c[0] != 0) {
        ok = false;
        note = "p(" + std::to_string(c[0] * n + c[1]) + ") not divisible by " + std::to_string(c[0]);
      }
    }
  }
  Report r = exact_report("exactq.congruences", ok, sw);
  r.add_param("nmax", std::to_string(nmax));
  r.note = note;
  return r;
}

Report rank_specializations(int order) {
  Stopwatch sw;
  const auto R = exactq::rank_generating_function(order + 1);
  const bool p = R.at_zeta(1) == exactq::partition_series(order + 1);
  const bool f = R.at_zeta(-1) == exactq::mock_theta_f(order + 1);
  Report r = exact_report("exactq.rank_specializations", p && f, sw);
  r.add_param("order", std::to_string(order));
  if (!p) r.note += "R(1) != P; ";
  if (!f) r.note += "R(-1) != f; ";
  return r;
}

Report taylor_r(int order) {
  Stopwatch sw;
  const auto R = exactq::rank_generating_function(order);
  const auto t = exactq::rank_table(order - 1);
  bool ok = true;
  for (int ell = 0; ell <= 3; ++ell) ok = ok && R.zeta_moment(2 * ell) == exactq::rank_moment_series(t, ell, order);
  Report r = exact_report("exactq.taylor_r", ok, sw);
  r.add_param("order", std::to_string(order));
  r.add_param("moments", "2l, l <= 3");
  return r;
}

Report comparebin(int k_max) {
  Stopwatch sw;
  const auto rows = joyce::comparebin_rows(k_max);
  int bad = 0;
  for (const auto& row : rows) bad += row.lhs == row.rhs ? 0 : 1;
  Report r = exact_report("exactq.comparebin", bad == 0 && !rows.empty(), sw);
  r.add_param("k_max", std::to_string(k_max));
  r.note = std::to_string(rows.size()) + " rows, " + std::to_string(bad) + " differ";
  return r;
}

}  // namespace mockmod::harness::checks
