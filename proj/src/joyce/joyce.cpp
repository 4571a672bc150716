#include "mockmod/joyce.hpp"

#include <algorithm>
#include <cmath>

#include "mockmod/appell.hpp"
#include "mockmod/jets.hpp"
#include "mockmod/special.hpp"

namespace mockmod::joyce {

namespace {

double factorial_d(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binom_d(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial_d(n) / (factorial_d(k) * factorial_d(n - k));
}

void check_k(int k) {
  if (k < 2 || k % 2 != 0) fail(ErrorCode::domain, "joyce: k must be even and >= 2");
}

void check_nu(int nu) {
  if (nu != -1 && nu != 0) fail(ErrorCode::domain, "joyce: nu must be -1 or 0");
}

void check_odd_ell(int ell) {
  if (ell < 1 || ell % 2 == 0) fail(ErrorCode::domain, "joyce: l must be odd and positive");
}

double tol_or(const CheckOptions& o, double dflt) { return o.tol > 0.0 ? o.tol : dflt; }

void add_common(Report& r, const Tau& tau, const CheckOptions& o) {
  r.add_param("tau", fmt_tau(tau));
  r.add_param("precision", precision_name(o.precision));
}

cplx i_power(std::int64_t n) {
  static const cplx table[] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return table[((n % 4) + 4) % 4];
}

Report adjudication(const std::string& id, const Report& base, double residual, const std::string& winner,
                    const std::string& note) {
  Report adj = make_report(id, residual, base.tolerance);
  adj.params = base.params;
  adj.verdict = Verdict::variant;
  adj.variant = winner;
  adj.note = note;
  adj.runtime_ms = base.runtime_ms;
  return adj;
}

// vartheta(z + nu tau + 1/2; 2 tau) e^{pi i nu z} q^{nu^2/4} as a jet
jets::Jet theta_block(int nu, const Tau& tau, int order, Precision p) {
  jets::Jet j = jets::jet_product(jets::expand_block(jets::ThetaShifted{1.0, double(nu), 0.5, 2}, tau, order, p),
                                  jets::expand_block(jets::ExpLinear{cplx(0.0, kPi * nu)}, tau, order, p));
  j *= q_power(tau, double(nu * nu), 4.0);
  return j;
}

}  // namespace

cplx joyce_series(int k, const Tau& tau, Precision p) {
  check_k(k);
  SeriesSum acc(p);
  for (int n = 1; n < 100000; ++n) {
    const cplx qn = q_power(tau, double(n));
    const cplx t = std::pow(double(n), k - 1) * q_power(tau, double(n) * n) * (1.0 + qn) / (1.0 - qn);
    acc.add(t);
    if (n > 2 && std::abs(t) < 1e-18 * std::abs(acc.value())) break;
  }
  return 0.5 * acc.value();
}

cplx theta_nu(int nu, const Tau& tau, int d_order, Precision p) {
  check_nu(nu);
  if (d_order < 0) fail(ErrorCode::domain, "theta_nu: derivative order must be >= 0");
  SeriesSum acc(p);
  const double shift = nu == 0 ? 0.5 : 0.0;
  for (int n = 0; n < 100000; ++n) {
    const double m = n + shift;
    const double e = m * m;
    const double mult = m == 0.0 ? 1.0 : 2.0;
    const cplx t = mult * (d_order == 0 ? 1.0 : std::pow(e, d_order)) * q_power(tau, e);
    acc.add(t);
    if (n > 2 && std::abs(t) < 1e-18 * std::abs(acc.value())) break;
  }
  return -acc.value();
}

double s_nu_term_modulus(double m, const Tau& tau) {
  const double v = tau.v();
  if (m == 0.0) return 1.0 / std::sqrt(v);
  const double x = 4.0 * kPi * m * m * v;
  return std::sqrt(kPi) * std::abs(m) * special::upper_gamma_scaled(-0.5, x).value_scaled * std::exp(-2.0 * kPi * m * m * v);
}

cplx s_nu(int nu, const Tau& tau, int d_order, Precision p) {
  check_nu(nu);
  if (d_order < 0) fail(ErrorCode::domain, "s_nu: derivative order must be >= 0");
  const double v = tau.v();
  // (1/sqrt v)^{(r)} coefficients: prod_{s<r} (-3/2 - s), for the v^{-3/2} e^{-a v} derivatives
  std::vector<double> P(static_cast<std::size_t>(d_order + 1), 1.0);
  for (int r = 1; r <= d_order; ++r) P[static_cast<std::size_t>(r)] = P[static_cast<std::size_t>(r - 1)] * (-1.5 - (r - 1));
  SeriesSum acc(p);
  const double shift = nu == -1 ? 0.0 : 0.5;
  for (int n = 0; n < 10000; ++n) {
    const double m = n + shift;
    const double m2 = m * m;
    const double a = 4.0 * kPi * m2;
    const double decay = std::exp(-2.0 * kPi * m2 * v);  // |q^{-m^2}| e^{-a v}
    // D acts on f(v) q^{-m^2} as f -> -m^2 f - f'(v) / (4 pi); sqrt(pi)|m| f^{(i)} = -1/2 (v^{-3/2} e^{-a v})^{(i-1)}
    double val = std::pow(-m2, d_order) * s_nu_term_modulus(m, tau);
    for (int i = 1; i <= d_order; ++i) {
      double bi = 0.0;
      for (int r = 0; r <= i - 1; ++r)
        bi += binom_d(i - 1, r) * P[static_cast<std::size_t>(r)] * std::pow(v, -1.5 - r) * std::pow(-a, i - 1 - r);
      bi *= -0.5 * decay;
      val += binom_d(d_order, i) * std::pow(-m2, d_order - i) * std::pow(-1.0 / (4.0 * kPi), i) * bi;
    }
    const double mult = m == 0.0 ? 1.0 : 2.0;
    const double ph = -m2 * tau.u();
    const cplx t = mult * val * std::polar(1.0, 2.0 * kPi * (ph - std::floor(ph)));
    acc.add(t);
    if (n > 3 && std::abs(t) < 1e-18 * std::abs(acc.value())) break;
  }
  return acc.value();
}

cplx s_nu_literal(int nu, const Tau& tau, Precision p) {
  check_nu(nu);
  SeriesSum acc(p);
  // n runs over (nu + 1)/2 + Z and the summand depends on m = n + nu/2
  const double nshift = nu == -1 ? 0.0 : 0.5;
  for (int j = 0; j < 10000; ++j) {
    cplx t = 0.0;
    for (const double n : {nshift + j, nshift - j - 1.0}) {
      const double m = n + 0.5 * nu;
      const double ph = -m * m * tau.u();
      t += s_nu_term_modulus(m, tau) * std::polar(1.0, 2.0 * kPi * (ph - std::floor(ph)));
    }
    acc.add(t);
    if (j > 3 && std::abs(t) < 1e-18 * std::abs(acc.value())) break;
  }
  return acc.value();
}

cplx s_nu_from_jet(int nu, const Tau& tau, Precision p) {
  check_nu(nu);
  jets::Jet j = jets::jet_product(jets::expand_block(jets::ExpLinear{cplx(0.0, -kPi * nu)}, tau, 1, p),
                                  jets::zwegers_S_jet(1.0, double(nu), 0.5, 2, tau, 1, p));
  return q_power(tau, -double(nu * nu), 4.0) * j.coeff(1, 0);
}

cplx theta_ln(int ell, int nu, const Tau& tau, Precision p) {
  check_nu(nu);
  if (ell < 1) fail(ErrorCode::domain, "theta_ln: l must be >= 1");
  const int order = std::max(ell - 1, 1);
  const jets::Jet j = jets::jet_product(theta_block(nu, tau, order, p),
                                        jets::expand_block(jets::Gaussian{kPi / (4.0 * tau.v())}, tau, order, p));
  return factorial_d(ell - 1) * j.coeff(ell - 1, 0);
}

cplx theta_ln_expansion(int ell, int nu, const Tau& tau, bool central_factorial, Precision p) {
  check_nu(nu);
  if (ell < 1) fail(ErrorCode::domain, "theta_ln: l must be >= 1");
  const double g = kPi / (4.0 * tau.v());
  const cplx two_pi_i(0.0, 2.0 * kPi);
  cplx acc = 0.0;
  for (int j = 0; 2 * j <= ell - 1; ++j) {
    const int r = ell - 1 - 2 * j;
    if (r % 2 != 0) continue;  // the theta block is even in z
    // [d^{2i} vartheta_nu(z)]_0 = (2 pi i)^{2i} D^i vartheta_nu
    const cplx deriv = std::pow(two_pi_i, r) * theta_nu(nu, tau, r / 2, p);
    const double cj = central_factorial ? factorial_d(2 * j) : 1.0;
    acc += binom_d(ell - 1, 2 * j) * deriv * cj * std::pow(g, j) / factorial_d(j);
  }
  return acc;
}

double completion_prefactor(int k) {
  check_k(k);
  const double sg = (k / 2 + 1) % 2 == 0 ? 1.0 : -1.0;
  const double g = std::tgamma(0.5 * (k - 1));
  return factorial_d(k - 2) * sg / (g * g * std::pow(2.0, k + 1));
}

cplx theta_s_bracket(int nu, int kappa, const Tau& tau, Precision p) {
  check_nu(nu);
  if (kappa < 0) fail(ErrorCode::domain, "theta_s_bracket: order must be >= 0");
  const exactq::Rational k1(1, 2), k2(3, 2);
  cplx acc = 0.0;
  for (int j = 0; j <= kappa; ++j) {
    const double c = exactq::rc_coefficient(k1, k2, kappa, j).get_d() * (j % 2 == 0 ? 1.0 : -1.0);
    acc += c * theta_nu(nu, tau, j, p) * s_nu(nu, tau, kappa - j, p);
  }
  return acc;
}

JoyceCompletion joyce_hat(int k, const Tau& tau, Precision p) {
  check_k(k);
  JoyceCompletion out;
  out.k = k;
  out.tau = tau;
  out.j_holo = joyce_series(k, tau, p);
  out.delta_term = k == 2 ? 1.0 / (8.0 * kPi * tau.v()) : 0.0;
  const int kappa = k / 2 - 1;
  out.bracket_term = completion_prefactor(k) * (theta_s_bracket(-1, kappa, tau, p) + theta_s_bracket(0, kappa, tau, p));
  out.total = out.j_holo + out.delta_term + out.bracket_term;
  return out;
}

exactq::Rational gamma_half_squared_over_pi(int ell) {
  check_odd_ell(ell);
  // Gamma(1/2)^2 = pi and Gamma(x + 1) = x Gamma(x)
  exactq::Rational g = 1;
  for (int i = 1; 2 * i + 1 <= ell; ++i) g *= exactq::Rational(2 * i - 1, 2);
  return g * g;
}

std::vector<ComparebinRow> comparebin_rows(int k_max) {
  if (k_max < 2) fail(ErrorCode::domain, "comparebin_rows: k_max must be >= 2");
  std::vector<ComparebinRow> out;
  for (int ell = 1; ell <= k_max - 1; ell += 2) {
    const int h = (ell - 1) / 2;
    const exactq::Rational pre = exactq::Rational(exactq::factorial(ell - 1)) /
                                 (gamma_half_squared_over_pi(ell) * exactq::Rational(exactq::Integer(1) << (1 + ell)));
    for (int j = 0; j <= h; ++j) {
      ComparebinRow row;
      row.ell = ell;
      row.j = j;
      row.lhs = exactq::Rational(exactq::binomial_poly(exactq::Rational(ell), 2 * j)) / 4;
      if ((h + j) % 2) row.lhs = -row.lhs;
      row.rhs = pre * exactq::rc_coefficient(exactq::Rational(1, 2), exactq::Rational(3, 2), h, j);
      if ((h + j) % 2) row.rhs = -row.rhs;
      out.push_back(row);
    }
  }
  return out;
}

cplx g_appell_limit(int ell, const Tau& tau, double* error, Precision p) {
  check_odd_ell(ell);
  const double scale = factorial_d(ell) / std::pow(2.0 * kPi, ell);
  const cplx ph = std::pow(cplx(0.0, -1.0), ell);  // i^{-l}
  const auto lv = appell::richardson_limit_even(
      [&](double w) { return appell::appell_A_z2_jet(2, w, -tau.value(), tau, ell, p).coeff(ell, 0); });
  if (error) *error = scale * lv.error;
  return scale * ph * lv.value;
}

cplx ghat_appell_limit(int ell, const Tau& tau, double* error, Precision p) {
  check_odd_ell(ell);
  const double scale = factorial_d(ell) / std::pow(2.0 * kPi, ell);
  const cplx ph = std::pow(cplx(0.0, -1.0), ell);
  const double v = tau.v();
  auto g = [&](double w) {
    jets::Jet comp(ell, tau);
    for (int nu = 0; nu <= 1; ++nu) {
      const cplx e = std::exp(cplx(0.0, 2.0 * kPi * nu * w));
      comp += e * jets::jet_product(jets::expand_block(jets::ThetaShifted{1.0, double(nu), 0.5, 2}, tau, ell, p),
                                    jets::zwegers_S_jet(-1.0, -double(nu), cplx(2.0 * w - 0.5, 0.0), 2, tau, ell, p));
    }
    const jets::Jet hat = appell::appell_A_z2_jet(2, w, 0.0, tau, ell, p) + 0.5 * kI * comp;
    const jets::Jet ex = jets::expand_block(jets::ExpLinear{kPi * w / v}, tau, ell, p);
    return jets::jet_product(ex, hat).coeff(ell, 0);
  };
  const auto lv = appell::richardson_limit_even(g);
  if (error) *error = scale * lv.error;
  return scale * ph * lv.value;
}

cplx difference_jet(int ell, const Tau& tau, Precision p) {
  check_odd_ell(ell);
  jets::Jet acc(ell, tau);
  for (int nu = -1; nu <= 0; ++nu)
    acc += jets::jet_product(jets::expand_block(jets::ThetaShifted{1.0, double(nu), 0.5, 2}, tau, ell, p),
                             jets::zwegers_S_jet(1.0, double(nu), 0.5, 2, tau, ell, p));
  const cplx d = factorial_d(ell) * acc.coeff(ell, 0) / std::pow(cplx(0.0, 2.0 * kPi), ell);
  return (ell == 1 ? 1.0 / (4.0 * kPi * tau.v()) : 0.0) + 0.5 * kI * d;
}

Report check_joyce_transform(int k, const Mobius& g, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  check_k(k);
  const JoyceCompletion base = joyce_hat(k, tau, o.precision);
  const double scale = std::max({std::abs(base.total), std::abs(base.j_holo), std::abs(base.bracket_term)});
  if (scale < 1e-12) fail(ErrorCode::numeric, "joyce transform: |J-hat(tau)| too small, resample tau");
  const cplx lhs = joyce_hat(k, g.apply(tau), o.precision).total;
  const cplx rhs = std::pow(g.automorphy(tau), k) * base.total;
  Report r = make_report("joyce.transform", std::abs(lhs - rhs) / scale, tol_or(o, 1e-6));
  r.add_param("k", std::to_string(k));
  r.add_param("gamma", g.to_string());
  add_common(r, tau, o);
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

std::vector<Report> check_joyce_lowering(int k, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  check_k(k);
  const Precision p = o.precision;
  struct Candidate {
    const char* name;
    double c0;       // constant term
    bool sqrt_v;     // sqrt(v) prefactor, otherwise 1/v
  };
  const double delta = k == 2 ? 1.0 : 0.0;
  std::vector<Candidate> cands = {{"sqrt(v), -delta/(8 pi)", -delta / (8.0 * kPi), true},
                                  {"1/v, -delta/(8 pi)", -delta / (8.0 * kPi), false}};
  if (k == 2) {
    cands.push_back({"sqrt(v), -1/(4 pi)", -1.0 / (4.0 * kPi), true});
    cands.push_back({"1/v, -1/(4 pi)", -1.0 / (4.0 * kPi), false});
  }
  const Tau points[] = {tau, Tau(tau.u(), 2.0 * tau.v())};
  std::vector<double> worst(cands.size(), 0.0);
  bool noisy = false;
  for (const Tau& t : points) {
    const auto L = special::lowering_numeric([&](const Tau& s) { return joyce_hat(k, s, p).total; }, t);
    noisy = noisy || L.noisy;
    const double v = t.v();
    const cplx th1 = -theta_nu(-1, t, 0, p), th3 = -theta_nu(0, t, 0, p);
    const cplx pair = std::conj(th1) * theta_ln(k - 1, -1, t, p) + std::conj(th3) * theta_ln(k - 1, 0, t, p);
    const cplx coef = -kI * double(k - 1) / (8.0 * std::pow(cplx(0.0, 2.0 * kPi), k - 1));
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const double pre = cands[i].sqrt_v ? std::sqrt(v) : 1.0 / v;
      const cplx rhs = cands[i].c0 + coef * pre * pair;
      worst[i] = std::max(worst[i], std::abs(L.value - rhs) / std::abs(L.value));
    }
  }
  std::size_t best = 0;
  std::string note;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    note += std::string(note.empty() ? "" : "; ") + cands[i].name + " residual " + fmt_double(worst[i]);
    if (worst[i] < worst[best]) best = i;
  }
  Report r = make_report("joyce.lowering", worst[best], tol_or(o, 1e-5));
  r.add_param("k", std::to_string(k));
  add_common(r, tau, o);
  r.add_param("v_points", fmt_double(tau.v()) + "," + fmt_double(2.0 * tau.v()));
  r.variant = cands[best].name;
  r.note = noisy ? "finite-difference estimate flagged noisy" : "";
  r.runtime_ms = sw.elapsed_ms();
  return {r, adjudication("joyce.lowering.adjudication", r, worst[best], cands[best].name, note)};
}

std::vector<Report> gamma1_4_theta_transform(const Mobius& g, const Tau& tau, cplx z, const CheckOptions& o) {
  Stopwatch sw;
  auto mod4 = [](std::int64_t x) { return ((x % 4) + 4) % 4; };
  if (mod4(g.c()) != 0) fail(ErrorCode::domain, "gamma1_4_theta_transform: c must be divisible by 4");
  if (mod4(g.a()) != 1 || mod4(g.d()) != 1) fail(ErrorCode::domain, "gamma1_4_theta_transform: a, d must be 1 mod 4");
  const Precision p = o.precision;
  auto thstar = [&](int nu, cplx w, const Tau& t) {
    return std::exp(kPi * kI * double(nu) * w) * q_power(t, double(nu * nu), 4.0) *
           special::theta_value(w + double(nu) * t.value() + 0.5, Tau(2.0 * t.u(), 2.0 * t.v()), p) *
           std::exp(kPi * w * w / (4.0 * t.v()));
  };
  const cplx j = g.automorphy(tau);
  const Tau gt = g.apply(tau);
  const Mobius h = validate_mobius(g.a(), 2 * g.b(), g.c() / 2, g.d());
  const cplx psi = special::eta_multiplier(h, tau);
  const cplx chi = psi * psi * psi * i_power(g.c() / 4);
  double res = 0.0, res_printed = 0.0;
  for (int nu = -1; nu <= 0; ++nu) {
    const cplx lhs = thstar(nu, z / j, gt);
    const cplx base = principal_halfpower(j, 1) * thstar(nu, z, tau);
    res = std::max(res, rel_residual(lhs, chi * i_power(nu * g.b()) * base));
    res_printed = std::max(res_printed, rel_residual(lhs, chi * base));
  }
  Report r = make_report("joyce.gamma14", res, tol_or(o, 1e-8));
  r.add_param("gamma", g.to_string());
  r.add_param("z", fmt_cplx(z));
  add_common(r, tau, o);
  r.add_param("chi_modulus", fmt_double(std::abs(chi)));
  r.variant = "chi i^(nu b)";
  r.runtime_ms = sw.elapsed_ms();
  const bool printed_wins = res_printed <= res;
  const std::string note = "chi i^(nu b) residual " + fmt_double(res) + "; chi residual " + fmt_double(res_printed);
  return {r, adjudication("joyce.gamma14.adjudication", r, std::min(res, res_printed),
                          printed_wins ? "chi" : "chi i^(nu b)", note)};
}

std::vector<Report> check_s_nu(int nu, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  const cplx jet = s_nu_from_jet(nu, tau, o.precision);
  const double res = rel_residual(s_nu(nu, tau, 0, o.precision), jet);
  const double res_lit = rel_residual(s_nu_literal(nu, tau, o.precision), jet);
  Report r = make_report("joyce.s_nu", res, tol_or(o, 1e-10));
  r.add_param("nu", std::to_string(nu));
  add_common(r, tau, o);
  r.variant = "m in (nu+1)/2 + Z";
  r.runtime_ms = sw.elapsed_ms();
  const std::string note = "m in (nu+1)/2 + Z residual " + fmt_double(res) + "; literal index residual " + fmt_double(res_lit);
  return {r, adjudication("joyce.s_nu.adjudication", r, std::min(res, res_lit),
                          res <= res_lit ? "m in (nu+1)/2 + Z" : "literal index", note)};
}

Report check_appell_limit(int k, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  check_k(k);
  double err = 0.0;
  const cplx g = g_appell_limit(k - 1, tau, &err, o.precision);
  Report r = make_report("joyce.appell_limit", rel_residual(0.5 * g, joyce_series(k, tau, o.precision)), tol_or(o, 1e-6));
  r.add_param("k", std::to_string(k));
  add_common(r, tau, o);
  r.note = "extrapolation error estimate " + fmt_double(err);
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

std::vector<Report> check_ghat(int k, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  check_k(k);
  const int ell = k - 1;
  double err = 0.0;
  const cplx gh = ghat_appell_limit(ell, tau, &err, o.precision);
  const JoyceCompletion jh = joyce_hat(k, tau, o.precision);
  Report a = make_report("joyce.ghat", rel_residual(gh, 2.0 * jh.total), tol_or(o, 1e-6));
  a.add_param("k", std::to_string(k));
  add_common(a, tau, o);
  a.note = "extrapolation error estimate " + fmt_double(err);
  a.runtime_ms = sw.elapsed_ms();
  const cplx diff = gh - 2.0 * jh.j_holo;
  Report b = make_report("joyce.difference", rel_residual(diff, difference_jet(ell, tau, o.precision)), tol_or(o, 1e-8));
  b.params = a.params;
  b.note = a.note;
  b.runtime_ms = sw.elapsed_ms();
  return {a, b};
}

Report check_im_identity(const Mobius& g, const Tau& tau, const CheckOptions& o) {
  const cplx j = g.automorphy(tau);
  const cplx rhs = j * j / tau.v() - 2.0 * kI * double(g.c()) * j;
  Report r = make_report("joyce.im_identity", rel_residual(1.0 / g.apply(tau).v(), rhs), tol_or(o, 1e-12));
  r.add_param("gamma", g.to_string());
  add_common(r, tau, o);
  return r;
}

std::vector<Report> check_theta_ln(int ell, const Tau& tau, const CheckOptions& o) {
  Stopwatch sw;
  double res = 0.0, res_printed = 0.0;
  for (int nu = -1; nu <= 0; ++nu) {
    const cplx jet = theta_ln(ell, nu, tau, o.precision);
    res = std::max(res, rel_residual(theta_ln_expansion(ell, nu, tau, true, o.precision), jet));
    res_printed = std::max(res_printed, rel_residual(theta_ln_expansion(ell, nu, tau, false, o.precision), jet));
  }
  Report r = make_report("joyce.theta_ln", res, tol_or(o, 1e-10));
  r.add_param("ell", std::to_string(ell));
  add_common(r, tau, o);
  r.variant = "with (2j)!";
  r.runtime_ms = sw.elapsed_ms();
  const std::string note = "with (2j)! residual " + fmt_double(res) + "; without residual " + fmt_double(res_printed);
  return {r, adjudication("joyce.theta_ln.adjudication", r, std::min(res, res_printed),
                          res <= res_printed ? "with (2j)!" : "without (2j)!", note)};
}

}  // namespace mockmod::joyce
