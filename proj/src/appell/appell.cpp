#include "mockmod/appell.hpp"

#include <algorithm>
#include <cmath>

#include "mockmod/special.hpp"

namespace mockmod::appell {

namespace {

// e^{2 pi i w} with the real part of w reduced modulo 1 first.
cplx expi(cplx w) { return std::exp(-2.0 * kPi * w.imag()) * std::polar(1.0, 2.0 * kPi * std::fmod(w.real(), 1.0)); }

double parity(std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

void check_point(const AppellPoint& p) {
  if (p.ell < 1) fail(ErrorCode::domain, "Appell function: level must be positive");
}

// n-th summand of A_l without the e^{pi i l z1} prefactor.
cplx appell_term(int ell, std::int64_t n, cplx z1, cplx z2, const Tau& tau) {
  const double nd = static_cast<double>(n);
  const double e = 0.5 * ell * nd * (nd + 1.0);
  const cplx x = z1 + nd * tau.value();
  const double sg = parity(static_cast<std::int64_t>(ell) * n);
  cplx r;
  if (x.imag() >= 0.0) {
    const cplx den = 1.0 - expi(x);
    if (std::abs(den) < 1e-13) fail(ErrorCode::pole, "Appell function: z1 lies on the pole lattice");
    r = sg * expi(nd * z2 + tau.value() * e) / den;
  } else {
    const cplx den = 1.0 - expi(-x);
    if (std::abs(den) < 1e-13) fail(ErrorCode::pole, "Appell function: z1 lies on the pole lattice");
    r = -sg * expi(nd * z2 + tau.value() * (e - nd) - z1) / den;
  }
  return r;
}

template <class TermFn>
AppellValue symmetric_sum(TermFn term, std::int64_t kmin, Precision prec) {
  SeriesSum acc(prec);
  double biggest = 0.0;
  AppellValue out;
  acc.add(term(0));
  biggest = std::abs(acc.value());
  out.abs_sum = biggest;
  int quiet = 0;
  for (std::int64_t k = 1; k < 100000; ++k) {
    const cplx a = term(k), b = term(-k);
    acc.add(a);
    acc.add(b);
    out.terms += 2;
    const double m = std::max(std::abs(a), std::abs(b));
    out.abs_sum += std::abs(a) + std::abs(b);
    biggest = std::max(biggest, m);
    if (k >= kmin && m <= 1e-17 * std::max(biggest, std::abs(acc.value()))) {
      if (++quiet >= 2) {
        out.tail_bound = 2.0 * m;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  out.value = acc.value();
  out.terms += 1;
  return out;
}

}  // namespace

AppellValue appell_A_value(const AppellPoint& p, Precision prec) {
  check_point(p);
  const double v = p.tau.v();
  const auto kmin = static_cast<std::int64_t>(std::ceil((std::abs(p.z2.imag()) / p.ell + std::abs(p.z1.imag())) / v)) + 3;
  AppellValue r = symmetric_sum([&](std::int64_t n) { return appell_term(p.ell, n, p.z1, p.z2, p.tau); }, kmin, prec);
  const cplx pre = std::exp(kPi * kI * static_cast<double>(p.ell) * p.z1);
  r.value *= pre;
  r.tail_bound *= std::abs(pre);
  r.abs_sum *= std::abs(pre);
  return r;
}

cplx appell_A(const AppellPoint& p, Precision prec) { return appell_A_value(p, prec).value; }

jets::Jet appell_A_z2_jet(int ell, cplx z1, cplx z2, const Tau& tau, int order, Precision prec) {
  if (ell < 1) fail(ErrorCode::domain, "Appell function: level must be positive");
  if (order < 0) fail(ErrorCode::domain, "appell_A_z2_jet: negative order");
  const double v = tau.v();
  const auto kmin = static_cast<std::int64_t>(std::ceil((std::abs(z2.imag()) / ell + std::abs(z1.imag())) / v)) + 3 + order;
  std::vector<SeriesSum> sums(static_cast<std::size_t>(order + 1), SeriesSum(prec));
  double biggest = 0.0;
  int quiet = 0;
  auto add = [&](std::int64_t n) {
    const cplx t = appell_term(ell, n, z1, z2, tau);
    const cplx h(0.0, 2.0 * kPi * static_cast<double>(n));
    cplx hp(1.0, 0.0);
    double fact = 1.0;
    double m = 0.0;
    for (int a = 0; a <= order; ++a) {
      const cplx c = t * hp / fact;
      sums[static_cast<std::size_t>(a)].add(c);
      m = std::max(m, std::abs(c));
      hp *= h;
      fact *= (a + 1);
    }
    return m;
  };
  biggest = add(0);
  for (std::int64_t k = 1; k < 100000; ++k) {
    const double m = std::max(add(k), add(-k));
    biggest = std::max(biggest, m);
    if (k >= kmin && m <= 1e-17 * biggest) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  std::vector<cplx> coeffs;
  for (auto& s : sums) coeffs.push_back(s.value());
  jets::Jet series = jets::z_series(coeffs, order, tau);
  return series * std::exp(kPi * kI * static_cast<double>(ell) * z1);
}

double zwegers_S_term_log_modulus(double n, cplx z, double y, const Tau& tau) {
  const double v = tau.v();
  const double logmag = kPi * n * n * v + 2.0 * kPi * n * z.imag();
  const double x = (n + y / v) * std::sqrt(2.0 * v);
  if (n * x > 0.0) {
    const auto g = special::upper_gamma_scaled(0.5, kPi * x * x);
    return std::log(g.value_scaled / std::sqrt(kPi)) + logmag - kPi * x * x;
  }
  const double f = x == 0.0 ? 1.0 : 2.0 - std::erfc(std::sqrt(kPi) * std::abs(x));
  return std::log(f) + logmag;
}

cplx zwegers_S_term(double n, cplx z, double y, const Tau& tau) {
  const double sg = n > 0 ? 1.0 : -1.0;
  const double lm = zwegers_S_term_log_modulus(n, z, y, tau);
  const auto j = static_cast<std::int64_t>(std::floor(n));  // n - 1/2
  const double ph = -(std::fmod(0.5 * n * n * tau.u(), 1.0) + std::fmod(n * z.real(), 1.0));
  return sg * parity(j) * std::exp(lm) * std::polar(1.0, 2.0 * kPi * ph);
}

cplx zwegers_S_ext(cplx z, double y, const Tau& tau, Precision prec) {
  const double v = tau.v();
  // log-modulus peaks near n = (Im z - 2y)/v
  const auto c = static_cast<std::int64_t>(std::floor((z.imag() - 2.0 * y) / v));
  const auto kmin = static_cast<std::int64_t>(std::ceil(std::abs(y) / v + std::abs(z.imag() - 2.0 * y) / v)) + 3;
  SeriesSum acc(prec);
  double biggest = 0.0;
  int quiet = 0;
  auto term = [&](std::int64_t j) { return zwegers_S_term(static_cast<double>(j) + 0.5, z, y, tau); };
  const cplx t0 = term(c);
  acc.add(t0);
  biggest = std::abs(t0);
  for (std::int64_t k = 1; k < 100000; ++k) {
    const cplx a = term(c + k), b = term(c - k);
    acc.add(a);
    acc.add(b);
    const double m = std::max(std::abs(a), std::abs(b));
    biggest = std::max(biggest, m);
    if (k >= kmin && m <= 1e-17 * biggest) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return acc.value();
}

cplx zwegers_S(cplx z, const Tau& tau, Precision prec) { return zwegers_S_ext(z, z.imag(), tau, prec); }

cplx appell_completion(const AppellPoint& p, Precision prec) {
  check_point(p);
  const double l = static_cast<double>(p.ell);
  const Tau lt(l * p.tau.u(), l * p.tau.v());
  const double half = 0.5 * (l - 1.0);
  SeriesSum acc(prec);
  for (int nu = 0; nu < p.ell; ++nu) {
    const cplx shift = static_cast<double>(nu) * p.tau.value() + half;
    const cplx th = special::theta_value(p.z2 + shift, lt, prec);
    const cplx s = zwegers_S(l * p.z1 - p.z2 - shift, lt, prec);
    acc.add(std::exp(2.0 * kPi * kI * static_cast<double>(nu) * p.z1) * th * s);
  }
  return 0.5 * kI * acc.value();
}

cplx appell_hat(const AppellPoint& p, Precision prec) { return appell_A(p, prec) + appell_completion(p, prec); }

Report check_elliptic(const AppellPoint& p, int n1, int m1, int n2, int m2, double tol) {
  Stopwatch sw;
  const cplx t = p.tau.value();
  AppellPoint s = p;
  s.z1 = p.z1 + static_cast<double>(n1) * t + static_cast<double>(m1);
  s.z2 = p.z2 + static_cast<double>(n2) * t + static_cast<double>(m2);
  const double l = static_cast<double>(p.ell);
  const cplx lhs = appell_hat(s);
  const double sg = parity(static_cast<std::int64_t>(p.ell) * (n1 + m1));
  const cplx fac = sg * std::exp(2.0 * kPi * kI * p.z1 * (l * n1 - n2)) * std::exp(-2.0 * kPi * kI * static_cast<double>(n1) * p.z2) *
                   q_power(p.tau, 0.5 * l * n1 * n1 - static_cast<double>(n1) * n2);
  const AppellValue a = appell_A_value(p);
  const cplx rhs = fac * (a.value + appell_completion(p));
  // torsion points can make A-hat vanish; measure against the size of the A-terms then
  const double scale = std::max(std::abs(rhs), std::abs(fac) * a.abs_sum);
  Report r = make_report("appell.elliptic", std::abs(lhs - rhs) / scale, tol);
  r.add_param("ell", std::to_string(p.ell));
  r.add_param("shift", std::to_string(n1) + "," + std::to_string(m1) + "," + std::to_string(n2) + "," + std::to_string(m2));
  r.add_param("z1", fmt_cplx(p.z1));
  r.add_param("z2", fmt_cplx(p.z2));
  r.add_param("tau", fmt_tau(p.tau));
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

Report check_modular(const AppellPoint& p, const Mobius& g, double tol) {
  Stopwatch sw;
  const cplx j = g.automorphy(p.tau);
  AppellPoint s = p;
  s.tau = g.apply(p.tau);
  s.z1 = p.z1 / j;
  s.z2 = p.z2 / j;
  const double l = static_cast<double>(p.ell);
  const double c = static_cast<double>(g.c());
  const cplx lhs = appell_hat(s);
  const cplx fac = j * std::exp(kPi * kI * c * (-l * p.z1 * p.z1 + 2.0 * p.z1 * p.z2) / j);
  const AppellValue a = appell_A_value(p);
  const cplx rhs = fac * (a.value + appell_completion(p));
  const double scale = std::max(std::abs(rhs), std::abs(fac) * a.abs_sum);
  Report r = make_report("appell.modular", std::abs(lhs - rhs) / scale, tol);
  r.add_param("ell", std::to_string(p.ell));
  r.add_param("gamma", g.to_string());
  r.add_param("z1", fmt_cplx(p.z1));
  r.add_param("z2", fmt_cplx(p.z2));
  r.add_param("tau", fmt_tau(p.tau));
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

LimitValue richardson_limit(const std::function<cplx(cplx)>& f, cplx base) {
  LimitValue out;
  out.samples[0] = f(base);
  out.samples[1] = f(0.5 * base);
  out.samples[2] = f(0.25 * base);
  const cplx r1a = 2.0 * out.samples[1] - out.samples[0];
  const cplx r1b = 2.0 * out.samples[2] - out.samples[1];
  out.value = (4.0 * r1b - r1a) / 3.0;
  out.error = std::abs(out.value - r1b);
  return out;
}

LimitValue richardson_limit_even(const std::function<cplx(double)>& f, double h) {
  LimitValue out;
  for (int i = 0; i < 3; ++i) {
    const double t = h / static_cast<double>(1 << i);
    out.samples[i] = 0.5 * (f(t) + f(-t));
  }
  const cplx r1a = (4.0 * out.samples[1] - out.samples[0]) / 3.0;
  const cplx r1b = (4.0 * out.samples[2] - out.samples[1]) / 3.0;
  out.value = (16.0 * r1b - r1a) / 15.0;
  out.error = std::abs(out.value - r1b);
  return out;
}

cplx rank_via_appell(cplx z, const Tau& tau, Precision prec) {
  const cplx zeta = std::exp(2.0 * kPi * kI * z);
  const cplx a3 = appell_A({3, z, -tau.value(), tau}, prec);
  const cplx inv_qq = q_power(tau, 1.0, 24.0) / special::eta_value(tau, prec);
  return (1.0 - zeta) * std::exp(-3.0 * kPi * kI * z) * inv_qq * a3;
}

cplx rank_via_series(cplx z, const Tau& tau, Precision prec) {
  const cplx zeta = std::exp(2.0 * kPi * kI * z);
  const cplx q = q_power(tau, 1.0);
  SeriesSum acc(prec);
  acc.add(1.0);
  cplx prod(1.0, 0.0), qj(1.0, 0.0);
  for (int n = 1; n < 10000; ++n) {
    qj *= q;
    prod *= (1.0 - zeta * qj) * (1.0 - qj / zeta);
    if (std::abs(prod) < 1e-300) fail(ErrorCode::pole, "rank_via_series: zeta hits a pole");
    const cplx t = q_power(tau, static_cast<double>(n) * n) / prod;
    acc.add(t);
    if (std::abs(t) < 1e-18 * std::abs(acc.value()) && n > 3) break;
  }
  return acc.value();
}

}  // namespace mockmod::appell
