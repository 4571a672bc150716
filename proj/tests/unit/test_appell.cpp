#include <doctest.h>

#include <cmath>
#include <random>

#include "mockmod/appell.hpp"
#include "mockmod/special.hpp"

using namespace mockmod;
using namespace mockmod::appell;

namespace {

// Fixed-range direct sum of A_l, written from the definition.
cplx appell_direct(int l, cplx z1, cplx z2, cplx t, int N) {
  const cplx q = std::exp(2.0 * kPi * kI * t);
  cplx s = 0.0;
  for (int n = -N; n <= N; ++n) {
    const double sg = (l * n) % 2 == 0 ? 1.0 : -1.0;
    s += sg * std::exp(2.0 * kPi * kI * (double(n) * z2)) * std::exp(kPi * kI * t * double(l * n * (n + 1))) /
         (1.0 - std::exp(2.0 * kPi * kI * z1) * std::pow(q, n));
  }
  return std::exp(kPi * kI * double(l) * z1) * s;
}

}  // namespace

TEST_CASE("Appell sum basics") {
  const Tau t(0.1, 1.1);
  CHECK_THROWS_AS(appell_A({2, 0.0, 0.3, t}), Error);
  CHECK_THROWS_AS(appell_A({2, t.value() + 1.0, 0.3, t}), Error);
  try {
    appell_A({3, 0.0, 0.0, t});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::pole);
  }
  const cplx z1(0.21, 0.13), z2(-0.3, 0.2);
  const cplx a = appell_A({3, z1, z2, t});
  const cplx d15 = appell_direct(3, z1, z2, t.value(), 15), d20 = appell_direct(3, z1, z2, t.value(), 20);
  CHECK(std::abs(d15 - d20) < 1e-13 * std::abs(d20));
  CHECK(std::abs(a - d20) < 1e-13 * std::abs(d20));
  const auto av = appell_A_value({2, z1, z2, t});
  CHECK(av.tail_bound < 1e-12);
}

TEST_CASE("rank generating function through A_3") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-0.4, 0.4), vv(0.8, 1.6), zy(-0.15, 0.15);
  for (int i = 0; i < 6; ++i) {
    const Tau t(uni(rng), vv(rng));
    const cplx z(uni(rng), zy(rng));
    const cplx a = rank_via_appell(z, t), b = rank_via_series(z, t);
    CHECK(std::abs(a - b) < 1e-9 * std::abs(b));
  }
  // zeta = -1 gives the mock theta function f
  const Tau t(0.0, 1.0);
  CHECK(std::abs(rank_via_appell(0.5, t) - rank_via_series(0.5, t)) < 1e-12);
}

TEST_CASE("Appell z2 jet") {
  const Tau t(0.05, 1.2);
  const cplx z1(0.2, 0.1), z2(0.1, -0.05);
  const auto j = appell_A_z2_jet(2, z1, z2, t, 6);
  CHECK(j.is_holomorphic());
  CHECK(std::abs(j.coeff(0, 0) - appell_A({2, z1, z2, t})) < 1e-13);
  // first derivative by a central difference
  const double h = 1e-5;
  const cplx d = (appell_A({2, z1, z2 + h, t}) - appell_A({2, z1, z2 - h, t})) / (2 * h);
  CHECK(std::abs(j.coeff(1, 0) - d) < 1e-8 * std::abs(d));
}

TEST_CASE("Zwegers S") {
  const Tau t(0.17, 0.95);
  for (const cplx z : {cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(0.45, -0.3)}) {
    const cplx a = zwegers_S(z, t), b = zwegers_S(-z, t);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
  }
  // term decay bound: sgn - E is an erfc tail, so |term| <= e^{-pi n^2 v} at z = 0
  const Tau t1(0.0, 1.0);
  for (double n : {7.5, 8.5, -8.5}) {
    const double lm = zwegers_S_term_log_modulus(n, 0.0, 0.0, t1);
    CHECK(lm < std::log(1e-16));
    CHECK(lm <= -kPi * n * n + 1e-12);
  }
  // shifted expansion: q^{-1/6} zeta^{-1} S(3z + tau; 3 tau) term by term
  for (const cplx z : {cplx(0.1, 0.02), cplx(-0.2, -0.03)}) {
    const Tau t3(3 * t.u(), 3 * t.v());
    const cplx lhs = q_power(t, -1.0, 6.0) * std::exp(-2.0 * kPi * kI * z) * zwegers_S(3.0 * z + t.value(), t3);
    const double v = t.v(), y = z.imag();
    cplx rhs = 0.0;
    for (int j = -8; j <= 8; ++j) {
      const double n = j - 1.0 / 6.0;
      const double sg = (j - 1) % 2 == 0 ? 1.0 : -1.0;
      const double x = std::sqrt(kPi) * (n + y / v) * std::sqrt(6 * v);
      const double se = (n - 1.0 / 3.0 > 0 ? 1.0 : -1.0) * std::erfc(std::abs(x));  // signs agree for these n, y
      rhs += sg * se * std::exp(2.0 * kPi * kI * (t.value() * (-1.5 * n * n) - 3.0 * n * z));
    }
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
  }
  // agreement with the jet expansion
  const auto jet = jets::zwegers_S_jet(3.0, 1.0, 0.0, 3, t, 2);
  const Tau t3(3 * t.u(), 3 * t.v());
  CHECK(std::abs(jet.coeff(0, 0) - zwegers_S(t.value(), t3)) < 1e-13 * std::abs(jet.coeff(0, 0)));
  const double h = 1e-5;
  auto S = [&](cplx z) { return zwegers_S(3.0 * z + t.value(), t3); };
  const cplx dx = (S(h) - S(-h)) / (2 * h), dy = (S(cplx(0, h)) - S(cplx(0, -h))) / (2 * h);
  CHECK(std::abs(jet.coeff(1, 0) - 0.5 * (dx - kI * dy)) < 1e-7 * std::abs(jet.coeff(1, 0)));
  CHECK(std::abs(jet.coeff(0, 1) - 0.5 * (dx + kI * dy)) < 1e-7 * std::abs(jet.coeff(0, 1)));
}

TEST_CASE("elliptic law, all 16 shifts") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-0.4, 0.4), vv(0.8, 1.5), zy(-0.3, 0.3);
  for (int ell : {2, 3}) {
    for (int pt = 0; pt < 5; ++pt) {
      const AppellPoint p{ell, cplx(uni(rng), zy(rng)), cplx(uni(rng), zy(rng)), Tau(uni(rng), vv(rng))};
      for (int mask = 0; mask < 16; ++mask) {
        const Report r = check_elliptic(p, mask & 1, (mask >> 1) & 1, (mask >> 2) & 1, (mask >> 3) & 1);
        CHECK_MESSAGE(r.residual <= 1e-7, "ell=" << ell << " mask=" << mask << " res=" << r.residual);
      }
    }
  }
}

TEST_CASE("modular law") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-0.4, 0.4), vv(0.9, 1.5), zy(-0.2, 0.2);
  const Mobius gs[] = {Mobius::S(), Mobius::T(), validate_mobius(2, 1, 1, 1), validate_mobius(1, 0, 2, 1),
                       validate_mobius(1, -1, 1, 0), validate_mobius(3, 1, 2, 1)};
  for (int ell : {2, 3}) {
    const AppellPoint p{ell, cplx(uni(rng), zy(rng)), cplx(uni(rng), zy(rng)), Tau(uni(rng), vv(rng))};
    for (const auto& g : gs) {
      const Report r = check_modular(p, g);
      CHECK_MESSAGE(r.residual <= 1e-7, "ell=" << ell << " g=" << g.to_string() << " res=" << r.residual);
    }
  }
}

TEST_CASE("torsion points") {
  const Tau t(0.12, 1.05);
  const cplx tors[] = {0.5 * t.value(), cplx(0.5, 0.0), 0.5 * (t.value() + 1.0)};
  for (int ell : {2, 3})
    for (const cplx z1 : tors)
      for (const cplx z2 : tors) {
        const AppellPoint p{ell, z1, z2, t};
        const cplx v = appell_hat(p);
        CHECK(std::isfinite(v.real()));
        CHECK(check_elliptic(p, 1, 0, 0, 1).residual <= 1e-7);
        CHECK(check_modular(p, Mobius::S()).residual <= 1e-7);
      }
}

TEST_CASE("Richardson limit") {
  const auto lv = richardson_limit([](cplx w) { return std::exp(w) / (1.0 + w) + 0.3 * w * w * w; });
  CHECK(std::abs(lv.value - 1.0) < 1e-6);
  // the estimate is conservative: it compares against the first-order value
  CHECK(lv.error >= std::abs(lv.value - 1.0));
  CHECK(lv.error < 1e-4);
  // l = 2 at z2 = z - tau: the w-pole sits in a z-independent term, so z-derivatives stay finite
  const Tau t(0.1, 1.1);
  const auto g1 = richardson_limit([&](cplx w) { return appell_A_z2_jet(2, w, -t.value(), t, 2).coeff(1, 0); });
  CHECK(std::isfinite(std::abs(g1.value)));
  CHECK(g1.error < 1e-4 * std::max(1.0, std::abs(g1.value)));
}
