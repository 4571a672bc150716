#include <doctest.h>

#include <cmath>

#include "mockmod/jets.hpp"
#include "mockmod/special.hpp"

using namespace mockmod;
using namespace mockmod::jets;

namespace {

// Taylor coefficient [z^a] of a holomorphic function by the trapezoidal rule
// on a circle (spectrally accurate).
template <class F>
cplx cauchy_coeff(F f, int a, double r = 0.25, int M = 64) {
  cplx s(0.0, 0.0);
  for (int k = 0; k < M; ++k) {
    const cplx z = std::polar(r, 2.0 * kPi * k / M);
    s += f(z) / std::pow(z, a);
  }
  return s / static_cast<double>(M);
}

Jet theta8(const Tau& t, int order) {
  const Jet th = expand_block(ThetaShifted{}, t, order);
  Jet p = Jet::constant(1.0, order, t);
  for (int i = 0; i < 8; ++i) p = jet_product(p, th);
  return p;
}

}  // namespace

TEST_CASE("jet algebra") {
  const Tau t(0.1, 1.0);
  const int N = 6;
  const Jet zz = jet_product(Jet::z(N, t), Jet::zbar(N, t));
  CHECK(zz.coeff(1, 1) == cplx(1.0, 0.0));
  CHECK(std::abs(zz.coeff(0, 0)) == 0.0);
  Jet a(N, t), b(N, t), c(N, t);
  for (int j = 0; j <= N; ++j)
    for (int k = 0; j + k <= N; ++k) {
      a.at(j, k) = cplx(j + 1, k - 2);
      b.at(j, k) = cplx(0.5 * k, j);
      c.at(j, k) = cplx(1.0 / (j + k + 1), 0.25);
    }
  const Jet lhs = jet_product(jet_product(a, b), c), rhs = jet_product(a, jet_product(b, c));
  for (int j = 0; j <= N; ++j)
    for (int k = 0; j + k <= N; ++k) CHECK(std::abs(lhs.coeff(j, k) - rhs.coeff(j, k)) < 1e-11 * (1 + std::abs(lhs.coeff(j, k))));
  // Wirtinger derivatives commute
  const Jet d1 = jet_dz(jet_dzbar(a)), d2 = jet_dzbar(jet_dz(a));
  for (int j = 0; j <= d1.order(); ++j)
    for (int k = 0; j + k <= d1.order(); ++k) CHECK(d1.coeff(j, k) == d2.coeff(j, k));
  CHECK(jet_dz(a).coeff(2, 1) == 3.0 * a.coeff(3, 1));
  CHECK_THROWS_AS(jet_product(a, Jet(N, Tau(0.2, 1.0))), Error);
  CHECK_THROWS_AS(jet_exp(a), Error);
}

TEST_CASE("jet_exp") {
  const Tau t(0.0, 1.0);
  const int N = 8;
  const Jet e0 = jet_exp(Jet(N, t));
  CHECK(e0.coeff(0, 0) == cplx(1.0, 0.0));
  const cplx c(-0.7, 0.3);
  Jet q(N, t);
  q.at(2, 0) = c;
  const Jet e = jet_exp(q);
  double fact = 1.0;
  cplx cm(1.0, 0.0);
  for (int m = 0; 2 * m <= N; ++m) {
    CHECK(std::abs(e.coeff(2 * m, 0) - cm / fact) < 1e-14);
    cm *= c;
    fact *= (m + 1);
  }
  Jet a(N, t);
  a.at(1, 0) = 0.3;
  a.at(0, 1) = cplx(0.0, 0.2);
  a.at(1, 1) = -0.4;
  const Jet one = jet_product(jet_exp(a), jet_exp(-a));
  CHECK(std::abs(one.coeff(0, 0) - 1.0) < 1e-15);
  for (int j = 0; j <= N; ++j)
    for (int k = 0; j + k <= N; ++k)
      if (j + k > 0) CHECK(std::abs(one.coeff(j, k)) < 1e-14);
}

TEST_CASE("y substitution") {
  const Tau t(0.0, 1.3);
  const int N = 6;
  const Jet y0 = y_substitute({1.0}, N, t);
  CHECK(y0.coeff(0, 0) == cplx(1.0, 0.0));
  const Jet y2 = y_substitute({0.0, 0.0, 1.0}, N, t);
  CHECK(std::abs(y2.coeff(2, 0) + 0.25) < 1e-16);
  CHECK(std::abs(y2.coeff(1, 1) - 0.5) < 1e-16);
  CHECK(std::abs(y2.coeff(0, 2) + 0.25) < 1e-16);
  // dz y = 1/(2i)
  const Jet y1 = y_substitute({0.0, 1.0}, N, t);
  CHECK(std::abs(jet_dz(y1).coeff(0, 0) - 1.0 / cplx(0.0, 2.0)) < 1e-16);
  // e^{-pi y^2/v} = e^{pi/(4v)(z^2 - 2 z zbar + zbar^2)}
  const double v = t.v();
  const Jet gy = expand_block(GaussianY{-kPi / v}, t, N);
  Jet quad(N, t);
  quad.at(2, 0) = kPi / (4 * v);
  quad.at(1, 1) = -2 * kPi / (4 * v);
  quad.at(0, 2) = kPi / (4 * v);
  const Jet gz = jet_exp(quad);
  for (int j = 0; j <= N; ++j)
    for (int k = 0; j + k <= N; ++k) CHECK(std::abs(gy.coeff(j, k) - gz.coeff(j, k)) < 1e-14);
}

TEST_CASE("theta and gaussian blocks against direct expansion") {
  const Tau t(0.15, 0.9);
  const int N = 6;
  const cplx g(0.4, -0.2);
  const Jet th = expand_block(ThetaShifted{2.0, -1.0, 0.5, 2}, t, N);
  CHECK(th.is_holomorphic());
  const Jet prod = jet_product(th, expand_block(Gaussian{g}, t, N));
  auto f = [&](cplx z) { return special::theta_value(2.0 * z - t.value() + 0.5, Tau(2 * t.u(), 2 * t.v())) * std::exp(g * z * z); };
  for (int a = 0; a <= N; ++a) {
    const cplx ref = cauchy_coeff(f, a);
    CHECK(std::abs(prod.coeff(a, 0) - ref) < 1e-11 * (1.0 + std::abs(ref)));
  }
  const Jet el = expand_block(ExpLinear{cplx(0.0, 1.5)}, t, N);
  CHECK(std::abs(el.coeff(3, 0) - std::pow(cplx(0.0, 1.5), 3) / 6.0) < 1e-15);
}

TEST_CASE("S block first derivative matches the expanded series") {
  for (const Tau t : {Tau(0.1, 1.05), Tau(-0.3, 0.8)}) {
    const int N = 4;
    Jet f = jet_product(expand_block(ExpLinear{cplx(0.0, -2.0 * kPi)}, t, N), zwegers_S_jet(3.0, 1.0, 0.0, 3, t, N));
    f *= q_power(t, -1.0, 6.0);
    const double v = t.v();
    cplx ref(0.0, 0.0);
    for (int j = -8; j <= 8; ++j) {
      const double n = j - 1.0 / 6.0;
      const double sg = (j - 1) % 2 == 0 ? 1.0 : -1.0;  // (-1)^{n - 5/6}
      // sgn(n - 1/3) = sgn(n) on this lattice, so sgn - E is an erfc tail
      const double sgnE = (n > 0 ? 1.0 : -1.0) * std::erfc(std::sqrt(kPi) * std::sqrt(6 * v) * std::abs(n));
      const cplx inner = cplx(0.0, std::sqrt(6.0 / v) * std::exp(-6 * kPi * n * n * v)) - cplx(0.0, 6 * kPi * n) * sgnE;
      ref += sg * q_power(t, -1.5 * n * n) * inner;
    }
    CHECK(std::abs(f.coeff(1, 0) - ref) < 1e-12 * std::abs(ref));
  }
}

TEST_CASE("heat equation for the S_nu block") {
  const Tau t(0.12, 1.1);
  const int N = 5;
  for (int nu : {-1, 0}) {
    auto block = [&](const Tau& s) {
      Jet j = jet_product(expand_block(ExpLinear{cplx(0.0, -kPi * nu)}, s, N),
                          expand_block(ZwegersSShifted{1.0, double(nu), 0.5, 2}, s, N));
      j *= q_power(s, -nu * nu, 4.0);
      return j;
    };
    const Jet at = block(t);
    const double h = 1e-4 * t.v();
    auto dtau = [&](int a) {
      const cplx du = (block(Tau(t.u() + h, t.v())).coeff(a, 0) - block(Tau(t.u() - h, t.v())).coeff(a, 0)) / (2 * h);
      const cplx dv = (block(Tau(t.u(), t.v() + h)).coeff(a, 0) - block(Tau(t.u(), t.v() - h)).coeff(a, 0)) / (2 * h);
      return 0.5 * (du - kI * dv);
    };
    // (2 pi i d_tau + d_z^2) annihilates the block; compare at z^0 and z^1
    const cplx r0 = 2.0 * kPi * kI * dtau(0) + 2.0 * at.coeff(2, 0);
    const cplx r1 = 2.0 * kPi * kI * dtau(1) + 6.0 * at.coeff(3, 0);
    CHECK(std::abs(r0) < 1e-6 * (1 + std::abs(at.coeff(2, 0))));
    CHECK(std::abs(r1) < 1e-6 * (1 + std::abs(at.coeff(3, 0))));
    CHECK(std::abs(at.coeff(1, 0)) > 1e-3);
  }
}

TEST_CASE("Taylor completions") {
  const Tau t(0.2, 1.1);
  const std::vector<cplx> chi{cplx(1.0, 0.5), cplx(-0.3, 0.2), cplx(0.7, -1.0), cplx(0.1, 0.1), cplx(2.0, 0.0)};
  CHECK(taylor_completion_psi(chi, 2.0, t, 0) == chi[0]);
  CHECK(taylor_completion_psi(chi, 2.0, t, 1) == chi[1]);
  CHECK(taylor_completion_rho(chi, 2.0, t, 0) == chi[0]);
  // psi_n - rho_n through the coefficient differences
  const double m = 1.5;
  const cplx a = kPi * m / t.v(), b = kPi * kPi * m / 3.0 * special::e2_value(t);
  const cplx diff4 = (a - b) * chi[2] + 0.5 * (a * a - b * b) * chi[0];
  CHECK(std::abs(taylor_completion_psi(chi, m, t, 4) - taylor_completion_rho(chi, m, t, 4) - diff4) < 1e-13);
}

TEST_CASE("theta^8 completions are modular of weight 4 + n") {
  const Tau t(0.13, 1.07);
  const int N = 12;
  for (const auto& g : {Mobius::S(), Mobius::T(), validate_mobius(2, 1, 1, 1), validate_mobius(1, 0, 2, 1)}) {
    const Tau gt = g.apply(t);
    const Jet j0 = theta8(t, N), j1 = theta8(gt, N);
    std::vector<cplx> c0, c1;
    for (int a = 0; a <= N; ++a) {
      c0.push_back(j0.coeff(a, 0));
      c1.push_back(j1.coeff(a, 0));
    }
    const cplx jt = g.automorphy(t);
    for (int n : {0, 1, 2, 3, 4}) {
      CHECK(std::abs(taylor_completion_psi(c1, 4, gt, n)) < 1e-12);
      CHECK(std::abs(taylor_completion_psi(c0, 4, t, n)) < 1e-12);
    }
    for (int n : {8, 10, 12}) {
      const cplx f = std::pow(jt, 4 + n);
      const cplx p0 = taylor_completion_psi(c0, 4, t, n), p1 = taylor_completion_psi(c1, 4, gt, n);
      const cplx r0 = taylor_completion_rho(c0, 4, t, n), r1 = taylor_completion_rho(c1, 4, gt, n);
      CHECK(std::abs(p1 - f * p0) < 1e-8 * std::abs(f * p0));
      if (n == 10) {
        // the E2 completion cancels the z^2 exponent exactly, and no E4 term reaches z^10
        CHECK(std::abs(r0) < 1e-8 * std::abs(p0));
        CHECK(std::abs(r1) < 1e-8 * std::abs(p1));
      } else {
        CHECK(std::abs(r1 - f * r0) < 1e-8 * std::abs(f * r0));
      }
    }
  }
}
