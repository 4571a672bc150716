#include <doctest.h>

#include <cmath>
#include <random>

#include "mockmod/exactq.hpp"
#include "mockmod/rank.hpp"

using namespace mockmod;
using namespace mockmod::rank;

namespace {

// Random unimodular matrices from words in S and T, entries bounded by 6,
// keeping Im(g tau) >= 0.2.
std::vector<Mobius> random_gammas(std::uint64_t seed, int count, const Tau& tau) {
  std::mt19937_64 rng(seed);
  std::vector<Mobius> out;
  while (static_cast<int>(out.size()) < count) {
    Mobius g = Mobius::identity();
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) {
      const int e = static_cast<int>(rng() % 5) - 2;
      Mobius t = Mobius::identity();
      for (int k = 0; k < std::abs(e); ++k) t = t * (e > 0 ? Mobius::T() : Mobius::T().inverse());
      g = g * t * Mobius::S();
    }
    if (g.max_abs_entry() > 6 || g.apply(tau).v() < 0.2 || g.c() == 0) continue;
    out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_CASE("r plus") {
  const Tau t(0.1, 1.05);
  for (int n = 0; n < 8; ++n) CHECK(exactq::bernoulli_half(2 * n + 1) == 0);
  const auto d = duke_check(t);
  for (const auto& r : d)
    if (r.check_id == "duke.mplus") CHECK(r.residual < 1e-12);
  for (int ell = 1; ell <= 3; ++ell) {
    const cplx a = r_plus(ell, Tau(0.2, 1.0), 120), b = r_plus(ell, Tau(0.2, 1.0), 130);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(b));
  }
  // polar coefficient: N_0 q^{-1/24} / (2 pi i) = 1 / (2 pi i eta)
  const cplx rm1 = r_plus(0, t);
  CHECK(std::abs(rm1 * cplx(0.0, 2.0 * kPi) * special::eta_value(t) - 1.0) < 1e-13);
}

TEST_CASE("r minus") {
  const Tau t(-0.2, 0.95);
  const double v = t.v();
  cplx diffz = 0.0;
  for (int j = -8; j <= 8; ++j) {
    const double n = j - 1.0 / 6.0;
    const double sg = (j - 1) % 2 == 0 ? 1.0 : -1.0;
    const double se = (n > 0 ? 1.0 : -1.0) * std::erfc(std::sqrt(kPi) * std::sqrt(6 * v) * std::abs(n));
    diffz += sg * q_power(t, -1.5 * n * n) *
             (cplx(0.0, std::sqrt(6.0 / v) * std::exp(-6 * kPi * n * n * v)) - cplx(0.0, 6 * kPi * n) * se);
  }
  CHECK(std::abs(r_minus(1, t) - diffz) < 1e-12 * std::abs(diffz));
  // mirror combination is odd
  const auto b = 0.5 * (shifted_S_jet(1, t, 6) - shifted_S_jet(-1, t, 6));
  for (int a = 0; a <= 6; a += 2) CHECK(std::abs(b.coeff(a, 0)) < 1e-13);
  for (int ell = 1; ell <= 3; ++ell) CHECK(std::abs(r_minus_bracket(ell, t) - r_minus(ell, t)) < 1e-12 * std::abs(r_minus(ell, t)));
  CHECK(std::abs(r_minus(1, Tau(0.0, 2.0))) < std::abs(r_minus(1, Tau(0.0, 1.0))));
  CHECK_THROWS_AS(r_minus(0, t), Error);
}

TEST_CASE("rank transformation") {
  const Tau i1(0.0, 1.0);
  CHECK(check_rank_transform(1, Mobius::identity(), i1).residual < 1e-15);
  // r_1 vanishes at the S fixed point
  CHECK(std::abs(r_total(1, i1).r_total) < 1e-12 * std::abs(r_total(1, i1).r_plus));
  const Report s = check_rank_transform(1, Mobius::S(), i1);
  CHECK(s.residual <= 1e-6);
  CHECK(s.passed());
  // T: r(tau + 1) = e^{2 pi i (-1/24)} r(tau), the q^{-1/24} phase
  const Tau t(0.13, 1.2);
  const cplx a = r_total(2, Tau(t.u() + 1.0, t.v())).r_total, b = r_total(2, t).r_total;
  CHECK(std::abs(a - std::polar(1.0, -2.0 * kPi / 24.0) * b) < 1e-12 * std::abs(b));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uu(-0.5, 0.5), vv(0.8, 2.0);
  for (int k = 0; k < 3; ++k) {
    const Tau tau(uu(rng), vv(rng));
    auto gs = random_gammas(100 + k, 10, tau);
    gs.push_back(Mobius::S());
    gs.push_back(Mobius::T());
    for (int ell = 1; ell <= 3; ++ell)
      for (const auto& g : gs) {
        const Report r = check_rank_transform(ell, g, tau);
        CHECK_MESSAGE(r.residual <= 1e-6, "ell=" << ell << " g=" << g.to_string() << " tau=" << fmt_tau(tau));
      }
  }
}

TEST_CASE("rank lowering") {
  const Tau i1(0.0, 1.0);
  const auto rs = check_rank_lowering(1, i1);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].residual <= 1e-5);
  CHECK(rs[0].variant == "+conj(eta(tau))");
  CHECK(rs[1].verdict == Verdict::variant);
  const Tau t(0.21, 1.3);
  for (int ell = 2; ell <= 3; ++ell) CHECK(check_rank_lowering(ell, t)[0].residual <= 1e-5);
  CHECK(check_rank_plus_holomorphic(2, t).residual <= 1e-7);
  CHECK(check_rank_lowering_ratio(t).residual <= 1e-5);
}

TEST_CASE("Duke corollary") {
  for (const Tau t : {Tau(0.0, 1.0), Tau(1.0, 1.0 / std::sqrt(2.0))}) {
    for (const auto& r : duke_check(t)) CHECK_MESSAGE(r.residual <= 1e-7, r.check_id << " " << r.residual);
    for (const auto& r : single_term_checks(t)) CHECK(r.residual <= 1e-8);
  }
}

TEST_CASE("R-hat identities") {
  for (const Tau t : {Tau(0.1, 1.05), Tau(-0.35, 0.85)}) {
    for (const auto& r : rhat_checks(t)) CHECK_MESSAGE(r.passed(), r.check_id << " " << r.residual);
  }
}
