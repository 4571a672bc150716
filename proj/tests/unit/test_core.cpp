#include <doctest.h>

#include <cmath>

#include "mockmod/core.hpp"

using namespace mockmod;

TEST_CASE("principal_halfpower branch") {
  CHECK(std::abs(principal_halfpower({1.0, 0.0}, 3) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(principal_halfpower({-1.0, 0.0}, 2) - cplx(-1.0, 0.0)) < 1e-15);
  // polar form: i = e^{i pi/2}, so i^{1/2} = e^{i pi/4}
  const cplx expect = std::polar(1.0, kPi / 4.0);
  CHECK(std::abs(principal_halfpower(kI, 1) - expect) < 1e-15);
  // negative real axis sits on the closed side of the cut
  CHECK(std::abs(principal_halfpower({-4.0, 0.0}, 1) - cplx(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(principal_halfpower({-4.0, -0.0}, 1) - cplx(0.0, 2.0)) < 1e-15);
  for (int k = -3; k <= 3; ++k) {
    const cplx w(0.3, -1.7);
    CHECK(std::abs(principal_halfpower(w, 2 * k) - std::pow(w, k)) < 1e-13);
  }
  CHECK_THROWS_AS(principal_halfpower({0.0, 0.0}, 1), Error);
}

TEST_CASE("validate_mobius") {
  CHECK(validate_mobius(1, 0, 0, 1) == Mobius::identity());
  CHECK(validate_mobius(0, -1, 1, 0) == Mobius::S());
  const Mobius g = validate_mobius(2, 1, 1, 1);
  CHECK(g.c() == 1);
  try {
    validate_mobius(2, 1, 1, 2);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
  }
  CHECK((g * g.inverse()) == Mobius::identity());
}

TEST_CASE("Im of gamma tau") {
  const Tau t(0.31, 0.9);
  for (const auto& g : {validate_mobius(2, 1, 1, 1), validate_mobius(1, 0, 5, 1), validate_mobius(3, -2, 5, -3)}) {
    const cplx w = g.apply(t.value());
    const double expect = t.v() / std::norm(g.automorphy(t));
    CHECK(std::abs(w.imag() - expect) <= 1e-15 * expect);
    const cplx direct = (double(g.a()) * t.value() + double(g.b())) / (double(g.c()) * t.value() + double(g.d()));
    CHECK(std::abs(w - direct) < 1e-13);
  }
}

TEST_CASE("Tau validation") {
  CHECK_THROWS_AS(Tau(0.0, 0.0), Error);
  CHECK_THROWS_AS(Tau(0.0, -1.0), Error);
  CHECK(Tau(0.5, 0.8).in_sampling_domain());
  CHECK_FALSE(Tau(0.6, 1.0).in_sampling_domain());
}

TEST_CASE("q_power matches exp") {
  const Tau t(123.37, 1.1);
  const cplx direct = std::exp(2.0 * kPi * kI * t.value() * (5.0 / 24.0));
  CHECK(std::abs(q_power(t, 5, 24) - direct) < 1e-12 * std::abs(direct));
}

TEST_CASE("compensated sum") {
  SeriesSum plain(Precision::f64), dd(Precision::dd);
  for (auto x : {1e16, 1.0, -1e16, 1.0}) {
    plain.add(x);
    dd.add(x);
  }
  CHECK(dd.value().real() == 2.0);
  CHECK(plain.value().real() != 2.0);
  CHECK(parse_precision("dd") == Precision::dd);
  CHECK_THROWS_AS(parse_precision("quad"), Error);
}

TEST_CASE("report verdict semantics") {
  Report r = make_report("x", 1e-9, 1e-8);
  CHECK(r.verdict == Verdict::pass);
  r.tolerance = 1e-10;
  r.finalize();
  CHECK(r.verdict == Verdict::fail);
  CHECK(make_report("y", std::nan(""), 1.0).verdict == Verdict::fail);
}
