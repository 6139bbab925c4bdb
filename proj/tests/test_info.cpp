#include "doctest.h"

#include "ddm/info.hpp"

#include <cmath>

using namespace ddm::info;

TEST_CASE("relative entropy and Hellinger integral of a two-atom pair") {
  const FiniteMeasurePair p({0.75, 0.25}, {0.5, 0.5});
  const auto all = all_atoms(p);
  CHECK(kl(p, all).value() == doctest::Approx(0.130812).epsilon(1e-5));
  CHECK(hellinger(p, 0.5, all) == doctest::Approx(0.965926).epsilon(1e-5));
  CHECK(hellinger(p, 0.0, all) == doctest::Approx(1.0));
  CHECK(hellinger(p, 1.0, all) == doctest::Approx(1.0));
}

TEST_CASE("absolute continuity is enforced") {
  CHECK_THROWS_AS(FiniteMeasurePair({0.5, 0.5}, {1.0, 0.0}), InfoError);
}

TEST_CASE("conditioning identities hold exactly up to rounding") {
  const FiniteMeasurePair p({0.1, 0.3, 0.6}, {0.4, 0.4, 0.2});
  const AtomSet A = {0, 2};
  CHECK(std::abs(ml_identity_residual(p, A)) < 1e-12);
  CHECK(std::abs(ml_hellinger_residual(p, A, 0.3)) < 1e-12);
  CHECK(ml_bound_slack(p, A, 0.3) >= -1e-12);
  const auto s = hkr_bound(p, A, 0.4);
  CHECK(s.lhs >= s.rhs - 1e-12);
}

TEST_CASE("Lambert W") {
  CHECK(lambert_w0(1.0) == doctest::Approx(0.5671432904).epsilon(1e-10));
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_THROWS_AS(lambert_w0(-1.0), InfoError);
}

TEST_CASE("closed-form maxima") {
  const auto e = hfpl_extrema(2, 0.5);
  CHECK(e.argmax_xlog == doctest::Approx(std::exp(-2.0)));
  CHECK(e.max_xlog == doctest::Approx(std::exp(-2.0) * 4));
  CHECK(e.argmax_exp == doctest::Approx(4.0));
}

TEST_CASE("difference quotient sandwich") {
  CHECK(edl_quotient(0, 0.25, 0.75, 1.0) == 0.0);
  CHECK(edl_quotient(0, 0.25, 0.75, 4.0) == doctest::Approx((2.0 * std::sqrt(2.0) - std::sqrt(2.0)) / 0.5));
  const auto c = edl_sandwich(1, 0.2, 0.6, 3.0);
  CHECK(c.ok(1e-12));
}
