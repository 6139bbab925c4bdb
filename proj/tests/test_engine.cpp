#include "doctest.h"

#include "ddm/engine.hpp"
#include "fixtures.hpp"

using namespace ddm;
using namespace ddm::engine;

TEST_CASE("horizon chain grows one coordinate at a time") {
  const auto c = horizon_chain({2, 2});
  REQUIRE(c.size() == 4);
  CHECK(c.front() == Horizon{0, 1});
  CHECK(c.back() == Horizon{2, 2});
}

TEST_CASE("truncated Phi on the reference chain") {
  const MarkovMeasures mm(testing::reference_model());
  const Engine q(mm, sym::parse_union(2, "0[2]"), {2, 2});
  CHECK(*q.phi().value.exact == Rational(1, 4));
  const Engine x(mm, sym::CylinderUnion::full(2), {2, 2});
  CHECK(*x.phi().value.exact == Rational(3, 4));
  CHECK(x.phi().witness.to_literal() != "{}");
}

TEST_CASE("truncated Phi never increases with the horizon") {
  const MarkovMeasures mm(testing::reference_model());
  const auto Q = sym::parse_union(2, "0[1 2]");
  Rational prev = 2;
  for (const auto& h : horizon_chain({3, 3})) {
    const Engine e(mm, Q, h);
    if (!e.universe().representable()) continue;
    CHECK(*e.phi().value.exact <= prev);
    prev = *e.phi().value.exact;
  }
}

TEST_CASE("stationary chain: Hellinger construction equals one on X") {
  const MarkovMeasures mm(testing::stationary_model());
  const Engine x(mm, sym::CylinderUnion::full(2), {2, 2});
  const auto r = x.evaluate(Construction::hellinger(0.5), x.default_ladder());
  CHECK(r.limit.value.approx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.monotone);
}

TEST_CASE("epsilon ladder values are monotone") {
  const MarkovMeasures mm(testing::reference_model());
  const Engine e(mm, sym::parse_union(2, "0[2]"), {2, 2});
  const auto r = e.evaluate(Construction::relative_entropy(), e.default_ladder());
  CHECK(r.monotone);
  REQUIRE(r.ladder.size() == 6);
  for (std::size_t i = 1; i < r.ladder.size(); ++i)
    CHECK(r.ladder[i].eval.value.approx >= r.ladder[i - 1].eval.value.approx - 1e-12);
}

TEST_CASE("construction names") {
  CHECK(Construction::hellinger(0.1).describe() == "hellinger(alpha=0.1)");
  CHECK(Construction::phi().describe() == "phi");
}

TEST_CASE("shifted Phi") {
  const MarkovMeasures mm(testing::reference_model());
  const auto pts = bar_phi(mm, sym::parse_union(2, "0[2]"), {2, 2}, 1);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].representable);
}
