#include "doctest.h"

#include "ddm/markov.hpp"
#include "ddm/symbolic.hpp"
#include "fixtures.hpp"

#include <cmath>

using namespace ddm;

TEST_CASE("cylinder masses on the reference chain") {
  const MarkovMeasures mm(testing::reference_model());
  CHECK(mm.phi0(sym::parse_union(2, "0[1 2]")) == Rational(3, 8));
  CHECK(mm.phi0(sym::parse_union(2, "1[2]")) == Rational(1, 2));
  CHECK(mm.lambda(sym::parse_union(2, "0[1 2]")) == Rational(1, 4));
  CHECK(mm.phi0(sym::CylinderUnion::full(2)) == 1);
  CHECK(mm.z(1) == Rational(2, 3));
  CHECK(mm.z(2) == 2);
}

TEST_CASE("density integrals") {
  const MarkovMeasures mm(testing::reference_model());
  const auto q = sym::parse_union(2, "0[2]");
  CHECK(mm.integral_Z_alpha(q, 0.5).approx == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
  CHECK(mm.integral_Z_alpha(q, 1.0).exact == Rational(1, 2));
  CHECK(mm.kappa0(sym::parse_union(2, "0[1]")) ==
        doctest::Approx(0.75 * (2.0 / 3 * std::log(2.0 / 3) + std::exp(-1.0))).epsilon(1e-14));
  CHECK(mm.kl_total() == doctest::Approx(0.5 * std::log(4.0 / 3)).epsilon(1e-14));
}

TEST_CASE("essential supremum of the density") {
  const MarkovMeasures mm(testing::reference_model());
  const auto k = mm.k_star();
  CHECK(k.value == doctest::Approx(std::log(2.0)));
  CHECK(k.irreducible);
  const MarkovMeasures st(testing::stationary_model());
  CHECK(st.k_star().value == 0.0);
}

TEST_CASE("model validation") {
  std::vector<std::vector<Rational>> bad = {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(49, 100)}};
  CHECK_THROWS_AS(MarkovModel::create(bad, {Rational(1, 2), Rational(1, 2)}, std::nullopt), ModelError);
  std::vector<std::vector<Rational>> P = {{Rational(1, 3), Rational(2, 3)}, {Rational(1, 2), Rational(1, 2)}};
  const auto m = MarkovModel::create(P, {Rational(1, 2), Rational(1, 2)}, std::nullopt);
  CHECK(m.pi_star == std::vector<Rational>{Rational(3, 7), Rational(4, 7)});
}

TEST_CASE("weight functions at the boundary") {
  CHECK(WeightFn::power(0.0).at(0.0) == 1.0);
  CHECK(WeightFn::zlogz().at(0.0) == 0.0);
  CHECK(WeightFn::power(0.5).describe() == "Z^0.5");
}
