#include "doctest.h"

#include "ddm/search.hpp"

using namespace ddm;
using namespace ddm::search;

namespace {

Problem small_problem() {
  Problem p;
  p.n_elements = 2;
  p.covers = {{0}, {1}, {0, 1}};
  p.conflicts = {{2}, {2}, {0, 1}};
  p.objective.exact = true;
  p.objective.qw = {Rational(1), Rational(1), Rational(3, 2)};
  return p;
}

}  // namespace

TEST_CASE("cheapest cover") {
  const auto p = small_problem();
  const auto s = branch_and_bound(p);
  REQUIRE(s.feasible);
  CHECK(s.chosen == std::vector<int>{2});
  CHECK(*s.value.exact == Rational(3, 2));
  CHECK(is_feasible(p, {0, 1}));
  CHECK_FALSE(is_feasible(p, {0}));
}

TEST_CASE("strict budget constraint changes the optimum") {
  auto p = small_problem();
  p.exact_constraints.push_back({{Rational(0), Rational(0), Rational(1)}, Rational(1), true});
  const auto s = branch_and_bound(p);
  REQUIRE(s.feasible);
  CHECK(s.chosen == std::vector<int>{0, 1});
  CHECK(*s.value.exact == 2);
}

TEST_CASE("infeasible problems are reported") {
  auto p = small_problem();
  p.exact_constraints.push_back({{Rational(1), Rational(1), Rational(1)}, Rational(1), true});
  CHECK_FALSE(branch_and_bound(p).feasible);
  CHECK_FALSE(exhaustive(p).feasible);
}

TEST_CASE("disjoint mode forbids overlapping members") {
  auto p = small_problem();
  p.covers.push_back({0, 1});
  p.conflicts = {{2, 3}, {2, 3}, {0, 1, 3}, {0, 1, 2}};
  p.objective.qw.push_back(Rational(1, 2));
  p.disjoint = true;
  CHECK_FALSE(is_feasible(p, {0, 2}));
  const auto s = branch_and_bound(p);
  CHECK(s.chosen == std::vector<int>{3});
}

TEST_CASE("float objective with ties breaks towards fewer members") {
  Problem p;
  p.n_elements = 2;
  p.covers = {{0}, {1}, {0, 1}};
  p.conflicts = {{2}, {2}, {0, 1}};
  p.objective.exact = false;
  p.objective.dw = {0.5, 0.5, 1.0};
  const auto a = branch_and_bound(p);
  const auto b = exhaustive(p);
  CHECK(a.chosen == b.chosen);
  CHECK(a.chosen == std::vector<int>{2});
}
