#include "doctest.h"

#include "ddm/symbolic.hpp"

using namespace ddm::sym;

TEST_CASE("literals round-trip") {
  const auto c = parse_cylinder(2, "-1[1 2]");
  CHECK(c.start == -1);
  CHECK(c.word == Word{1, 2});
  CHECK(to_literal(c) == "-1[1 2]");
  CHECK(parse_cylinder(2, "_0[2]") == parse_cylinder(2, "0[2]"));
  CHECK(parse_union(2, "X").is_full());
  CHECK(parse_union(2, "{}").is_empty());
}

TEST_CASE("malformed literals are rejected") {
  CHECK_THROWS_AS(parse_cylinder(2, "0[3]"), SymbolicError);
  CHECK_THROWS_AS(parse_cylinder(2, "0[]"), SymbolicError);
  CHECK_THROWS_AS(parse_cylinder(2, "0[1"), SymbolicError);
  CHECK_THROWS_AS(parse_union(2, "0[1] |"), SymbolicError);
}

TEST_CASE("refinement onto a wider window") {
  const auto u = refine(parse_union(2, "1[2]"), 0, 1);
  CHECK(u.window_lo() == 0);
  CHECK(u.window_len() == 2);
  CHECK(u.words() == std::vector<Word>{{1, 2}, {2, 2}});
  CHECK_THROWS_AS(refine(parse_union(2, "3[2]"), 0, 1), SymbolicError);
}

TEST_CASE("set algebra") {
  const auto a = parse_union(2, "0[1]");
  const auto b = parse_union(2, "1[2]");
  const auto i = set_op(a, b, SetOp::Intersect);
  CHECK(i == parse_union(2, "0[1 2]"));
  const auto u = set_op(a, complement(a), SetOp::Union);
  CHECK(u.is_full());
  CHECK(set_op(a, a, SetOp::Difference).is_empty());
  CHECK(parse_union(2, "0[1]|0[2]") == CylinderUnion::full(2));
}

TEST_CASE("shift preimage and ladder membership") {
  const auto q = parse_union(2, "0[1 2]");
  const auto s = preimage_shift(q, 2);
  CHECK(s == parse_union(2, "2[1 2]"));
  CHECK(s.in_ladder(2));
  CHECK_FALSE(s.in_ladder(3));
  CHECK(CylinderUnion::full(2).in_ladder(100));
}

TEST_CASE("canonical form drops free coordinates") {
  const auto u = parse_union(2, "0[1 1]|0[1 2]").canonical();
  CHECK(u.window_len() == 1);
  CHECK(to_literal(u) == "0[1]");
  CHECK(all_words(3, 2).size() == 9);
}
