#include "doctest.h"

#include "ddm/certify.hpp"
#include "fixtures.hpp"

#include <algorithm>

using namespace ddm;

namespace {

cert::Settings settings() {
  cert::Settings s;
  s.alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  s.seed = 3;
  return s;
}

std::size_t count_id(const report::Report& r, const std::string& id) {
  return static_cast<std::size_t>(
      std::count_if(r.claims.begin(), r.claims.end(), [&](const report::Claim& c) { return c.id == id; }));
}

}  // namespace

TEST_CASE("claim residual convention") {
  const cert::ClaimMaker cm(true);
  const auto ok = cm.make("x", "a", {}, Scalar::from_exact(1), "<=", Scalar::from_exact(2), true);
  CHECK(ok.status == report::Status::Certified);
  CHECK(ok.residual == doctest::Approx(1.0));
  const auto bad = cm.make("x", "a", {}, Scalar::from_exact(3), "<=", Scalar::from_exact(2), true);
  CHECK(bad.status == report::Status::Violated);
  const auto diag = cm.make("x", "a", {}, Scalar::from_exact(3), "<=", Scalar::from_exact(2), false);
  CHECK(diag.status == report::Status::Diagnostic);
  const auto w = cert::worst_of({ok, bad}, "y", "b");
  CHECK(w.status == report::Status::Violated);
}

TEST_CASE("query suites on the reference chain have no violations") {
  const MarkovMeasures mm(testing::reference_model());
  for (const char* q : {"X", "0[2]", "0[1 2]"}) {
    CAPTURE(q);
    cert::QueryLab lab(mm, sym::parse_union(2, q), settings());
    report::Report r;
    lab.phi_suite(r);
    lab.entropy_suite(r);
    lab.hellinger_suite(r);
    lab.cover_chain_suite(r);
    lab.interpolation_suite(r);
    lab.near_one_suite(r);
    lab.derivative_suite(r);
    CHECK_FALSE(r.any_violated());
    CHECK(count_id(r, "hellinger_mixed_bound") >= 1);
    CHECK(count_id(r, "epsilon_ladder_monotone") >= 1);
    REQUIRE(r.scans.size() == 1);
    CHECK(r.scans[0].rows.size() == 5);
  }
}

TEST_CASE("whole-space bracket on the reference chain") {
  const MarkovMeasures mm(testing::reference_model());
  report::Report r;
  cert::whole_space_suite(mm, settings(), r);
  const auto it = std::find_if(r.brackets.begin(), r.brackets.end(),
                               [](const report::Bracket& b) { return b.quantity == "Phi(X)"; });
  REQUIRE(it != r.brackets.end());
  CHECK(*it->lower.value.exact == Rational(1, 2));
  CHECK(*it->upper.value.exact == 1);
  CHECK(it->certified);
}

TEST_CASE("random property suites") {
  std::mt19937_64 rng(11);
  for (const auto& [name, c] : cert::random_pair_suite(rng, 200)) {
    CAPTURE(name);
    CHECK(c.failures == 0);
    CHECK(c.draws > 0);
  }
  CHECK(cert::edl_suite(rng, 2000).failures == 0);
  CHECK(cert::hfpl_grid_gap(4) < 1e-9);
}

TEST_CASE("solver agrees with exhaustive enumeration") {
  const auto st = cert::oracle_equivalence(5, 40);
  CHECK(st.instances == 40);
  CHECK(st.mismatches == 0);
}

TEST_CASE("random models are valid") {
  std::mt19937_64 rng(2);
  const auto m = cert::random_model(rng, 3);
  CHECK(m.N == 3);
  CHECK(stationary_distribution(m.P) == m.pi_star);
}
