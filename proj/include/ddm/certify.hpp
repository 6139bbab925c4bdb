#pragma once

// Evaluates the inequality suites on engine outputs and emits claims,
// brackets and report entries. Binding claims compare matched quantities from
// the finite-horizon model, where the inequality is provable cover by cover;
// anything mixing truncated values with exact ones is reported as diagnostic.

#include "ddm/engine.hpp"
#include "ddm/markov.hpp"
#include "ddm/report.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace ddm::cert {

struct Settings {
  engine::Horizon horizon{2, 2};
  std::vector<Rational> eps_ladder;  // empty: 2^-k * Phi per query
  std::vector<double> alpha_grid;    // strictly increasing in [0,1]
  int shifts = 2;
  double beta = 2.0;
  std::uint64_t seed = 0;
  bool exact_mode = true;
  std::uint64_t family_limit = 2000;
};

/// Builds claims with the residual convention "residual >= -tol means the relation holds".
class ClaimMaker {
 public:
  explicit ClaimMaker(bool exact_mode) : exact_mode_(exact_mode) {}

  report::Claim make(std::string id, std::string anchor, report::Json inputs, const Scalar& lhs,
                     const std::string& relation, const Scalar& rhs, bool binding) const;
  /// lhs <= +inf: always holds.
  report::Claim make_unbounded(std::string id, std::string anchor, report::Json inputs, const Scalar& lhs,
                               bool binding) const;
  double tolerance(const Scalar& lhs, const Scalar& rhs) const;

 private:
  bool exact_mode_;
};

/// Keeps the claim with the smallest residual and records how many were checked.
report::Claim worst_of(const std::vector<report::Claim>& claims, const std::string& id, const std::string& anchor);

/// All computations for one query at one horizon, with construction results memoised.
class QueryLab {
 public:
  QueryLab(const MarkovMeasures& mm, const sym::CylinderUnion& Q, const Settings& s);

  const engine::Engine& engine() const { return *engine_; }
  const std::string& query_literal() const { return literal_; }
  const std::vector<Rational>& ladder() const { return ladder_; }
  const engine::ConstructionResult& get(const engine::Construction& c);
  /// Value of the construction at one epsilon, against its own references.
  engine::Evaluation at(const engine::Construction& c, const Rational& eps);
  Rational lambda_q() const;
  Rational phi_t() const { return *engine_->phi().value.exact; }

  void phi_suite(report::Report& r);
  void entropy_suite(report::Report& r);
  void hellinger_suite(report::Report& r);
  void cover_chain_suite(report::Report& r);
  void interpolation_suite(report::Report& r);
  void near_one_suite(report::Report& r);
  void derivative_suite(report::Report& r);

 private:
  void add_entry(report::Report& r, const engine::ConstructionResult& res);
  void ladder_claims(report::Report& r, const engine::ConstructionResult& res);
  void horizon_sweep(report::Report& r, const engine::Construction& c);

  const MarkovMeasures* mm_;
  sym::CylinderUnion Q_;
  std::string literal_;
  Settings s_;
  ClaimMaker cm_;
  std::unique_ptr<engine::Engine> engine_;
  std::vector<Rational> ladder_;
  std::map<std::string, engine::ConstructionResult> cache_;
  std::map<std::string, engine::References> ref_cache_;
};

/// Phi(X) brackets (K* route and trivial cover), the finiteness report and
/// the whole-space relative entropy bounds.
void whole_space_suite(const MarkovMeasures& mm, const Settings& s, report::Report& r);

/// Model sanity checks plus randomised property suites for the information
/// kit and the solver.
void selftest_suite(const MarkovMeasures& mm, const Settings& s, report::Report& r);

struct PropertyCounts {
  std::size_t draws = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // most negative slack seen
};

/// Conditioning identities and the Hellinger-KL bound on random finite pairs.
std::map<std::string, PropertyCounts> random_pair_suite(std::mt19937_64& rng, std::size_t pairs);
/// Both sandwiches for the exponential difference quotient on random draws.
PropertyCounts edl_suite(std::mt19937_64& rng, std::size_t draws);
/// Closed-form maxima against a numerical search, worst absolute gap.
double hfpl_grid_gap(int n_max);

struct OracleStats {
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  std::size_t max_candidates = 0;
  std::vector<std::string> failures;
};
/// Random positive models with random queries: branch and bound against exhaustive enumeration.
OracleStats oracle_equivalence(std::uint64_t seed, std::size_t instances);

/// Random model with positive rational P and pi (pi* solved exactly).
MarkovModel random_model(std::mt19937_64& rng, int N);

}  // namespace ddm::cert
