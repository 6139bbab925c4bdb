#pragma once

// Exact weighted set cover with side constraints. Used for every truncated
// infimum: minimise a per-candidate additive objective over candidate subsets
// that cover every element and satisfy linear upper-bound constraints.

#include "ddm/rational.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ddm::search {

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactConstraint {
  std::vector<Rational> w;
  Rational bound;
  bool strict = true;  // sum < bound, otherwise sum <= bound
};

struct FloatConstraint {
  std::vector<double> w;
  double bound = 0.0;
  bool strict = true;  // sum < bound, otherwise sum <= bound
};

struct Objective {
  bool exact = true;
  std::vector<Rational> qw;  // used when exact
  std::vector<double> dw;    // used otherwise
};

struct Problem {
  int n_elements = 0;
  std::vector<std::vector<int>> covers;  // candidate -> sorted element ids
  bool disjoint = false;
  std::vector<std::vector<int>> conflicts;  // candidate -> conflicting candidates (disjoint mode)
  Objective objective;
  std::vector<ExactConstraint> exact_constraints;
  std::vector<FloatConstraint> float_constraints;

  std::size_t n_candidates() const { return covers.size(); }
};

struct Solution {
  bool feasible = false;
  std::vector<int> chosen;  // sorted candidate indices
  Scalar value;             // objective summed in index order
  std::uint64_t nodes = 0;
};

/// Objective summed over `chosen` in index order (the canonical value).
Scalar canonical_value(const Problem& p, const std::vector<int>& chosen);
/// True when `chosen` covers everything, respects disjointness and all constraints.
bool is_feasible(const Problem& p, const std::vector<int>& chosen);

/// Branch and bound. Ties are broken by fewer candidates, then lexicographically
/// smallest index list.
Solution branch_and_bound(const Problem& p);

/// Include/exclude enumeration over every candidate subset without pruning.
/// Refuses more than `max_candidates` candidates.
Solution exhaustive(const Problem& p, int max_candidates = 26);

/// Visits every feasible subset (sorted indices) in lexicographic include-first
/// order. Stops after `limit` visits or `node_limit` search nodes; returns
/// false if stopped early.
bool enumerate_feasible(const Problem& p, const std::function<void(const std::vector<int>&)>& visit,
                        std::uint64_t limit, std::uint64_t node_limit = 20'000'000);

}  // namespace ddm::search
