#pragma once

// Finite-horizon cover optimisation. A cover draws its m-th member, m in
// {-D..0}, from unions of cylinders _m[w] with |w| = L; every infimum over
// such covers is an exact finite minimum solved by ddm::search.

#include "ddm/markov.hpp"
#include "ddm/rational.hpp"
#include "ddm/search.hpp"
#include "ddm/symbolic.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddm::engine {

class EngineError : public std::runtime_error {
 public:
  enum class Code { HorizonTooSmall, EmptyFamily, ParameterRange, TooLarge };
  EngineError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct Horizon {
  int D = 0;
  int L = 1;
  friend bool operator==(const Horizon&, const Horizon&) = default;
};

/// (0,1), (1,1), (1,2), (2,2), ... up to `h`: each step enlarges D or L by one.
std::vector<Horizon> horizon_chain(Horizon h);

struct Candidate {
  int m = 0;
  sym::Word word;
};

struct Cover {
  std::map<int, sym::CylinderUnion> entries;  // m -> A_m, only nonempty slots
  bool disjoint = false;

  /// "m: literal; m: literal" in increasing m, or "{}" for the empty cover.
  std::string to_literal() const;
};

/// sum_m phi0(S^m A_m).
Rational cover_cost(const MarkovMeasures& mm, const Cover& c);
/// Q is contained in the union of the entries.
bool cover_contains(const Cover& c, const sym::CylinderUnion& Q);
/// B_m = A_m minus the union of A_k over k > m. The result is pairwise disjoint,
/// still covers the same union and never costs more.
Cover disjointify(const Cover& c);

/// Candidate cylinders and the elements of Q they cover, at one horizon.
class CoverUniverse {
 public:
  CoverUniverse(const MarkovMeasures& mm, const sym::CylinderUnion& Q, Horizon h);

  const sym::CylinderUnion& query() const { return Q_; }
  Horizon horizon() const { return h_; }
  /// Q depends only on coordinates inside [-D, L-1].
  bool representable() const { return representable_; }
  const std::vector<Candidate>& candidates() const { return cands_; }
  int n_elements() const { return n_elements_; }
  /// candidate -> sorted element ids.
  const std::vector<std::vector<int>>& coverage() const { return coverage_; }
  /// candidate -> candidates it intersects (used for disjoint covers).
  const std::vector<std::vector<int>>& conflicts() const { return conflicts_; }

  /// phi0(S^m _m[w]) = phi0(_0[w]).
  const Rational& cost(std::size_t i) const { return cost_[i]; }
  /// Lambda(_m[w]).
  const Rational& lambda(std::size_t i) const { return lambda_[i]; }
  /// Integral of g over S^m _m[w]; exact when g is.
  Scalar weight(std::size_t i, const WeightFn& g) const;

  search::Objective objective(const WeightFn& g) const;
  Cover to_cover(const std::vector<int>& chosen, bool disjoint) const;
  search::Problem base_problem(bool disjoint) const;

 private:
  const MarkovMeasures* mm_;
  sym::CylinderUnion Q_;
  Horizon h_;
  bool representable_ = false;
  std::vector<Candidate> cands_;
  int n_elements_ = 0;
  std::vector<std::vector<int>> coverage_;
  std::vector<std::vector<int>> conflicts_;
  std::vector<Rational> cost_;
  std::vector<Rational> lambda_;
};

/// A second-level infimum: minimise `objective` over covers within epsilon of
/// optimal for the cost and then, level by level, for each ladder integrand.
struct Construction {
  std::string id;
  std::vector<WeightFn> ladder;
  WeightFn objective;
  bool disjoint = false;
  std::map<std::string, double> params;

  static Construction phi();
  static Construction relative_entropy();        // Z log Z
  static Construction relative_entropy_kappa();  // Z log Z + 1/e
  static Construction hellinger(double alpha);   // Z^alpha
  static Construction relative_entropy_alpha(double alpha);
  /// Integrand Z^alpha (log Z)^(n-1) over the n-level family built from alpha0.
  static Construction psi(double alpha, double alpha0, int n);
  /// Integrand Z^alpha over the two-level family built from gamma.
  static Construction hellinger_cross(double alpha, double gamma);

  std::string describe() const;
};

struct Evaluation {
  bool feasible = false;
  Scalar value;
  std::vector<int> chosen;
  Cover witness;
  Rational cost = 0;        // sum of candidate costs
  Rational lambda_sum = 0;  // sum of Lambda over chosen members
  bool uses_deepest_slot = false;
  std::uint64_t nodes = 0;
};

/// Threshold values of the nested family: the cost reference and one per ladder level.
struct References {
  Rational phi = 0;
  std::vector<Scalar> levels;
};

struct LadderPoint {
  Rational epsilon = 0;
  Evaluation eval;
};

struct ConstructionResult {
  Construction construction;
  References refs;
  Evaluation limit;                 // epsilon -> 0 value
  std::vector<LadderPoint> ladder;  // strictly decreasing epsilon
  bool monotone = true;             // ladder nondecreasing and bounded by the limit
  std::vector<std::string> diagnostics;
};

struct ShiftPoint {
  int shift = 0;
  bool representable = false;
  Evaluation eval;
};

struct PerSlot {
  int m = 0;
  Rational lambda = 0;
  Rational phi = 0;
  double lambda_d = 0.0;
  double phi_d = 0.0;
  double z_pow = 0.0;      // integral of Z^(1-alpha) dphi0 over S^m A_m
  double log_z_dl = 0.0;   // integral of log Z dLambda over A_m
};

class Engine {
 public:
  Engine(const MarkovMeasures& mm, sym::CylinderUnion Q, Horizon h);

  const MarkovMeasures& measures() const { return *mm_; }
  const CoverUniverse& universe() const { return U_; }
  const sym::CylinderUnion& query() const { return U_.query(); }
  Horizon horizon() const { return U_.horizon(); }

  /// Truncated Phi(Q) and its witness.
  const Evaluation& phi() const { return phi_; }

  /// Lexicographic epsilon -> 0 references for the construction's ladder.
  References references(const Construction& c) const;
  /// Objective minimised over the limit family (cost = Phi, each level at its reference).
  Evaluation limit(const Construction& c, const References& refs) const;
  /// Objective over { cost < refs.phi + eps, level_k < refs.levels[k] + eps }.
  Evaluation at_epsilon(const Construction& c, const Rational& eps, const References& refs) const;

  /// Default ladder 2^-k * Phi for k = 1..6 (2^-k when Phi = 0).
  std::vector<Rational> default_ladder() const;
  /// Limit plus ladder with monotonicity diagnostics. `frozen` overrides the references.
  ConstructionResult evaluate(const Construction& c, const std::vector<Rational>& eps_ladder,
                              const std::optional<References>& frozen = std::nullopt) const;

  /// Covers with cost < phi_ref + eps. Returns false if `limit` cut the enumeration short.
  bool epsilon_cover_family(const Rational& phi_ref, const Rational& eps, bool disjoint, std::uint64_t limit,
                            std::vector<std::vector<int>>& out) const;

  Evaluation make_evaluation(const search::Solution& s, bool disjoint) const;
  std::vector<PerSlot> per_slot(const std::vector<int>& chosen, double alpha) const;

 private:
  search::Problem problem_for(const Construction& c) const;

  const MarkovMeasures* mm_;
  CoverUniverse U_;
  Evaluation phi_;
};

/// Truncated Phi(S^{-i} Q) for i = 0..n_max.
std::vector<ShiftPoint> bar_phi(const MarkovMeasures& mm, const sym::CylinderUnion& Q, Horizon h, int n_max);

}  // namespace ddm::engine
