#include "ddm/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace ddm::search {

namespace {

using Int = boost::multiprecision::mpz_int;

Int floor_of(const Rational& x) {
  const Int num = boost::multiprecision::numerator(x);
  const Int den = boost::multiprecision::denominator(x);
  Int q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

struct ScaledVec {
  std::vector<Int> n;
  Int den = 1;
};

ScaledVec scale(const std::vector<Rational>& w) {
  ScaledVec s;
  for (const auto& x : w) s.den = boost::multiprecision::lcm(s.den, Int(boost::multiprecision::denominator(x)));
  s.n.reserve(w.size());
  for (const auto& x : w)
    s.n.push_back(Int(boost::multiprecision::numerator(x)) * (s.den / Int(boost::multiprecision::denominator(x))));
  return s;
}

/// Largest integer sum allowed by `sum < bound` (strict) or `sum <= bound`.
Int integer_limit(const Rational& bound, const Int& den, bool strict) {
  const Rational x = bound * Rational(den);
  if (!strict) return floor_of(x);
  const Int f = floor_of(x);
  return Rational(f) == x ? f - 1 : f;
}

void validate(const Problem& p) {
  const std::size_t n = p.n_candidates();
  if (p.objective.exact ? p.objective.qw.size() != n : p.objective.dw.size() != n)
    throw SearchError("objective length does not match candidate count");
  for (const auto& c : p.exact_constraints)
    if (c.w.size() != n) throw SearchError("exact constraint length does not match candidate count");
  for (const auto& c : p.float_constraints)
    if (c.w.size() != n) throw SearchError("float constraint length does not match candidate count");
  for (const auto& cov : p.covers)
    for (int e : cov)
      if (e < 0 || e >= p.n_elements) throw SearchError("element id out of range");
  if (p.disjoint && p.conflicts.size() != n) throw SearchError("conflict lists missing in disjoint mode");
}

double float_sum(const std::vector<double>& w, const std::vector<int>& chosen) {
  double s = 0.0;
  for (int i : chosen) s += w[static_cast<std::size_t>(i)];
  return s;
}

bool float_ok(const FloatConstraint& c, double sum) { return c.strict ? sum < c.bound : sum <= c.bound; }

/// Order on candidate solutions with equal value: fewer candidates, then lexicographic.
bool tie_better(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

double abs_sum(const std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += std::abs(x);
  return s;
}

// Objective accumulator: exact problems use scaled integers, float problems doubles.
template <class O>
struct Traits;

template <>
struct Traits<Int> {
  static Int zero() { return Int(0); }
  static bool neg(const Int& x) { return x < 0; }
};

template <>
struct Traits<double> {
  static double zero() { return 0.0; }
  static bool neg(double x) { return x < 0; }
};

template <class O>
class BranchAndBound {
 public:
  BranchAndBound(const Problem& p, std::vector<O> obj, double obj_slack) : p_(p), obj_full_(std::move(obj)), obj_slack_(obj_slack) {
    for (const auto& c : p.exact_constraints) {
      ScaledVec s = scale(c.w);
      ec_limit_full_.push_back(integer_limit(c.bound, s.den, c.strict));
      ec_full_.push_back(std::move(s.n));
    }
    for (const auto& c : p.float_constraints) fc_slack_.push_back(1e-12 * (1.0 + std::abs(c.bound) + abs_sum(c.w)));
  }

  Solution run() {
    Solution sol;
    if (!reduce()) return sol;
    init_state();
    obj_d_.clear();
    for (const auto& x : obj_) obj_d_.push_back(to_d(x));
    ec_d_.assign(ec_.size(), {});
    for (std::size_t k = 0; k < ec_.size(); ++k)
      for (const auto& x : ec_[k]) ec_d_[k].push_back(to_d(x));
    prepare_budgets();
    cover_phase();
    if (!has_best_) {
      sol.nodes = nodes_;
      return sol;
    }
    sol.feasible = true;
    sol.chosen = best_chosen_;
    sol.value = canonical_value(p_, best_chosen_);
    sol.nodes = nodes_;
    return sol;
  }

 private:
  struct Budget {
    std::size_t k = 0;         // exact constraint index
    std::vector<int> order;    // negative-objective candidates, best ratio first
    std::vector<double> cost;  // constraint weights as doubles (float objectives)
    // Lagrangian weights obj*scale + mult*cost, all nonnegative; the bound is
    // (cover bound of these weights - mult*remaining) / scale.
    std::vector<O> lag;
    std::vector<double> lag_d;
    O scale{};
    O mult{};
  };

  // ---- preprocessing ----

  bool nonneg(std::size_t c) const {
    if (Traits<O>::neg(obj_full_[c])) return false;
    for (const auto& w : ec_full_)
      if (w[c] < 0) return false;
    for (const auto& fc : p_.float_constraints)
      if (fc.w[c] < 0) return false;
    return true;
  }

  // w(b) <= w(a) componentwise; `strict_somewhere` set when some component is smaller.
  bool weights_le(std::size_t b, std::size_t a, bool& strict_somewhere) const {
    strict_somewhere = false;
    auto cmp = [&](const auto& wb, const auto& wa) {
      if (wb > wa) return false;
      if (wb < wa) strict_somewhere = true;
      return true;
    };
    if (!cmp(obj_full_[b], obj_full_[a])) return false;
    for (const auto& w : ec_full_)
      if (!cmp(w[b], w[a])) return false;
    for (const auto& fc : p_.float_constraints)
      if (!cmp(fc.w[b], fc.w[a])) return false;
    return true;
  }

  bool reduce() {
    const std::size_t n = p_.n_candidates();
    std::vector<bool> keep(n, true);
    if (!p_.disjoint) {
      for (std::size_t c = 0; c < n; ++c)
        if (nonneg(c) && p_.covers[c].empty()) keep[c] = false;
      // Swapping c for a dominating d must not lose the canonical tie-break:
      // exact sums need a strictly smaller objective or a smaller index; float
      // sums depend on summation order, so dominance is only used exactly.
      if (n <= 2000 && std::is_same_v<O, Int>) {
        for (std::size_t c = 0; c < n; ++c) {
          if (!keep[c] || !nonneg(c)) continue;
          for (std::size_t d = 0; d < n && keep[c]; ++d) {
            if (d == c || !keep[d]) continue;
            const auto& cc = p_.covers[c];
            const auto& cd = p_.covers[d];
            if (cc.size() > cd.size() || !std::includes(cd.begin(), cd.end(), cc.begin(), cc.end())) continue;
            bool strict = false;
            if (!weights_le(d, c, strict)) continue;
            (void)strict;
            if (obj_full_[d] < obj_full_[c] || d < c) keep[c] = false;
          }
        }
      }
    }
    for (std::size_t c = 0; c < n; ++c)
      if (keep[c]) orig_.push_back(static_cast<int>(c));
    const std::size_t m = orig_.size();
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < m; ++i) local[static_cast<std::size_t>(orig_[i])] = static_cast<int>(i);

    // Element -> covering candidates (local ids), then merge equal and implied elements.
    std::vector<std::vector<int>> by_elem(static_cast<std::size_t>(p_.n_elements));
    for (std::size_t i = 0; i < m; ++i)
      for (int e : p_.covers[static_cast<std::size_t>(orig_[i])]) by_elem[static_cast<std::size_t>(e)].push_back(static_cast<int>(i));
    for (auto& v : by_elem) {
      if (v.empty()) return false;
      std::sort(v.begin(), v.end());
    }
    std::sort(by_elem.begin(), by_elem.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    by_elem.erase(std::unique(by_elem.begin(), by_elem.end()), by_elem.end());
    if (by_elem.size() <= 5000) {
      std::vector<std::vector<int>> kept;
      for (const auto& v : by_elem) {
        bool implied = false;
        for (const auto& k : kept)
          if (std::includes(v.begin(), v.end(), k.begin(), k.end())) {
            implied = true;
            break;
          }
        if (!implied) kept.push_back(v);
      }
      by_elem = std::move(kept);
    }
    elem_cands_ = std::move(by_elem);
    cand_elems_.assign(m, {});
    for (std::size_t e = 0; e < elem_cands_.size(); ++e)
      for (int c : elem_cands_[e]) cand_elems_[static_cast<std::size_t>(c)].push_back(static_cast<int>(e));

    obj_.resize(m);
    for (std::size_t i = 0; i < m; ++i) obj_[i] = obj_full_[static_cast<std::size_t>(orig_[i])];
    ec_.assign(ec_full_.size(), std::vector<Int>(m));
    for (std::size_t k = 0; k < ec_full_.size(); ++k)
      for (std::size_t i = 0; i < m; ++i) ec_[k][i] = ec_full_[k][static_cast<std::size_t>(orig_[i])];
    fc_.assign(p_.float_constraints.size(), std::vector<double>(m));
    for (std::size_t k = 0; k < fc_.size(); ++k)
      for (std::size_t i = 0; i < m; ++i) fc_[k][i] = p_.float_constraints[k].w[static_cast<std::size_t>(orig_[i])];
    conflicts_.assign(m, {});
    if (p_.disjoint)
      for (std::size_t i = 0; i < m; ++i)
        for (int d : p_.conflicts[static_cast<std::size_t>(orig_[i])])
          if (local[static_cast<std::size_t>(d)] >= 0) conflicts_[i].push_back(local[static_cast<std::size_t>(d)]);
    has_neg_.assign(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      bool neg = Traits<O>::neg(obj_[i]);
      for (const auto& w : ec_) neg = neg || w[i] < 0;
      for (const auto& w : fc_) neg = neg || w[i] < 0;
      has_neg_[i] = neg;
      if (neg) extras_.push_back(static_cast<int>(i));
    }
    return true;
  }

  void init_state() {
    const std::size_t m = orig_.size();
    status_.assign(m, 0);
    blocked_.assign(m, 0);
    hits_.assign(m, 0);
    cover_count_.assign(elem_cands_.size(), 0);
    uncovered_ = static_cast<int>(elem_cands_.size());
    cur_ = Traits<O>::zero();
    ec_sum_.assign(ec_.size(), Int(0));
    fc_sum_.assign(fc_.size(), 0.0);
  }

  bool available(std::size_t c) const { return status_[c] == 0 && blocked_[c] == 0; }

  void include(std::size_t c) {
    status_[c] = 1;
    cur_ += obj_[c];
    for (std::size_t k = 0; k < ec_.size(); ++k) ec_sum_[k] += ec_[k][c];
    for (std::size_t k = 0; k < fc_.size(); ++k) fc_sum_[k] += fc_[k][c];
    for (int e : cand_elems_[c])
      if (cover_count_[static_cast<std::size_t>(e)]++ == 0) --uncovered_;
    for (int d : conflicts_[c]) ++blocked_[static_cast<std::size_t>(d)];
  }

  void undo_include(std::size_t c) {
    status_[c] = 0;
    cur_ -= obj_[c];
    for (std::size_t k = 0; k < ec_.size(); ++k) ec_sum_[k] -= ec_[k][c];
    for (std::size_t k = 0; k < fc_.size(); ++k) fc_sum_[k] -= fc_[k][c];
    for (int e : cand_elems_[c])
      if (--cover_count_[static_cast<std::size_t>(e)] == 0) ++uncovered_;
    for (int d : conflicts_[c]) --blocked_[static_cast<std::size_t>(d)];
  }

  // Lower bound on what the remaining decisions can add to a weight vector:
  // the negative part (every available negative weight) plus, while elements
  // remain uncovered, a bound on the positive cost of covering them.
  template <class V, class T>
  T future_lb(const V& w, const std::vector<double>& wd, T zero, std::size_t from_extra) const {
    T acc = neg_part(w, zero, from_extra);
    if (from_extra == npos) acc += cover_part<T>(wd);
    return acc;
  }

  static double to_d(const Int& x) { return x.convert_to<double>(); }
  static double to_d(double x) { return x; }

  bool in_scope(std::size_t c, std::size_t from_extra) const {
    return available(c) && (from_extra == npos || extra_pos_[c] >= from_extra);
  }

  template <class V, class T>
  T neg_part(const V& w, T zero, std::size_t from_extra) const {
    T acc = zero;
    if (from_extra == npos) {
      for (std::size_t c = 0; c < w.size(); ++c)
        if (available(c) && w[c] < 0) acc += w[c];
    } else {
      for (std::size_t j = from_extra; j < extras_.size(); ++j) {
        const auto c = static_cast<std::size_t>(extras_[j]);
        if (available(c) && w[c] < 0) acc += w[c];
      }
    }
    return acc;
  }

  // Positive covering cost: the larger of the worst single element and the
  // sum over elements of the cheapest per-element share (positive weight
  // divided by the uncovered elements it hits). Evaluated in doubles; for
  // integer sums the result is shrunk by a relative 1e-9 and floored, which
  // dominates any accumulated rounding, so it stays a valid lower bound.
  template <class T>
  T cover_part(const std::vector<double>& w) const {
    for (std::size_t c = 0; c < w.size(); ++c) {
      hits_[c] = 0;
      if (!available(c)) continue;
      for (int e : cand_elems_[c]) hits_[c] += cover_count_[static_cast<std::size_t>(e)] == 0;
    }
    double worst = 0.0;
    double shares = 0.0;
    for (std::size_t e = 0; e < elem_cands_.size(); ++e) {
      if (cover_count_[e] > 0) continue;
      double best = std::numeric_limits<double>::infinity();
      double best_share = best;
      for (int c : elem_cands_[e]) {
        const auto cu = static_cast<std::size_t>(c);
        if (!available(cu)) continue;
        const double v = w[cu] > 0 ? w[cu] : 0.0;
        best = std::min(best, v);
        best_share = std::min(best_share, v / hits_[cu]);
      }
      if (std::isfinite(best)) {
        worst = std::max(worst, best);
        shares += best_share;
      }
    }
    const double v = std::max(worst, shares);
    if constexpr (std::is_same_v<T, Int>) {
      if (!(v > 0)) return Int(0);
      return Int(std::floor(v * (1.0 - 1e-9)));
    } else {
      return v;
    }
  }

  // Negative objective part under a budget: any completion respects every
  // constraint with nonnegative weights, so the negative objective it can
  // collect is at most a fractional knapsack over the available candidates.
  void prepare_budgets() {
    const std::size_t m = obj_.size();
    extra_pos_.assign(m, npos);
    for (std::size_t j = 0; j < extras_.size(); ++j) extra_pos_[static_cast<std::size_t>(extras_[j])] = j;
    for (std::size_t k = 0; k < ec_.size(); ++k) {
      if (std::any_of(ec_[k].begin(), ec_[k].end(), [](const Int& x) { return x < 0; })) continue;
      Budget b;
      b.k = k;
      for (std::size_t i = 0; i < m; ++i)
        if (Traits<O>::neg(obj_[i])) b.order.push_back(static_cast<int>(i));
      if (b.order.empty()) continue;
      if constexpr (std::is_same_v<O, Int>) {
        std::stable_sort(b.order.begin(), b.order.end(), [&](int a, int c) {
          const auto ua = static_cast<std::size_t>(a), uc = static_cast<std::size_t>(c);
          return obj_[ua] * ec_[k][uc] < obj_[uc] * ec_[k][ua];
        });
      } else {
        b.cost.resize(m);
        for (std::size_t i = 0; i < m; ++i) b.cost[i] = ec_[k][i].template convert_to<double>();
        std::stable_sort(b.order.begin(), b.order.end(), [&](int a, int c) {
          const auto ua = static_cast<std::size_t>(a), uc = static_cast<std::size_t>(c);
          return obj_[ua] * b.cost[uc] < obj_[uc] * b.cost[ua];
        });
      }
      // Steepest ratio -obj/cost among negative candidates; zero cost makes it unbounded.
      const auto a = static_cast<std::size_t>(b.order.front());
      if (ec_[k][a] > 0) {
        b.lag.resize(m);
        if constexpr (std::is_same_v<O, Int>) {
          b.scale = ec_[k][a];
          b.mult = -obj_[a];
          for (std::size_t i = 0; i < m; ++i) b.lag[i] = obj_[i] * b.scale + b.mult * ec_[k][i];
        } else {
          b.scale = 1.0;
          b.mult = -obj_[a] / b.cost[a];
          for (std::size_t i = 0; i < m; ++i) b.lag[i] = std::max(0.0, obj_[i] + b.mult * b.cost[i]);
        }
      }
      for (const auto& x : b.lag) b.lag_d.push_back(to_d(x));
      budgets_.push_back(std::move(b));
    }
  }

  O knapsack(const Budget& b, std::size_t from_extra) const {
    O acc = Traits<O>::zero();
    if constexpr (std::is_same_v<O, Int>) {
      Int rem = ec_limit_full_[b.k] - ec_sum_[b.k];
      if (rem < 0) rem = 0;
      for (int ci : b.order) {
        const auto c = static_cast<std::size_t>(ci);
        if (!in_scope(c, from_extra)) continue;
        const Int& cost = ec_[b.k][c];
        if (cost <= rem) {
          acc += obj_[c];
          rem -= cost;
        } else {
          const Int num = obj_[c] * rem;
          Int q = num / cost;
          if (q * cost != num) q -= 1;  // floor of a negative quotient
          acc += q;
          break;
        }
      }
    } else {
      double rem = (ec_limit_full_[b.k] - ec_sum_[b.k]).template convert_to<double>();
      if (rem < 0) rem = 0;
      for (int ci : b.order) {
        const auto c = static_cast<std::size_t>(ci);
        if (!in_scope(c, from_extra)) continue;
        const double cost = b.cost[c];
        if (cost <= rem) {
          acc += obj_[c];
          rem -= cost;
        } else {
          acc += obj_[c] * (rem / cost);
          break;
        }
      }
    }
    return acc;
  }

  O lagrangian(const Budget& b) const {
    const O cov = cover_part<O>(b.lag_d);
    if constexpr (std::is_same_v<O, Int>) {
      Int rem = ec_limit_full_[b.k] - ec_sum_[b.k];
      if (rem < 0) rem = 0;
      const Int num = cov - b.mult * rem;
      Int q = num / b.scale;
      if (num < 0 && q * b.scale != num) q -= 1;
      return q;
    } else {
      double rem = (ec_limit_full_[b.k] - ec_sum_[b.k]).template convert_to<double>();
      if (rem < 0) rem = 0;
      return cov - b.mult * rem;
    }
  }

  O objective_lb(std::size_t from_extra) const {
    O neg = neg_part(obj_, Traits<O>::zero(), from_extra);
    for (const auto& b : budgets_) {
      const O kn = knapsack(b, from_extra);
      if (kn > neg) neg = kn;
    }
    if (from_extra == npos) neg += cover_part<O>(obj_d_);
    if (from_extra == npos)
      for (const auto& b : budgets_) {
        if (b.lag.empty()) continue;
        const O lg = lagrangian(b);
        if (lg > neg) neg = lg;
      }
    return cur_ + neg;
  }

  bool some_uncovered_dead() const {
    for (std::size_t e = 0; e < elem_cands_.size(); ++e) {
      if (cover_count_[e] > 0) continue;
      bool any = false;
      for (int c : elem_cands_[e])
        if (available(static_cast<std::size_t>(c))) {
          any = true;
          break;
        }
      if (!any) return true;
    }
    return false;
  }

  bool prune(std::size_t from_extra) const {
    if (has_best_) {
      const O lb = objective_lb(from_extra);
      if constexpr (std::is_same_v<O, Int>) {
        if (lb > best_value_) return true;
      } else {
        if (lb > best_value_ + obj_slack_) return true;
      }
    }
    for (std::size_t k = 0; k < ec_.size(); ++k)
      if (ec_sum_[k] + future_lb(ec_[k], ec_d_[k], Int(0), from_extra) > ec_limit_full_[k]) return true;
    for (std::size_t k = 0; k < fc_.size(); ++k)
      if (fc_sum_[k] + future_lb(fc_[k], fc_[k], 0.0, from_extra) > p_.float_constraints[k].bound + fc_slack_[k]) return true;
    return false;
  }

  void consider_leaf() {
    for (std::size_t k = 0; k < ec_.size(); ++k)
      if (ec_sum_[k] > ec_limit_full_[k]) return;
    std::vector<int> chosen;
    for (std::size_t c = 0; c < status_.size(); ++c)
      if (status_[c] == 1) chosen.push_back(orig_[c]);
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t k = 0; k < fc_.size(); ++k)
      if (!float_ok(p_.float_constraints[k], float_sum(p_.float_constraints[k].w, chosen))) return;
    O value;
    if constexpr (std::is_same_v<O, Int>) {
      value = cur_;
    } else {
      value = float_sum(p_.objective.dw, chosen);
    }
    if (!has_best_ || value < best_value_ || (value == best_value_ && tie_better(chosen, best_chosen_))) {
      has_best_ = true;
      best_value_ = value;
      best_chosen_ = std::move(chosen);
    }
  }

  void extras_phase(std::size_t from) {
    ++nodes_;
    if (prune(from)) return;
    consider_leaf();
    for (std::size_t j = from; j < extras_.size(); ++j) {
      const auto c = static_cast<std::size_t>(extras_[j]);
      if (!available(c)) continue;
      include(c);
      extras_phase(j + 1);
      undo_include(c);
    }
  }

  void cover_phase() {
    ++nodes_;
    if (uncovered_ == 0) {
      extras_phase(0);
      return;
    }
    if (some_uncovered_dead() || prune(npos)) return;
    // Most constrained uncovered element.
    std::size_t pick = npos;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (std::size_t e = 0; e < elem_cands_.size(); ++e) {
      if (cover_count_[e] > 0) continue;
      std::size_t cnt = 0;
      for (int c : elem_cands_[e])
        if (available(static_cast<std::size_t>(c))) ++cnt;
      if (cnt < fewest) {
        fewest = cnt;
        pick = e;
      }
    }
    std::vector<int> order;
    for (int c : elem_cands_[pick])
      if (available(static_cast<std::size_t>(c))) order.push_back(c);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return obj_[static_cast<std::size_t>(a)] < obj_[static_cast<std::size_t>(b)];
    });
    std::vector<int> excluded;
    for (int c : order) {
      const auto cu = static_cast<std::size_t>(c);
      include(cu);
      cover_phase();
      undo_include(cu);
      status_[cu] = 2;
      excluded.push_back(c);
    }
    for (int c : excluded) status_[static_cast<std::size_t>(c)] = 0;
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  const Problem& p_;
  std::vector<O> obj_full_;
  double obj_slack_;
  std::vector<std::vector<Int>> ec_full_;
  std::vector<Int> ec_limit_full_;
  std::vector<double> fc_slack_;

  std::vector<int> orig_;
  std::vector<std::vector<int>> elem_cands_;
  std::vector<std::vector<int>> cand_elems_;
  std::vector<O> obj_;
  std::vector<std::vector<Int>> ec_;
  std::vector<std::vector<double>> fc_;
  std::vector<std::vector<int>> conflicts_;
  std::vector<bool> has_neg_;
  std::vector<int> extras_;
  std::vector<double> obj_d_;              // double mirrors used by cover_part
  std::vector<std::vector<double>> ec_d_;
  std::vector<std::size_t> extra_pos_;  // position in extras_, npos if absent
  std::vector<Budget> budgets_;

  std::vector<int> status_;
  std::vector<int> blocked_;
  std::vector<int> cover_count_;
  mutable std::vector<int> hits_;  // scratch for future_lb
  int uncovered_ = 0;
  O cur_{};
  std::vector<Int> ec_sum_;
  std::vector<double> fc_sum_;

  bool has_best_ = false;
  O best_value_{};
  std::vector<int> best_chosen_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

Scalar canonical_value(const Problem& p, const std::vector<int>& chosen) {
  if (p.objective.exact) {
    Rational s = 0;
    for (int i : chosen) s += p.objective.qw[static_cast<std::size_t>(i)];
    return Scalar::from_exact(s);
  }
  return Scalar::from_double(float_sum(p.objective.dw, chosen));
}

bool is_feasible(const Problem& p, const std::vector<int>& chosen) {
  std::vector<bool> covered(static_cast<std::size_t>(p.n_elements), false);
  for (int c : chosen)
    for (int e : p.covers[static_cast<std::size_t>(c)]) covered[static_cast<std::size_t>(e)] = true;
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) return false;
  if (p.disjoint)
    for (int c : chosen)
      for (int d : p.conflicts[static_cast<std::size_t>(c)])
        if (std::binary_search(chosen.begin(), chosen.end(), d)) return false;
  for (const auto& c : p.exact_constraints) {
    Rational s = 0;
    for (int i : chosen) s += c.w[static_cast<std::size_t>(i)];
    if (c.strict ? !(s < c.bound) : !(s <= c.bound)) return false;
  }
  for (const auto& c : p.float_constraints)
    if (!float_ok(c, float_sum(c.w, chosen))) return false;
  return true;
}

Solution branch_and_bound(const Problem& p) {
  validate(p);
  if (p.objective.exact) {
    ScaledVec s = scale(p.objective.qw);
    BranchAndBound<Int> bb(p, std::move(s.n), 0.0);
    return bb.run();
  }
  BranchAndBound<double> bb(p, p.objective.dw, 1e-12 * (1.0 + abs_sum(p.objective.dw)));
  return bb.run();
}

Solution exhaustive(const Problem& p, int max_candidates) {
  validate(p);
  const std::size_t n = p.n_candidates();
  if (static_cast<int>(n) > max_candidates)
    throw SearchError("exhaustive enumeration refused: " + std::to_string(n) + " candidates");

  std::optional<ScaledVec> obj;
  if (p.objective.exact) obj = scale(p.objective.qw);
  std::vector<ScaledVec> ec;
  std::vector<Int> ec_limit;
  for (const auto& c : p.exact_constraints) {
    ec.push_back(scale(c.w));
    ec_limit.push_back(integer_limit(c.bound, ec.back().den, c.strict));
  }
  std::vector<std::vector<bool>> conflict(n, std::vector<bool>(n, false));
  if (p.disjoint)
    for (std::size_t c = 0; c < n; ++c)
      for (int d : p.conflicts[c]) conflict[c][static_cast<std::size_t>(d)] = true;

  std::vector<int> cover_count(static_cast<std::size_t>(p.n_elements), 0);
  int uncovered = p.n_elements;
  int clashes = 0;
  std::vector<bool> in(n, false);
  Int obj_sum = 0;
  std::vector<Int> ec_sum(ec.size(), Int(0));

  Solution best;
  Int best_exact = 0;
  double best_float = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 0; step < total; ++step) {
    if (step > 0) {
      const auto c = static_cast<std::size_t>(std::countr_zero(step));
      const bool adding = !in[c];
      in[c] = adding;
      const int delta = adding ? 1 : -1;
      for (int e : p.covers[c]) {
        int& cc = cover_count[static_cast<std::size_t>(e)];
        if (adding && cc++ == 0) --uncovered;
        if (!adding && --cc == 0) ++uncovered;
      }
      if (p.disjoint)
        for (std::size_t d = 0; d < n; ++d)
          if (d != c && in[d] && conflict[c][d]) clashes += delta;
      if (obj) obj_sum += adding ? obj->n[c] : -obj->n[c];
      for (std::size_t k = 0; k < ec.size(); ++k) ec_sum[k] += adding ? ec[k].n[c] : -ec[k].n[c];
    }
    ++best.nodes;
    if (uncovered > 0 || clashes > 0) continue;
    bool ok = true;
    for (std::size_t k = 0; k < ec.size() && ok; ++k) ok = ec_sum[k] <= ec_limit[k];
    if (!ok) continue;
    std::vector<int> chosen;
    for (std::size_t c = 0; c < n; ++c)
      if (in[c]) chosen.push_back(static_cast<int>(c));
    for (const auto& fc : p.float_constraints)
      if (!float_ok(fc, float_sum(fc.w, chosen))) {
        ok = false;
        break;
      }
    if (!ok) continue;
    bool better;
    if (obj) {
      better = !best.feasible || obj_sum < best_exact || (obj_sum == best_exact && tie_better(chosen, best.chosen));
      if (better) best_exact = obj_sum;
    } else {
      const double v = float_sum(p.objective.dw, chosen);
      better = !best.feasible || v < best_float || (v == best_float && tie_better(chosen, best.chosen));
      if (better) best_float = v;
    }
    if (better) {
      best.feasible = true;
      best.chosen = std::move(chosen);
    }
  }
  if (best.feasible) best.value = canonical_value(p, best.chosen);
  return best;
}

bool enumerate_feasible(const Problem& p, const std::function<void(const std::vector<int>&)>& visit,
                        std::uint64_t limit, std::uint64_t node_limit) {
  validate(p);
  const std::size_t n = p.n_candidates();
  std::vector<int> last_cover(static_cast<std::size_t>(p.n_elements), -1);
  for (std::size_t c = 0; c < n; ++c)
    for (int e : p.covers[c]) last_cover[static_cast<std::size_t>(e)] = static_cast<int>(c);

  std::vector<ScaledVec> ec;
  std::vector<Int> ec_limit;
  std::vector<std::vector<Int>> ec_suffix_neg;
  for (const auto& c : p.exact_constraints) {
    ec.push_back(scale(c.w));
    ec_limit.push_back(integer_limit(c.bound, ec.back().den, c.strict));
    std::vector<Int> suf(n + 1, Int(0));
    for (std::size_t i = n; i-- > 0;) suf[i] = suf[i + 1] + (ec.back().n[i] < 0 ? ec.back().n[i] : Int(0));
    ec_suffix_neg.push_back(std::move(suf));
  }
  std::vector<std::vector<double>> fc_suffix_neg;
  for (const auto& c : p.float_constraints) {
    std::vector<double> suf(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suf[i] = suf[i + 1] + std::min(0.0, c.w[i]);
    fc_suffix_neg.push_back(std::move(suf));
  }

  // Covering lower bounds for constraints whose weights are all nonnegative:
  // what is still uncovered must be paid for by candidates at index >= i.
  std::vector<std::vector<int>> elem_cands(static_cast<std::size_t>(p.n_elements));
  for (std::size_t c = 0; c < n; ++c)
    for (int e : p.covers[c]) elem_cands[static_cast<std::size_t>(e)].push_back(static_cast<int>(c));
  std::vector<std::size_t> bounded;
  std::vector<std::vector<double>> ec_d(ec.size());
  for (std::size_t k = 0; k < ec.size(); ++k) {
    for (const auto& x : ec[k].n) ec_d[k].push_back(x.convert_to<double>());
    if (std::all_of(ec[k].n.begin(), ec[k].n.end(), [](const Int& x) { return x >= 0; })) bounded.push_back(k);
  }

  std::vector<int> cover_count(static_cast<std::size_t>(p.n_elements), 0);
  std::vector<int> blocked(n, 0);
  std::vector<int> hits(n, 0);
  std::vector<Int> ec_sum(ec.size(), Int(0));
  std::vector<double> fc_sum(p.float_constraints.size(), 0.0);
  std::vector<int> chosen;
  std::uint64_t visits = 0;
  std::uint64_t nodes = 0;
  bool complete = true;

  auto cover_bound_exceeded = [&](std::size_t i) {
    if (bounded.empty()) return false;
    for (std::size_t c = i; c < n; ++c) {
      hits[c] = 0;
      if (blocked[c]) continue;
      for (int e : p.covers[c]) hits[c] += cover_count[static_cast<std::size_t>(e)] == 0;
    }
    for (std::size_t k : bounded) {
      double worst = 0.0, shares = 0.0;
      for (std::size_t e = 0; e < elem_cands.size(); ++e) {
        if (cover_count[e] > 0) continue;
        double best = std::numeric_limits<double>::infinity(), best_share = best;
        for (int ci : elem_cands[e]) {
          const auto c = static_cast<std::size_t>(ci);
          if (c < i || blocked[c]) continue;
          best = std::min(best, ec_d[k][c]);
          best_share = std::min(best_share, ec_d[k][c] / hits[c]);
        }
        if (!std::isfinite(best)) return true;  // nothing left can cover e
        worst = std::max(worst, best);
        shares += best_share;
      }
      const double lb = std::max(worst, shares) * (1.0 - 1e-9);
      if (lb > 0 && ec_sum[k] + Int(std::floor(lb)) > ec_limit[k]) return true;
    }
    return false;
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (!complete) return;
    if (++nodes > node_limit) {
      complete = false;
      return;
    }
    for (std::size_t k = 0; k < ec.size(); ++k)
      if (ec_sum[k] + ec_suffix_neg[k][i] > ec_limit[k]) return;
    for (std::size_t k = 0; k < fc_sum.size(); ++k) {
      const auto& c = p.float_constraints[k];
      if (fc_sum[k] + fc_suffix_neg[k][i] > c.bound + 1e-12 * (1.0 + std::abs(c.bound))) return;
    }
    for (std::size_t e = 0; e < cover_count.size(); ++e)
      if (cover_count[e] == 0 && last_cover[e] < static_cast<int>(i)) return;
    if (i < n && cover_bound_exceeded(i)) return;
    if (i == n) {
      if (!is_feasible(p, chosen)) return;
      if (visits == limit) {
        complete = false;
        return;
      }
      ++visits;
      visit(chosen);
      return;
    }
    if (blocked[i] == 0) {
      chosen.push_back(static_cast<int>(i));
      for (int e : p.covers[i]) ++cover_count[static_cast<std::size_t>(e)];
      if (p.disjoint)
        for (int d : p.conflicts[i]) ++blocked[static_cast<std::size_t>(d)];
      for (std::size_t k = 0; k < ec.size(); ++k) ec_sum[k] += ec[k].n[i];
      for (std::size_t k = 0; k < fc_sum.size(); ++k) fc_sum[k] += p.float_constraints[k].w[i];
      dfs(i + 1);
      for (std::size_t k = 0; k < fc_sum.size(); ++k) fc_sum[k] -= p.float_constraints[k].w[i];
      for (std::size_t k = 0; k < ec.size(); ++k) ec_sum[k] -= ec[k].n[i];
      if (p.disjoint)
        for (int d : p.conflicts[i]) --blocked[static_cast<std::size_t>(d)];
      for (int e : p.covers[i]) --cover_count[static_cast<std::size_t>(e)];
      chosen.pop_back();
    }
    dfs(i + 1);
  };
  dfs(0);
  return complete;
}

}  // namespace ddm::search
