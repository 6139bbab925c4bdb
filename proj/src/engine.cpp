#include "ddm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddm::engine {

namespace {

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Index of w (symbols 1..N) among all words of its length in lexicographic order.
int word_index(const sym::Word& w, std::size_t from, std::size_t len, int N) {
  int idx = 0;
  for (std::size_t k = 0; k < len; ++k) idx = idx * N + (w[from + k] - 1);
  return idx;
}

double level_tolerance(double ref) { return 1e-12 * (1.0 + std::abs(ref)); }

// Adds "sum of g over the chosen candidates <= bound" (or < when strict).
void add_level(search::Problem& p, const CoverUniverse& U, const WeightFn& g, const Scalar& bound_exact_or_ref,
               const std::optional<Rational>& eps, bool strict) {
  const std::size_t n = U.candidates().size();
  if (g.exact() && bound_exact_or_ref.is_exact()) {
    search::ExactConstraint c;
    c.w.reserve(n);
    for (std::size_t i = 0; i < n; ++i) c.w.push_back(*U.weight(i, g).exact);
    c.bound = *bound_exact_or_ref.exact + (eps ? *eps : Rational(0));
    c.strict = strict;
    p.exact_constraints.push_back(std::move(c));
  } else {
    search::FloatConstraint c;
    c.w.reserve(n);
    for (std::size_t i = 0; i < n; ++i) c.w.push_back(U.weight(i, g).approx);
    const double ref = bound_exact_or_ref.approx;
    c.bound = eps ? ref + to_double(*eps) : ref + level_tolerance(ref);
    c.strict = strict;
    p.float_constraints.push_back(std::move(c));
  }
}

bool scalar_less(const Scalar& a, const Scalar& b, double tol) {
  if (a.is_exact() && b.is_exact()) return *a.exact < *b.exact;
  return a.approx < b.approx - tol;
}

}  // namespace

std::vector<Horizon> horizon_chain(Horizon h) {
  std::vector<Horizon> out;
  Horizon cur{0, 1};
  out.push_back(cur);
  bool bump_d = true;
  while (cur.D < h.D || cur.L < h.L) {
    if ((bump_d && cur.D < h.D) || cur.L >= h.L)
      ++cur.D;
    else
      ++cur.L;
    bump_d = !bump_d;
    out.push_back(cur);
  }
  return out;
}

std::string Cover::to_literal() const {
  if (entries.empty()) return "{}";
  std::string out;
  for (const auto& [m, u] : entries) {
    if (!out.empty()) out += "; ";
    out += std::to_string(m) + ": " + sym::to_literal(u);
  }
  return out;
}

Rational cover_cost(const MarkovMeasures& mm, const Cover& c) {
  Rational total = 0;
  for (const auto& [m, u] : c.entries) total += mm.phi0(sym::preimage_shift(u, -m));
  return total;
}

bool cover_contains(const Cover& c, const sym::CylinderUnion& Q) {
  sym::CylinderUnion rest = Q;
  for (const auto& [m, u] : c.entries) {
    (void)m;
    rest = sym::set_op(rest, u, sym::SetOp::Difference);
    if (rest.is_empty()) return true;
  }
  return rest.is_empty();
}

Cover disjointify(const Cover& c) {
  Cover out;
  out.disjoint = true;
  for (auto it = c.entries.begin(); it != c.entries.end(); ++it) {
    sym::CylinderUnion b = it->second;
    for (auto jt = std::next(it); jt != c.entries.end() && !b.is_empty(); ++jt)
      b = sym::set_op(b, jt->second, sym::SetOp::Difference);
    if (!b.is_empty()) out.entries.emplace(it->first, b.canonical());
  }
  return out;
}

// ---------------------------------------------------------------- universe

CoverUniverse::CoverUniverse(const MarkovMeasures& mm, const sym::CylinderUnion& Q, Horizon h)
    : mm_(&mm), Q_(Q.canonical()), h_(h) {
  if (h.D < 0 || h.L < 1) throw EngineError(EngineError::Code::ParameterRange, "horizon needs D >= 0 and L >= 1");
  const int N = mm.alphabet();
  if (Q_.alphabet() != N) throw EngineError(EngineError::Code::ParameterRange, "query alphabet differs from model");
  const int slots = h.D + 1;
  const int per_slot = ipow(N, h.L);

  int lo = -h.D;
  int hi = h.L - 1;
  representable_ = true;
  if (Q_.window_len() > 0) {
    representable_ = Q_.window_lo() >= lo && Q_.window_hi() <= hi;
    lo = std::min(lo, Q_.window_lo());
    hi = std::max(hi, Q_.window_hi());
  }

  const auto words = sym::all_words(N, h.L);
  for (int s = 0; s < slots; ++s)
    for (const auto& w : words) {
      cands_.push_back({-h.D + s, w});
      cost_.push_back(mm.word_mass(w));
      lambda_.push_back(mm.word_lambda(w));
    }

  coverage_.assign(cands_.size(), {});
  if (!Q_.is_empty()) {
    const sym::CylinderUnion elems = sym::refine(Q_, lo, hi);
    n_elements_ = static_cast<int>(elems.words().size());
    for (int e = 0; e < n_elements_; ++e) {
      const auto& x = elems.words()[static_cast<std::size_t>(e)];
      for (int s = 0; s < slots; ++s) {
        const int m = -h.D + s;
        const int idx = word_index(x, static_cast<std::size_t>(m - lo), static_cast<std::size_t>(h.L), N);
        coverage_[static_cast<std::size_t>(s * per_slot + idx)].push_back(e);
      }
    }
  }

  conflicts_.assign(cands_.size(), {});
  for (std::size_t a = 0; a < cands_.size(); ++a)
    for (std::size_t b = a + 1; b < cands_.size(); ++b) {
      const auto& ca = cands_[a];
      const auto& cb = cands_[b];
      if (ca.m == cb.m) continue;  // distinct words in one slot are disjoint
      const int shift = cb.m - ca.m;  // > 0 since slots are ordered
      bool meet = true;
      for (int k = shift; k < h.L && meet; ++k)
        meet = ca.word[static_cast<std::size_t>(k)] == cb.word[static_cast<std::size_t>(k - shift)];
      if (meet) {
        conflicts_[a].push_back(static_cast<int>(b));
        conflicts_[b].push_back(static_cast<int>(a));
      }
    }
  for (auto& v : conflicts_) std::sort(v.begin(), v.end());
}

Scalar CoverUniverse::weight(std::size_t i, const WeightFn& g) const {
  const int a = cands_[i].word.front();
  if (g.exact()) return Scalar::from_exact(g.alpha == 0.0 ? cost_[i] : lambda_[i]);
  return Scalar::from_double(g.at(mm_->z_double(a)) * to_double(cost_[i]));
}

search::Objective CoverUniverse::objective(const WeightFn& g) const {
  search::Objective o;
  o.exact = g.exact();
  for (std::size_t i = 0; i < cands_.size(); ++i) {
    const Scalar s = weight(i, g);
    if (o.exact)
      o.qw.push_back(*s.exact);
    else
      o.dw.push_back(s.approx);
  }
  return o;
}

Cover CoverUniverse::to_cover(const std::vector<int>& chosen, bool disjoint) const {
  std::map<int, std::vector<sym::Cylinder>> parts;
  for (int i : chosen) {
    const auto& c = cands_[static_cast<std::size_t>(i)];
    parts[c.m].push_back({c.m, c.word});
  }
  Cover out;
  out.disjoint = disjoint;
  for (auto& [m, v] : parts) out.entries.emplace(m, sym::CylinderUnion::of(Q_.alphabet(), v).canonical());
  return out;
}

search::Problem CoverUniverse::base_problem(bool disjoint) const {
  search::Problem p;
  p.n_elements = n_elements_;
  p.covers = coverage_;
  p.disjoint = disjoint;
  if (disjoint) p.conflicts = conflicts_;
  return p;
}

// ---------------------------------------------------------------- constructions

Construction Construction::phi() { return {"phi", {}, WeightFn::power(0.0), false, {}}; }

Construction Construction::relative_entropy() { return {"relative_entropy", {}, WeightFn::zlogz(), false, {}}; }

Construction Construction::relative_entropy_kappa() {
  return {"relative_entropy_kappa", {}, WeightFn::kappa0(), false, {}};
}

Construction Construction::hellinger(double alpha) {
  if (alpha < 0 || alpha > 1) throw EngineError(EngineError::Code::ParameterRange, "alpha must lie in [0,1]");
  return {"hellinger", {}, WeightFn::power(alpha), false, {{"alpha", alpha}}};
}

Construction Construction::relative_entropy_alpha(double alpha) {
  if (alpha < 0 || alpha > 1) throw EngineError(EngineError::Code::ParameterRange, "alpha must lie in [0,1]");
  return {"relative_entropy_alpha", {WeightFn::power(alpha)}, WeightFn::zlogz(), false, {{"alpha", alpha}}};
}

Construction Construction::psi(double alpha, double alpha0, int n) {
  if (n < 2) throw EngineError(EngineError::Code::ParameterRange, "psi needs n >= 2");
  if (alpha < 0 || alpha > 1 || alpha0 < 0 || alpha0 > 1)
    throw EngineError(EngineError::Code::ParameterRange, "psi parameters must lie in [0,1]");
  if (n >= 3 && alpha0 == 0.0) throw EngineError(EngineError::Code::ParameterRange, "psi with n >= 3 needs alpha0 > 0");
  Construction c{"psi", {}, WeightFn::power_log(alpha, n - 1), false, {{"alpha", alpha}, {"alpha0", alpha0}, {"n", n}}};
  for (int k = 2; k <= n; ++k) c.ladder.push_back(WeightFn::power_log(alpha0, k - 2));
  return c;
}

Construction Construction::hellinger_cross(double alpha, double gamma) {
  if (alpha < 0 || alpha > 1 || gamma < 0 || gamma > 1)
    throw EngineError(EngineError::Code::ParameterRange, "alpha and gamma must lie in [0,1]");
  return {"hellinger_cross", {WeightFn::power(gamma)}, WeightFn::power(alpha), false, {{"alpha", alpha}, {"gamma", gamma}}};
}

std::string Construction::describe() const {
  std::ostringstream os;
  os << id;
  if (!params.empty()) {
    os << "(";
    bool first = true;
    for (const auto& [k, v] : params) {
      os << (first ? "" : ", ") << k << "=" << shortest_text(v);
      first = false;
    }
    os << ")";
  }
  if (disjoint) os << " disjoint";
  return os.str();
}

// ---------------------------------------------------------------- engine

Engine::Engine(const MarkovMeasures& mm, sym::CylinderUnion Q, Horizon h) : mm_(&mm), U_(mm, Q, h) {
  if (U_.query().is_empty()) {
    phi_.feasible = true;
    phi_.value = Scalar::from_exact(0);
    return;
  }
  search::Problem p = U_.base_problem(false);
  p.objective = U_.objective(WeightFn::power(0.0));
  phi_ = make_evaluation(search::branch_and_bound(p), false);
  if (!phi_.feasible) throw EngineError(EngineError::Code::HorizonTooSmall, "query cannot be covered at this horizon");
}

Evaluation Engine::make_evaluation(const search::Solution& s, bool disjoint) const {
  Evaluation e;
  e.feasible = s.feasible;
  e.nodes = s.nodes;
  if (!s.feasible) return e;
  e.value = s.value;
  e.chosen = s.chosen;
  e.witness = U_.to_cover(s.chosen, disjoint);
  for (int i : s.chosen) {
    const auto k = static_cast<std::size_t>(i);
    e.cost += U_.cost(k);
    e.lambda_sum += U_.lambda(k);
    if (U_.candidates()[k].m == -U_.horizon().D) e.uses_deepest_slot = true;
  }
  return e;
}

search::Problem Engine::problem_for(const Construction& c) const {
  search::Problem p = U_.base_problem(c.disjoint);
  p.objective = U_.objective(c.objective);
  return p;
}

References Engine::references(const Construction& c) const {
  References r;
  r.phi = *phi_.value.exact;
  if (query().is_empty()) {
    r.levels.assign(c.ladder.size(), Scalar::from_exact(0));
    return r;
  }
  for (std::size_t k = 0; k < c.ladder.size(); ++k) {
    search::Problem p = U_.base_problem(c.disjoint);
    p.objective = U_.objective(c.ladder[k]);
    add_level(p, U_, WeightFn::power(0.0), Scalar::from_exact(r.phi), std::nullopt, false);
    for (std::size_t j = 0; j < k; ++j) add_level(p, U_, c.ladder[j], r.levels[j], std::nullopt, false);
    const search::Solution s = search::branch_and_bound(p);
    if (!s.feasible) throw EngineError(EngineError::Code::EmptyFamily, "reference level " + std::to_string(k + 2) + " is empty");
    r.levels.push_back(s.value);
  }
  return r;
}

Evaluation Engine::limit(const Construction& c, const References& refs) const {
  if (query().is_empty()) {
    Evaluation e;
    e.feasible = true;
    e.value = c.objective.exact() ? Scalar::from_exact(0) : Scalar::from_double(0.0);
    e.witness.disjoint = c.disjoint;
    return e;
  }
  search::Problem p = problem_for(c);
  add_level(p, U_, WeightFn::power(0.0), Scalar::from_exact(refs.phi), std::nullopt, false);
  for (std::size_t j = 0; j < c.ladder.size(); ++j) add_level(p, U_, c.ladder[j], refs.levels[j], std::nullopt, false);
  Evaluation e = make_evaluation(search::branch_and_bound(p), c.disjoint);
  if (!e.feasible) throw EngineError(EngineError::Code::EmptyFamily, "limit family of " + c.describe() + " is empty");
  return e;
}

Evaluation Engine::at_epsilon(const Construction& c, const Rational& eps, const References& refs) const {
  if (eps <= 0) throw EngineError(EngineError::Code::ParameterRange, "epsilon must be positive");
  if (query().is_empty()) return limit(c, refs);
  search::Problem p = problem_for(c);
  add_level(p, U_, WeightFn::power(0.0), Scalar::from_exact(refs.phi), eps, true);
  for (std::size_t j = 0; j < c.ladder.size(); ++j) add_level(p, U_, c.ladder[j], refs.levels[j], eps, true);
  Evaluation e = make_evaluation(search::branch_and_bound(p), c.disjoint);
  if (!e.feasible)
    throw EngineError(EngineError::Code::EmptyFamily,
                      "epsilon family of " + c.describe() + " is empty at eps = " + to_string(eps));
  return e;
}

std::vector<Rational> Engine::default_ladder() const {
  std::vector<Rational> out;
  Rational base = *phi_.value.exact;
  if (base == 0) base = 1;
  Rational f = base;
  for (int k = 1; k <= 6; ++k) {
    f /= 2;
    out.push_back(f);
  }
  return out;
}

ConstructionResult Engine::evaluate(const Construction& c, const std::vector<Rational>& eps_ladder,
                                    const std::optional<References>& frozen) const {
  ConstructionResult r;
  r.construction = c;
  r.refs = frozen ? *frozen : references(c);
  r.limit = limit(c, frozen ? references(c) : r.refs);
  const double tol = 1e-10 * (1.0 + std::abs(r.limit.value.approx));
  for (const auto& eps : eps_ladder) {
    LadderPoint pt{eps, at_epsilon(c, eps, r.refs)};
    if (!r.ladder.empty() && scalar_less(pt.eval.value, r.ladder.back().eval.value, tol)) {
      r.monotone = false;
      r.diagnostics.push_back("value decreased when epsilon shrank to " + to_string(eps));
    }
    if (!frozen && scalar_less(r.limit.value, pt.eval.value, tol)) {
      r.monotone = false;
      r.diagnostics.push_back("value at epsilon " + to_string(eps) + " exceeds the limit");
    }
    r.ladder.push_back(std::move(pt));
  }
  return r;
}

bool Engine::epsilon_cover_family(const Rational& phi_ref, const Rational& eps, bool disjoint, std::uint64_t limit,
                                  std::vector<std::vector<int>>& out) const {
  out.clear();
  if (query().is_empty()) {
    out.push_back({});
    return true;
  }
  search::Problem p = U_.base_problem(disjoint);
  p.objective = U_.objective(WeightFn::power(0.0));
  add_level(p, U_, WeightFn::power(0.0), Scalar::from_exact(phi_ref), eps, true);
  return search::enumerate_feasible(p, [&](const std::vector<int>& ch) { out.push_back(ch); }, limit);
}

std::vector<PerSlot> Engine::per_slot(const std::vector<int>& chosen, double alpha) const {
  std::map<int, PerSlot> slots;
  for (int i : chosen) {
    const auto k = static_cast<std::size_t>(i);
    const auto& c = U_.candidates()[k];
    PerSlot& s = slots[c.m];
    s.m = c.m;
    s.lambda += U_.lambda(k);
    s.phi += U_.cost(k);
    const double z = mm_->z_double(c.word.front());
    s.z_pow += WeightFn::power(1.0 - alpha).at(z) * to_double(U_.cost(k));
    if (z > 0) s.log_z_dl += std::log(z) * to_double(U_.lambda(k));
  }
  std::vector<PerSlot> out;
  for (auto& [m, s] : slots) {
    (void)m;
    s.lambda_d = to_double(s.lambda);
    s.phi_d = to_double(s.phi);
    out.push_back(s);
  }
  return out;
}

std::vector<ShiftPoint> bar_phi(const MarkovMeasures& mm, const sym::CylinderUnion& Q, Horizon h, int n_max) {
  std::vector<ShiftPoint> out;
  for (int i = 0; i <= n_max; ++i) {
    Engine e(mm, sym::preimage_shift(Q.canonical(), i), h);
    out.push_back({i, e.universe().representable(), e.phi()});
  }
  return out;
}

}  // namespace ddm::engine
