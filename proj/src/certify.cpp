#include "ddm/certify.hpp"

#include "ddm/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ddm::cert {

using engine::Construction;
using engine::ConstructionResult;
using engine::Evaluation;
using report::Claim;
using report::Json;
using report::Status;

namespace {

constexpr double kE = std::numbers::e;

Scalar D(double x) { return Scalar::from_double(x); }
Scalar E(const Rational& r) { return Scalar::from_exact(r); }

Json rjson(const Rational& r) { return ddm::to_string(r); }

Json scalar_json(const Scalar& s) {
  if (s.is_exact()) return ddm::to_string(*s.exact);
  if (std::isinf(s.approx)) return s.approx > 0 ? "inf" : "-inf";
  return s.approx;
}

double val(const Evaluation& e) { return e.value.approx; }

std::string horizon_text(engine::Horizon h) {
  return "D=" + std::to_string(h.D) + ",L=" + std::to_string(h.L);
}

bool is_interior(double a) { return a > 0.0 && a < 1.0; }

}  // namespace

// ---------------------------------------------------------------- claims

double ClaimMaker::tolerance(const Scalar& lhs, const Scalar& rhs) const {
  if (exact_mode_ && lhs.is_exact() && rhs.is_exact()) return 0.0;
  const double l = std::isfinite(lhs.approx) ? std::abs(lhs.approx) : 0.0;
  const double r = std::isfinite(rhs.approx) ? std::abs(rhs.approx) : 0.0;
  return 1e-10 * std::max({1.0, l, r});
}

Claim ClaimMaker::make(std::string id, std::string anchor, Json inputs, const Scalar& lhs, const std::string& relation,
                       const Scalar& rhs, bool binding) const {
  Claim c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.inputs = std::move(inputs);
  c.lhs = lhs;
  c.relation = relation;
  c.rhs = rhs;
  bool holds;
  if (exact_mode_ && lhs.is_exact() && rhs.is_exact()) {
    Rational d;
    if (relation == "<=")
      d = *rhs.exact - *lhs.exact;
    else if (relation == ">=")
      d = *lhs.exact - *rhs.exact;
    else
      d = -abs(*lhs.exact - *rhs.exact);
    c.residual = to_double(d);
    holds = d >= 0;
  } else {
    if (relation == "<=")
      c.residual = rhs.approx - lhs.approx;
    else if (relation == ">=")
      c.residual = lhs.approx - rhs.approx;
    else
      c.residual = -std::abs(lhs.approx - rhs.approx);
    if (std::isnan(c.residual)) c.residual = -std::numeric_limits<double>::infinity();
    holds = c.residual >= -tolerance(lhs, rhs);
  }
  c.status = binding ? (holds ? Status::Certified : Status::Violated) : Status::Diagnostic;
  return c;
}

Claim ClaimMaker::make_unbounded(std::string id, std::string anchor, Json inputs, const Scalar& lhs, bool binding) const {
  Claim c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.inputs = std::move(inputs);
  c.lhs = lhs;
  c.relation = "<=";
  c.rhs = D(std::numeric_limits<double>::infinity());
  c.rhs_infinite = true;
  c.residual = std::numeric_limits<double>::infinity();
  c.status = binding ? Status::Certified : Status::Diagnostic;
  return c;
}

Claim worst_of(const std::vector<Claim>& claims, const std::string& id, const std::string& anchor) {
  Claim out;
  out.id = id;
  out.anchor = anchor;
  if (claims.empty()) {
    out.status = Status::Diagnostic;
    out.relation = ">=";
    out.inputs["checked"] = 0;
    return out;
  }
  std::size_t pick = 0;
  std::size_t violated = 0;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const bool vi = claims[i].status == Status::Violated;
    violated += vi;
    const bool vp = claims[pick].status == Status::Violated;
    if ((vi && !vp) || (vi == vp && claims[i].residual < claims[pick].residual)) pick = i;
  }
  out = claims[pick];
  out.id = id;
  out.anchor = anchor;
  Json inputs = Json::object();
  inputs["checked"] = claims.size();
  inputs["violations"] = violated;
  inputs["worst_case"] = claims[pick].inputs;
  out.inputs = std::move(inputs);
  return out;
}

// ---------------------------------------------------------------- query lab

QueryLab::QueryLab(const MarkovMeasures& mm, const sym::CylinderUnion& Q, const Settings& s)
    : mm_(&mm), Q_(Q.canonical()), literal_(sym::to_literal(Q)), s_(s), cm_(s.exact_mode) {
  engine_ = std::make_unique<engine::Engine>(mm, Q_, s.horizon);
  ladder_ = s.eps_ladder.empty() ? engine_->default_ladder() : s.eps_ladder;
}

const ConstructionResult& QueryLab::get(const Construction& c) {
  const std::string key = c.describe();
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(key, engine_->evaluate(c, ladder_)).first->second;
}

Evaluation QueryLab::at(const Construction& c, const Rational& eps) { return engine_->at_epsilon(c, eps, get(c).refs); }

Rational QueryLab::lambda_q() const { return mm_->lambda(Q_); }

void QueryLab::add_entry(report::Report& r, const ConstructionResult& res) {
  report::Entry e;
  e.construction = res.construction.describe();
  e.query = literal_;
  e.D = s_.horizon.D;
  e.L = s_.horizon.L;
  e.epsilon = "limit";
  e.value = res.limit.value;
  e.witness = res.limit.witness.to_literal();
  Json refs;
  refs["phi"] = rjson(res.refs.phi);
  Json levels = Json::array();
  for (std::size_t k = 0; k < res.refs.levels.size(); ++k)
    levels.push_back({{"integrand", res.construction.ladder[k].describe()}, {"value", scalar_json(res.refs.levels[k])}});
  refs["levels"] = std::move(levels);
  Json ladder = Json::array();
  for (const auto& p : res.ladder)
    ladder.push_back({{"epsilon", rjson(p.epsilon)},
                      {"value", report::value_json(p.eval.value, s_.exact_mode)},
                      {"witness", p.eval.witness.to_literal()}});
  e.certificate["objective"] = res.construction.objective.describe();
  e.certificate["references"] = std::move(refs);
  e.certificate["ladder"] = std::move(ladder);
  e.certificate["monotone"] = res.monotone;
  e.certificate["diagnostics"] = res.diagnostics;
  e.certificate["witness_cost"] = rjson(res.limit.cost);
  e.certificate["bias"] = "truncated infimum: an upper estimate of the untruncated value";
  r.entries.push_back(std::move(e));
  ladder_claims(r, res);
}

void QueryLab::ladder_claims(report::Report& r, const ConstructionResult& res) {
  std::vector<Claim> steps;
  const std::string name = res.construction.describe();
  for (std::size_t k = 0; k < res.ladder.size(); ++k) {
    const auto& p = res.ladder[k];
    if (k > 0) {
      const auto& prev = res.ladder[k - 1];
      steps.push_back(cm_.make("", "", {{"eps_from", rjson(prev.epsilon)}, {"eps_to", rjson(p.epsilon)}},
                               prev.eval.value, "<=", p.eval.value, true));
    }
    steps.push_back(cm_.make("", "", {{"eps", rjson(p.epsilon)}, {"against", "limit"}}, p.eval.value, "<=",
                             res.limit.value, true));
  }
  Claim c = worst_of(steps, "epsilon_ladder_monotone",
                     "values at shrinking epsilon never decrease and stay below the epsilon -> 0 limit");
  c.inputs["construction"] = name;
  c.inputs["Q"] = literal_;
  r.claims.push_back(std::move(c));
}

void QueryLab::horizon_sweep(report::Report& r, const Construction& c) {
  const auto chain = engine::horizon_chain(s_.horizon);
  std::vector<std::unique_ptr<engine::Engine>> engines;
  for (const auto& h : chain) engines.push_back(std::make_unique<engine::Engine>(*mm_, Q_, h));
  const engine::References frozen = engines.front()->references(c);
  std::vector<Claim> steps;
  Json table = Json::array();
  std::vector<std::vector<Scalar>> values(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    Json row;
    row["horizon"] = horizon_text(chain[k]);
    row["phi"] = rjson(*engines[k]->phi().value.exact);
    Json vs = Json::array();
    for (const auto& eps : ladder_) {
      const Evaluation ev = engines[k]->at_epsilon(c, eps, frozen);
      values[k].push_back(ev.value);
      vs.push_back(report::value_json(ev.value, s_.exact_mode));
    }
    row["values"] = std::move(vs);
    table.push_back(std::move(row));
    if (k == 0) continue;
    const Json where = {{"from", horizon_text(chain[k - 1])}, {"to", horizon_text(chain[k])}};
    steps.push_back(cm_.make("", "", where, engines[k]->phi().value, "<=", engines[k - 1]->phi().value, true));
    for (std::size_t j = 0; j < ladder_.size(); ++j) {
      Json w = where;
      w["eps"] = rjson(ladder_[j]);
      steps.push_back(cm_.make("", "", w, values[k][j], "<=", values[k - 1][j], true));
    }
  }
  Claim cl = worst_of(steps, "horizon_monotone",
                      "enlarging the horizon never increases the truncated infimum (references frozen at the "
                      "smallest horizon)");
  cl.inputs["construction"] = c.describe();
  cl.inputs["Q"] = literal_;
  r.claims.push_back(std::move(cl));
  r.extras["horizon_sweeps"].push_back(
      {{"Q", literal_}, {"construction", c.describe()}, {"frozen_phi", rjson(frozen.phi)}, {"rows", std::move(table)}});
}

void QueryLab::phi_suite(report::Report& r) {
  const auto& phi = get(Construction::phi());
  add_entry(r, phi);
  const Rational lq = lambda_q();
  const Json q = {{"Q", literal_}};

  // Endpoints of the Hellinger family.
  const auto& h0 = get(Construction::hellinger(0.0));
  const auto& h1 = get(Construction::hellinger(1.0));
  r.claims.push_back(cm_.make("hellinger_zero_is_phi", "the alpha = 0 Hellinger construction equals the cover cost infimum",
                              q, h0.limit.value, "==", phi.limit.value, true));
  r.claims.push_back(cm_.make("hellinger_one_dominates_lambda",
                              "the alpha = 1 Hellinger construction is at least Lambda(Q) (covers are supersets)", q,
                              h1.limit.value, ">=", E(lq), true));
  const bool stationary = mm_->model().pi == mm_->model().pi_star;
  if (stationary && engine_->universe().representable()) {
    r.claims.push_back(cm_.make("hellinger_one_is_lambda_stationary",
                                "with phi0 = Lambda the alpha = 1 construction equals Lambda(Q)", q, h1.limit.value,
                                "==", E(lq), true));
    r.claims.push_back(cm_.make("phi_is_lambda_stationary", "with phi0 = Lambda the cover infimum equals Lambda(Q)", q,
                                phi.limit.value, "==", E(lq), true));
  }

  // Shift sequence: Phi(S^-i Q) <= Phi(S^-(i+1) Q) whenever the shifted witness fits the horizon.
  const auto seq = engine::bar_phi(*mm_, Q_, s_.horizon, s_.shifts);
  Json rows = Json::array();
  for (const auto& p : seq)
    rows.push_back({{"shift", p.shift},
                    {"value", rjson(*p.eval.value.exact)},
                    {"representable", p.representable},
                    {"uses_deepest_slot", p.eval.uses_deepest_slot},
                    {"witness", p.eval.witness.to_literal()}});
  r.extras["shift_sequences"].push_back({{"Q", literal_}, {"rows", std::move(rows)}});
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const bool binding = !seq[i + 1].eval.uses_deepest_slot;
    Json in = {{"Q", literal_}, {"shift", seq[i].shift}, {"next_witness_uses_deepest_slot", !binding}};
    r.claims.push_back(cm_.make("shift_monotone",
                                binding ? "the cover infimum does not decrease along backward shifts"
                                        : "shift monotonicity at the horizon edge (truncation artifact possible)",
                                std::move(in), seq[i].eval.value, "<=", seq[i + 1].eval.value, binding));
  }

  horizon_sweep(r, Construction::phi());

  // Disjointification of the optimal witness.
  const engine::Cover w = phi.limit.witness;
  const engine::Cover dw = engine::disjointify(w);
  r.claims.push_back(cm_.make("disjointify_cost", "disjointifying a cover never raises its cost",
                              {{"Q", literal_}, {"witness", w.to_literal()}, {"disjoint", dw.to_literal()}},
                              E(engine::cover_cost(*mm_, dw)), "<=", E(engine::cover_cost(*mm_, w)), true));
  r.claims.push_back(cm_.make("disjointify_covers", "the disjointified cover still contains Q", q,
                              E(engine::cover_contains(dw, Q_) ? 1 : 0), "==", E(1), true));

  // Bracket for Phi(Q): truncated upper side, relative-entropy heuristic lower side.
  report::Bracket b;
  b.quantity = "Phi(Q)";
  b.query = literal_;
  b.upper = {phi.limit.value, "CoverWitness",
             {{"witness", w.to_literal()}, {"horizon", horizon_text(s_.horizon)}, {"direction", "upper"}}};
  if (lq > 0) {
    const auto& k = get(Construction::relative_entropy());
    const double l = to_double(lq);
    const double lower = l * std::exp(-val(k.limit) / l);
    b.lower = {D(lower), "GridCheck",
               {{"route", "Lambda(Q) exp(-K(Q)/Lambda(Q)) with the truncated relative entropy"},
                {"relative_entropy", val(k.limit)},
                {"lambda", rjson(lq)},
                {"note", "truncated K over-estimates, which only weakens the bound; not certified because the "
                         "inequality itself needs the untruncated K"},
                {"direction", "lower"}}};
  } else {
    b.lower = {E(0), "EndpointIdentity", {{"route", "Phi is nonnegative"}, {"direction", "lower"}}};
  }
  b.certified = false;
  b.valid = b.lower.value.approx <= b.upper.value.approx + 1e-12;
  r.brackets.push_back(std::move(b));
}

void QueryLab::entropy_suite(report::Report& r) {
  const Json q = {{"Q", literal_}};
  const Rational lq = lambda_q();
  const double phit = to_double(phi_t());
  const auto& k = get(Construction::relative_entropy());
  const auto& kk = get(Construction::relative_entropy_kappa());
  add_entry(r, k);
  add_entry(r, kk);

  r.claims.push_back(cm_.make("relative_entropy_lower", "K(Q) >= Lambda(Q) - Phi(Q), matched truncated values", q,
                              k.limit.value, ">=", D(to_double(lq) - phit), true));
  r.claims.push_back(cm_.make("relative_entropy_kappa_shift",
                              "K(Q) equals the kappa-adjusted construction minus Phi(Q)/e, matched truncated values",
                              q, k.limit.value, "==", D(val(kk.limit) - phit / kE), true));

  Construction kd = Construction::relative_entropy();
  kd.disjoint = true;
  const auto& kdr = get(kd);
  add_entry(r, kdr);
  r.claims.push_back(cm_.make("relative_entropy_disjoint",
                              "the disjoint-cover variant agrees with K(Q) (holds for untruncated values)", q,
                              kdr.limit.value, "==", k.limit.value, false));

  if (Q_.is_full() && mm_->marginal(1) == mm_->model().pi)
    r.claims.push_back(cm_.make("relative_entropy_invariant_whole_space",
                                "K(X) equals K(Lambda|phi0) when phi0 is shift invariant", q, k.limit.value, "==",
                                D(mm_->kl_total()), false));

  if (lq > 0) {
    const double l = to_double(lq);
    r.claims.push_back(cm_.make("phi_lower_relative_entropy", "Phi(Q) >= Lambda(Q) exp(-K(Q)/Lambda(Q))", q,
                                D(phit), ">=", D(l * std::exp(-val(k.limit) / l)), false));
  }

  for (double a : {0.0, 0.5, 1.0}) add_entry(r, get(Construction::relative_entropy_alpha(a)));

  horizon_sweep(r, Construction::relative_entropy());

  // Shifted sequence of the relative entropy limit.
  Json rows = Json::array();
  for (int i = 0; i <= s_.shifts; ++i) {
    engine::Engine e(*mm_, sym::preimage_shift(Q_, i), s_.horizon);
    const Construction c = Construction::relative_entropy();
    const Evaluation lim = e.limit(c, e.references(c));
    rows.push_back({{"shift", i}, {"value", val(lim)}, {"uses_deepest_slot", lim.uses_deepest_slot}});
  }
  r.extras["relative_entropy_shifts"].push_back({{"Q", literal_}, {"rows", std::move(rows)}});
}

void QueryLab::hellinger_suite(report::Report& r) {
  const auto& grid = s_.alpha_grid;
  const Rational lq = lambda_q();
  const double l = to_double(lq);
  const double phit = to_double(phi_t());

  std::vector<const ConstructionResult*> H;
  std::vector<double> psi2(grid.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<const ConstructionResult*> P(grid.size(), nullptr);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    H.push_back(&get(Construction::hellinger(grid[i])));
    add_entry(r, *H.back());
    try {
      P[i] = &get(Construction::psi(grid[i], grid[i], 2));
      psi2[i] = val(P[i]->limit);
    } catch (const std::exception& ex) {
      r.warnings.push_back("psi at alpha " + report::format15(grid[i]) + " unavailable: " + ex.what());
    }
  }

  report::Scan scan;
  scan.query = literal_;
  std::vector<Claim> eql, eql_lambda, env_upper, env_lower, hmfd_upper, hmfd_lower;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    report::ScanRow row;
    row.alpha = grid[i];
    row.h_value = H[i]->limit.value;
    row.psi2 = psi2[i];
    if (i + 1 < grid.size()) {
      const double a0 = grid[i];
      const double a = grid[i + 1];
      const double da = a - a0;
      const double diff = val(H[i + 1]->limit) - val(H[i]->limit);
      row.fwd_diff = diff / da;
      const Json in = {{"Q", literal_}, {"alpha0", a0}, {"alpha", a}};
      if (a0 == 0.0 || a == 1.0) {
        row.eql_bound_residual = std::numeric_limits<double>::infinity();
        eql.push_back(cm_.make_unbounded("", "", in, D(std::abs(diff)), true));
      } else {
        const double lam_cov = to_double(H[i]->limit.lambda_sum);
        const double bound = da * std::max(phit / (a0 * kE), lam_cov / ((1 - a) * kE));
        row.eql_bound_residual = bound - std::abs(diff);
        Json in2 = in;
        in2["phi"] = phit;
        in2["witness_lambda_sum"] = lam_cov;
        eql.push_back(cm_.make("", "", in2, D(std::abs(diff)), "<=", D(bound), true));
        const double bound_l = da * std::max(phit / (a0 * kE), l / ((1 - a) * kE));
        eql_lambda.push_back(cm_.make("", "", in, D(std::abs(diff)), "<=", D(bound_l), false));

        // Forward difference against the second-order quantities.
        try {
          const auto& p_aa = *P[i];
          const auto& p_bb = *P[i + 1];
          const auto& p_ba = get(Construction::psi(a, a0, 2));  // integrand Z^a log Z, family from a0
          const auto& p_ab = get(Construction::psi(a0, a, 2));  // integrand Z^a0 log Z, family from a
          const double q = diff / da;
          auto gamma = [&](const Evaluation& w) {
            return std::pow(2.0 / (a0 * kE), 2) * to_double(w.cost) +
                   std::pow(2.0 / ((1 - a) * kE), 2) * to_double(w.lambda_sum);
          };
          Json in3 = in;
          in3["quotient"] = q;
          env_upper.push_back(
              cm_.make("", "", in3, D(q), "<=", D(val(p_aa.limit) + da * gamma(p_aa.limit)), true));
          env_lower.push_back(
              cm_.make("", "", in3, D(q), ">=", D(val(p_bb.limit) - da * gamma(p_ab.limit)), true));
          hmfd_upper.push_back(cm_.make("", "", in3, D(q), "<=", p_ba.limit.value, true));
          hmfd_lower.push_back(cm_.make("", "", in3, D(q), ">=", p_ab.limit.value, true));
        } catch (const std::exception& ex) {
          r.warnings.push_back(std::string("forward-difference envelope skipped: ") + ex.what());
        }
      }
    }
    scan.rows.push_back(std::move(row));
  }
  r.scans.push_back(std::move(scan));

  r.claims.push_back(worst_of(eql, "hellinger_continuity",
                              "|H_a(Q) - H_a0(Q)| <= (a - a0) max(Phi/(a0 e), Lambda/((1-a) e)) between consecutive "
                              "grid points, with the witness Lambda mass"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(eql_lambda, "hellinger_continuity_lambda",
                              "continuity bound with Lambda(Q) in place of the witness mass"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(env_upper, "forward_difference_envelope_upper",
                              "forward quotient <= Psi2(a0,a0) + (a - a0) Gamma of its witness"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(env_lower, "forward_difference_envelope_lower",
                              "forward quotient >= Psi2(a,a) - (a - a0) Gamma of the cross witness"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(hmfd_upper, "forward_difference_cross_upper",
                              "forward quotient <= Psi2 with integrand Z^a log Z over the a0 family"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(hmfd_lower, "forward_difference_cross_lower",
                              "forward quotient >= Psi2 with integrand Z^a0 log Z over the a family"));
  r.claims.back().inputs["Q"] = literal_;

  // Positivity dichotomy.
  {
    bool any_pos = false;
    double min_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (is_interior(grid[i]) && val(H[i]->limit) > 0) any_pos = true;
      min_v = std::min(min_v, val(H[i]->limit));
    }
    Claim c;
    c.id = "hellinger_positivity_dichotomy";
    c.anchor = "if some H_a(Q) with 0 < a < 1 is positive then every grid value is positive";
    c.inputs = {{"Q", literal_}, {"some_interior_positive", any_pos}};
    c.lhs = D(min_v);
    c.relation = ">";
    c.rhs = D(0.0);
    c.residual = min_v;
    c.status = (!any_pos || min_v > 0) ? Status::Certified : Status::Violated;
    r.claims.push_back(std::move(c));
  }

  // Range checks on Psi2(a,a) for interior a, witness form.
  std::vector<Claim> r_lo, r_hi, r_hlo, r_hhi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid[i];
    if (!is_interior(a) || !P[i]) continue;
    const Evaluation& w = P[i]->limit;
    const Json in = {{"alpha", a}};
    r_lo.push_back(cm_.make("", "", in, w.value, ">=", D(-to_double(w.cost) / (a * kE)), true));
    r_hi.push_back(cm_.make("", "", in, w.value, "<=", D(to_double(w.lambda_sum) / ((1 - a) * kE)), true));
    r_hlo.push_back(cm_.make("", "", in, w.value, ">=", D((val(H[i]->limit) - phit) / a), true));
    r_hhi.push_back(
        cm_.make("", "", in, w.value, "<=", D((to_double(w.lambda_sum) - val(H[i]->limit)) / (1 - a)), true));
  }
  r.claims.push_back(worst_of(r_lo, "psi2_range_lower", "Psi2(a,a) >= -Phi/(a e)"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(r_hi, "psi2_range_upper", "Psi2(a,a) <= Lambda mass of its witness / ((1-a) e)"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(r_hlo, "psi2_hellinger_lower", "Psi2(a,a) >= (H_a - Phi)/a"));
  r.claims.back().inputs["Q"] = literal_;
  r.claims.push_back(worst_of(r_hhi, "psi2_hellinger_upper", "Psi2(a,a) <= (Lambda mass of witness - H_a)/(1-a)"));
  r.claims.back().inputs["Q"] = literal_;

  // Hellinger lower bounds on Phi.
  const auto& h1 = get(Construction::hellinger(1.0));
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto& hc = get(Construction::hellinger(1.0 - a));
    const Json in = {{"Q", literal_}, {"alpha", a}};
    Scalar lhs;
    if (a == 0.0)
      lhs = h1.limit.value;
    else if (a == 1.0)
      lhs = E(phi_t());
    else
      lhs = D(std::pow(phit, a) * std::pow(val(h1.limit), 1 - a));
    r.claims.push_back(cm_.make("hellinger_mixed_bound",
                                "Phi^a H_1^(1-a) >= H_(1-a), matched truncated values", in, lhs, ">=",
                                hc.limit.value, true));
    Scalar lhs_l = a == 1.0 ? E(phi_t()) : D(std::pow(phit, a) * std::pow(l, 1 - a));
    if (a == 0.0) lhs_l = E(lq);
    r.claims.push_back(cm_.make("hellinger_mixed_bound_lambda", "Phi^a Lambda(Q)^(1-a) >= H_(1-a)", in, lhs_l, ">=",
                                hc.limit.value, false));
  }

  // Exponential lower bound through the parameter-dependent relative entropy.
  if (lq > 0) {
    const double range = std::min(1.0, kE * l / phit);
    for (double a : {0.25, 0.5, 0.75}) {
      const Json in = {{"Q", literal_}, {"alpha", a}, {"alpha_range_upper", range}};
      if (!(a < range)) {
        r.claims.push_back(cm_.make("hellinger_exponential_bound_out_of_range",
                                    "alpha outside 0 < alpha < min(1, e Lambda(Q)/Phi(Q)); no claim", in, D(a), "<",
                                    D(range), false));
        continue;
      }
      const auto& ka = get(Construction::relative_entropy_alpha(1.0 - a));
      const auto& hc = get(Construction::hellinger(1.0 - a));
      r.claims.push_back(cm_.make("hellinger_exponential_bound",
                                  "H_(1-a)(Q) >= Lambda(Q) exp(-(a/Lambda(Q)) K_(1-a)(Q))", in, hc.limit.value, ">=",
                                  D(l * std::exp(-(a / l) * val(ka.limit))), true));
      r.claims.push_back(cm_.make("phi_exponential_bound", "Phi(Q) >= Lambda(Q) exp(-K_(1-a)(Q)/Lambda(Q))", in,
                                  D(phit), ">=", D(l * std::exp(-val(ka.limit) / l)), false));
    }
  }
}

void QueryLab::cover_chain_suite(report::Report& r) {
  const Rational lq = lambda_q();
  if (lq <= 0 || Q_.is_empty()) return;
  const Rational eps = ladder_.front();
  std::vector<std::vector<int>> fam;
  const bool complete = engine_->epsilon_cover_family(phi_t(), eps, false, s_.family_limit, fam);
  const double bound = to_double(phi_t() + eps);
  const Json base = {{"Q", literal_}, {"eps", rjson(eps)}, {"covers", fam.size()}, {"complete", complete}};
  r.claims.push_back(cm_.make("epsilon_family_nonempty", "the epsilon-optimal cover family contains the optimum", base,
                              E(Rational(static_cast<long>(fam.size()))), ">=", E(1), true));
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::vector<Claim> c1, c2, c3, c4;
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const auto slots = engine_->per_slot(fam[k], a);
      double S = 0, kl = 0, mid = 0, zint = 0, jensen = 0;
      for (const auto& s : slots) {
        S += s.lambda_d;
        if (s.lambda_d > 0) kl += s.lambda_d * std::log(s.lambda_d / s.phi_d);
        mid += std::pow(s.lambda_d, 1 - a) * std::pow(s.phi_d, a);
        zint += s.z_pow;
        if (s.lambda_d > 0) jensen += s.lambda_d * std::exp(-(a / s.lambda_d) * s.log_z_dl);
      }
      const double left = S > 0 ? S * std::exp(-(a / S) * kl) : 0.0;
      const double right = std::pow(S, 1 - a) * std::pow(bound, a);
      const Json in = {{"cover", k}, {"alpha", a}};
      c1.push_back(cm_.make("", "", in, D(left), "<=", D(mid), true));
      c2.push_back(cm_.make("", "", in, D(mid), "<=", D(right), true));
      c3.push_back(cm_.make("", "", in, D(mid), ">=", D(zint), true));
      c4.push_back(cm_.make("", "", in, D(zint), ">=", D(jensen), true));
    }
    auto push = [&](std::vector<Claim>& v, const char* id, const char* anchor) {
      Claim c = worst_of(v, id, anchor);
      c.inputs["Q"] = literal_;
      c.inputs["alpha"] = a;
      c.inputs["eps"] = rjson(eps);
      c.inputs["family_complete"] = complete;
      r.claims.push_back(std::move(c));
    };
    push(c1, "cover_chain_jensen", "S exp(-(a/S) sum Lambda_m log(Lambda_m/phi_m)) <= sum Lambda_m^(1-a) phi_m^a");
    push(c2, "cover_chain_holder", "sum Lambda_m^(1-a) phi_m^a <= S^(1-a) (Phi + eps)^a");
    push(c3, "cover_chain_density", "sum Lambda_m^(1-a) phi_m^a >= sum of integrals of Z^(1-a)");
    push(c4, "cover_chain_log", "sum of integrals of Z^(1-a) >= sum Lambda_m exp(-(a/Lambda_m) int log Z dLambda)");
  }

  // Disjointified members of the family stay in it.
  std::vector<Claim> dj;
  for (std::size_t k = 0; k < fam.size() && k < 50; ++k) {
    const engine::Cover c = engine_->universe().to_cover(fam[k], false);
    const engine::Cover d = engine::disjointify(c);
    dj.push_back(cm_.make("", "", {{"cover", c.to_literal()}}, E(engine::cover_cost(*mm_, d)), "<=",
                          E(engine::cover_cost(*mm_, c)), true));
  }
  Claim c = worst_of(dj, "family_disjointify", "disjointified epsilon-optimal covers cost no more than the originals");
  c.inputs["Q"] = literal_;
  r.claims.push_back(std::move(c));
}

void QueryLab::interpolation_suite(report::Report& r) {
  const double a0 = 0.25, a = 0.5, b = 0.75, g = 0.5;
  const double phit = to_double(phi_t());
  const Json in = {{"Q", literal_}, {"alpha0", a0}, {"alpha", a}, {"beta", b}, {"gamma", g}};
  const auto& hc_a0_a = get(Construction::hellinger_cross(a0, a));
  const auto& hc_ga0_a = get(Construction::hellinger_cross(g * a0, a));
  const auto& h_a = get(Construction::hellinger(a));
  const auto& hc_a_a0 = get(Construction::hellinger_cross(a, a0));
  const auto& h_a0 = get(Construction::hellinger(a0));
  const auto& hc_b_a0 = get(Construction::hellinger_cross(b, a0));
  const auto& psi_a_a0 = get(Construction::psi(a, a0, 2));
  const auto& psi_a0_a = get(Construction::psi(a0, a, 2));
  const auto& psi_a0_a0 = get(Construction::psi(a0, a0, 2));
  for (const auto* c : {&hc_a0_a, &hc_ga0_a, &hc_a_a0, &hc_b_a0}) add_entry(r, *c);

  const double t = (a0 - g * a0) / (a - g * a0);
  const double tp = (a - a0) / (b - a0);
  r.claims.push_back(cm_.make("cross_hellinger_interpolation_lower",
                              "H^(a0,a) <= H^(g a0,a)^(1-t) H_a^t with t = (a0 - g a0)/(a - g a0)", in,
                              hc_a0_a.limit.value, "<=",
                              D(std::pow(val(hc_ga0_a.limit), 1 - t) * std::pow(val(h_a.limit), t)), true));
  r.claims.push_back(cm_.make("cross_hellinger_interpolation_upper",
                              "H^(a,a0) <= H_a0^(1-t') H^(b,a0)^t' with t' = (a - a0)/(b - a0)", in,
                              hc_a_a0.limit.value, "<=",
                              D(std::pow(val(h_a0.limit), 1 - tp) * std::pow(val(hc_b_a0.limit), tp)), true));

  const double ha0 = val(h_a0.limit);
  if (ha0 > 0) {
    r.claims.push_back(cm_.make("cross_hellinger_log_ratio",
                                "H_a0 log(H_a0 / H^(g a0,a)) <= (1-g) a0 Psi2(a,a0)", in,
                                D(ha0 * std::log(ha0 / val(hc_ga0_a.limit))), "<=",
                                D((1 - g) * a0 * val(psi_a_a0.limit)), true));
    r.claims.push_back(cm_.make("phi_lower_from_hellinger", "Phi(Q) >= H_a0 exp(-a0 Psi2(a,a0)/H_a0)", in, D(phit),
                                ">=", D(ha0 * std::exp(-a0 * val(psi_a_a0.limit) / ha0)), true));
  }

  const double da = a - a0;
  const double q1 = (val(hc_a_a0.limit) - ha0) / da;
  const double q2 = (val(h_a.limit) - val(hc_a0_a.limit)) / da;
  const double q3 = (val(hc_a_a0.limit) - val(h_a.limit)) / da;
  r.claims.push_back(cm_.make("cross_quotient_lower", "Psi2(a0,a0) <= (H^(a,a0) - H_a0)/(a - a0)", in,
                              psi_a0_a0.limit.value, "<=", D(q1), true));
  r.claims.push_back(cm_.make("cross_quotient_upper", "(H^(a,a0) - H_a0)/(a - a0) <= Psi2(a,a0)", in, D(q1), "<=",
                              psi_a_a0.limit.value, true));
  r.claims.push_back(cm_.make("cross_quotient_mixed_lower", "Psi2(a0,a) <= (H_a - H^(a0,a))/(a - a0)", in,
                              psi_a0_a.limit.value, "<=", D(q2), true));
  r.claims.push_back(cm_.make("cross_quotient_mixed_upper", "(H_a - H^(a0,a))/(a - a0) <= Psi2(a,a0)", in, D(q2), "<=",
                              psi_a_a0.limit.value, true));
  r.claims.push_back(cm_.make("cross_gap_nonnegative", "(H^(a,a0) - H_a)/(a - a0) >= 0", in, D(q3), ">=", D(0.0), true));
  r.claims.push_back(cm_.make("cross_gap_upper", "(H^(a,a0) - H_a)/(a - a0) <= Psi2(a,a0) - Psi2(a0,a)", in, D(q3),
                              "<=", D(val(psi_a_a0.limit) - val(psi_a0_a.limit)), true));

  // Endpoint identities of the cross construction.
  const auto& c0 = get(Construction::hellinger_cross(0.0, g));
  const auto& c1 = get(Construction::hellinger_cross(1.0, g));
  const auto& cg0 = get(Construction::hellinger_cross(g, 0.0));
  const auto& hg = get(Construction::hellinger(g));
  r.claims.push_back(cm_.make("cross_hellinger_zero", "H^(0,g) equals the cover infimum", in, c0.limit.value, "==",
                              E(phi_t()), true));
  r.claims.push_back(cm_.make("cross_hellinger_one", "H^(1,g) >= Lambda(Q) (equality for untruncated values)", in,
                              c1.limit.value, ">=", E(lambda_q()), true));
  r.claims.push_back(cm_.make("cross_hellinger_one_lambda", "H^(1,g) equals Lambda(Q)", in, c1.limit.value, "==",
                              E(lambda_q()), false));
  r.claims.push_back(cm_.make("cross_hellinger_trivial_family", "H^(g,0) equals H_g", in, cg0.limit.value, "==",
                              hg.limit.value, true));
  const auto& cag = get(Construction::hellinger_cross(a, g));
  r.claims.push_back(cm_.make("cross_hellinger_holder", "H^(a,g) <= Phi^(1-a) (Lambda mass of its witness)^a", in,
                              cag.limit.value, "<=",
                              D(std::pow(phit, 1 - a) * std::pow(to_double(cag.limit.lambda_sum), a)), true));
  r.claims.push_back(cm_.make("cross_hellinger_holder_lambda", "H^(a,g) <= Phi^(1-a) Lambda(Q)^a", in,
                              cag.limit.value, "<=", D(std::pow(phit, 1 - a) * std::pow(to_double(lambda_q()), a)),
                              false));

  // Third-order quantity: 0 <= Psi3 <= Gamma_2 of its witness.
  try {
    const auto& p3 = get(Construction::psi(a, a, 3));
    add_entry(r, p3);
    const double gam = std::pow(2.0 / (a * kE), 2) * to_double(p3.limit.cost) +
                       std::pow(2.0 / ((1 - a) * kE), 2) * to_double(p3.limit.lambda_sum);
    r.claims.push_back(cm_.make("psi3_nonnegative", "Psi3(a,a) >= 0", in, p3.limit.value, ">=", D(0.0), true));
    r.claims.push_back(cm_.make("psi3_upper", "Psi3(a,a) <= Gamma_2 evaluated on its witness", in, p3.limit.value,
                                "<=", D(gam), true));
  } catch (const std::exception& ex) {
    r.warnings.push_back(std::string("third-order quantity skipped: ") + ex.what());
  }
}

void QueryLab::near_one_suite(report::Report& r) {
  const double l = to_double(lambda_q());
  const double phit = to_double(phi_t());
  const Rational tau = ladder_.front();
  std::vector<double> tail;
  for (double a : s_.alpha_grid)
    if (is_interior(a) && a >= 0.75) tail.push_back(a);
  if (tail.empty())
    for (auto it = s_.alpha_grid.rbegin(); it != s_.alpha_grid.rend(); ++it)
      if (is_interior(*it)) {
        tail.push_back(*it);
        break;
      }
  const auto& h1 = get(Construction::hellinger(1.0));
  for (double a0 : tail) {
    const Json in = {{"Q", literal_}, {"alpha0", a0}, {"tau", rjson(tau)}};
    const auto& ha0 = get(Construction::hellinger(a0));
    const Evaluation up = at(Construction::psi(1.0, a0, 2), tau);
    r.claims.push_back(cm_.make("near_one_upper", "Lambda(Q) - H_a0 <= (1 - a0) Psi2_tau(1,a0) + tau", in,
                                D(l - val(ha0.limit)), "<=", D((1 - a0) * val(up) + to_double(tau)), true));
    const auto& lo = get(Construction::psi(a0, 1.0, 2));
    r.claims.push_back(cm_.make("near_one_lower", "(1 - a0) Psi2(a0,1) <= H_1 - H_a0, matched truncated values", in,
                                D((1 - a0) * val(lo.limit)), "<=", D(val(h1.limit) - val(ha0.limit)), true));
    const Evaluation ka = at(Construction::relative_entropy_alpha(a0), tau);
    r.claims.push_back(cm_.make("near_one_continuity",
                                "|Lambda(Q) - H_a| <= (1 - a) max(K_(a,tau), Phi/(a e)) + tau", in,
                                D(std::abs(l - val(ha0.limit))), "<=",
                                D((1 - a0) * std::max(val(ka), phit / (a0 * kE)) + to_double(tau)), false));
  }
}

void QueryLab::derivative_suite(report::Report& r) {
  std::vector<double> pts;
  for (double a : s_.alpha_grid)
    if (is_interior(a)) pts.push_back(a);
  Json rows = Json::array();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a0 = pts[i];
    const double a = pts[i + 1];
    const double da = a - a0;
    const double cap = std::pow(da, s_.beta / 2);
    const double drop = std::pow(da, s_.beta);
    const auto& h0 = get(Construction::hellinger(a0));
    const auto& h1 = get(Construction::hellinger(a));
    auto ok = [&](double d) {
      const Rational dq(d);
      return val(at(Construction::hellinger(a0), dq)) > val(h0.limit) - drop &&
             val(at(Construction::hellinger(a), dq)) > val(h1.limit) - drop;
    };
    // Largest admissible delta below the cap, located by bisection.
    double lo = 0.0, hi = cap;
    if (ok(hi)) {
      lo = hi;
    } else {
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
          lo = mid;
        else
          hi = mid;
      }
    }
    const double sup = lo > 0 ? lo : hi;
    const double delta = cap * sup;
    const Rational dq(delta);
    const double p_ba = val(at(Construction::psi(a, a0, 2), dq));
    const double p_ab = val(at(Construction::psi(a0, a, 2), dq));
    const double eps = da * (p_ba - p_ab) + 2 * drop + 3 * delta;
    const Rational eq(eps);
    const double left0 = val(at(Construction::psi(a0, a0, 2), eq));
    const double left1 = val(at(Construction::psi(a, a0, 2), eq));
    const double right = val(get(Construction::psi(a, a, 2)).limit);
    const double right0 = val(get(Construction::psi(a0, a0, 2)).limit);
    const double quot = (val(h0.limit) - val(h1.limit)) / (a0 - a);
    const Json in = {{"Q", literal_}, {"alpha0", a0}, {"alpha", a}, {"beta", s_.beta}, {"delta", delta}, {"epsilon", eps}};
    rows.push_back({{"alpha0", a0},
                    {"alpha", a},
                    {"delta", delta},
                    {"epsilon", eps},
                    {"psi_a0a0_eps", left0},
                    {"psi_aa0_eps", left1},
                    {"psi_aa", right},
                    {"psi_a0a0", right0},
                    {"difference_quotient", quot}});
    r.claims.push_back(cm_.make("left_quotient_lower", "Psi2(a,a) <= (H_a0 - H_a)/(a0 - a)", in, D(right), "<=",
                                D(quot), false));
    r.claims.push_back(cm_.make("left_quotient_upper", "(H_a0 - H_a)/(a0 - a) <= Psi2_delta(a,a0)", in, D(quot),
                                "<=", D(p_ba), false));
    r.claims.push_back(cm_.make("left_limit_gap", "Psi2_eps(a0,a0) against Psi2(a,a)", in, D(left0), "==", D(right),
                                false));
    r.claims.push_back(cm_.make("right_derivative_gap", "forward quotient against Psi2(a0,a0)", in, D(quot), "==",
                                D(right0), false));
  }
  r.extras["derivative"].push_back({{"Q", literal_}, {"rows", std::move(rows)}});
}

// ---------------------------------------------------------------- whole space

void whole_space_suite(const MarkovMeasures& mm, const Settings& s, report::Report& r) {
  ClaimMaker cm(s.exact_mode);
  const KStar ks = mm.k_star();
  for (const auto& w : ks.warnings) r.warnings.push_back(w);
  const sym::CylinderUnion X = sym::CylinderUnion::full(mm.alphabet());
  QueryLab lab(mm, X, s);

  const Scalar lower = ks.exp_neg_exact ? E(*ks.exp_neg_exact) : D(std::exp(-ks.value));
  Json kcert = {{"route", "Phi(X) >= Lambda(X) exp(-K(X)) and K(X) <= K*"},
                {"K_star", ks.value},
                {"exp_minus_K_star", scalar_json(lower)},
                {"ess_sup_Z", ks.ess_sup_z},
                {"irreducible", ks.irreducible},
                {"direction", "lower"}};
  auto valid = [&](const Scalar& lo, const Scalar& up) {
    if (lo.is_exact() && up.is_exact()) return *lo.exact <= *up.exact;
    return lo.approx <= up.approx + 1e-12;
  };
  {
    report::Bracket b;
    b.quantity = "Phi(X)";
    b.query = "X";
    b.lower = {lower, "KStarRoute", kcert};
    b.upper = {E(1), "CoverWitness", {{"witness", "0: X"}, {"route", "trivial cover A_0 = X"}, {"direction", "upper"}}};
    b.valid = valid(b.lower.value, b.upper.value);
    r.brackets.push_back(std::move(b));
  }
  {
    report::Bracket b;
    b.quantity = "Phi(X) refined";
    b.query = "X";
    b.lower = {lower, "KStarRoute", kcert};
    b.upper = {lab.engine().phi().value, "CoverWitness",
               {{"witness", lab.engine().phi().witness.to_literal()},
                {"horizon", horizon_text(s.horizon)},
                {"direction", "upper"}}};
    b.valid = valid(b.lower.value, b.upper.value);
    r.brackets.push_back(std::move(b));
  }
  r.claims.push_back(cm.make("k_star_route_below_trivial_cover", "exp(-K*) never exceeds phi0(X) = 1", {}, lower, "<=",
                             E(1), true));
  r.claims.push_back(cm.make("k_star_route_below_truncated_phi", "exp(-K*) <= truncated Phi(X)", {}, lower, "<=",
                             lab.engine().phi().value, true));

  // Finiteness report.
  Json classes = Json::array();
  for (const auto& c : ks.classes)
    classes.push_back({{"symbols", c.symbols},
                       {"closed", c.closed},
                       {"stationary_mass", rjson(c.stationary_mass)},
                       {"max_z", rjson(c.max_z)}});
  r.extras["finiteness"] = {
      {"K_star", ks.value},
      {"ess_sup_Z", ks.ess_sup_z},
      {"irreducible", ks.irreducible},
      {"classes", std::move(classes)},
      {"Z_essentially_bounded", "holds: finite alphabet"},
      {"K_star_finite", "holds: finite alphabet"},
      {"Lambda_abs_continuous_wrt_Phi", ks.irreducible ? "supported: Phi(X) >= exp(-K*) > 0"
                                                         : "not established: reducible transition matrix"},
      {"infinite_horizon_directions", "not checkable in the finite-horizon model"}};

  const double kx = val(lab.get(Construction::relative_entropy()).limit);
  r.claims.push_back(cm.make("phi_lower_relative_entropy_whole_space", "Phi(X) >= exp(-K(X)) with the truncated K(X)",
                             {}, lab.engine().phi().value, ">=", D(std::exp(-kx)), false));
  for (double a : {0.0, 0.5, 1.0}) {
    const auto& ka = lab.get(Construction::relative_entropy_alpha(a));
    r.claims.push_back(cm.make("relative_entropy_alpha_below_k_star", "K_a(X) <= K* (truncated K_a over-estimates)",
                               {{"alpha", a}}, ka.limit.value, "<=", D(ks.value), false));
  }

  // Partition sums over cylinder partitions of growing window.
  Json seq = Json::array();
  std::vector<double> sums;
  for (int k = 1; k <= s.horizon.L; ++k) {
    double sum = 0.0;
    for (const auto& w : sym::all_words(mm.alphabet(), k)) {
      const sym::CylinderUnion c = sym::CylinderUnion::of(mm.alphabet(), sym::Cylinder{0, w});
      const double lam = to_double(mm.lambda(c));
      if (lam <= 0) continue;
      engine::Engine e(mm, c, s.horizon);
      sum += lam * std::log(lam / to_double(*e.phi().value.exact));
    }
    sums.push_back(sum);
    seq.push_back({{"window", k}, {"partition_sum", sum}, {"implied_lower_bound", std::exp(sum - kx)}});
  }
  r.extras["partition_sums"] = std::move(seq);
  for (std::size_t i = 0; i + 1 < sums.size(); ++i)
    r.claims.push_back(cm.make("partition_sum_refinement", "partition sums do not decrease under refinement",
                               {{"window", i + 1}}, D(sums[i]), "<=", D(sums[i + 1]), false));
  if (!sums.empty())
    r.claims.push_back(cm.make("phi_lower_partition", "Phi(X) >= exp(partition sum - K(X))", {},
                               lab.engine().phi().value, ">=", D(std::exp(sums.back() - kx)), false));
}

// ---------------------------------------------------------------- random suites

MarkovModel random_model(std::mt19937_64& rng, int N) {
  std::uniform_int_distribution<int> d(1, 9);
  std::vector<std::vector<Rational>> P(static_cast<std::size_t>(N));
  for (auto& row : P) {
    int tot = 0;
    std::vector<int> v;
    for (int j = 0; j < N; ++j) {
      v.push_back(d(rng));
      tot += v.back();
    }
    for (int x : v) row.push_back(Rational(x) / tot);
  }
  std::vector<Rational> pi;
  int tot = 0;
  std::vector<int> v;
  for (int j = 0; j < N; ++j) {
    v.push_back(d(rng));
    tot += v.back();
  }
  for (int x : v) pi.push_back(Rational(x) / tot);
  return MarkovModel::create(std::move(P), std::move(pi), std::nullopt);
}

std::map<std::string, PropertyCounts> random_pair_suite(std::mt19937_64& rng, std::size_t pairs) {
  std::map<std::string, PropertyCounts> out;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size_d(2, 6);
  auto note = [&](const std::string& k, double slack) {
    auto& c = out[k];
    ++c.draws;
    if (slack < -1e-10) ++c.failures;
    c.worst = std::min(c.worst, slack);
  };
  std::size_t done = 0;
  while (done < pairs) {
    const int n = size_d(rng);
    std::vector<double> lw(static_cast<std::size_t>(n)), pw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      pw[static_cast<std::size_t>(i)] = u(rng) < 0.1 ? 0.0 : u(rng);
      lw[static_cast<std::size_t>(i)] = (pw[static_cast<std::size_t>(i)] == 0 || u(rng) < 0.1) ? 0.0 : u(rng);
    }
    info::FiniteMeasurePair p(lw, pw);
    info::AtomSet A;
    for (int i = 0; i < n; ++i)
      if (u(rng) < 0.6) A.push_back(static_cast<std::size_t>(i));
    if (info::lambda_mass(p, A) <= 0 || info::phi_mass(p, A) <= 0) continue;
    ++done;
    const double alpha = 1.0 - u(rng);  // (0,1]
    const double scale = std::max(1.0, std::abs(info::kl(p, A).value()));
    note("conditioning_identity", -std::abs(info::ml_identity_residual(p, A)) / scale);
    note("conditioning_hellinger_identity", -std::abs(info::ml_hellinger_residual(p, A, alpha)));
    note("conditioning_bound", info::ml_bound_slack(p, A, alpha) / scale);
    const auto hk = info::hkr_bound(p, A, alpha);
    note("hellinger_kl_bound", (hk.lhs - hk.rhs) / std::max({1.0, std::abs(hk.lhs), std::abs(hk.rhs)}));
  }
  return out;
}

PropertyCounts edl_suite(std::mt19937_64& rng, std::size_t draws) {
  PropertyCounts pc;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> nd(0, 5);
  for (std::size_t i = 0; i < draws; ++i) {
    const int n = nd(rng);
    double a0 = 0.01 + 0.98 * u(rng);
    double a = a0 + (1.0 - a0) * (1.0 - u(rng));
    if (a <= a0) a = std::min(1.0, a0 + 1e-3);
    const double pick = u(rng);
    const double Z = pick < 0.05 ? 0.0 : (pick < 0.1 ? 1.0 : std::exp(-8.0 + 16.0 * u(rng)));
    std::optional<double> C;
    if (n % 2 == 1) {
      const double c = std::exp(3.0 * u(rng));
      if ((a - a0) * std::log(c) < 1) C = c;
    }
    const auto chk = info::edl_sandwich(n, a0, a, Z, C);
    ++pc.draws;
    if (!chk.ok(1e-10)) ++pc.failures;
    pc.worst = std::min(pc.worst, chk.worst_relative_slack);
  }
  return pc;
}

namespace {

// Maximum of f on [lo, hi]: dense grid, then golden-section refinement.
template <class F>
double numeric_max(F f, double lo, double hi) {
  const int steps = 20000;
  double best_x = lo, best = f(lo);
  for (int i = 1; i <= steps; ++i) {
    const double x = lo + (hi - lo) * i / steps;
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - (hi - lo) / steps), b = std::min(hi, best_x + (hi - lo) / steps);
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) > f(d))
      b = d;
    else
      a = c;
  }
  return std::max(best, f(0.5 * (a + b)));
}

}  // namespace

double hfpl_grid_gap(int n_max) {
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n)
    for (double a : {0.0, 0.25, 0.5, 0.75}) {
      const auto ex = info::hfpl_extrema(n, a);
      // x |log x|^n on (0,1] in the variable t = -log x.
      const double m1 = numeric_max([&](double t) { return std::exp(-t) * std::pow(t, n); }, 0.0, n + 40.0);
      const double m2 =
          numeric_max([&](double x) { return std::exp(-(1 - a) * x) * std::pow(x, n); }, 0.0, (n + 40.0) / (1 - a));
      worst = std::max(worst, std::abs(m1 - ex.max_xlog) / std::max(1.0, ex.max_xlog));
      worst = std::max(worst, std::abs(m2 - ex.max_exp) / std::max(1.0, ex.max_exp));
    }
  return worst;
}

OracleStats oracle_equivalence(std::uint64_t seed, std::size_t instances) {
  OracleStats st;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nd(2, 3), dd(0, 2), ld(1, 2), kind(0, 3), qd(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (st.instances < instances) {
    const int N = nd(rng), Dh = dd(rng), L = ld(rng);
    int n_c = Dh + 1;
    for (int i = 0; i < L; ++i) n_c *= N;
    if (n_c > 20) continue;
    MarkovMeasures mm(random_model(rng, N));
    // Random query: whole space or a union of up to three short cylinders.
    sym::CylinderUnion Q = sym::CylinderUnion::full(N);
    const int nq = qd(rng);
    if (nq > 0) {
      std::vector<sym::Cylinder> parts;
      std::uniform_int_distribution<int> sd(-Dh, L - 1), sy(1, N), wl(1, 2);
      for (int i = 0; i < nq; ++i) {
        sym::Cylinder c;
        c.start = sd(rng);
        const int len = wl(rng);
        for (int k = 0; k < len; ++k) c.word.push_back(sy(rng));
        parts.push_back(c);
      }
      Q = sym::CylinderUnion::of(N, parts);
    }
    engine::CoverUniverse U(mm, Q, {Dh, L});
    const int k = kind(rng);
    search::Problem p = U.base_problem(k == 3);
    std::string what;
    if (k == 0 || k == 3) {
      p.objective = U.objective(WeightFn::power(0.0));
      what = k == 0 ? "cost" : "disjoint cost";
    } else {
      p.objective = U.objective(k == 1 ? WeightFn::zlogz() : WeightFn::power(0.5));
      what = k == 1 ? "Z log Z under a cost bound" : "Z^(1/2) under a cost bound";
      search::Problem base = U.base_problem(false);
      base.objective = U.objective(WeightFn::power(0.0));
      const search::Solution phi = search::branch_and_bound(base);
      search::ExactConstraint c;
      for (std::size_t i = 0; i < U.candidates().size(); ++i) c.w.push_back(U.cost(i));
      const int denom = 1 << (1 + static_cast<int>(u(rng) * 5));
      c.bound = *phi.value.exact + Rational(1, denom);
      p.exact_constraints.push_back(std::move(c));
    }
    const search::Solution a = search::branch_and_bound(p);
    const search::Solution b = search::exhaustive(p, 26);
    ++st.instances;
    st.max_candidates = std::max(st.max_candidates, U.candidates().size());
    bool same = a.feasible == b.feasible;
    if (same && a.feasible) {
      same = a.chosen == b.chosen;
      if (a.value.is_exact() && b.value.is_exact())
        same = same && *a.value.exact == *b.value.exact;
      else
        same = same && a.value.approx == b.value.approx;
    }
    if (!same) {
      ++st.mismatches;
      st.failures.push_back("instance " + std::to_string(st.instances) + ": N=" + std::to_string(N) +
                            " D=" + std::to_string(Dh) + " L=" + std::to_string(L) + " Q=" + sym::to_literal(Q) +
                            " objective " + what);
    }
  }
  return st;
}

void selftest_suite(const MarkovMeasures& mm, const Settings& s, report::Report& r) {
  ClaimMaker cm(s.exact_mode);
  const auto& m = mm.model();
  const int N = m.N;
  std::mt19937_64 rng(s.seed);

  Rational zsum = 0;
  for (int a = 1; a <= N; ++a) zsum += m.pi[static_cast<std::size_t>(a - 1)] * mm.z(a);
  r.claims.push_back(cm.make("density_normalised", "the integral of Z against phi0 over X is 1", {}, E(zsum), "==",
                             E(1), true));
  bool stationary = true;
  for (int j = 0; j < N; ++j) {
    Rational s2 = 0;
    for (int i = 0; i < N; ++i)
      s2 += m.pi_star[static_cast<std::size_t>(i)] * m.P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    stationary = stationary && s2 == m.pi_star[static_cast<std::size_t>(j)];
  }
  r.claims.push_back(cm.make("lambda_stationary", "pi* P = pi*", {}, E(stationary ? 1 : 0), "==", E(1), true));
  r.claims.push_back(cm.make("relative_entropy_total_nonnegative", "K(Lambda|phi0) >= 0", {}, D(mm.kl_total()), ">=",
                             D(0.0), true));

  // Inclusion-exclusion on random unions inside the window [0, 2].
  {
    std::uniform_int_distribution<int> sd(0, 1), sy(1, N), cnt(1, 3);
    std::vector<Claim> add_phi, add_lam;
    for (int t = 0; t < 20; ++t) {
      auto rnd = [&] {
        std::vector<sym::Cylinder> parts;
        const int k = cnt(rng);
        for (int i = 0; i < k; ++i) {
          sym::Cylinder c;
          c.start = sd(rng);
          c.word = {sy(rng), sy(rng)};
          parts.push_back(c);
        }
        return sym::CylinderUnion::of(N, parts);
      };
      const auto A = rnd(), B = rnd();
      const auto U = sym::set_op(A, B, sym::SetOp::Union);
      const auto I = sym::set_op(A, B, sym::SetOp::Intersect);
      const Json in = {{"A", sym::to_literal(A)}, {"B", sym::to_literal(B)}};
      add_phi.push_back(cm.make("", "", in, E(mm.phi0(U) + mm.phi0(I)), "==", E(mm.phi0(A) + mm.phi0(B)), true));
      add_lam.push_back(
          cm.make("", "", in, E(mm.lambda(U) + mm.lambda(I)), "==", E(mm.lambda(A) + mm.lambda(B)), true));
    }
    r.claims.push_back(worst_of(add_phi, "phi0_additive", "phi0(A u B) + phi0(A n B) = phi0(A) + phi0(B)"));
    r.claims.push_back(worst_of(add_lam, "lambda_additive", "Lambda(A u B) + Lambda(A n B) = Lambda(A) + Lambda(B)"));
  }

  for (const auto& [k, c] : random_pair_suite(rng, 1000)) {
    Claim cl = cm.make(k, "random finite measure pairs: " + k + " (worst scaled slack)",
                       {{"draws", c.draws}, {"failures", c.failures}}, D(c.worst), ">=", D(0.0), true);
    r.claims.push_back(std::move(cl));
  }
  {
    const PropertyCounts c = edl_suite(rng, 100000);
    r.claims.push_back(cm.make("exponential_quotient_sandwich",
                               "difference quotients of Z^a (log Z)^n lie inside their sandwiches (worst relative slack)",
                               {{"draws", c.draws}, {"failures", c.failures}}, D(c.worst), ">=", D(0.0), true));
  }
  {
    const double gap = hfpl_grid_gap(4);
    Claim c = cm.make("power_log_maxima", "closed-form maxima of x|log x|^n and e^(-(1-a)x) x^n match numerical search",
                      {{"n_max", 4}}, D(gap), "<=", D(1e-9), true);
    c.residual = 1e-9 - gap;
    c.status = gap <= 1e-9 ? Status::Certified : Status::Violated;
    r.claims.push_back(std::move(c));
  }
  {
    constexpr double omega = 0.56714329040978387300;
    r.claims.push_back(cm.make("lambert_w_omega", "W(1) equals the omega constant", {}, D(info::lambert_w0(1.0)), "==",
                               D(omega), true));
    std::uniform_real_distribution<double> xd(-1.0 / kE, 50.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = xd(rng);
      const double w = info::lambert_w0(x);
      worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x)));
    }
    Claim c = cm.make("lambert_w_inverse", "W(x) e^W(x) = x on random x", {{"draws", 1000}}, D(worst), "<=", D(1e-12),
                      true);
    c.residual = 1e-12 - worst;
    c.status = worst <= 1e-12 ? Status::Certified : Status::Violated;
    r.claims.push_back(std::move(c));
  }
  {
    const OracleStats st = oracle_equivalence(s.seed, 50);
    Claim c = cm.make("solver_matches_enumeration", "branch and bound equals exhaustive enumeration bit for bit",
                      {{"instances", st.instances}, {"max_candidates", st.max_candidates}, {"failures", st.failures}},
                      E(Rational(static_cast<long>(st.mismatches))), "==", E(0), true);
    r.claims.push_back(std::move(c));
  }
  whole_space_suite(mm, s, r);
}

}  // namespace ddm::cert
