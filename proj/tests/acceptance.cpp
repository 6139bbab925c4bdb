// Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "ddm/certify.hpp"
#include "ddm/config.hpp"
#include "ddm/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace ddm;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

config::RunConfig load(const char* name) {
  return config::load_file((std::filesystem::path(DDM_CONFIG_DIR) / name).string());
}

const report::Bracket* find_bracket(const report::Report& r, const std::string& q, const std::string& query) {
  for (const auto& b : r.brackets)
    if (b.quantity == q && b.query == query) return &b;
  return nullptr;
}

std::size_t violated(const report::Report& r, const std::set<std::string>& ids, std::size_t* seen = nullptr) {
  std::size_t v = 0, n = 0;
  for (const auto& c : r.claims) {
    if (!ids.count(c.id)) continue;
    ++n;
    if (c.status == report::Status::Violated) ++v;
  }
  if (seen) *seen = n;
  return v;
}

bool is_one(const Scalar& s) { return s.exact ? *s.exact == 1 : s.approx == 1.0; }

Verdict stationary() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto cfg = load("stationary.json");
  const MarkovMeasures mm(cfg.model);
  for (int a = 1; a <= mm.alphabet(); ++a) v.require(mm.z(a) == 1, "Z not identically 1");
  v.require(mm.k_star().value == 0.0, "K* != 0");
  v.require(mm.kl_total() == 0.0, "K(Lambda|phi0) != 0");
  const auto r = run::build_report(cfg, config::Mode::Certify, cfg.seed, 0);
  for (const auto& e : r.entries)
    if (e.construction == "relative_entropy") v.require(e.value.approx == 0.0, "relative entropy entry nonzero");
  for (const auto& s : r.scans)
    if (s.query == "X")
      for (const auto& row : s.rows) v.require(is_one(row.h_value), "H_alpha(X) != 1");
  const auto* b = find_bracket(r, "Phi(X)", "X");
  v.require(b && b->lower.value.exact && *b->lower.value.exact == 1 && b->upper.value.exact &&
                *b->upper.value.exact == 1,
            "Phi(X) bracket is not [1, 1]");
  v.require(!r.any_violated(), "violated claims");
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  v.require(secs < 1.0, "runtime >= 1 s");
  return v;
}

Verdict reference() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto cfg = load("reference.json");
  const auto r = run::build_report(cfg, config::Mode::Certify, cfg.seed, 0);
  const auto* b = find_bracket(r, "Phi(X)", "X");
  v.require(b != nullptr, "no Phi(X) bracket");
  if (b) {
    v.require(b->lower.value.exact && *b->lower.value.exact == Rational(1, 2), "lower != 1/2");
    v.require(b->upper.value.exact && *b->upper.value.exact == 1, "upper != 1");
    v.require(b->certified && b->valid, "bracket not certified");
  }
  v.require(!r.any_violated(), "violated claims");
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  v.require(secs < 5.0, "runtime >= 5 s");
  return v;
}

Verdict oracle() {
  const auto t0 = Clock::now();
  Verdict v;
  const auto st = cert::oracle_equivalence(20240601, 400);
  v.require(st.instances >= 200, "fewer than 200 instances");
  v.require(st.mismatches == 0, std::to_string(st.mismatches) + " mismatches");
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  v.require(secs < 60.0, "runtime >= 60 s");
  v.detail += (v.detail.empty() ? "" : "; ") + std::to_string(st.instances) + " instances";
  return v;
}

Verdict inequality_suites() {
  Verdict v;
  auto cfg = load("reference.json");
  cfg.alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  cfg.queries = {"X", "0[2]", "0[1 2]"};
  const auto r = run::build_report(cfg, config::Mode::Certify, cfg.seed, 0);
  auto suite = [&](const std::set<std::string>& ids, const char* name, std::size_t min_seen) {
    std::size_t seen = 0;
    const std::size_t bad = violated(r, ids, &seen);
    v.require(bad == 0, std::string(name) + " violated");
    v.require(seen >= min_seen, std::string(name) + " not exercised");
  };
  suite({"relative_entropy_lower", "cover_chain_log"}, "entropy lower bound", 3);
  std::size_t hm = 0;
  for (const auto& c : r.claims)
    if (c.id == "hellinger_mixed_bound") ++hm;
  suite({"hellinger_mixed_bound"}, "mixed Hellinger bound", 3);
  v.require(hm >= 3, "mixed bound not checked on all queries");
  suite({"shift_monotone"}, "shift monotonicity", 3);

  std::mt19937_64 rng(cfg.seed);
  for (const auto& [name, c] : cert::random_pair_suite(rng, 1000)) {
    v.require(c.draws >= 1000, name + " draws < 1000");
    v.require(c.failures == 0, name + " failures");
  }
  const auto e = cert::edl_suite(rng, 100000);
  v.require(e.draws >= 100000 && e.failures == 0, "difference quotient sandwich");
  v.require(cert::hfpl_grid_gap(6) < 1e-9, "closed-form maxima gap >= 1e-9");
  return v;
}

Verdict alpha_regularity() {
  Verdict v;
  const auto cfg = load("reference.json");
  v.require(cfg.alpha_grid.size() == 11, "grid is not 11 points");
  const auto r = run::build_report(cfg, config::Mode::HellingerScan, cfg.seed, 0);
  for (const auto& s : r.scans) v.require(s.rows.size() == 11, "scan " + s.query + " has wrong length");
  const std::set<std::string> ids = {"hellinger_continuity", "forward_difference_envelope_upper",
                                     "forward_difference_envelope_lower", "hellinger_positivity_dichotomy"};
  for (const auto& id : ids) {
    std::size_t seen = 0;
    v.require(violated(r, {id}, &seen) == 0, id + " violated");
    v.require(seen >= cfg.queries.size(), id + " missing");
  }
  return v;
}

Verdict monotone_ladders() {
  Verdict v;
  const auto cfg = load("reference.json");
  const auto r = run::build_report(cfg, config::Mode::Certify, cfg.seed, 0);
  for (const char* id : {"epsilon_ladder_monotone", "horizon_monotone"}) {
    std::size_t seen = 0;
    v.require(violated(r, {id}, &seen) == 0, std::string(id) + " violated");
    v.require(seen > 0, std::string(id) + " missing");
  }
  // A decreasing ladder step must be flagged and propagate to the exit code.
  const cert::ClaimMaker cm(true);
  report::Report bad;
  bad.claims.push_back(cm.make("epsilon_ladder_monotone", "step", {}, Scalar::from_exact(Rational(1, 2)), ">=",
                               Scalar::from_exact(Rational(3, 4)), true));
  v.require(bad.claims.back().status == report::Status::Violated, "decreasing step not violated");
  v.require(run::exit_code_for(bad) == 2, "violation does not give exit code 2");
  return v;
}

Verdict reproducible() {
  Verdict v;
  const auto cfg = load("reference.json");
  for (auto mode : {config::Mode::Certify, config::Mode::Selftest}) {
    const auto a = report::to_json_text(run::build_report(cfg, mode, cfg.seed, 0));
    const auto b = report::to_json_text(run::build_report(cfg, mode, cfg.seed, 1));
    v.require(a == b, config::to_string(mode) + " report differs between runs");
    const auto ra = run::build_report(cfg, mode, cfg.seed, 0);
    const auto rb = run::build_report(cfg, mode, cfg.seed, 0);
    v.require(report::to_json_text(ra) == report::to_json_text(rb), "repeated run differs");
    for (std::size_t i = 0; i < ra.scans.size(); ++i)
      v.require(report::scan_csv(ra.scans[i], true) == report::scan_csv(rb.scans[i], true), "CSV differs");
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"stationary model collapses to the trivial values", stationary},
      {"reference model certified bracket [1/2, 1]", reference},
      {"branch and bound matches exhaustive enumeration", oracle},
      {"inequality suites report zero violations", inequality_suites},
      {"alpha regularity on the 11-point grid", alpha_regularity},
      {"monotone epsilon ladders and horizon enlargements", monotone_ladders},
      {"byte-identical reports across runs", reproducible},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s criterion %zu: %s (%.2f s)%s%s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                secs, v.detail.empty() ? "" : " - ", v.detail.c_str());
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
