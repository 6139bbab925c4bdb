#include "ddm/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

namespace ddm::run {

using config::Mode;

unsigned default_threads() {
  if (const char* v = std::getenv("DDM_LAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0') return static_cast<unsigned>(std::clamp(n, 1L, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

cert::Settings settings_for(const config::RunConfig& cfg, std::uint64_t seed) {
  cert::Settings s;
  s.horizon = cfg.horizon;
  s.eps_ladder = cfg.eps_ladder;
  s.alpha_grid = cfg.alpha_grid;
  s.shifts = cfg.shifts;
  s.beta = cfg.beta;
  s.seed = seed;
  s.exact_mode = cfg.model.precision == Precision::Rational;
  return s;
}

namespace {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own result slot, so merging afterwards in index order is deterministic.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(n, std::max(1u, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

report::Json run_block(const config::RunConfig& cfg, Mode mode, std::uint64_t seed) {
  report::Json r;
  r["mode"] = config::to_string(mode);
  r["seed"] = seed;
  r["precision"] = cfg.model.precision == Precision::Rational ? "rational" : "float64";
  report::Json model;
  model["N"] = cfg.model.N;
  report::Json P = report::Json::array();
  for (const auto& row : cfg.model.P) {
    report::Json jr = report::Json::array();
    for (const auto& x : row) jr.push_back(to_string(x));
    P.push_back(std::move(jr));
  }
  model["P"] = std::move(P);
  for (const auto* key : {"pi", "pi_star"}) {
    const auto& v = std::string(key) == "pi" ? cfg.model.pi : cfg.model.pi_star;
    report::Json a = report::Json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    model[key] = std::move(a);
  }
  r["model"] = std::move(model);
  r["queries"] = cfg.queries;
  r["horizon"] = {{"D", cfg.horizon.D}, {"L", cfg.horizon.L}};
  if (cfg.eps_ladder.empty()) {
    r["eps_ladder"] = "default: 2^-k Phi(Q), k = 1..6";
  } else {
    report::Json e = report::Json::array();
    for (const auto& x : cfg.eps_ladder) e.push_back(to_string(x));
    r["eps_ladder"] = std::move(e);
  }
  r["alpha_grid"] = cfg.alpha_grid;
  r["beta"] = cfg.beta;
  r["shifts"] = cfg.shifts;
  return r;
}

void query_suites(cert::QueryLab& lab, Mode mode, report::Report& r) {
  switch (mode) {
    case Mode::Phi:
      lab.phi_suite(r);
      break;
    case Mode::Entropy:
      lab.entropy_suite(r);
      lab.cover_chain_suite(r);
      break;
    case Mode::HellingerScan:
      lab.hellinger_suite(r);
      break;
    case Mode::Derivative:
      lab.derivative_suite(r);
      break;
    case Mode::Certify:
      lab.phi_suite(r);
      lab.entropy_suite(r);
      lab.hellinger_suite(r);
      lab.cover_chain_suite(r);
      lab.interpolation_suite(r);
      lab.near_one_suite(r);
      lab.derivative_suite(r);
      break;
    case Mode::Selftest:
      break;
  }
}

}  // namespace

report::Report build_report(const config::RunConfig& cfg, Mode mode, std::uint64_t seed, unsigned threads) {
  const MarkovMeasures mm(cfg.model);
  const cert::Settings s = settings_for(cfg, seed);
  report::Report out;
  out.mode = config::to_string(mode);
  out.exact_mode = s.exact_mode;
  out.run = run_block(cfg, mode, seed);

  if (mode == Mode::Selftest) {
    cert::selftest_suite(mm, s, out);
    return out;
  }
  if (mode == Mode::Phi || mode == Mode::Certify) cert::whole_space_suite(mm, s, out);

  std::vector<report::Report> parts(cfg.queries.size());
  parallel_for(cfg.queries.size(), threads, [&](std::size_t i) {
    parts[i].exact_mode = s.exact_mode;
    cert::QueryLab lab(mm, sym::parse_union(mm.alphabet(), cfg.queries[i]), s);
    query_suites(lab, mode, parts[i]);
  });
  for (auto& p : parts) out.merge(std::move(p));
  return out;
}

int exit_code_for(const report::Report& r) { return r.any_violated() ? 2 : 0; }

Outcome execute(const config::RunConfig& cfg, const Options& opt) {
  const std::uint64_t seed = opt.seed.value_or(cfg.seed);
  const unsigned threads = opt.threads ? opt.threads : default_threads();
  Outcome o;
  o.report = build_report(cfg, opt.mode, seed, threads);
  std::string prefix = opt.out_prefix;
  if (prefix.empty()) prefix = cfg.output.empty() ? "ddm-lab-" + config::to_string(opt.mode) : cfg.output;

  const std::string json_path = prefix + ".json";
  report::write_atomic(json_path, report::to_json_text(o.report));
  o.files.push_back(json_path);
  const auto& scans = o.report.scans;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    if (scans[i].rows.empty()) continue;
    const std::string path = scans.size() == 1 ? prefix + ".csv" : prefix + ".q" + std::to_string(i) + ".csv";
    report::write_atomic(path, report::scan_csv(scans[i], o.report.exact_mode));
    o.files.push_back(path);
  }
  o.exit_code = exit_code_for(o.report);
  return o;
}

int main_entry(const std::string& mode_text, const std::string& config_path, const std::string& out_prefix,
               std::optional<std::uint64_t> seed, bool unsafe_large, std::ostream& out, std::ostream& err) {
  const auto mode = config::parse_mode(mode_text);
  if (!mode) {
    err << "error: unknown mode \"" << mode_text
        << "\" (expected phi, entropy, hellinger-scan, derivative, certify or selftest)\n";
    return 1;
  }
  config::RunConfig cfg;
  try {
    cfg = config::load_file(config_path, unsafe_large);
  } catch (const config::ConfigError& e) {
    err << "config error at " << (e.field().empty() ? std::string("<document>") : e.field()) << "\n  " << e.what()
        << "\n";
    return 1;
  }
  if (cfg.mode && *cfg.mode != *mode)
    err << "note: config mode \"" << config::to_string(*cfg.mode) << "\" overridden by the command line\n";
  Options opt;
  opt.mode = *mode;
  opt.out_prefix = out_prefix;
  opt.seed = seed;
  Outcome o;
  try {
    o = execute(cfg, opt);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  const auto& r = o.report;
  out << "ddm-lab " << r.mode << ": " << r.count(report::Status::Certified) << " certified, "
      << r.count(report::Status::Diagnostic) << " diagnostic, " << r.count(report::Status::Violated)
      << " violated, " << r.brackets.size() << " brackets\n";
  for (const auto& b : r.brackets)
    out << "  bracket " << b.quantity << " on " << b.query << ": ["
        << report::value_json(b.lower.value, r.exact_mode).dump() << ", "
        << report::value_json(b.upper.value, r.exact_mode).dump() << "]" << (b.certified ? " certified" : " heuristic")
        << "\n";
  for (const auto& c : r.claims)
    if (c.status == report::Status::Violated) out << "  violated: " << c.id << " (" << c.anchor << ")\n";
  for (const auto& f : o.files) out << "  wrote " << f << "\n";
  return o.exit_code;
}

}  // namespace ddm::run
