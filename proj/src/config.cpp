#include "ddm/config.hpp"

#include "ddm/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ddm::config {

using nlohmann::json;

namespace {

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const std::vector<std::string> kTopLevel = {"model", "queries",  "horizon", "eps_ladder", "alpha_grid", "mode",
                                            "seed",  "output",   "beta",    "shifts"};
const std::vector<std::string> kModelKeys = {"N", "P", "pi", "pi_star", "precision"};

void reject_unknown(const json& obj, const std::vector<std::string>& known, const std::string& path) {
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ConfigError(dot(path, k), "unknown field");
  }
}

// Strings go through the exact parser; integers are exact; other numbers are
// accepted only in float64 mode, where they are converted exactly from binary.
Rational rational_field(const json& v, const std::string& path, bool allow_float) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(path, std::string("not a rational: ") + e.what());
    }
  }
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) {
    if (!allow_float)
      throw ConfigError(path, "write exact values as strings such as \"1/3\" (or set precision to float64)");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "not finite");
    return Rational(d);
  }
  throw ConfigError(path, "expected a rational string or a number");
}

std::vector<Rational> rational_list(const json& v, const std::string& path, bool allow_float) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational_field(v[i], at(path, i), allow_float));
  return out;
}

int int_field(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

double real_field(const json& v, const std::string& path) {
  if (v.is_string()) {
    try {
      return to_double(parse_rational(v.get<std::string>()));
    } catch (const std::exception& e) {
      throw ConfigError(path, std::string("not a number: ") + e.what());
    }
  }
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

MarkovModel parse_model(const json& m, const Caps& caps, bool unsafe_large) {
  if (!m.is_object()) throw ConfigError("model", "expected an object");
  reject_unknown(m, kModelKeys, "model");
  Precision prec = Precision::Rational;
  if (m.contains("precision")) {
    const json& p = m["precision"];
    if (!p.is_string()) throw ConfigError("model.precision", "expected \"rational\" or \"float64\"");
    const auto s = p.get<std::string>();
    if (s == "rational")
      prec = Precision::Rational;
    else if (s == "float64")
      prec = Precision::Float64;
    else
      throw ConfigError("model.precision", "expected \"rational\" or \"float64\", got \"" + s + "\"");
  }
  const bool allow_float = prec == Precision::Float64;
  if (!m.contains("P")) throw ConfigError("model.P", "missing");
  if (!m.contains("pi")) throw ConfigError("model.pi", "missing");
  const json& P = m["P"];
  if (!P.is_array() || P.empty()) throw ConfigError("model.P", "expected a nonempty array of rows");
  const int N = static_cast<int>(P.size());
  if (m.contains("N") && int_field(m["N"], "model.N") != N)
    throw ConfigError("model.N", "does not match the number of rows of P (" + std::to_string(N) + ")");
  if (N > caps.max_N && !unsafe_large)
    throw ConfigError("model.N", "alphabet size " + std::to_string(N) + " exceeds the cap " +
                                     std::to_string(caps.max_N) + " (use --unsafe-large to override)");
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < P.size(); ++i) rows.push_back(rational_list(P[i], at("model.P", i), allow_float));
  std::vector<Rational> pi = rational_list(m["pi"], "model.pi", allow_float);
  std::optional<std::vector<Rational>> pi_star;
  if (m.contains("pi_star") && !m["pi_star"].is_null())
    pi_star = rational_list(m["pi_star"], "model.pi_star", allow_float);
  try {
    return MarkovModel::create(std::move(rows), std::move(pi), std::move(pi_star), prec);
  } catch (const ModelError& e) {
    throw ConfigError(dot("model", e.field()), e.what());
  }
}

}  // namespace

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "phi") return Mode::Phi;
  if (s == "entropy") return Mode::Entropy;
  if (s == "hellinger-scan") return Mode::HellingerScan;
  if (s == "derivative") return Mode::Derivative;
  if (s == "certify") return Mode::Certify;
  if (s == "selftest") return Mode::Selftest;
  return std::nullopt;
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Phi: return "phi";
    case Mode::Entropy: return "entropy";
    case Mode::HellingerScan: return "hellinger-scan";
    case Mode::Derivative: return "derivative";
    case Mode::Certify: return "certify";
    default: return "selftest";
  }
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 10; ++k) g.push_back(k / 10.0);
  return g;
}

RunConfig parse(const json& doc, bool unsafe_large, Caps caps) {
  if (!doc.is_object()) throw ConfigError("", "the configuration must be a JSON object");
  reject_unknown(doc, kTopLevel, "");
  RunConfig c;
  if (!doc.contains("model")) throw ConfigError("model", "missing");
  c.model = parse_model(doc["model"], caps, unsafe_large);
  const int N = c.model.N;

  if (doc.contains("queries")) {
    const json& q = doc["queries"];
    if (!q.is_array() || q.empty()) throw ConfigError("queries", "expected a nonempty array of cylinder literals");
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (!q[i].is_string()) throw ConfigError(at("queries", i), "expected a string");
      const auto text = q[i].get<std::string>();
      try {
        (void)sym::parse_union(N, text);
      } catch (const std::exception& e) {
        throw ConfigError(at("queries", i), e.what());
      }
      c.queries.push_back(text);
    }
  } else {
    c.queries = {"X"};
  }

  if (doc.contains("horizon")) {
    const json& h = doc["horizon"];
    if (!h.is_object()) throw ConfigError("horizon", "expected an object {D, L}");
    reject_unknown(h, {"D", "L"}, "horizon");
    if (h.contains("D")) c.horizon.D = int_field(h["D"], "horizon.D");
    if (h.contains("L")) c.horizon.L = int_field(h["L"], "horizon.L");
  }
  if (c.horizon.D < 0) throw ConfigError("horizon.D", "must be >= 0");
  if (c.horizon.L < 1) throw ConfigError("horizon.L", "must be >= 1");
  if (!unsafe_large) {
    if (c.horizon.D > caps.max_D)
      throw ConfigError("horizon.D", "exceeds the cap " + std::to_string(caps.max_D) + " (use --unsafe-large)");
    if (c.horizon.L > caps.max_L)
      throw ConfigError("horizon.L", "exceeds the cap " + std::to_string(caps.max_L) + " (use --unsafe-large)");
  }

  if (doc.contains("eps_ladder") && !doc["eps_ladder"].is_null()) {
    c.eps_ladder = rational_list(doc["eps_ladder"], "eps_ladder", c.model.precision == Precision::Float64);
    for (std::size_t i = 0; i < c.eps_ladder.size(); ++i) {
      if (c.eps_ladder[i] <= 0) throw ConfigError(at("eps_ladder", i), "must be positive");
      if (i > 0 && !(c.eps_ladder[i] < c.eps_ladder[i - 1]))
        throw ConfigError(at("eps_ladder", i), "ladder must be strictly decreasing");
    }
  }

  if (doc.contains("alpha_grid") && !doc["alpha_grid"].is_null()) {
    const json& g = doc["alpha_grid"];
    if (!g.is_array() || g.empty()) throw ConfigError("alpha_grid", "expected a nonempty array");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = real_field(g[i], at("alpha_grid", i));
      if (!(a >= 0.0 && a <= 1.0)) throw ConfigError(at("alpha_grid", i), "must lie in [0, 1]");
      if (!c.alpha_grid.empty() && !(a > c.alpha_grid.back()))
        throw ConfigError(at("alpha_grid", i), "grid must be strictly increasing");
      c.alpha_grid.push_back(a);
    }
  } else {
    c.alpha_grid = default_alpha_grid();
  }

  if (doc.contains("mode") && !doc["mode"].is_null()) {
    if (!doc["mode"].is_string()) throw ConfigError("mode", "expected a string");
    c.mode = parse_mode(doc["mode"].get<std::string>());
    if (!c.mode) throw ConfigError("mode", "unknown mode \"" + doc["mode"].get<std::string>() + "\"");
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string() || doc["output"].get<std::string>().empty())
      throw ConfigError("output", "expected a nonempty path prefix");
    c.output = doc["output"].get<std::string>();
  }
  if (doc.contains("beta")) {
    c.beta = real_field(doc["beta"], "beta");
    if (!(c.beta > 0)) throw ConfigError("beta", "must be positive");
  }
  if (doc.contains("shifts")) {
    c.shifts = int_field(doc["shifts"], "shifts");
    if (c.shifts < 0 || c.shifts > 8) throw ConfigError("shifts", "must lie in 0..8");
  }
  return c;
}

RunConfig parse_text(const std::string& text, bool unsafe_large, Caps caps) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse(doc, unsafe_large, caps);
}

RunConfig load_file(const std::string& path, bool unsafe_large, Caps caps) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_text(ss.str(), unsafe_large, caps);
}

}  // namespace ddm::config
