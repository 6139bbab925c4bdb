#pragma once

// Run configuration: a single JSON document, rationals written as strings.

#include "ddm/engine.hpp"
#include "ddm/markov.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddm::config {

/// Validation failure; `field` is a path such as "model.P[1]" or "alpha_grid[3]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Mode { Phi, Entropy, HellingerScan, Derivative, Certify, Selftest };

std::optional<Mode> parse_mode(const std::string& s);
std::string to_string(Mode m);

struct Caps {
  int max_N = 4;
  int max_D = 4;
  int max_L = 4;
};

struct RunConfig {
  MarkovModel model;
  std::vector<std::string> queries;  // cylinder literals as written
  engine::Horizon horizon{2, 2};
  std::vector<Rational> eps_ladder;  // empty: per-query default
  std::vector<double> alpha_grid;
  std::optional<Mode> mode;
  std::uint64_t seed = 0;
  std::string output;
  double beta = 2.0;
  int shifts = 2;
};

/// Parses and validates. `unsafe_large` lifts the size caps.
RunConfig parse(const nlohmann::json& doc, bool unsafe_large = false, Caps caps = {});
RunConfig parse_text(const std::string& text, bool unsafe_large = false, Caps caps = {});
RunConfig load_file(const std::string& path, bool unsafe_large = false, Caps caps = {});

/// 0, 0.1, ..., 1.
std::vector<double> default_alpha_grid();

}  // namespace ddm::config
