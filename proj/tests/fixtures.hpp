#pragma once

#include "ddm/markov.hpp"

namespace ddm::testing {

inline MarkovModel model(std::vector<std::string> pi, std::vector<std::string> pi_star) {
  std::vector<std::vector<Rational>> P(2, std::vector<Rational>(2, Rational(1, 2)));
  std::vector<Rational> p, ps;
  for (const auto& s : pi) p.push_back(parse_rational(s));
  for (const auto& s : pi_star) ps.push_back(parse_rational(s));
  return MarkovModel::create(P, p, ps);
}

// Fair-coin chain started away from its stationary law.
inline MarkovModel reference_model() { return model({"3/4", "1/4"}, {"1/2", "1/2"}); }
inline MarkovModel stationary_model() { return model({"1/2", "1/2"}, {"1/2", "1/2"}); }

}  // namespace ddm::testing
