#pragma once

// Markov measures on the two-sided shift: phi0 (initial law pi), the
// stationary Lambda (initial law pi*), and the density Z = dLambda/dphi0.

#include "ddm/rational.hpp"
#include "ddm/symbolic.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddm {

class ModelError : public std::runtime_error {
 public:
  enum class Code { InvalidModel, NotStationary, NotUnique, NotInA0, ParameterRange };
  ModelError(Code code, std::string field, const std::string& what)
      : std::runtime_error(what), code_(code), field_(std::move(field)) {}
  Code code() const { return code_; }
  /// Offending field inside the model block ("P[1]", "pi", ...), empty if none.
  const std::string& field() const { return field_; }

 private:
  Code code_;
  std::string field_;
};

enum class Precision { Rational, Float64 };

struct MarkovModel {
  int N = 0;
  std::vector<std::vector<Rational>> P;
  std::vector<Rational> pi;
  std::vector<Rational> pi_star;
  Precision precision = Precision::Rational;

  /// Validates every invariant; solves for pi* when it is not given.
  static MarkovModel create(std::vector<std::vector<Rational>> P, std::vector<Rational> pi,
                            std::optional<std::vector<Rational>> pi_star,
                            Precision precision = Precision::Rational);
};

/// Unique stationary law of P by exact elimination; NotUnique if the chain has
/// more than one closed class.
std::vector<Rational> stationary_distribution(const std::vector<std::vector<Rational>>& P);

/// Integrand of the form Z^alpha (log Z)^k + offset, integrated against phi0.
struct WeightFn {
  double alpha = 0.0;
  int log_power = 0;
  double offset = 0.0;

  static WeightFn power(double a) { return {a, 0, 0.0}; }
  static WeightFn power_log(double a, int k) { return {a, k, 0.0}; }
  static WeightFn zlogz() { return {1.0, 1, 0.0}; }
  static WeightFn kappa0();

  /// True when integrals are exact rationals (Z^0 or Z^1).
  bool exact() const { return log_power == 0 && offset == 0.0 && (alpha == 0.0 || alpha == 1.0); }
  /// Integrand at a density value z, with 0^0 = 1 and 0 (log 0)^k = 0 for alpha > 0.
  double at(double z) const;
  std::string describe() const;
  friend bool operator==(const WeightFn&, const WeightFn&) = default;
};

struct ClassInfo {
  std::vector<int> symbols;  // 1-based
  bool closed = false;
  Rational stationary_mass;
  Rational max_z;
};

struct KStar {
  double value = 0.0;
  /// exp(-K*) when it is rational (a single charged closed class), else nullopt.
  std::optional<Rational> exp_neg_exact;
  double ess_sup_z = 0.0;
  bool irreducible = true;
  std::vector<ClassInfo> classes;
  std::vector<std::string> warnings;
};

class MarkovMeasures {
 public:
  explicit MarkovMeasures(MarkovModel model);

  const MarkovModel& model() const { return model_; }
  int alphabet() const { return model_.N; }

  /// pi P^k.
  std::vector<Rational> marginal(int k) const;

  /// phi0(_0[w]) = pi(w1) prod p.
  Rational word_mass(const sym::Word& w) const;
  /// Lambda(_m[w]) = pi*(w1) prod p for any m.
  Rational word_lambda(const sym::Word& w) const;

  Rational phi0(const sym::CylinderUnion& set) const;
  Rational lambda(const sym::CylinderUnion& set) const;

  /// z(a) = pi*(a)/pi(a), a in 1..N.
  const Rational& z(int a) const { return z_[static_cast<std::size_t>(a - 1)]; }
  double z_double(int a) const { return z_d_[static_cast<std::size_t>(a - 1)]; }

  /// phi0(set with x_0 = a) for every a; index a-1.
  std::vector<Rational> mass_by_first_symbol(const sym::CylinderUnion& set) const;

  /// Integral of a weight function over a set in A_0.
  Scalar integral(const sym::CylinderUnion& set, const WeightFn& g) const;
  Scalar integral_Z_alpha(const sym::CylinderUnion& set, double alpha) const;
  double integral_ZlogZ(const sym::CylinderUnion& set) const;
  double kappa0(const sym::CylinderUnion& set) const;

  /// K(Lambda|phi0) on the whole space, which equals sum pi* log z.
  double kl_total() const;
  KStar k_star() const;

 private:
  MarkovModel model_;
  std::vector<Rational> z_;
  std::vector<double> z_d_;
};

}  // namespace ddm
