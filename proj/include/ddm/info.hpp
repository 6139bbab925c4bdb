#pragma once

// Information theory on finite measure spaces plus the scalar inequality kit
// used by the Hellinger-family bounds.

#include "ddm/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddm::info {

class InfoError : public std::runtime_error {
 public:
  enum class Code { AbsoluteContinuityViolated, ZeroMassConditioning, ZeroMass, DomainError, ParameterRange };
  InfoError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Two weight vectors on the same atoms with Lambda << phi.
class FiniteMeasurePair {
 public:
  FiniteMeasurePair(std::vector<double> lambda_w, std::vector<double> phi_w);

  std::size_t size() const { return lambda_.size(); }
  const std::vector<double>& lambda_w() const { return lambda_; }
  const std::vector<double>& phi_w() const { return phi_; }
  /// Density lambda/phi on supp(phi); 0 elsewhere.
  double density(std::size_t i) const { return phi_[i] > 0 ? lambda_[i] / phi_[i] : 0.0; }

 private:
  std::vector<double> lambda_;
  std::vector<double> phi_;
};

/// Atom indices; all_atoms() gives the whole space.
using AtomSet = std::vector<std::size_t>;
AtomSet all_atoms(const FiniteMeasurePair& p);

double lambda_mass(const FiniteMeasurePair& p, const AtomSet& A);
double phi_mass(const FiniteMeasurePair& p, const AtomSet& A);

/// K(Lambda|phi)(A) = int_A log f dLambda.
ExtReal kl(const FiniteMeasurePair& p, const AtomSet& A);
/// H_alpha(Lambda,phi)(A) = int_A f^alpha dphi with 0^0 = 1.
double hellinger(const FiniteMeasurePair& p, double alpha, const AtomSet& A);

/// (Lambda_A, phi_A): both restricted to A and normalised.
FiniteMeasurePair conditional(const FiniteMeasurePair& p, const AtomSet& A);

/// Signed residuals (left minus right) of the conditioning identities.
double ml_identity_residual(const FiniteMeasurePair& p, const AtomSet& A);
double ml_hellinger_residual(const FiniteMeasurePair& p, const AtomSet& A, double alpha);
/// K(A) minus the lower bound built from H_{1-alpha}(Lambda_A, phi_A); must be >= 0.
double ml_bound_slack(const FiniteMeasurePair& p, const AtomSet& A, double alpha);

struct HkrSides {
  double lhs = 0.0;  // K(Lambda|phi)(A)
  double rhs = 0.0;  // -(Lambda(A)/alpha) log(H_{1-alpha}(A)/Lambda(A))
};
HkrSides hkr_bound(const FiniteMeasurePair& p, const AtomSet& A, double alpha);

/// Principal branch of Lambert W on [-1/e, inf).
double lambert_w0(double x);

struct HfplExtrema {
  double max_xlog = 0.0;     // max over [0,1] of x |log x|^n
  double argmax_xlog = 0.0;  // e^{-n}
  double max_exp = 0.0;      // max over [0,inf) of e^{-(1-alpha)x} x^n
  double argmax_exp = 0.0;   // n / (1-alpha)
};
HfplExtrema hfpl_extrema(int n, double alpha);

/// Z^a (log Z)^k with the conventions used throughout (value 0 at Z = 0 for a > 0).
double zpow_log(double Z, double a, int k);

/// (Z^alpha - Z^alpha0)(log Z)^n / (alpha - alpha0), evaluated without cancellation.
double edl_quotient(int n, double alpha0, double alpha, double Z);

struct EdlBound {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
};

struct EdlCheck {
  double d = 0.0;
  std::vector<EdlBound> bounds;  // each asserts lower <= upper
  /// Most negative (upper - lower) scaled by max(1, |lower|, |upper|).
  double worst_relative_slack = 0.0;
  bool ok(double tol) const { return worst_relative_slack >= -tol; }
};
EdlCheck edl_sandwich(int n, double alpha0, double alpha, double Z, std::optional<double> C = std::nullopt);

}  // namespace ddm::info
