#include "ddm/info.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ddm::info {

FiniteMeasurePair::FiniteMeasurePair(std::vector<double> lambda_w, std::vector<double> phi_w)
    : lambda_(std::move(lambda_w)), phi_(std::move(phi_w)) {
  if (lambda_.size() != phi_.size())
    throw InfoError(InfoError::Code::AbsoluteContinuityViolated, "weight vectors differ in length");
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    if (lambda_[i] < 0 || phi_[i] < 0 || !std::isfinite(lambda_[i]) || !std::isfinite(phi_[i]))
      throw InfoError(InfoError::Code::AbsoluteContinuityViolated, "weights must be finite and nonnegative");
    if (lambda_[i] > 0 && phi_[i] == 0)
      throw InfoError(InfoError::Code::AbsoluteContinuityViolated,
                      "atom " + std::to_string(i) + " has Lambda > 0 but phi = 0");
  }
}

AtomSet all_atoms(const FiniteMeasurePair& p) {
  AtomSet a(p.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = i;
  return a;
}

double lambda_mass(const FiniteMeasurePair& p, const AtomSet& A) {
  double s = 0.0;
  for (auto i : A) s += p.lambda_w()[i];
  return s;
}

double phi_mass(const FiniteMeasurePair& p, const AtomSet& A) {
  double s = 0.0;
  for (auto i : A) s += p.phi_w()[i];
  return s;
}

ExtReal kl(const FiniteMeasurePair& p, const AtomSet& A) {
  ExtReal total(0.0);
  for (auto i : A) {
    const double l = p.lambda_w()[i];
    if (l == 0) continue;  // 0 log(0/y) := 0
    total = total + ExtReal(l * std::log(l / p.phi_w()[i]));
  }
  return total;
}

double hellinger(const FiniteMeasurePair& p, double alpha, const AtomSet& A) {
  if (alpha < 0) throw InfoError(InfoError::Code::ParameterRange, "alpha must be >= 0");
  double total = 0.0;
  for (auto i : A) {
    const double ph = p.phi_w()[i];
    if (ph == 0) continue;
    const double f = p.lambda_w()[i] / ph;
    const double fa = alpha == 0 ? 1.0 : (f == 0 ? 0.0 : std::pow(f, alpha));
    total += fa * ph;
  }
  return total;
}

FiniteMeasurePair conditional(const FiniteMeasurePair& p, const AtomSet& A) {
  const double l = lambda_mass(p, A);
  const double f = phi_mass(p, A);
  if (l <= 0 || f <= 0) throw InfoError(InfoError::Code::ZeroMassConditioning, "conditioning on a null set");
  std::vector<double> lw(p.size(), 0.0), fw(p.size(), 0.0);
  for (auto i : A) {
    lw[i] = p.lambda_w()[i] / l;
    fw[i] = p.phi_w()[i] / f;
  }
  return FiniteMeasurePair(std::move(lw), std::move(fw));
}

double ml_identity_residual(const FiniteMeasurePair& p, const AtomSet& A) {
  const double l = lambda_mass(p, A);
  const double f = phi_mass(p, A);
  const FiniteMeasurePair c = conditional(p, A);
  const double lhs = l * std::log(l / f) + l * kl(c, all_atoms(c)).value();
  return lhs - kl(p, A).value();
}

double ml_hellinger_residual(const FiniteMeasurePair& p, const AtomSet& A, double alpha) {
  const double l = lambda_mass(p, A);
  const double f = phi_mass(p, A);
  const FiniteMeasurePair c = conditional(p, A);
  const double lhs = hellinger(c, alpha, all_atoms(c));
  const double rhs = hellinger(p, alpha, A) / (std::pow(l, alpha) * std::pow(f, 1 - alpha));
  return lhs - rhs;
}

double ml_bound_slack(const FiniteMeasurePair& p, const AtomSet& A, double alpha) {
  if (alpha <= 0 || alpha > 1) throw InfoError(InfoError::Code::ParameterRange, "alpha must lie in (0,1]");
  const double l = lambda_mass(p, A);
  const double f = phi_mass(p, A);
  const FiniteMeasurePair c = conditional(p, A);
  const double bound = l * std::log(l / f) - l * (1.0 / alpha) * std::log(hellinger(c, 1 - alpha, all_atoms(c)));
  return kl(p, A).value() - bound;
}

HkrSides hkr_bound(const FiniteMeasurePair& p, const AtomSet& A, double alpha) {
  if (alpha <= 0 || alpha > 1) throw InfoError(InfoError::Code::ParameterRange, "alpha must lie in (0,1]");
  const double l = lambda_mass(p, A);
  if (l <= 0) throw InfoError(InfoError::Code::ZeroMass, "Lambda(A) must be positive");
  HkrSides s;
  s.lhs = kl(p, A).value();
  s.rhs = -(l / alpha) * std::log(hellinger(p, 1 - alpha, A) / l);
  return s;
}

double lambert_w0(double x) {
  constexpr double inv_e = 1.0 / std::numbers::e;
  if (std::isnan(x) || x < -inv_e - 1e-15) throw InfoError(InfoError::Code::DomainError, "lambert_w0 needs x >= -1/e");
  if (x <= -inv_e) return -1.0;
  if (x == 0) return 0.0;
  double w;
  if (x < -0.25) {
    // Series around the branch point.
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

HfplExtrema hfpl_extrema(int n, double alpha) {
  if (n < 1 || alpha < 0 || alpha >= 1) throw InfoError(InfoError::Code::ParameterRange, "need n >= 1, 0 <= alpha < 1");
  HfplExtrema e;
  const double nn = n;
  e.max_xlog = std::pow(nn / std::numbers::e, nn);
  e.argmax_xlog = std::exp(-nn);
  e.max_exp = std::pow(nn / (std::numbers::e * (1.0 - alpha)), nn);
  e.argmax_exp = nn / (1.0 - alpha);
  return e;
}

double zpow_log(double Z, double a, int k) {
  if (Z == 0) return (k == 0 && a == 0) ? 1.0 : 0.0;
  const double za = a == 0 ? 1.0 : std::pow(Z, a);
  return k == 0 ? za : za * std::pow(std::log(Z), k);
}

double edl_quotient(int n, double alpha0, double alpha, double Z) {
  if (Z == 0) return 0.0;
  const double lz = std::log(Z);
  // Z^alpha - Z^alpha0 = Z^alpha0 * expm1((alpha - alpha0) log Z).
  const double diff = std::pow(Z, alpha0) * std::expm1((alpha - alpha0) * lz);
  return diff * std::pow(lz, n) / (alpha - alpha0);
}

EdlCheck edl_sandwich(int n, double alpha0, double alpha, double Z, std::optional<double> C) {
  if (n < 0 || !(0 < alpha0 && alpha0 < alpha && alpha <= 1) || Z < 0)
    throw InfoError(InfoError::Code::ParameterRange, "need n >= 0, 0 < alpha0 < alpha <= 1, Z >= 0");
  EdlCheck out;
  const double d = edl_quotient(n, alpha0, alpha, Z);
  out.d = d;
  const double lo0 = zpow_log(Z, alpha0, n + 1);
  const double lo1 = zpow_log(Z, alpha, n + 1);
  const double da = alpha - alpha0;
  if (n % 2 == 0) {
    out.bounds.push_back({"even: Z^alpha0 (log Z)^(n+1) <= D_n", lo0, d});
    out.bounds.push_back({"even: D_n <= Z^alpha (log Z)^(n+1)", d, lo1});
  } else {
    out.bounds.push_back({"odd: 0 <= D_n", 0.0, d});
    if (C) {
      if (*C < 1 || da * std::log(*C) >= 1)
        throw InfoError(InfoError::Code::ParameterRange, "C-bound needs C >= 1 and (alpha-alpha0) log C < 1");
      const double ub = Z <= *C ? lo0 / (1.0 - da * std::log(*C)) : lo1;
      out.bounds.push_back({"odd: D_n <= C-split bound", d, ub});
    }
    if (alpha < 1) {
      const double k0 = std::pow((n + 2) / (alpha0 * std::numbers::e), n + 2);
      const double k1 = std::pow((n + 2) / ((1 - alpha) * std::numbers::e), n + 2);
      const double small = Z <= 1 ? 1.0 : 0.0;
      const double large = Z > 1 ? Z : 0.0;
      const double lower = std::max(lo0 - da * k0 * small, lo1 - da * k1 * large);
      const double upper = std::min(lo1 + da * k0 * small, lo0 + da * k1 * large);
      out.bounds.push_back({"odd: max-form lower bound <= D_n", lower, d});
      out.bounds.push_back({"odd: D_n <= min-form upper bound", d, upper});
    }
  }
  out.worst_relative_slack = std::numeric_limits<double>::infinity();
  for (const auto& b : out.bounds) {
    const double scale = std::max({1.0, std::abs(b.lower), std::abs(b.upper)});
    out.worst_relative_slack = std::min(out.worst_relative_slack, (b.upper - b.lower) / scale);
  }
  return out;
}

}  // namespace ddm::info
