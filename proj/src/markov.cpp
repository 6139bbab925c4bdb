#include "ddm/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ddm {

namespace {

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void check_distribution(const std::vector<Rational>& v, int N, const std::string& name, bool strictly_positive) {
  if (static_cast<int>(v.size()) != N)
    throw ModelError(ModelError::Code::InvalidModel, name,
                     name + " has " + std::to_string(v.size()) + " entries, expected " + std::to_string(N));
  Rational sum = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0 || (strictly_positive && v[i] == 0))
      throw ModelError(ModelError::Code::InvalidModel, idx(name, i),
                       idx(name, i) + " = " + to_string(v[i]) +
                           (strictly_positive ? " must be > 0" : " must be >= 0"));
    sum += v[i];
  }
  if (sum != 1)
    throw ModelError(ModelError::Code::InvalidModel, name,
                     name + " sums to " + to_string(sum) + ", expected 1");
}

}  // namespace

MarkovModel MarkovModel::create(std::vector<std::vector<Rational>> P, std::vector<Rational> pi,
                                std::optional<std::vector<Rational>> pi_star, Precision precision) {
  const int N = static_cast<int>(P.size());
  if (N < 1) throw ModelError(ModelError::Code::InvalidModel, "P", "P must have at least one row");
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (static_cast<int>(P[i].size()) != N)
      throw ModelError(ModelError::Code::InvalidModel, idx("P", i),
                       idx("P", i) + " has " + std::to_string(P[i].size()) + " entries, expected " +
                           std::to_string(N));
    Rational sum = 0;
    for (std::size_t j = 0; j < P[i].size(); ++j) {
      if (P[i][j] < 0)
        throw ModelError(ModelError::Code::InvalidModel, idx(idx("P", i), j),
                         idx(idx("P", i), j) + " is negative");
      sum += P[i][j];
    }
    if (sum != 1)
      throw ModelError(ModelError::Code::InvalidModel, idx("P", i),
                       idx("P", i) + " sums to " + to_string(sum) + ", expected 1");
  }
  check_distribution(pi, N, "pi", true);

  MarkovModel m;
  m.N = N;
  m.P = std::move(P);
  m.pi = std::move(pi);
  m.precision = precision;
  if (pi_star) {
    check_distribution(*pi_star, N, "pi_star", false);
    for (int j = 0; j < N; ++j) {
      Rational s = 0;
      for (int i = 0; i < N; ++i) s += (*pi_star)[static_cast<std::size_t>(i)] * m.P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (s != (*pi_star)[static_cast<std::size_t>(j)])
        throw ModelError(ModelError::Code::NotStationary, "pi_star",
                         "pi_star is not stationary for P (component " + std::to_string(j) + ")");
    }
    m.pi_star = std::move(*pi_star);
  } else {
    try {
      m.pi_star = stationary_distribution(m.P);
    } catch (const ModelError& e) {
      throw ModelError(e.code(), "pi_star", e.what());
    }
  }
  return m;
}

std::vector<Rational> stationary_distribution(const std::vector<std::vector<Rational>>& P) {
  const std::size_t N = P.size();
  // Rows: (P^T - I) x = 0 and sum x = 1; augmented with the right-hand side.
  std::vector<std::vector<Rational>> a(N + 1, std::vector<Rational>(N + 1, Rational(0)));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) a[i][j] = P[j][i] - (i == j ? Rational(1) : Rational(0));
  for (std::size_t j = 0; j < N; ++j) a[N][j] = 1;
  a[N][N] = 1;

  std::size_t row = 0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = row;
    while (piv <= N && a[piv][col] == 0) ++piv;
    if (piv > N)
      throw ModelError(ModelError::Code::NotUnique, "",
                       "stationary law is not unique; give pi_star explicitly");
    std::swap(a[piv], a[row]);
    const Rational inv = 1 / a[row][col];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r <= N; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = col; c <= N; ++c) a[r][c] -= f * a[row][c];
    }
    ++row;
  }
  // Remaining row must read 0 = 0 for consistency.
  if (a[N][N] != 0)
    throw ModelError(ModelError::Code::NotUnique, "", "stationary system is inconsistent");
  std::vector<Rational> x(N);
  for (std::size_t i = 0; i < N; ++i) x[i] = a[i][N];
  return x;
}

WeightFn WeightFn::kappa0() { return {1.0, 1, 1.0 / std::numbers::e}; }

double WeightFn::at(double z) const {
  double core;
  if (z == 0.0) {
    if (log_power == 0)
      core = alpha == 0.0 ? 1.0 : 0.0;
    else if (alpha > 0.0)
      core = 0.0;
    else
      throw ModelError(ModelError::Code::ParameterRange, "",
                       "integrand (log Z)^k is -inf where Z = 0; alpha must be > 0");
  } else if (log_power == 0) {
    core = alpha == 0.0 ? 1.0 : (alpha == 1.0 ? z : std::pow(z, alpha));
  } else {
    const double zp = alpha == 0.0 ? 1.0 : (alpha == 1.0 ? z : std::pow(z, alpha));
    core = zp * std::pow(std::log(z), log_power);
  }
  return core + offset;
}

std::string WeightFn::describe() const {
  std::string s = "Z^" + shortest_text(alpha);
  if (log_power == 1) s += " log Z";
  if (log_power > 1) s += " (log Z)^" + std::to_string(log_power);
  if (offset != 0.0) s += " + " + shortest_text(offset);
  return s;
}

MarkovMeasures::MarkovMeasures(MarkovModel model) : model_(std::move(model)) {
  for (int a = 0; a < model_.N; ++a) {
    z_.push_back(model_.pi_star[static_cast<std::size_t>(a)] / model_.pi[static_cast<std::size_t>(a)]);
    z_d_.push_back(to_double(z_.back()));
  }
}

std::vector<Rational> MarkovMeasures::marginal(int k) const {
  std::vector<Rational> mu = model_.pi;
  const auto N = static_cast<std::size_t>(model_.N);
  for (int step = 0; step < k; ++step) {
    std::vector<Rational> next(N, Rational(0));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) next[j] += mu[i] * model_.P[i][j];
    mu = std::move(next);
  }
  return mu;
}

namespace {

Rational chain_product(const std::vector<std::vector<Rational>>& P, const sym::Word& w) {
  Rational r = 1;
  for (std::size_t k = 0; k + 1 < w.size(); ++k)
    r *= P[static_cast<std::size_t>(w[k] - 1)][static_cast<std::size_t>(w[k + 1] - 1)];
  return r;
}

}  // namespace

Rational MarkovMeasures::word_mass(const sym::Word& w) const {
  if (w.empty()) return 1;
  return model_.pi[static_cast<std::size_t>(w[0] - 1)] * chain_product(model_.P, w);
}

Rational MarkovMeasures::word_lambda(const sym::Word& w) const {
  if (w.empty()) return 1;
  return model_.pi_star[static_cast<std::size_t>(w[0] - 1)] * chain_product(model_.P, w);
}

Rational MarkovMeasures::phi0(const sym::CylinderUnion& set) const {
  if (set.is_empty()) return 0;
  const sym::CylinderUnion c = set.canonical();
  if (c.is_full()) return 1;
  if (c.window_lo() < 0)
    throw ModelError(ModelError::Code::NotInA0, "",
                     "set " + sym::to_literal(c) + " is not in A_0 (constrains coordinate " +
                         std::to_string(c.window_lo()) + ")");
  const auto mu = marginal(c.window_lo());
  Rational total = 0;
  for (const auto& w : c.words()) total += mu[static_cast<std::size_t>(w[0] - 1)] * chain_product(model_.P, w);
  return total;
}

Rational MarkovMeasures::lambda(const sym::CylinderUnion& set) const {
  if (set.is_empty()) return 0;
  const sym::CylinderUnion c = set.canonical();
  if (c.is_full()) return 1;
  Rational total = 0;
  for (const auto& w : c.words()) total += word_lambda(w);
  return total;
}

std::vector<Rational> MarkovMeasures::mass_by_first_symbol(const sym::CylinderUnion& set) const {
  const auto N = static_cast<std::size_t>(model_.N);
  std::vector<Rational> out(N, Rational(0));
  if (set.is_empty()) return out;
  const sym::CylinderUnion c = set.canonical();
  if (c.is_full()) return model_.pi;
  if (c.window_lo() < 0)
    throw ModelError(ModelError::Code::NotInA0, "", "set " + sym::to_literal(c) + " is not in A_0");
  const sym::CylinderUnion r = sym::refine(c, 0, c.window_hi());
  for (const auto& w : r.words()) out[static_cast<std::size_t>(w[0] - 1)] += word_mass(w);
  return out;
}

Scalar MarkovMeasures::integral(const sym::CylinderUnion& set, const WeightFn& g) const {
  const auto mass = mass_by_first_symbol(set);
  if (g.exact()) {
    Rational total = 0;
    for (std::size_t a = 0; a < mass.size(); ++a) total += g.alpha == 0.0 ? mass[a] : z_[a] * mass[a];
    return Scalar::from_exact(total);
  }
  double total = 0.0;
  for (std::size_t a = 0; a < mass.size(); ++a) {
    if (mass[a] == 0) continue;
    total += g.at(z_d_[a]) * to_double(mass[a]);
  }
  return Scalar::from_double(total);
}

Scalar MarkovMeasures::integral_Z_alpha(const sym::CylinderUnion& set, double alpha) const {
  if (alpha < 0.0 || alpha > 1.0)
    throw ModelError(ModelError::Code::ParameterRange, "", "alpha must lie in [0,1]");
  return integral(set, WeightFn::power(alpha));
}

double MarkovMeasures::integral_ZlogZ(const sym::CylinderUnion& set) const {
  return integral(set, WeightFn::zlogz()).approx;
}

double MarkovMeasures::kappa0(const sym::CylinderUnion& set) const {
  return integral(set, WeightFn::kappa0()).approx;
}

double MarkovMeasures::kl_total() const {
  double total = 0.0;
  for (std::size_t a = 0; a < z_.size(); ++a) {
    if (model_.pi_star[a] == 0) continue;
    total += to_double(model_.pi_star[a]) * std::log(z_d_[a]);
  }
  return total;
}

KStar MarkovMeasures::k_star() const {
  const auto N = static_cast<std::size_t>(model_.N);
  std::vector<std::vector<bool>> reach(N, std::vector<bool>(N, false));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) reach[i][j] = (i == j) || model_.P[i][j] > 0;
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;

  KStar out;
  std::vector<int> cls(N, -1);
  for (std::size_t i = 0; i < N; ++i) {
    if (cls[i] >= 0) continue;
    ClassInfo info;
    const int id = static_cast<int>(out.classes.size());
    for (std::size_t j = i; j < N; ++j)
      if (reach[i][j] && reach[j][i]) {
        cls[j] = id;
        info.symbols.push_back(static_cast<int>(j) + 1);
      }
    out.classes.push_back(std::move(info));
  }
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    ClassInfo& info = out.classes[c];
    info.closed = true;
    info.stationary_mass = 0;
    info.max_z = 0;
    for (int s : info.symbols) {
      const auto a = static_cast<std::size_t>(s - 1);
      for (std::size_t j = 0; j < N; ++j)
        if (model_.P[a][j] > 0 && cls[j] != static_cast<int>(c)) info.closed = false;
      info.stationary_mass += model_.pi_star[a];
      if (z_[a] > info.max_z) info.max_z = z_[a];
    }
  }
  out.irreducible = out.classes.size() == 1;
  if (!out.irreducible)
    out.warnings.push_back("transition matrix is reducible; K* computed per closed class");

  int charged = 0;
  for (const auto& info : out.classes) {
    if (info.stationary_mass == 0) continue;
    ++charged;
    const double mz = to_double(info.max_z);
    out.value += to_double(info.stationary_mass) * std::log(mz);
    out.ess_sup_z = std::max(out.ess_sup_z, mz);
  }
  if (charged == 1)
    for (const auto& info : out.classes)
      if (info.stationary_mass != 0) out.exp_neg_exact = 1 / info.max_z;
  return out;
}

}  // namespace ddm
