#include "dpa/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpa/quadrature.hpp"

namespace dpa {

// ---------------------------------------------------------------- Mobility

Mobility Mobility::power_cap(double cap, double gamma) {
  if (!(cap > 0.0) || !std::isfinite(cap)) throw std::invalid_argument("power_cap: cap must be > 0");
  if (!(gamma >= 1.0)) throw std::invalid_argument("power_cap: gamma must be >= 1");
  Mobility m;
  m.kind_ = Kind::PowerCap;
  m.cap_ = cap;
  m.gamma_ = gamma;
  m.beta_max_ = std::pow(cap, gamma);
  m.lip_beta_ = gamma * std::pow(cap, gamma - 1.0);
  return m;
}

Mobility Mobility::tabulated(std::vector<double> s, std::vector<double> beta) {
  if (s.size() != beta.size() || s.size() < 2) {
    throw std::invalid_argument("tabulated mobility: need >= 2 samples of equal length");
  }
  if (s.front() != 0.0) throw std::invalid_argument("tabulated mobility: first sample must be s = 0");
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (!(s[k] > s[k - 1])) throw std::invalid_argument("tabulated mobility: s must be increasing");
  }
  Mobility m;
  m.kind_ = Kind::Tabulated;
  m.table_s_ = std::move(s);
  m.table_beta_ = std::move(beta);
  m.beta_max_ = m.table_beta_.front();
  m.cap_ = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.table_s_.size(); ++k) {
    if (m.table_beta_[k] <= 0.0) {
      m.cap_ = m.table_s_[k];
      break;
    }
  }
  m.lip_beta_ = 0.0;
  for (std::size_t k = 1; k < m.table_s_.size(); ++k) {
    const double slope = std::abs(m.table_beta_[k] - m.table_beta_[k - 1]) /
                         (m.table_s_[k] - m.table_s_[k - 1]);
    m.lip_beta_ = std::max(m.lip_beta_, slope);
  }
  return m;
}

double Mobility::beta(double s) const {
  s = std::max(s, 0.0);
  if (kind_ == Kind::PowerCap) {
    if (s >= cap_) return 0.0;
    return std::max(beta_max_ - std::pow(s, gamma_), 0.0);
  }
  const auto& xs = table_s_;
  const auto& ys = table_beta_;
  double b;
  if (s >= xs.back()) {
    b = ys.back();
  } else {
    const auto it = std::upper_bound(xs.begin(), xs.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double w = (s - xs[k]) / (xs[k + 1] - xs[k]);
    b = (1.0 - w) * ys[k] + w * ys[k + 1];
  }
  return std::clamp(b, 0.0, std::max(beta_max_, 0.0));
}

double Mobility::theta(double s) const {
  if (s < 0.0) throw std::domain_error("theta: density must be non-negative");
  return s * beta(s);
}

double Mobility::theta_prime(double s) const {
  s = std::max(s, 0.0);
  if (kind_ == Kind::PowerCap) {
    // left derivative at the cap
    if (s > cap_) return 0.0;
    return beta_max_ - (gamma_ + 1.0) * std::pow(s, gamma_);
  }
  const auto& xs = table_s_;
  const auto& ys = table_beta_;
  if (s >= xs.back()) return std::clamp(ys.back(), 0.0, beta_max_);
  const auto it = std::upper_bound(xs.begin(), xs.end(), s);
  std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
  if (s == cap_ && k > 0) return s * (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
  const double slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
  const double b = beta(s);
  if (b <= 0.0) return 0.0;
  return b + s * slope;
}

double Mobility::max_abs_theta_prime() const {
  if (kind_ == Kind::PowerCap) return gamma_ * beta_max_;
  double best = 0.0;
  const double top = std::isfinite(cap_) ? cap_ : table_s_.back();
  constexpr int samples = 2000;
  for (int k = 0; k <= samples; ++k) {
    best = std::max(best, std::abs(theta_prime(top * k / samples)));
  }
  for (double s : table_s_) best = std::max(best, std::abs(theta_prime(s)));
  return best;
}

double Mobility::max_theta() const {
  if (kind_ == Kind::PowerCap) {
    // maximiser of s (c - s^g) with c = cap^g
    const double s_star = std::pow(beta_max_ / (gamma_ + 1.0), 1.0 / gamma_);
    return theta(s_star);
  }
  double best = 0.0;
  const double top = std::isfinite(cap_) ? cap_ : table_s_.back();
  constexpr int samples = 2000;
  for (int k = 0; k <= samples; ++k) best = std::max(best, theta(top * k / samples));
  return best;
}

// ------------------------------------------------------- ExternalPotential

ExternalPotential ExternalPotential::zero() {
  ExternalPotential v;
  v.name = "zero";
  v.value = [](double) { return 0.0; };
  v.d1 = [](double) { return 0.0; };
  v.d2 = [](double) { return 0.0; };
  return v;
}

ExternalPotential ExternalPotential::linear(double slope) {
  ExternalPotential v;
  v.name = "linear";
  v.value = [slope](double x) { return slope * x; };
  v.d1 = [slope](double) { return slope; };
  v.d2 = [](double) { return 0.0; };
  v.growth = std::abs(slope);
  return v;
}

ExternalPotential ExternalPotential::quadratic(double stiffness) {
  ExternalPotential v;
  v.name = "quadratic";
  v.value = [stiffness](double x) { return 0.5 * stiffness * x * x; };
  v.d1 = [stiffness](double x) { return stiffness * x; };
  v.d2 = [stiffness](double) { return stiffness; };
  v.d2_sup = std::abs(stiffness);
  v.growth = std::abs(stiffness);
  return v;
}

// ------------------------------------------------------------- Interaction

namespace {
double sign(double x) { return (x > 0.0) - (x < 0.0); }
}  // namespace

Interaction Interaction::zero() { return Interaction{}; }

Interaction Interaction::newtonian(bool attractive) {
  Interaction w;
  w.kind_ = attractive ? InteractionKind::NewtonianAttractive : InteractionKind::NewtonianRepulsive;
  w.name_ = attractive ? "newtonian_attractive" : "newtonian_repulsive";
  w.d1_sup_ = 1.0;
  return w;
}

Interaction Interaction::morse(const MorseParams& p) {
  if (!(p.c_attr > 0 && p.l_attr > 0 && p.c_rep > 0 && p.l_rep > 0)) {
    throw std::invalid_argument("morse: all parameters must be positive");
  }
  Interaction w;
  w.kind_ = InteractionKind::Morse;
  w.name_ = "morse";
  w.morse_ = p;
  w.d1_sup_ = p.c_attr / p.l_attr + p.c_rep / p.l_rep;
  w.d2_sup_ = p.c_attr / (p.l_attr * p.l_attr) + p.c_rep / (p.l_rep * p.l_rep);
  w.d2_lip_ = p.c_attr / std::pow(p.l_attr, 3) + p.c_rep / std::pow(p.l_rep, 3);
  return w;
}

Interaction Interaction::gaussian(double strength, double length) {
  if (!(length > 0)) throw std::invalid_argument("gaussian: length must be positive");
  const double a = strength;
  const double l2 = length * length;
  auto value = [a, l2](double x) { return -a * std::exp(-x * x / (2 * l2)); };
  auto d1 = [a, l2](double x) { return a * x / l2 * std::exp(-x * x / (2 * l2)); };
  auto d2 = [a, l2](double x) { return a / l2 * (1 - x * x / l2) * std::exp(-x * x / (2 * l2)); };
  const double aa = std::abs(a);
  // sup|W'| at x = l, sup|W''| at x = 0, sup|W'''| at x = sqrt(3 - sqrt 6) l
  const double d1_sup = aa / length * std::exp(-0.5);
  const double d2_sup = aa / l2;
  const double u = std::sqrt(3.0 - std::sqrt(6.0));
  const double d2_lip = aa / (l2 * length) * std::abs(u * u * u - 3 * u) * std::exp(-0.5 * u * u);
  Interaction w = regular(value, d1, d2, d1_sup, d2_sup, d2_lip, "gaussian");
  return w;
}

Interaction Interaction::regular(std::function<double(double)> value,
                                 std::function<double(double)> d1,
                                 std::function<double(double)> d2, double d1_sup, double d2_sup,
                                 double d2_lip, std::string name) {
  Interaction w;
  w.kind_ = InteractionKind::Regular;
  w.name_ = std::move(name);
  w.value_ = std::move(value);
  w.d1_ = std::move(d1);
  w.d2_ = std::move(d2);
  w.d1_sup_ = d1_sup;
  w.d2_sup_ = d2_sup;
  w.d2_lip_ = d2_lip;
  return w;
}

int Interaction::newtonian_sign() const {
  switch (kind_) {
    case InteractionKind::NewtonianAttractive: return 1;
    case InteractionKind::NewtonianRepulsive: return -1;
    default: return 0;
  }
}

double Interaction::value(double x) const {
  switch (kind_) {
    case InteractionKind::Zero: return 0.0;
    case InteractionKind::NewtonianAttractive: return std::abs(x);
    case InteractionKind::NewtonianRepulsive: return -std::abs(x);
    case InteractionKind::Morse: {
      const double r = std::abs(x);
      return -morse_.c_attr * std::exp(-r / morse_.l_attr) + morse_.c_rep * std::exp(-r / morse_.l_rep);
    }
    case InteractionKind::Regular: return value_(x);
  }
  return 0.0;
}

double Interaction::d1(double x) const {
  switch (kind_) {
    case InteractionKind::Zero: return 0.0;
    case InteractionKind::NewtonianAttractive: return sign(x);
    case InteractionKind::NewtonianRepulsive: return -sign(x);
    case InteractionKind::Morse: {
      const double r = std::abs(x);
      const double radial = morse_.c_attr / morse_.l_attr * std::exp(-r / morse_.l_attr) -
                            morse_.c_rep / morse_.l_rep * std::exp(-r / morse_.l_rep);
      return sign(x) * radial;
    }
    case InteractionKind::Regular: return d1_(x);
  }
  return 0.0;
}

double Interaction::d2(double x) const {
  switch (kind_) {
    case InteractionKind::Zero:
    case InteractionKind::NewtonianAttractive:
    case InteractionKind::NewtonianRepulsive: return 0.0;
    case InteractionKind::Morse: {
      const double r = std::abs(x);
      return -morse_.c_attr / (morse_.l_attr * morse_.l_attr) * std::exp(-r / morse_.l_attr) +
             morse_.c_rep / (morse_.l_rep * morse_.l_rep) * std::exp(-r / morse_.l_rep);
    }
    case InteractionKind::Regular: return d2_(x);
  }
  return 0.0;
}

// ---------------------------------------------------------- InitialDensity

InitialDensity InitialDensity::uniform(double a, double b, double height) {
  InitialDensity d;
  d.kind_ = Kind::Uniform;
  d.breaks_ = {a, b};
  d.values_ = {height};
  d.finalize();
  return d;
}

InitialDensity InitialDensity::parabolic_bump(double amplitude, double center, double radius) {
  InitialDensity d;
  d.kind_ = Kind::ParabolicBump;
  d.amplitude_ = amplitude;
  d.center_ = center;
  d.radius_ = radius;
  d.breaks_ = {center - radius, center + radius};
  d.finalize();
  return d;
}

InitialDensity InitialDensity::piecewise_constant(std::vector<double> breakpoints,
                                                  std::vector<double> values) {
  if (breakpoints.size() != values.size() + 1 || values.empty()) {
    throw std::invalid_argument("piecewise_constant: need K+1 breakpoints for K values");
  }
  InitialDensity d;
  d.kind_ = Kind::PiecewiseConstant;
  d.breaks_ = std::move(breakpoints);
  d.values_ = std::move(values);
  d.finalize();
  return d;
}

void InitialDensity::finalize() {
  switch (kind_) {
    case Kind::Uniform:
      x_min_ = breaks_[0];
      x_max_ = breaks_[1];
      mass_ = values_[0] * (x_max_ - x_min_);
      sup_norm_ = std::abs(values_[0]);
      lower_bound_ = std::max(values_[0], 0.0);
      break;
    case Kind::ParabolicBump:
      x_min_ = center_ - radius_;
      x_max_ = center_ + radius_;
      mass_ = amplitude_ * 4.0 * radius_ / 3.0;
      sup_norm_ = std::abs(amplitude_);
      lower_bound_ = 0.0;
      break;
    case Kind::PiecewiseConstant: {
      std::size_t first = values_.size();
      std::size_t last = 0;
      for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] != 0.0) {
          first = std::min(first, k);
          last = k;
        }
      }
      if (first == values_.size()) {
        x_min_ = breaks_.front();
        x_max_ = breaks_.back();
      } else {
        x_min_ = breaks_[first];
        x_max_ = breaks_[last + 1];
      }
      mass_ = 0.0;
      sup_norm_ = 0.0;
      lower_bound_ = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < values_.size(); ++k) {
        mass_ += values_[k] * (breaks_[k + 1] - breaks_[k]);
        sup_norm_ = std::max(sup_norm_, std::abs(values_[k]));
        if (k >= first && k <= last) lower_bound_ = std::min(lower_bound_, values_[k]);
      }
      if (!std::isfinite(lower_bound_)) lower_bound_ = 0.0;
      lower_bound_ = std::max(lower_bound_, 0.0);
      break;
    }
  }
}

InitialDensity InitialDensity::with_declared_mass(double m) const {
  InitialDensity d = *this;
  d.mass_ = m;
  return d;
}

double InitialDensity::operator()(double x) const {
  switch (kind_) {
    case Kind::Uniform:
      return (x >= breaks_[0] && x < breaks_[1]) ? values_[0] : 0.0;
    case Kind::ParabolicBump: {
      const double u = (x - center_) / radius_;
      return std::max(amplitude_ * (1.0 - u * u), 0.0) * (std::abs(u) < 1.0 ? 1.0 : 0.0);
    }
    case Kind::PiecewiseConstant: {
      if (x < breaks_.front() || x >= breaks_.back()) return 0.0;
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
      return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
    }
  }
  return 0.0;
}

double InitialDensity::cumulative(double x) const {
  switch (kind_) {
    case Kind::Uniform:
      return values_[0] * (std::clamp(x, breaks_[0], breaks_[1]) - breaks_[0]);
    case Kind::ParabolicBump: {
      const double u = std::clamp((x - center_) / radius_, -1.0, 1.0);
      return amplitude_ * radius_ * (u - u * u * u / 3.0 + 2.0 / 3.0);
    }
    case Kind::PiecewiseConstant: {
      double acc = 0.0;
      for (std::size_t k = 0; k < values_.size(); ++k) {
        const double lo = breaks_[k];
        const double hi = breaks_[k + 1];
        if (x <= lo) break;
        acc += values_[k] * (std::min(x, hi) - lo);
      }
      return acc;
    }
  }
  return 0.0;
}

double InitialDensity::quadrature_mass() const {
  auto f = [this](double x) { return (*this)(x); };
  switch (kind_) {
    case Kind::ParabolicBump:
      return gauss_legendre4_composite(f, x_min_, x_max_, 16);
    case Kind::Uniform:
    case Kind::PiecewiseConstant: {
      double acc = 0.0;
      for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
        const double v = values_[k];
        acc += gauss_legendre4([v](double) { return v; }, breaks_[k], breaks_[k + 1]);
      }
      return acc;
    }
  }
  return 0.0;
}

std::vector<std::pair<double, double>> InitialDensity::support_gaps() const {
  std::vector<std::pair<double, double>> gaps;
  if (kind_ != Kind::PiecewiseConstant) return gaps;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] == 0.0 && breaks_[k] >= x_min_ && breaks_[k + 1] <= x_max_) {
      if (!gaps.empty() && gaps.back().second == breaks_[k]) {
        gaps.back().second = breaks_[k + 1];
      } else {
        gaps.emplace_back(breaks_[k], breaks_[k + 1]);
      }
    }
  }
  return gaps;
}

// ------------------------------------------------------------- ProblemSpec

double ProblemSpec::M() const { return std::max(initial.sup_norm(), mobility.cap()); }

double ProblemSpec::force_lipschitz() const {
  const double M_ = M();
  if (W.is_newtonian() || W.kind() == InteractionKind::Zero) {
    const double interaction = W.is_newtonian() ? 2.0 * M_ : 0.0;
    return std::max(V.d2_sup + interaction, V.d2_lip);
  }
  const double m = mass();
  const double c1 = V.d2_sup + m * W.d2_sup() + 2.0 * M_ * W.d1_sup();
  const double c2 = V.d2_lip + m * W.d2_lip();
  const double c3 = V.d2_sup + (2.0 + m) * W.d2_sup();
  return std::max({c1, c2, c3});
}

// -------------------------------------------------------------- validation

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NonMonotoneMobility: return "NonMonotoneMobility";
    case ViolationKind::MassMismatch: return "MassMismatch";
    case ViolationKind::UnboundedSupport: return "UnboundedSupport";
    case ViolationKind::NegativeDensity: return "NegativeDensity";
  }
  return "Unknown";
}

namespace {
std::string join_violations(const std::vector<Violation>& v) {
  std::ostringstream os;
  os << "invalid problem:";
  for (const auto& item : v) os << "\n  " << to_string(item.kind) << ": " << item.message;
  return os.str();
}
}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<Violation> check_assumptions(const ProblemSpec& spec) {
  std::vector<Violation> out;
  const Mobility& mob = spec.mobility;

  // mobility: decreasing, positive at 0, vanishing from a finite cap on
  bool mobility_ok = mob.beta_max() > 0.0 && std::isfinite(mob.cap());
  if (mob.kind() == Mobility::Kind::Tabulated) {
    const auto& b = mob.table_beta();
    for (std::size_t k = 1; k < b.size(); ++k) mobility_ok = mobility_ok && b[k] <= b[k - 1];
    mobility_ok = mobility_ok && b.back() <= 0.0;
  }
  if (mobility_ok) {
    constexpr int samples = 1000;
    double prev = mob.beta(0.0);
    for (int k = 1; k <= samples; ++k) {
      const double b = mob.beta(mob.cap() * k / samples);
      if (b > prev + 1e-15) mobility_ok = false;
      prev = b;
    }
    mobility_ok = mobility_ok && mob.beta(mob.cap()) == 0.0;
  }
  if (!mobility_ok) {
    out.push_back({ViolationKind::NonMonotoneMobility,
                   "mobility beta must be non-increasing with beta(0) > 0 and vanish from a "
                   "finite density cap on"});
  }

  const InitialDensity& init = spec.initial;
  const bool support_ok = std::isfinite(init.x_min()) && std::isfinite(init.x_max()) &&
                          init.x_max() > init.x_min();
  if (!support_ok) {
    out.push_back({ViolationKind::UnboundedSupport,
                   "initial density must have a bounded support of positive length"});
  }

  bool negative = false;
  switch (init.kind()) {
    case InitialDensity::Kind::ParabolicBump:
      negative = init.sup_norm() > 0.0 && init((init.x_min() + init.x_max()) / 2) <= 0.0;
      break;
    default:
      for (double v : init.values()) negative = negative || v < 0.0;
      break;
  }
  if (negative) {
    out.push_back({ViolationKind::NegativeDensity, "initial density must be non-negative"});
  }

  if (support_ok && !negative) {
    const double q = init.quadrature_mass();
    const double m = init.mass();
    if (!(m > 0.0) || std::abs(q - m) > 1e-10 * std::abs(m) ||
        std::abs(init.cumulative(init.x_max()) - m) > 1e-10 * std::abs(m)) {
      std::ostringstream os;
      os.precision(12);
      os << "initial density integrates to " << q << " but the declared mass is " << m;
      out.push_back({ViolationKind::MassMismatch, os.str()});
    }
  }
  return out;
}

const ProblemSpec& validate(const ProblemSpec& spec) {
  auto violations = check_assumptions(spec);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return spec;
}

}  // namespace dpa
