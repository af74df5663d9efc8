#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dpa {

/// Density-dependent mobility factor beta, with theta(s) = s * beta(s).
///
/// Two families are supported: the power-cap family
/// beta(s) = (cap^gamma - s^gamma)_+ which vanishes exactly at s = cap, and a
/// tabulated profile interpolated piecewise-linearly and clamped to
/// [0, beta_max].
class Mobility {
 public:
  enum class Kind { PowerCap, Tabulated };

  static Mobility power_cap(double cap, double gamma = 1.0);
  static Mobility tabulated(std::vector<double> s, std::vector<double> beta);

  Kind kind() const { return kind_; }

  /// Negative densities are clamped to 0.
  double beta(double s) const;
  /// Throws std::domain_error for s < 0.
  double theta(double s) const;
  /// Right derivative of theta.
  double theta_prime(double s) const;

  double beta_max() const { return beta_max_; }
  /// Smallest density at which beta vanishes (+inf if it never does).
  double cap() const { return cap_; }
  double lip_beta() const { return lip_beta_; }
  double gamma() const { return gamma_; }
  double max_abs_theta_prime() const;
  double max_theta() const;

  const std::vector<double>& table_s() const { return table_s_; }
  const std::vector<double>& table_beta() const { return table_beta_; }

 private:
  Mobility() = default;

  Kind kind_ = Kind::PowerCap;
  double cap_ = 1.0;
  double gamma_ = 1.0;
  double beta_max_ = 1.0;
  double lip_beta_ = 1.0;
  std::vector<double> table_s_;
  std::vector<double> table_beta_;
};

/// External potential V with its first two derivatives and the bounds that
/// enter the force-regularity constant.
struct ExternalPotential {
  std::string name = "zero";
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double d2_sup = 0.0;  // sup |V''|
  double d2_lip = 0.0;  // Lip(V'')
  double growth = 0.0;  // c_V in |V'(r)| <= c_V (1 + |r|)

  static ExternalPotential zero();
  /// V(x) = slope * x
  static ExternalPotential linear(double slope);
  /// V(x) = stiffness * x^2 / 2
  static ExternalPotential quadratic(double stiffness);
};

enum class InteractionKind { Zero, Regular, NewtonianAttractive, NewtonianRepulsive, Morse };

struct MorseParams {
  double c_attr = 1.0;
  double l_attr = 1.0;
  double c_rep = 0.5;
  double l_rep = 0.5;
};

/// Even interaction kernel W.
///
/// Newtonian kernels are W(x) = +|x| (attractive) and W(x) = -|x| (repulsive)
/// with W'(0) = 0. The Morse kernel is
/// W(x) = -c_attr exp(-|x|/l_attr) + c_rep exp(-|x|/l_rep), odd-extended
/// derivative with W'(0) = 0.
class Interaction {
 public:
  static Interaction zero();
  static Interaction newtonian(bool attractive);
  static Interaction morse(const MorseParams& p);
  /// W(x) = -strength * exp(-x^2 / (2 length^2)).
  static Interaction gaussian(double strength, double length);
  /// Caller-supplied even kernel; the sup/Lip bounds are taken as declared.
  static Interaction regular(std::function<double(double)> value,
                             std::function<double(double)> d1,
                             std::function<double(double)> d2, double d1_sup, double d2_sup,
                             double d2_lip, std::string name = "regular");

  InteractionKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_newtonian() const {
    return kind_ == InteractionKind::NewtonianAttractive ||
           kind_ == InteractionKind::NewtonianRepulsive;
  }
  /// +1 for attractive, -1 for repulsive, 0 otherwise.
  int newtonian_sign() const;
  const MorseParams& morse_params() const { return morse_; }

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  double d1_sup() const { return d1_sup_; }
  double d2_sup() const { return d2_sup_; }
  double d2_lip() const { return d2_lip_; }

 private:
  Interaction() = default;

  InteractionKind kind_ = InteractionKind::Zero;
  std::string name_ = "zero";
  MorseParams morse_{};
  std::function<double(double)> value_;
  std::function<double(double)> d1_;
  std::function<double(double)> d2_;
  double d1_sup_ = 0.0;
  double d2_sup_ = 0.0;
  double d2_lip_ = 0.0;
};

/// Compactly supported, non-negative initial density with a closed-form
/// cumulative function.
class InitialDensity {
 public:
  enum class Kind { PiecewiseConstant, ParabolicBump, Uniform };

  static InitialDensity uniform(double a, double b, double height);
  /// amplitude * (1 - ((x - center)/radius)^2)_+
  static InitialDensity parabolic_bump(double amplitude, double center, double radius);
  static InitialDensity piecewise_constant(std::vector<double> breakpoints,
                                           std::vector<double> values);

  /// Overrides the mass that was derived from the parameters; validation then
  /// checks it against quadrature.
  InitialDensity with_declared_mass(double m) const;

  Kind kind() const { return kind_; }
  double operator()(double x) const;
  /// Integral of the density from x_min() to x.
  double cumulative(double x) const;
  /// Mass computed by Gauss-Legendre quadrature, independent of cumulative().
  double quadrature_mass() const;

  double mass() const { return mass_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double sup_norm() const { return sup_norm_; }
  /// Lower bound of the density on its support, 0 if not bounded away from 0.
  double lower_bound() const { return lower_bound_; }
  /// Interior intervals of the support hull on which the density vanishes.
  std::vector<std::pair<double, double>> support_gaps() const;

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

 private:
  InitialDensity() = default;
  void finalize();

  Kind kind_ = Kind::Uniform;
  std::vector<double> breaks_;
  std::vector<double> values_;
  double amplitude_ = 0.0;
  double center_ = 0.0;
  double radius_ = 1.0;
  double mass_ = 0.0;
  double x_min_ = 0.0;
  double x_max_ = 0.0;
  double sup_norm_ = 0.0;
  double lower_bound_ = 0.0;
};

struct ProblemSpec {
  Mobility mobility = Mobility::power_cap(1.0);
  ExternalPotential V = ExternalPotential::zero();
  Interaction W = Interaction::zero();
  InitialDensity initial = InitialDensity::uniform(0.0, 1.0, 1.0);

  /// max{sup initial density, mobility cap}
  double M() const;
  double mass() const { return initial.mass(); }
  /// Constant c_f bounding first and second differences of the particle
  /// forces by the cell widths.
  double force_lipschitz() const;
};

enum class ViolationKind { NonMonotoneMobility, MassMismatch, UnboundedSupport, NegativeDensity };

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::string to_string(ViolationKind kind);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Lists every violated modelling assumption; empty when the spec is valid.
std::vector<Violation> check_assumptions(const ProblemSpec& spec);

/// Returns the spec unchanged or throws ValidationError.
const ProblemSpec& validate(const ProblemSpec& spec);

inline double theta(const ProblemSpec& spec, double s) { return spec.mobility.theta(s); }

}  // namespace dpa
