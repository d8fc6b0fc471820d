#ifndef HYPFLOW_EXACT_SCALE_HPP
#define HYPFLOW_EXACT_SCALE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypflow {

/// Einstein/homothetic initial data reduced to a scalar scale factor.
struct ScaleProblem {
  double lambda = 0.0;  // Einstein constant: Ric(g0) = lambda g0
  double mu = 0.0;      // initial rate: k0 = mu g0
  double d = 1.0;       // dissipation
  int dim = 3;

  ScaleProblem() = default;
  ScaleProblem(double lambda_, double mu_, double d_, int dim_)
      : lambda(lambda_), mu(mu_), d(d_), dim(dim_) {
    if (!(d > 0.0)) throw std::invalid_argument("ScaleProblem: d must be positive");
    if (dim < 2) throw std::invalid_argument("ScaleProblem: dim must be >= 2");
  }
};

/// PaperClosedForm integrates rho'' = -d rho' - 2 lambda (exactly solvable);
/// SubstitutionOde integrates rho'' = -2 lambda - d rho' + (2-n) rho'^2 / rho,
/// the equation actually produced by inserting the homothetic ansatz into the
/// flow. The two agree for n = 2 only.
enum class ScaleVariant { PaperClosedForm, SubstitutionOde };

std::string to_string(ScaleVariant v);

/// rho below this threshold counts as "shrunk to a point".
inline constexpr double kShrinkEps = 1e-8;

struct ScaleSample {
  double t, rho, rho_prime;
};

struct ScaleSolution {
  ScaleVariant variant = ScaleVariant::PaperClosedForm;
  std::vector<ScaleSample> samples;
  std::optional<double> shrink_time;  // set when rho crossed kShrinkEps
};

struct ScaleFate {
  enum Kind { ShrinksAtFiniteTime, SmoothForever, ShrinksAsTToInfinity };
  Kind kind = SmoothForever;
  double time = 0.0;  // shrink time when kind == ShrinksAtFiniteTime

  std::string describe() const;
};

/// The exactly solvable scale factor and its derivative.
void rho_closed_form(const ScaleProblem& p, double t, double& rho, double& rho_prime);

/// Right-hand side of the substitution ODE. Throws DegenerateScale for rho <= 0.
double substitution_ode_rhs(const ScaleProblem& p, double rho, double rho_prime);

/// Classical 4th-order one-step integration of the chosen variant with event
/// detection at rho = kShrinkEps.
ScaleSolution integrate_scale(const ScaleProblem& p, ScaleVariant variant, double dt,
                              double t_end);

/// Fate decided numerically from rho itself (roots, limits and interior
/// minima), not from the printed case inequalities.
ScaleFate classify_fate(const ScaleProblem& p, ScaleVariant variant);

}  // namespace hypflow

#endif
