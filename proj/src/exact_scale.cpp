#include "hypflow/exact_scale.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "hypflow/field.hpp"  // DegenerateScale

namespace hypflow {

std::string to_string(ScaleVariant v) {
  return v == ScaleVariant::PaperClosedForm ? "paper" : "substitution";
}

std::string ScaleFate::describe() const {
  switch (kind) {
    case ShrinksAtFiniteTime:
      return "shrinks to a point at T = " + std::to_string(time);
    case ShrinksAsTToInfinity:
      return "smooth for all time, shrinks to a point as t -> infinity";
    default:
      return "smooth and positive definite for all time";
  }
}

void rho_closed_form(const ScaleProblem& p, double t, double& rho, double& rho_prime) {
  const double d = p.d, lam = p.lambda, mu = p.mu;
  const double em = std::exp(-d * t);
  rho = 1.0 - (2.0 * lam / d) * t - (mu / d + 2.0 * lam / (d * d)) * (em - 1.0);
  rho_prime = -2.0 * lam / d + (mu + 2.0 * lam / d) * em;
}

double substitution_ode_rhs(const ScaleProblem& p, double rho, double rho_prime) {
  if (!(rho > 0.0)) throw DegenerateScale(rho);
  return -2.0 * p.lambda - p.d * rho_prime + (2.0 - p.dim) * rho_prime * rho_prime / rho;
}

namespace {

struct State2 {
  double rho, v;
};

// One RK4 step of (rho, rho')' = (rho', f). Throws DegenerateScale if a stage
// leaves the rho > 0 domain (substitution variant only).
State2 rk4_step(const ScaleProblem& p, ScaleVariant variant, const State2& y, double dt) {
  auto f = [&](const State2& s) -> double {
    if (variant == ScaleVariant::PaperClosedForm) return -p.d * s.v - 2.0 * p.lambda;
    return substitution_ode_rhs(p, s.rho, s.v);
  };
  State2 k1{y.v, f(y)};
  State2 y2{y.rho + 0.5 * dt * k1.rho, y.v + 0.5 * dt * k1.v};
  State2 k2{y2.v, f(y2)};
  State2 y3{y.rho + 0.5 * dt * k2.rho, y.v + 0.5 * dt * k2.v};
  State2 k3{y3.v, f(y3)};
  State2 y4{y.rho + dt * k3.rho, y.v + dt * k3.v};
  State2 k4{y4.v, f(y4)};
  return {y.rho + dt / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho),
          y.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

// Largest tau in (0, dt] such that a single step of size tau stays above the
// shrink threshold; returns the crossing time offset by bisection.
double refine_crossing(const ScaleProblem& p, ScaleVariant variant, const State2& y, double dt) {
  auto probe = [&](double tau) -> double {
    try {
      return rk4_step(p, variant, y, tau).rho - kShrinkEps;
    } catch (const DegenerateScale&) {
      return -1.0;
    }
  };
  double lo = 0.0, hi = dt;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (probe(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * dt) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ScaleSolution integrate_scale(const ScaleProblem& p, ScaleVariant variant, double dt,
                              double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_scale: dt must be positive");
  ScaleSolution sol;
  sol.variant = variant;
  State2 y{1.0, p.mu};
  double t = 0.0;
  sol.samples.push_back({t, y.rho, y.v});
  const long long nsteps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
  for (long long s = 0; s < nsteps; ++s) {
    double step_dt = std::min(dt, t_end - t);
    State2 ynext;
    bool blew_up = false;
    try {
      ynext = rk4_step(p, variant, y, step_dt);
    } catch (const DegenerateScale&) {
      blew_up = true;
    }
    if (blew_up || !(ynext.rho > kShrinkEps) || !std::isfinite(ynext.rho)) {
      double tau = refine_crossing(p, variant, y, step_dt);
      sol.shrink_time = t + tau;
      State2 yev = rk4_step(p, variant, y, tau);
      sol.samples.push_back({t + tau, yev.rho, yev.v});
      return sol;
    }
    y = ynext;
    t += step_dt;
    sol.samples.push_back({t, y.rho, y.v});
  }
  return sol;
}

namespace {

// Bisection root of the closed-form rho on [lo, hi], assuming a sign change.
double bisect_closed_form(const ScaleProblem& p, double lo, double hi) {
  auto f = [&](double t) {
    double r, rp;
    rho_closed_form(p, t, r, rp);
    return r;
  };
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

ScaleFate classify_closed_form(const ScaleProblem& p) {
  const double d = p.d, lam = p.lambda, mu = p.mu;
  ScaleFate fate;
  if (lam > 0.0) {
    // rho -> -infinity linearly: bracket the first root and bisect.
    double hi = 1.0;
    double r, rp;
    rho_closed_form(p, hi, r, rp);
    while (r > 0.0) {
      hi *= 2.0;
      rho_closed_form(p, hi, r, rp);
    }
    fate.kind = ScaleFate::ShrinksAtFiniteTime;
    fate.time = bisect_closed_form(p, 0.0, hi);
    return fate;
  }
  if (lam == 0.0) {
    double limit = 1.0 + mu / d;
    if (std::abs(limit) <= 1e-14 * std::max(1.0, std::abs(mu / d))) {
      fate.kind = ScaleFate::ShrinksAsTToInfinity;
      return fate;
    }
    if (limit < 0.0) {
      double hi = 1.0 / d;
      double r, rp;
      rho_closed_form(p, hi, r, rp);
      while (r > 0.0) {
        hi *= 2.0;
        rho_closed_form(p, hi, r, rp);
      }
      fate.kind = ScaleFate::ShrinksAtFiniteTime;
      fate.time = bisect_closed_form(p, 0.0, hi);
      return fate;
    }
    fate.kind = ScaleFate::SmoothForever;  // rho monotone toward limit > 0
    return fate;
  }
  // lam < 0: rho' = alpha + (mu - alpha) e^{-dt} with alpha = -2 lam / d > 0.
  if (mu >= 0.0) {
    fate.kind = ScaleFate::SmoothForever;
    return fate;
  }
  const double alpha = -2.0 * lam / d;
  const double tstar = std::log((alpha - mu) / alpha) / d;  // interior minimum
  double rmin, rp;
  rho_closed_form(p, tstar, rmin, rp);
  if (rmin < -kShrinkEps) {
    fate.kind = ScaleFate::ShrinksAtFiniteTime;
    fate.time = bisect_closed_form(p, 0.0, tstar);
  } else if (rmin <= kShrinkEps) {
    fate.kind = ScaleFate::ShrinksAtFiniteTime;  // grazing minimum
    fate.time = tstar;
  } else {
    fate.kind = ScaleFate::SmoothForever;
  }
  return fate;
}

}  // namespace

ScaleFate classify_fate(const ScaleProblem& p, ScaleVariant variant) {
  // For n = 2 the substitution ODE coincides with the exactly solvable one.
  if (variant == ScaleVariant::PaperClosedForm || p.dim == 2) return classify_closed_form(p);

  ScaleFate fate;
  // lambda = 0 marginal ray: rho' = -(d/(n-1)) rho exactly, an asymptotic
  // shrink that a threshold-crossing search would misreport as finite-time.
  if (p.lambda == 0.0) {
    double marginal = p.mu * (p.dim - 1) / p.d + 1.0;
    if (std::abs(marginal) <= 1e-12) {
      fate.kind = ScaleFate::ShrinksAsTToInfinity;
      return fate;
    }
  }
  const double horizon = 60.0 / p.d + 10.0;
  ScaleSolution sol = integrate_scale(p, variant, 1e-3 / std::max(1.0, p.d), horizon);
  if (sol.shrink_time) {
    fate.kind = ScaleFate::ShrinksAtFiniteTime;
    fate.time = *sol.shrink_time;
  } else {
    fate.kind = ScaleFate::SmoothForever;
  }
  return fate;
}

}  // namespace hypflow
