#include <cmath>

#include "doctest.h"
#include "hypflow/exact_scale.hpp"
#include "hypflow/field.hpp"

using namespace hypflow;

TEST_CASE("closed-form scale factor") {
  SUBCASE("lambda = mu = 0 is stationary") {
    ScaleProblem p(0.0, 0.0, 1.0, 3);
    double r, rp;
    for (double t : {0.0, 0.5, 3.0, 10.0}) {
      rho_closed_form(p, t, r, rp);
      CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(rp == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    }
  }
  SUBCASE("(1, 0, 1) gives 3 - 2t - 2 e^{-t}") {
    ScaleProblem p(1.0, 0.0, 1.0, 3);
    double r, rp;
    rho_closed_form(p, 0.0, r, rp);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rp == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    for (double t : {0.3, 0.9, 1.1}) {
      rho_closed_form(p, t, r, rp);
      CHECK(r == doctest::Approx(3.0 - 2.0 * t - 2.0 * std::exp(-t)).epsilon(1e-14));
    }
  }
  SUBCASE("satisfies rho'' + d rho' + 2 lambda = 0") {
    ScaleProblem p(-0.7, 0.45, 1.3, 2);
    for (double t : {0.1, 1.0, 4.0}) {
      double r, rp;
      rho_closed_form(p, t, r, rp);
      // analytic second derivative of the closed form
      double rpp = -(p.d * p.mu + 2.0 * p.lambda) * std::exp(-p.d * t);
      CHECK(rpp + p.d * rp + 2.0 * p.lambda ==
            doctest::Approx(0.0).scale(std::abs(rpp) + 1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("substitution ODE right-hand side") {
  SUBCASE("coincides with the exactly solvable equation for n = 2") {
    ScaleProblem p2(0.4, -0.3, 0.9, 2);
    for (double rho : {0.2, 1.0, 2.5})
      for (double rp : {-1.0, 0.0, 0.7})
        CHECK(substitution_ode_rhs(p2, rho, rp) ==
              doctest::Approx(-p2.d * rp - 2.0 * p2.lambda).epsilon(1e-15));
  }
  SUBCASE("zero velocity gives -2 lambda for any n") {
    for (int n : {2, 3}) {
      ScaleProblem p(0.8, 0.0, 1.0, n);
      CHECK(substitution_ode_rhs(p, 0.6, 0.0) == doctest::Approx(-1.6).epsilon(1e-15));
    }
  }
  SUBCASE("matches the flow right-hand side on homothetic data") {
    ScaleProblem p(0.0, 0.1, 1.0, 3);
    CHECK(substitution_ode_rhs(p, 1.0, 0.1) == doctest::Approx(-0.11).epsilon(1e-14));
  }
  SUBCASE("nonpositive rho is a detected event") {
    ScaleProblem p(0.0, -1.0, 1.0, 3);
    CHECK_THROWS_AS(substitution_ode_rhs(p, 0.0, -1.0), DegenerateScale);
  }
}

TEST_CASE("numeric integration against the closed form") {
  SUBCASE("(1, 0, 1) within 1e-8 on [0, 1] at dt = 1e-3") {
    ScaleProblem p(1.0, 0.0, 1.0, 3);
    ScaleSolution sol = integrate_scale(p, ScaleVariant::PaperClosedForm, 1e-3, 1.0);
    REQUIRE(!sol.shrink_time.has_value());
    double worst = 0.0;
    for (const ScaleSample& s : sol.samples) {
      double r, rp;
      rho_closed_form(p, s.t, r, rp);
      worst = std::max(worst, std::abs(s.rho - r));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("(0, 1, 1) grows toward 2 with no shrink by t = 20") {
    ScaleProblem p(0.0, 1.0, 1.0, 3);
    ScaleSolution sol = integrate_scale(p, ScaleVariant::PaperClosedForm, 1e-3, 20.0);
    CHECK(!sol.shrink_time.has_value());
    double last = sol.samples.back().rho;
    CHECK(last > 1.0);
    CHECK(last < 2.0);
    CHECK(last == doctest::Approx(2.0 - std::exp(-20.0)).epsilon(1e-8));
  }
  SUBCASE("(0, 0) stays at 1 in both variants") {
    for (ScaleVariant v : {ScaleVariant::PaperClosedForm, ScaleVariant::SubstitutionOde}) {
      ScaleProblem p(0.0, 0.0, 1.0, 3);
      ScaleSolution sol = integrate_scale(p, v, 1e-2, 2.0);
      for (const ScaleSample& s : sol.samples) CHECK(s.rho == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("event detection at the threshold crossing") {
    ScaleProblem p(0.0, -2.0, 1.0, 3);
    ScaleSolution sol = integrate_scale(p, ScaleVariant::PaperClosedForm, 1e-3, 5.0);
    REQUIRE(sol.shrink_time.has_value());
    CHECK(*sol.shrink_time == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  }
  SUBCASE("the two variants agree for n = 2") {
    ScaleProblem p(-0.3, 0.5, 0.7, 2);
    ScaleSolution a = integrate_scale(p, ScaleVariant::PaperClosedForm, 1e-3, 2.0);
    ScaleSolution b = integrate_scale(p, ScaleVariant::SubstitutionOde, 1e-3, 2.0);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
      CHECK(a.samples[i].rho == doctest::Approx(b.samples[i].rho).epsilon(1e-10));
  }
}

TEST_CASE("fate classification") {
  SUBCASE("(1, 0, 1): finite-time shrink at the bisection root") {
    ScaleFate f = classify_fate(ScaleProblem(1.0, 0.0, 1.0, 3), ScaleVariant::PaperClosedForm);
    CHECK(f.kind == ScaleFate::ShrinksAtFiniteTime);
    // root of 3 - 2t - 2 e^{-t}, frozen from the high-precision oracle
    CHECK(f.time == doctest::Approx(1.198290437315664).epsilon(1e-9));
  }
  SUBCASE("(0, -2, 1): T = ln 2 to 1e-10") {
    ScaleFate f = classify_fate(ScaleProblem(0.0, -2.0, 1.0, 3), ScaleVariant::PaperClosedForm);
    CHECK(f.kind == ScaleFate::ShrinksAtFiniteTime);
    CHECK(std::abs(f.time - std::log(2.0)) < 1e-10);
  }
  SUBCASE("(0, -d): shrinks only as t goes to infinity") {
    ScaleFate f = classify_fate(ScaleProblem(0.0, -1.3, 1.3, 3), ScaleVariant::PaperClosedForm);
    CHECK(f.kind == ScaleFate::ShrinksAsTToInfinity);
  }
  SUBCASE("(-1, 1, 1): smooth forever") {
    ScaleFate f = classify_fate(ScaleProblem(-1.0, 1.0, 1.0, 3), ScaleVariant::PaperClosedForm);
    CHECK(f.kind == ScaleFate::SmoothForever);
  }
  SUBCASE("lambda > 0 always shrinks in finite time") {
    for (double lam : {0.2, 1.0, 4.0})
      for (double mu : {-1.0, 0.0, 2.0})
        for (double d : {0.5, 2.0}) {
          ScaleFate f = classify_fate(ScaleProblem(lam, mu, d, 3),
                                      ScaleVariant::PaperClosedForm);
          CHECK(f.kind == ScaleFate::ShrinksAtFiniteTime);
          CHECK(f.time > 0.0);
        }
  }
  SUBCASE("lambda < 0 with a grazing or crossing minimum") {
    // mu very negative: rho dips below zero before the late-time growth
    ScaleFate f = classify_fate(ScaleProblem(-0.2, -3.0, 1.0, 3),
                                ScaleVariant::PaperClosedForm);
    CHECK(f.kind == ScaleFate::ShrinksAtFiniteTime);
    ScaleFate s = classify_fate(ScaleProblem(-0.2, -0.1, 1.0, 3),
                                ScaleVariant::PaperClosedForm);
    CHECK(s.kind == ScaleFate::SmoothForever);
  }
  SUBCASE("substitution variant, n = 3") {
    // closed-form first integral gives T = ln(4/3) for (0, -2, 1)
    ScaleFate f = classify_fate(ScaleProblem(0.0, -2.0, 1.0, 3),
                                ScaleVariant::SubstitutionOde);
    CHECK(f.kind == ScaleFate::ShrinksAtFiniteTime);
    CHECK(f.time == doctest::Approx(std::log(4.0 / 3.0)).epsilon(2e-3));
    // marginal ray mu = -d/(n-1): exponential decay, asymptotic shrink
    ScaleFate m = classify_fate(ScaleProblem(0.0, -0.5, 1.0, 3),
                                ScaleVariant::SubstitutionOde);
    CHECK(m.kind == ScaleFate::ShrinksAsTToInfinity);
    // slower initial contraction turns around: smooth forever
    ScaleFate s = classify_fate(ScaleProblem(0.0, -0.2, 1.0, 3),
                                ScaleVariant::SubstitutionOde);
    CHECK(s.kind == ScaleFate::SmoothForever);
  }
  SUBCASE("substitution variant delegates to the closed form at n = 2") {
    ScaleFate f = classify_fate(ScaleProblem(0.0, -2.0, 1.0, 2), ScaleVariant::SubstitutionOde);
    CHECK(f.kind == ScaleFate::ShrinksAtFiniteTime);
    CHECK(std::abs(f.time - std::log(2.0)) < 1e-10);
  }
}
