#pragma once

#include <vector>

#include "mpmd/delay.hpp"
#include "mpmd/metric.hpp"

namespace mpmd {

// Sum of rates over the ball around x: d(x,y) <= u when closed, d(x,y) < u
// otherwise. The open ball at u = 0 is empty.
double ball_rate(const MetricSpace& m, int x, double u, bool closed);

// Smallest u >= 0 with 1/lambda(closed ball(x,u)) <= u. The left-hand side is
// a non-increasing step function of u, constant between consecutive distinct
// distances from x, so the minimum is found exactly by scanning segments:
// either the fixed point 1/lambda_k lies inside a segment or the step drops
// below the diagonal at a breakpoint.
double compute_radius_linear(const MetricSpace& m, int x);

// E[f(W)] for W ~ Exp(mu). Linear: 1/mu. Power(alpha): Gamma(alpha+1)/mu^alpha.
// Table: quadrature (piecewise segments plus the exact linear tail).
double expected_delay_exponential(const DelaySpec& spec, double mu);

// Same expectation evaluated purely by adaptive quadrature; used to
// cross-check the closed forms.
double expected_delay_exponential_quadrature(const DelaySpec& spec, double mu);

// E[min(f(W), cap)] for W ~ Exp(mu); quadrature below the crossing point plus
// the exact capped tail.
double expected_capped_delay_exponential(const DelaySpec& spec, double mu, double cap);

// Smallest u with u >= E[f(W(x,u))] where W(x,u) ~ Exp(lambda(closed
// ball(x,u))). Same segment scan as the linear case; coincides with it for
// the linear spec.
double compute_radius_general(const MetricSpace& m, int x, const DelaySpec& spec);

// E[min{Y, a}] for Y ~ Exp(mu): (1 - e^{-mu a}) / mu.
double expected_min_exponential(double mu, double a);

// K_f = max over mu > 0 of E[f(X)] / E[min(f(X'), E[f(X)])] with X ~ Exp(mu)
// and X' ~ Exp(2 mu). Maximized over a 1000-point log grid on [1e-6, 1e6]
// refined by golden section. Linear: 2 / (1 - e^{-2}), flat in mu.
double compute_Kf(const DelaySpec& spec);

// The K_f objective at a single mu (exposed for the flatness check).
double Kf_objective(const DelaySpec& spec, double mu);

struct RadiusTable {
  std::vector<double> rho;
  DelaySpec spec;
};

RadiusTable compute_radius_table(const MetricSpace& m, const DelaySpec& spec);

}  // namespace mpmd
