// ballgeo - geodesic integration: adaptive RK45 flow of the spray ODE,
// boundary-exit location, the exponential map, and variational transport
#pragma once

#include <vector>

#include "ballgeo/common.hpp"
#include "ballgeo/metric.hpp"

namespace ballgeo {

struct GeodesicState {
  double t;
  Vec x;
  Vec v;
};

// A unit-speed geodesic recorded at accepted integrator steps. If the path
// reached the unit sphere, `exited` is set, `t_plus` is the crossing time
// (located by bisection on the dense output), and `exit_point` the crossing
// point; the final recorded state sits at the crossing.
struct GeodesicPath {
  std::vector<GeodesicState> states;
  bool exited = false;
  double t_plus = 0.0;
  Vec exit_point;
  double energy_drift = 0.0;  // sup over recorded states of |F(x,v) - F(x0,v0)|
};

// Integrates the spray ODE from (x, v) until t_end or boundary exit.
// Requires x in the closed ball and F(x, v) = 1 within 1e-9.
GeodesicPath shoot(const MetricModel& metric, const Vec& x, const Vec& v,
                   double t_end);

// Endpoint state of the degree-2-homogeneous flow at parameter time 1 started
// from (x, w) — i.e. exp_x(w) together with the transported velocity — and
// optionally the 2n x 2n variational matrix mapping (dx0, dw) to the endpoint
// (dx, dv). The path may leave the closed ball up to |x| = ball_limit, which
// tolerates overshooting trial shots in two-point solves. tol_scale < 1
// tightens the integrator error tolerances by that factor; two-point solves
// use it when the endpoint accuracy floor exceeds their residual contract.
struct FlowResult {
  Vec x;
  Vec v;
  Mat variational;  // empty unless requested
  int steps = 0;
};

FlowResult flow_unit_time(const MetricModel& metric, const Vec& x, const Vec& w,
                          bool with_variational, double ball_limit = 1.15,
                          double tol_scale = 1.0);

// exp_x(w): geodesic endpoint after parameter time F(x, w) in direction w.
// exp_x(0) = x; errors if the path strays far outside the closed ball.
Vec exp_map(const MetricModel& metric, const Vec& x, const Vec& w);

// End matrices of the variational (Jacobi) equation integrated along the
// path's own step grid: (dx_end; dv_end) = (pos; vel) * (dx0; dv0), each
// block n x 2n.
struct JacobiTransport {
  Mat pos;
  Mat vel;
};

JacobiTransport jacobi_transport(const MetricModel& metric,
                                 const GeodesicPath& path);

// Integral of f(position, velocity) dt along a recorded path, by 4-point
// Gauss quadrature on the dense output of each replayed integrator step.
// For a unit-speed path this is the arclength integral of f.
double integrate_along_path(const MetricModel& metric, const GeodesicPath& path,
                            const std::function<double(const Vec&, const Vec&)>& f);

// Operator deviation of D exp_x from the identity at radii |w| = r, maximized
// over sampled directions, with the fitted slope of deviation vs radius.
struct LipschitzReport {
  std::vector<double> radii;
  std::vector<double> deviations;
  double fitted_slope = 0.0;
};

LipschitzReport dexp_lipschitz_probe(const MetricModel& metric, const Vec& x,
                                     const std::vector<double>& radii,
                                     int directions = 16,
                                     std::uint64_t seed = 2024);

}  // namespace ballgeo
