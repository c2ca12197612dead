// ballgeo - two-point geodesic problems: boundary distances, first variation,
// and the mixed second derivative of the distance in an adapted sphere frame
#pragma once

#include <vector>

#include "ballgeo/common.hpp"
#include "ballgeo/geodesic.hpp"
#include "ballgeo/metric.hpp"

namespace ballgeo {

// Newton shooting solution of exp_x(ell * u) = y.
struct BvpSolution {
  Vec u;       // initial unit direction at x
  double ell;  // geodesic length
  Vec w;       // ell * u
  Mat dexp;    // n x n end map d(exp_x)/dw at the solution
  int iterations = 0;
};

// Solves the two-point problem for x != y in the closed ball, initialized
// from the straight chord and damped by step halving. Errors if 50 Newton
// iterations do not reach residual 1e-9.
BvpSolution solve_bvp(const MetricModel& metric, const Vec& x, const Vec& y);

// Same solver started from a caller-provided initial vector (warm restart
// for finite-difference stencils around an already solved pair).
BvpSolution solve_bvp_with_guess(const MetricModel& metric, const Vec& x,
                                 const Vec& y, const Vec& w0);

// Covector of the first variation of distance in its first argument:
// d1(v) = -g_u(u, v) for the unit initial direction u.
Vec first_variation(const MetricModel& metric, const Vec& x, const Vec& u);

// Shared orthonormal frame for a non-antipodal sphere pair: e_1..e_{n-2}
// spans {x, y}-perp (Gram-Schmidt over coordinate axes, lowest index first),
// e_xy is the tangent at x toward y, e_yx the tangent at y toward x. For
// n >= 3 the first shared vector is flipped if needed so that the basis
// (x, e_1, .., e_{n-2}, e_xy) is positively oriented.
struct AdaptedFrame {
  std::vector<Vec> shared;
  Vec e_xy;
  Vec e_yx;
};

AdaptedFrame adapted_frame(const Vec& x, const Vec& y);

enum class HessianMethod { jacobi, finite_difference };

// Distance jet of a boundary pair: length, direction, first variation, and
// the mixed Hessian in the adapted frame (x-side basis e_1..e_{n-2}, e_xy;
// y-side basis e_1..e_{n-2}, -e_yx), with its block decomposition
// H = [[Q, c], [r, s]].
struct DistanceJet {
  Vec x, y;
  double ell = 0.0;
  Vec u;
  Vec d1;
  AdaptedFrame frame;
  Mat H;  // (n-1) x (n-1)
  Mat Q;  // (n-2) x (n-2)
  Vec c;  // (n-2)
  Vec r;  // (n-2)
  double s = 0.0;
};

// Computes the jet for distinct non-antipodal unit-sphere points with
// |x - y| >= 1e-3 (the diagonal band is handled by quadrature refinement,
// not here). Method jacobi inverts the variational end map; method
// finite_difference differentiates the first variation through on-sphere
// retractions y +- h*w with h = 1e-4.
DistanceJet mixed_hessian(const MetricModel& metric, const Vec& x, const Vec& y,
                          HessianMethod method);

// Samples near-diagonal boundary pairs and reports the normalized defect of
// the flat-space Hessian identity; bounded output is the assertion.
struct HessianErrorReport {
  std::vector<double> separations;
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

HessianErrorReport hessian_error_probe(const MetricModel& metric, int samples,
                                       std::uint64_t seed = 5150);

// Near-diagonal ratios controlling the projected tensor: the chord ratio
// g_u(P_u e_xy, e_xy)/|x-y|^2 (bounded above) and the tangential minimum
// g_u(P_u v, v)/|v|^2 over v in {x,y}-perp (bounded below; NaN when n = 2
// because the shared tangent space is trivial).
struct ProjectionBoundsReport {
  double max_chord_ratio = 0.0;
  double min_chord_ratio = 0.0;
  double min_tangential = 0.0;
  int samples = 0;
};

ProjectionBoundsReport projection_bounds_probe(const MetricModel& metric,
                                               int samples,
                                               std::uint64_t seed = 4242);

}  // namespace ballgeo
