// ballgeo - the twisted-sphere construction: hemisphere charts, bump-twisted
// plane maps, the induced ball map and its differential, and the closed-form
// evaluation of the boundary-pair form at the pole pair
#pragma once

#include "ballgeo/common.hpp"

namespace ballgeo {

// Parameters of the construction: twist strength s > 1 and the metric scale r
// (defaulted to 10*sqrt(s^2+4), the scale at which the distance bound holds).
struct CtexParams {
  double s;
  double r;

  // r_in <= 0 selects the default scale.
  explicit CtexParams(double s_in, double r_in = 0.0);
};

// rho(t) = exp(-s^2 t^2 / 2), the twist envelope
double ctex_rho(const CtexParams& p, double t);

// phi_{+-} on the chart plane: (xi1 -+ rho(xi2) xi2 / s, xi2 +- s rho(xi1) xi1)
Eigen::Vector2d ctex_phi_plane(const CtexParams& p, const Eigen::Vector2d& xi, int sign);

// analytic 2x2 Jacobian of phi_{+-}
Eigen::Matrix2d ctex_dphi_plane(const CtexParams& p, const Eigen::Vector2d& xi, int sign);

// hemisphere chart: psi_{+-}(xi) = (xi1, xi2, +-1)/sqrt(1+|xi|^2)
Eigen::Vector3d ctex_psi(const Eigen::Vector2d& xi, int sign);

// sphere twist map Psi: S^2 -> S^2 (identity on the equator), and the ball map
// phi(x) = |x| * Psi(x/|x|) with phi(0) = 0
Eigen::Vector3d ctex_sphere_map(const CtexParams& p, const Eigen::Vector3d& unit);
Vec ctex_phi_ball(const CtexParams& p, const Vec& x);

// analytic 3x3 differential of the ball map; depends only on x/|x| (the map is
// 1-homogeneous); undefined at the origin (NumericalError)
Mat ctex_dphi_ball(const CtexParams& p, const Vec& x);

// boundary distance of the scaled pullback metric: r * |phi(x) - phi(y)|
double ctex_distance(const CtexParams& p, const Vec& x, const Vec& y);

// A = Dphi_+(0)^T Dphi_-(0) = [[1-s^2, s+1/s], [-s-1/s, 1-1/s^2]]
Eigen::Matrix2d ctex_matrix_A(const CtexParams& p);

// closed form of the boundary-pair form at the pole pair:
// (1/8) (2 + r tr A + 2 r^2 det A), with det A = 4
double ctex_etahat_at_poles(const CtexParams& p);

// sign-change threshold of ctex_etahat_at_poles in s (default r), by bisection
double ctex_sign_threshold(double s_lo, double s_hi);

// grid probe of the chart-frame distortion ratio
// B(xi) = sqrt(I - xi xi^T/(1+|xi|^2)) Dphi^{-1} sqrt(I + phi phi^T)
struct RatioBoundReport {
  double sup_singular_value;  // sup over both charts and all grid points
  double bound_r;             // the claimed bound (= params r)
  double min_det_dphi;        // min over the grid of det Dphi_{+-}
  double far_field_max;       // max singular value on far rings (decay check)
  int grid_points;
  bool sup_below_bound;       // sup_singular_value < bound_r
  bool det_above_half;        // min_det_dphi > 1/2
};
RatioBoundReport ctex_ratio_bound_probe(const CtexParams& p, double extent = 20.0,
                                        int resolution = 401);

// numeric cross-evaluation of the pole-pair form via the quadrature machinery
// (euclidean vs scaled pullback) at a pair tilted `offset_angle` away from the
// exact poles; implemented after the quadrature layer, declared here
double ctex_etahat_numeric(const CtexParams& p, double offset_angle = 1e-4);

}  // namespace ballgeo
