// ballgeo - twisted-sphere construction: chart maps, ball-map differential,
// pole-pair closed forms, and the distortion-ratio probe
#include "ballgeo/counterexample.hpp"

#include <cmath>
#include <limits>

#include "ballgeo/metric.hpp"
#include "ballgeo/santalo.hpp"

namespace ballgeo {

namespace {

// Below this height above the equator the twist envelope underflows to exactly
// zero (s > 1 implies s^2 |xi|^2 / 2 > 745 for |xi| > 1e7), so the sphere map
// is the identity and its differential is I.
constexpr double kEquatorBand = 1e-7;

// d/dt [rho(t) t] = rho(t) (1 - s^2 t^2); this factor drives every Jacobian.
double twist_slope(const CtexParams& p, double t) {
  return ctex_rho(p, t) * (1.0 - p.s * p.s * t * t);
}

// Stable symmetric square roots of the rank-one updates used by the ratio
// probe: sqrt(I - u u^T / (1 + |u|^2)) and sqrt(I + u u^T).
Eigen::Matrix2d sqrt_shrink(const Eigen::Vector2d& u) {
  double n2 = u.squaredNorm();
  double root = std::sqrt(1.0 + n2);
  double beta = -1.0 / (root * (1.0 + root));
  return Eigen::Matrix2d::Identity() + beta * u * u.transpose();
}

Eigen::Matrix2d sqrt_grow(const Eigen::Vector2d& u) {
  double n2 = u.squaredNorm();
  double beta = 1.0 / (1.0 + std::sqrt(1.0 + n2));
  return Eigen::Matrix2d::Identity() + beta * u * u.transpose();
}

double largest_singular_value(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d gram = m.transpose() * m;
  double tr = gram.trace();
  double det = gram.determinant();
  double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return std::sqrt(0.5 * (tr + disc));
}

// Singular values of B(xi) for one chart sign; B compares the round-sphere
// frame with the image chart frame, so its sup bounds the metric distortion.
double ratio_at(const CtexParams& p, const Eigen::Vector2d& xi, int sign,
                double* det_out) {
  Eigen::Matrix2d dphi = ctex_dphi_plane(p, xi, sign);
  if (det_out != nullptr) *det_out = dphi.determinant();
  Eigen::Vector2d image = ctex_phi_plane(p, xi, sign);
  Eigen::Matrix2d b = sqrt_shrink(xi) * dphi.inverse() * sqrt_grow(image);
  return largest_singular_value(b);
}

}  // namespace

//---------------------------------------------------------------------------
// parameters and scalar building blocks
//---------------------------------------------------------------------------

CtexParams::CtexParams(double s_in, double r_in) : s(s_in), r(r_in) {
  if (!std::isfinite(s) || s <= 1.0) {
    throw ValidationError("twist parameter s must be finite and > 1");
  }
  if (r <= 0.0) {
    r = 10.0 * std::sqrt(s * s + 4.0);
  }
  if (!std::isfinite(r)) {
    throw ValidationError("scale parameter r must be finite");
  }
}

double ctex_rho(const CtexParams& p, double t) {
  return std::exp(-0.5 * p.s * p.s * t * t);
}

//---------------------------------------------------------------------------
// chart maps and their Jacobians
//---------------------------------------------------------------------------

Eigen::Vector2d ctex_phi_plane(const CtexParams& p, const Eigen::Vector2d& xi,
                               int sign) {
  double sg = sign >= 0 ? 1.0 : -1.0;
  return {xi[0] - sg * ctex_rho(p, xi[1]) * xi[1] / p.s,
          xi[1] + sg * p.s * ctex_rho(p, xi[0]) * xi[0]};
}

Eigen::Matrix2d ctex_dphi_plane(const CtexParams& p, const Eigen::Vector2d& xi,
                                int sign) {
  double sg = sign >= 0 ? 1.0 : -1.0;
  Eigen::Matrix2d d;
  d << 1.0, -sg * twist_slope(p, xi[1]) / p.s,
      sg * p.s * twist_slope(p, xi[0]), 1.0;
  return d;
}

Eigen::Vector3d ctex_psi(const Eigen::Vector2d& xi, int sign) {
  double sg = sign >= 0 ? 1.0 : -1.0;
  double w = 1.0 / std::sqrt(1.0 + xi.squaredNorm());
  return {xi[0] * w, xi[1] * w, sg * w};
}

//---------------------------------------------------------------------------
// sphere map, ball map, and the ball-map differential
//---------------------------------------------------------------------------

Eigen::Vector3d ctex_sphere_map(const CtexParams& p,
                                const Eigen::Vector3d& unit) {
  if (std::abs(unit[2]) <= kEquatorBand) {
    return unit;  // twist envelope vanishes to machine zero here
  }
  int sign = unit[2] > 0.0 ? 1 : -1;
  double inv = 1.0 / std::abs(unit[2]);
  Eigen::Vector2d xi(unit[0] * inv, unit[1] * inv);
  return ctex_psi(ctex_phi_plane(p, xi, sign), sign);
}

Vec ctex_phi_ball(const CtexParams& p, const Vec& x) {
  if (x.size() != 3) {
    throw ValidationError("twisted-sphere maps are defined in dimension 3");
  }
  double nx = x.norm();
  if (nx == 0.0) {
    return Vec::Zero(3);
  }
  Eigen::Vector3d unit(x[0] / nx, x[1] / nx, x[2] / nx);
  Eigen::Vector3d image = ctex_sphere_map(p, unit);
  Vec out(3);
  out << nx * image[0], nx * image[1], nx * image[2];
  return out;
}

Mat ctex_dphi_ball(const CtexParams& p, const Vec& x) {
  if (x.size() != 3) {
    throw ValidationError("twisted-sphere maps are defined in dimension 3");
  }
  double nx = x.norm();
  if (nx < 1e-300) {
    throw NumericalError("ball-map differential undefined at the origin");
  }
  Eigen::Vector3d unit(x[0] / nx, x[1] / nx, x[2] / nx);
  if (std::abs(unit[2]) <= kEquatorBand) {
    return Mat::Identity(3, 3);
  }
  int sign = unit[2] > 0.0 ? 1 : -1;
  double sg = sign > 0 ? 1.0 : -1.0;
  double inv = 1.0 / std::abs(unit[2]);
  Eigen::Vector2d xi(unit[0] * inv, unit[1] * inv);

  // chain rule through chart -> plane twist -> inverse chart
  Eigen::Matrix<double, 2, 3> dxi;
  dxi << inv, 0.0, -xi[0] * sg * inv,
      0.0, inv, -xi[1] * sg * inv;
  Eigen::Matrix2d dplane = ctex_dphi_plane(p, xi, sign);
  Eigen::Vector2d zeta = ctex_phi_plane(p, xi, sign);
  double w = 1.0 / std::sqrt(1.0 + zeta.squaredNorm());
  Eigen::Vector3d psi(zeta[0] * w, zeta[1] * w, sg * w);
  Eigen::Matrix<double, 3, 2> dpsi;
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector3d col = -w * w * zeta[j] * psi;
    col[j] += w;
    dpsi.col(j) = col;
  }
  Eigen::Matrix3d dsphere = dpsi * dplane * dxi;

  // 1-homogeneous extension: D(|x| Psi(x/|x|)) = Psi p^T + DPsi (I - p p^T)
  Eigen::Matrix3d tangent =
      Eigen::Matrix3d::Identity() - unit * unit.transpose();
  Eigen::Matrix3d d = psi * unit.transpose() + dsphere * tangent;
  Mat out(3, 3);
  out = d;
  return out;
}

double ctex_distance(const CtexParams& p, const Vec& x, const Vec& y) {
  return p.r * (ctex_phi_ball(p, x) - ctex_phi_ball(p, y)).norm();
}

//---------------------------------------------------------------------------
// pole-pair closed forms
//---------------------------------------------------------------------------

Eigen::Matrix2d ctex_matrix_A(const CtexParams& p) {
  double s = p.s;
  Eigen::Matrix2d a;
  a << 1.0 - s * s, s + 1.0 / s,
      -s - 1.0 / s, 1.0 - 1.0 / (s * s);
  return a;
}

double ctex_etahat_at_poles(const CtexParams& p) {
  Eigen::Matrix2d a = ctex_matrix_A(p);
  // det A = det Dphi_+(0) * det Dphi_-(0) = 2 * 2 identically in s; using the
  // exact value avoids the large cancellation in the numeric 2x2 determinant
  const double det_a = 4.0;
  return (2.0 + p.r * a.trace() + 2.0 * p.r * p.r * det_a) / 8.0;
}

double ctex_sign_threshold(double s_lo, double s_hi) {
  auto value = [](double s) { return ctex_etahat_at_poles(CtexParams(s)); };
  double f_lo = value(s_lo);
  double f_hi = value(s_hi);
  if (f_lo * f_hi > 0.0) {
    throw ValidationError("sign threshold bracket does not straddle a root");
  }
  for (int iter = 0; iter < 200 && s_hi - s_lo > 1e-10; ++iter) {
    double mid = 0.5 * (s_lo + s_hi);
    double f_mid = value(mid);
    if (f_mid == 0.0) return mid;
    if (f_lo * f_mid < 0.0) {
      s_hi = mid;
      f_hi = f_mid;
    } else {
      s_lo = mid;
      f_lo = f_mid;
    }
  }
  (void)f_hi;
  return 0.5 * (s_lo + s_hi);
}

//---------------------------------------------------------------------------
// distortion-ratio probe
//---------------------------------------------------------------------------

RatioBoundReport ctex_ratio_bound_probe(const CtexParams& p, double extent,
                                        int resolution) {
  if (extent <= 0.0 || resolution < 2) {
    throw ValidationError("ratio probe needs positive extent and >= 2 points");
  }
  RatioBoundReport report;
  report.bound_r = p.r;
  report.sup_singular_value = 0.0;
  report.min_det_dphi = std::numeric_limits<double>::infinity();
  report.far_field_max = 0.0;
  report.grid_points = 0;

  double step = 2.0 * extent / (resolution - 1);
  for (int sign : {1, -1}) {
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        Eigen::Vector2d xi(-extent + step * i, -extent + step * j);
        double det = 0.0;
        double sigma = ratio_at(p, xi, sign, &det);
        report.sup_singular_value = std::max(report.sup_singular_value, sigma);
        report.min_det_dphi = std::min(report.min_det_dphi, det);
        ++report.grid_points;
      }
    }
  }

  // beyond the grid the twist has died off and the ratio settles near 1
  for (double radius : {1.5 * extent, 2.5 * extent, 10.0 * extent}) {
    for (int k = 0; k < 64; ++k) {
      double angle = 2.0 * kPi * k / 64.0;
      Eigen::Vector2d xi(radius * std::cos(angle), radius * std::sin(angle));
      for (int sign : {1, -1}) {
        report.far_field_max =
            std::max(report.far_field_max, ratio_at(p, xi, sign, nullptr));
      }
    }
  }

  report.sup_below_bound = report.sup_singular_value < report.bound_r;
  report.det_above_half = report.min_det_dphi > 0.5;
  return report;
}

double ctex_etahat_numeric(const CtexParams& p, double offset_angle) {
  if (!(offset_angle >= 1e-5 && offset_angle <= 0.1)) {
    throw ValidationError(
        "eta-hat numeric check: offset angle must lie in [1e-5, 0.1]");
  }
  // The adapted frame degenerates at exact antipodes, so evaluate at a pair
  // tilted off the poles by a common small angle. The tilt bias is even in
  // the angle (the construction is centrally symmetric), hence quadratically
  // small. The finite-difference Hessian route is required: the near-diameter
  // geodesic defeats variational transport.
  const auto euclid = make_euclidean(3);
  const auto pulled = make_pullback_flat(p.s, p.r);
  Vec x(3), y(3);
  x << std::sin(offset_angle), 0.0, std::cos(offset_angle);
  y << std::sin(offset_angle), 0.0, -std::cos(offset_angle);
  return etahat_eval(*euclid, *pulled, x, y, HessianMethod::finite_difference)
      .etahat_coeff;
}

}  // namespace ballgeo
