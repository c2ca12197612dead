// ballgeo - Newton shooting for two-point geodesics, adapted sphere frames,
// and the mixed distance Hessian via variational end maps or differences
#include "ballgeo/distance.hpp"

#include <cmath>
#include <limits>

#include "ballgeo/counterexample.hpp"

namespace ballgeo {

namespace {

constexpr double kResidualTarget = 1e-11;  // aimed for, helps FD stencils
constexpr double kResidualAccept = 1e-9;   // contract tolerance
constexpr double kBandMin = 1e-3;          // mixed_hessian refusal band
constexpr double kRetractStep = 1e-4;      // on-sphere difference step
constexpr int kMaxNewton = 50;

BvpSolution newton_shoot(const MetricModel& metric, const Vec& x, const Vec& y,
                         const Vec& w0) {
  const int n = metric.dim();
  Vec w = w0;
  FlowResult flow;
  // If the initial shot leaves the allowed neighborhood of the ball, retry
  // with a shorter one; Newton then extends it back toward the target.
  bool started = false;
  for (int attempt = 0; attempt < 7 && !started; ++attempt) {
    try {
      flow = flow_unit_time(metric, x, w, true);
      started = true;
    } catch (const NumericalError&) {
      if (attempt == 6) throw;
      w *= 0.5;
    }
  }
  double resid = (flow.x - y).norm();
  int iter = 0;
  // Newton at the default integrator tolerance; if the residual stalls at the
  // flow's own accuracy floor (long near-center passages do this), tighten
  // the integrator and continue from the current best shot.
  for (double tol_scale : {1.0, 1e-2, 1e-4}) {
    if (tol_scale != 1.0) {
      try {
        flow = flow_unit_time(metric, x, w, true, 1.15, tol_scale);
      } catch (const NumericalError&) {
        break;  // tighter integration unattainable; keep the best result
      }
      resid = (flow.x - y).norm();
    }
    for (; iter < kMaxNewton && resid > kResidualTarget; ++iter) {
      const Eigen::MatrixXd m12 = flow.variational.topRightCorner(n, n);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m12);
      if (!lu.isInvertible()) {
        throw NumericalError("singular end map in two-point solve");
      }
      const Vec step = -Vec(lu.solve(Eigen::VectorXd(flow.x - y)));
      double scale = 1.0;
      bool improved = false;
      for (int halving = 0; halving < 9; ++halving) {
        const Vec w_try = w + scale * step;
        try {
          FlowResult flow_try =
              flow_unit_time(metric, x, w_try, true, 1.15, tol_scale);
          const double resid_try = (flow_try.x - y).norm();
          if (resid_try < resid) {
            w = w_try;
            flow = flow_try;
            resid = resid_try;
            improved = true;
            break;
          }
        } catch (const NumericalError&) {
          // overshooting trial left the neighborhood of the ball; damp harder
        }
        scale *= 0.5;
      }
      if (!improved) break;  // damping stalled; accept if already good enough
    }
    if (resid <= kResidualAccept) break;
  }
  if (resid > kResidualAccept) {
    throw NumericalError("two-point solve did not reach residual tolerance");
  }
  BvpSolution out;
  out.w = w;
  out.ell = metric.norm(x, w);
  if (out.ell <= 0.0) {
    throw NumericalError("two-point solve produced a degenerate length");
  }
  out.u = w / out.ell;
  out.dexp = flow.variational.topRightCorner(n, n);
  out.iterations = iter;
  return out;
}

// random unit tangent vector at a sphere point
Vec random_tangent(Rng& rng, const Vec& p) {
  const int n = p.size();
  Vec t;
  double norm = 0.0;
  do {
    t = rng.unit_vector(n);
    t -= t.dot(p) * p;
    norm = t.norm();
  } while (norm < 1e-6);
  return t / norm;
}

// boundary pair with Euclidean separation close to `chord`
void sample_pair(Rng& rng, int n, double chord, Vec& x, Vec& y) {
  x = rng.unit_vector(n);
  const Vec t = random_tangent(rng, x);
  const double delta = 2.0 * std::asin(0.5 * chord);
  y = std::cos(delta) * x + std::sin(delta) * t;
  y /= y.norm();
}

}  // namespace

//---------------------------------------------------------------------------
// two-point solves and first variation
//---------------------------------------------------------------------------

BvpSolution solve_bvp(const MetricModel& metric, const Vec& x, const Vec& y) {
  return solve_bvp_with_guess(metric, x, y, Vec(y - x));
}

BvpSolution solve_bvp_with_guess(const MetricModel& metric, const Vec& x,
                                 const Vec& y, const Vec& w0) {
  const int n = metric.dim();
  if (x.size() != n || y.size() != n) {
    throw ValidationError("two-point solve: dimension mismatch");
  }
  if (x.norm() > 1.0 + 1e-9 || y.norm() > 1.0 + 1e-9) {
    throw ValidationError("two-point solve: points must lie in the closed ball");
  }
  if ((x - y).norm() < 1e-12) {
    throw ValidationError("two-point solve requires distinct points");
  }
  return newton_shoot(metric, x, y, w0);
}

Vec first_variation(const MetricModel& metric, const Vec& x, const Vec& u) {
  const int n = metric.dim();
  Vec d1(n);
  Vec basis = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    basis[i] = 1.0;
    d1[i] = -metric.g_base_inner(x, u, basis);
    basis[i] = 0.0;
  }
  return d1;
}

//---------------------------------------------------------------------------
// adapted frame
//---------------------------------------------------------------------------

AdaptedFrame adapted_frame(const Vec& x, const Vec& y) {
  const int n = x.size();
  if (y.size() != n || n < 2) {
    throw ValidationError("adapted frame: dimension mismatch");
  }
  if (std::abs(x.norm() - 1.0) > 1e-9 || std::abs(y.norm() - 1.0) > 1e-9) {
    throw ValidationError("adapted frame: points must lie on the unit sphere");
  }
  if ((x - y).norm() < 1e-12) {
    throw ValidationError("adapted frame: points must be distinct");
  }
  if ((x + y).norm() < 1e-9) {
    throw ValidationError("adapted frame: antipodal pair has no unique frame");
  }
  const double c = x.dot(y);
  AdaptedFrame frame;
  frame.e_xy = y - c * x;
  frame.e_xy /= frame.e_xy.norm();
  frame.e_yx = x - c * y;
  frame.e_yx /= frame.e_yx.norm();

  // Gram-Schmidt over coordinate axes for {x, y}-perp, lowest index first.
  // At most two axes can (nearly) lie in span{x, y}, so n - 2 always succeed.
  for (int axis = 0; axis < n && static_cast<int>(frame.shared.size()) < n - 2;
       ++axis) {
    Vec cand = Vec::Zero(n);
    cand[axis] = 1.0;
    cand -= cand.dot(x) * x;
    const Vec exy = frame.e_xy;
    cand -= cand.dot(exy) * exy;  // removes the rest of span{x, y}
    for (const Vec& e : frame.shared) cand -= cand.dot(e) * e;
    const double norm = cand.norm();
    if (norm > 1e-6) {
      frame.shared.push_back(cand / norm);
    }
  }
  if (static_cast<int>(frame.shared.size()) != n - 2) {
    throw NumericalError("adapted frame: shared basis construction failed");
  }

  if (n >= 3) {
    Eigen::MatrixXd m(n, n);
    m.col(0) = Eigen::VectorXd(x);
    for (int i = 0; i < n - 2; ++i) m.col(1 + i) = Eigen::VectorXd(frame.shared[i]);
    m.col(n - 1) = Eigen::VectorXd(frame.e_xy);
    if (m.determinant() < 0.0) {
      frame.shared[0] = -frame.shared[0];
    }
  }
  return frame;
}

//---------------------------------------------------------------------------
// mixed Hessian
//---------------------------------------------------------------------------

DistanceJet mixed_hessian(const MetricModel& metric, const Vec& x, const Vec& y,
                          HessianMethod method) {
  const int n = metric.dim();
  if (x.size() != n || y.size() != n) {
    throw ValidationError("mixed Hessian: dimension mismatch");
  }
  if (std::abs(x.norm() - 1.0) > 1e-9 || std::abs(y.norm() - 1.0) > 1e-9) {
    throw ValidationError("mixed Hessian: points must lie on the unit sphere");
  }
  if ((x - y).norm() < kBandMin) {
    throw ValidationError("mixed Hessian: pair inside the diagonal band");
  }

  DistanceJet jet;
  jet.x = x;
  jet.y = y;
  jet.frame = adapted_frame(x, y);

  // frame bases as matrix columns: x-side (e_1.., e_xy), y-side (e_1.., -e_yx)
  Mat basis_x(n, n - 1), basis_y(n, n - 1);
  for (int i = 0; i < n - 2; ++i) {
    basis_x.col(i) = jet.frame.shared[i];
    basis_y.col(i) = jet.frame.shared[i];
  }
  basis_x.col(n - 2) = jet.frame.e_xy;
  basis_y.col(n - 2) = -jet.frame.e_yx;

  jet.H.resize(n - 1, n - 1);
  if (metric.family() == MetricFamily::pullback_flat &&
      method == HessianMethod::jacobi) {
    // Pullback geodesics are straight segments in the image, so the exact
    // route evaluates the jet in closed form: ell = r|phi(x) - phi(y)|,
    // H(i,j) = -r <Dphi bx_i, (I - ss^T) Dphi by_j> / |phi(x) - phi(y)|
    // with s the unit image chord. Finite differences below keep solving
    // the two-point problem, so the two methods stay independent checks.
    const auto params = metric.to_json()["params"];
    const CtexParams p(params.at("s").get<double>(),
                       params.at("r").get<double>());
    const Vec fx = ctex_phi_ball(p, x);
    const Vec fy = ctex_phi_ball(p, y);
    const Mat dfx = ctex_dphi_ball(p, x);
    const Mat dfy = ctex_dphi_ball(p, y);
    const Vec span = fx - fy;
    const double dist = span.norm();
    jet.ell = p.r * dist;
    jet.u = Vec(dfx.partialPivLu().solve(Eigen::VectorXd(fy - fx))) / jet.ell;
    jet.d1 = first_variation(metric, x, jet.u);
    const Vec shat = span / dist;
    for (int j = 0; j < n - 1; ++j) {
      const Vec b = dfy * basis_y.col(j);
      const double bs = shat.dot(b);
      for (int i = 0; i < n - 1; ++i) {
        const Vec a = dfx * basis_x.col(i);
        jet.H(i, j) = -p.r * (a.dot(b) - shat.dot(a) * bs) / dist;
      }
    }
  } else {
    const BvpSolution bvp = solve_bvp(metric, x, y);
    jet.ell = bvp.ell;
    jet.u = bvp.u;
    jet.d1 = first_variation(metric, x, jet.u);
    if (method == HessianMethod::jacobi) {
      const Mat g = metric.fundamental_tensor(x, jet.u);
      // projected x-side vectors: P_u v = v - g_u(u, v) u
      Mat projected(n, n - 1);
      for (int i = 0; i < n - 1; ++i) {
        const Vec b = basis_x.col(i);
        projected.col(i) = b - jet.u.dot(g * b) * jet.u;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd(bvp.dexp));
      if (!lu.isInvertible()) {
        throw NumericalError("mixed Hessian: singular variational end map");
      }
      for (int j = 0; j < n - 1; ++j) {
        const Vec back = lu.solve(Eigen::VectorXd(basis_y.col(j)));
        for (int i = 0; i < n - 1; ++i) {
          jet.H(i, j) = -projected.col(i).dot(g * back) / jet.ell;
        }
      }
    } else {
      // central differences of the first variation thru on-sphere retraction
      for (int j = 0; j < n - 1; ++j) {
        Vec yp = y + kRetractStep * basis_y.col(j);
        yp /= yp.norm();
        Vec ym = y - kRetractStep * basis_y.col(j);
        ym /= ym.norm();
        const BvpSolution sp = solve_bvp_with_guess(metric, x, yp, bvp.w);
        const BvpSolution sm = solve_bvp_with_guess(metric, x, ym, bvp.w);
        const Vec dp = first_variation(metric, x, sp.u);
        const Vec dm = first_variation(metric, x, sm.u);
        const Vec column = (dp - dm) / (2.0 * kRetractStep);
        for (int i = 0; i < n - 1; ++i) {
          jet.H(i, j) = column.dot(basis_x.col(i));
        }
      }
    }
  }

  jet.Q = jet.H.topLeftCorner(n - 2, n - 2);
  jet.c = jet.H.topRightCorner(n - 2, 1);
  jet.r = jet.H.bottomLeftCorner(1, n - 2).transpose();
  jet.s = jet.H(n - 2, n - 2);
  return jet;
}

//---------------------------------------------------------------------------
// probes
//---------------------------------------------------------------------------

HessianErrorReport hessian_error_probe(const MetricModel& metric, int samples,
                                       std::uint64_t seed) {
  if (samples < 1) {
    throw ValidationError("hessian error probe needs at least one sample");
  }
  const int n = metric.dim();
  Rng rng(seed);
  HessianErrorReport report;
  for (int k = 0; k < samples; ++k) {
    // log-uniform separations across the allowed near-diagonal range
    const double chord =
        1.2e-3 * std::pow(0.3 / 1.2e-3, rng.uniform());
    Vec x, y;
    sample_pair(rng, n, chord, x, y);
    const DistanceJet jet = mixed_hessian(metric, x, y, HessianMethod::jacobi);
    const Mat g = metric.fundamental_tensor(x, jet.u);

    Mat basis_x(n, n - 1), basis_y(n, n - 1);
    for (int i = 0; i < n - 2; ++i) {
      basis_x.col(i) = jet.frame.shared[i];
      basis_y.col(i) = jet.frame.shared[i];
    }
    basis_x.col(n - 2) = jet.frame.e_xy;
    basis_y.col(n - 2) = -jet.frame.e_yx;

    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      Vec vb(n - 1), wb(n - 1);
      for (int i = 0; i < n - 1; ++i) {
        vb[i] = rng.normal();
        wb[i] = rng.normal();
      }
      vb /= vb.norm();
      wb /= wb.norm();
      const Vec v = basis_x * vb;
      const Vec w = basis_y * wb;
      const Vec pv = v - jet.u.dot(g * v) * jet.u;
      const double lhs = jet.ell * vb.dot(jet.H * wb) + pv.dot(g * w);
      const double weight =
          (x - y).norm() * w.norm() * std::sqrt(pv.dot(g * pv));
      worst = std::max(worst, std::abs(lhs) / weight);
    }
    report.separations.push_back((x - y).norm());
    report.ratios.push_back(worst);
    report.max_ratio = std::max(report.max_ratio, worst);
  }
  return report;
}

ProjectionBoundsReport projection_bounds_probe(const MetricModel& metric,
                                               int samples,
                                               std::uint64_t seed) {
  if (samples < 1) {
    throw ValidationError("projection bounds probe needs at least one sample");
  }
  const int n = metric.dim();
  Rng rng(seed);
  ProjectionBoundsReport report;
  report.samples = samples;
  report.max_chord_ratio = 0.0;
  report.min_chord_ratio = std::numeric_limits<double>::infinity();
  report.min_tangential = n >= 3 ? std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < samples; ++k) {
    const double chord = 1.2e-3 * std::pow(0.3 / 1.2e-3, rng.uniform());
    Vec x, y;
    sample_pair(rng, n, chord, x, y);
    const AdaptedFrame frame = adapted_frame(x, y);
    const BvpSolution bvp = solve_bvp(metric, x, y);
    const Mat g = metric.fundamental_tensor(x, bvp.u);
    const Vec pe =
        frame.e_xy - bvp.u.dot(g * frame.e_xy) * bvp.u;
    const double chord_ratio =
        pe.dot(g * frame.e_xy) / (x - y).squaredNorm();
    report.max_chord_ratio = std::max(report.max_chord_ratio, chord_ratio);
    report.min_chord_ratio = std::min(report.min_chord_ratio, chord_ratio);
    if (n >= 3) {
      for (int trial = 0; trial < 4; ++trial) {
        Vec coeff(n - 2);
        for (int i = 0; i < n - 2; ++i) coeff[i] = rng.normal();
        if (coeff.norm() < 1e-9) continue;
        Vec v = Vec::Zero(n);
        for (int i = 0; i < n - 2; ++i) v += coeff[i] * frame.shared[i];
        v /= v.norm();
        const Vec pv = v - bvp.u.dot(g * v) * bvp.u;
        report.min_tangential =
            std::min(report.min_tangential, pv.dot(g * v));
      }
    }
  }
  return report;
}

}  // namespace ballgeo
