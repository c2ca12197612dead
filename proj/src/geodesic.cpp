// ballgeo - Dormand-Prince 5(4) driver with dense output for boundary-exit
// location, plus variational transport along accepted or replayed step grids
#include "ballgeo/geodesic.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace ballgeo {

namespace {

constexpr double kAtol = 1e-10;
constexpr double kRtol = 1e-10;
constexpr double kExitTol = 1e-12;   // bisection width in t for |x| = 1
constexpr double kDriftTol = 1e-6;   // relative speed drift -> NumericalError
constexpr int kMaxSteps = 200000;

// Dormand-Prince coefficients
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

Vec phase_deriv(const MetricModel& metric, const Vec& y) {
  const int n = metric.dim();
  Vec out(2 * n);
  out.head(n) = y.tail(n);
  out.tail(n) = metric.spray(y.head(n), y.tail(n));
  return out;
}

// One attempted step: fills stage bases ys[0..6] (ys[6] = y1), stage
// derivatives k[1..6] (k[0] given), and returns the scaled error norm.
struct StageData {
  std::array<Vec, 7> ys;
  std::array<Vec, 7> k;
};

double attempt_step(const MetricModel& metric, const Vec& y, double h,
                    StageData& s, double tol_scale = 1.0) {
  s.ys[0] = y;
  s.ys[1] = y + h * (a21 * s.k[0]);
  s.k[1] = phase_deriv(metric, s.ys[1]);
  s.ys[2] = y + h * (a31 * s.k[0] + a32 * s.k[1]);
  s.k[2] = phase_deriv(metric, s.ys[2]);
  s.ys[3] = y + h * (a41 * s.k[0] + a42 * s.k[1] + a43 * s.k[2]);
  s.k[3] = phase_deriv(metric, s.ys[3]);
  s.ys[4] = y + h * (a51 * s.k[0] + a52 * s.k[1] + a53 * s.k[2] + a54 * s.k[3]);
  s.k[4] = phase_deriv(metric, s.ys[4]);
  s.ys[5] = y + h * (a61 * s.k[0] + a62 * s.k[1] + a63 * s.k[2] +
                     a64 * s.k[3] + a65 * s.k[4]);
  s.k[5] = phase_deriv(metric, s.ys[5]);
  s.ys[6] = y + h * (b1 * s.k[0] + b3 * s.k[2] + b4 * s.k[3] + b5 * s.k[4] +
                     b6 * s.k[5]);
  s.k[6] = phase_deriv(metric, s.ys[6]);

  const Vec er = h * (e1 * s.k[0] + e3 * s.k[2] + e4 * s.k[3] + e5 * s.k[4] +
                      e6 * s.k[5] + e7 * s.k[6]);
  double acc = 0.0;
  for (int i = 0; i < y.size(); ++i) {
    const double scale =
        tol_scale *
        (kAtol + kRtol * std::max(std::abs(y[i]), std::abs(s.ys[6][i])));
    const double q = er[i] / scale;
    acc += q * q;
  }
  return std::sqrt(acc / y.size());
}

// dense interpolant over the accepted step, theta in [0, 1]
struct DenseStep {
  Vec r1, r2, r3, r4, r5;

  DenseStep(const StageData& s, double h) {
    const Vec dy = s.ys[6] - s.ys[0];
    r1 = s.ys[0];
    r2 = dy;
    r3 = h * s.k[0] - dy;
    r4 = dy - h * s.k[6] - r3;
    r5 = h * (d1 * s.k[0] + d3 * s.k[2] + d4 * s.k[3] + d5 * s.k[4] +
              d6 * s.k[5] + d7 * s.k[6]);
  }

  Vec at(double theta) const {
    const double om = 1.0 - theta;
    return r1 + theta * (r2 + om * (r3 + theta * (r4 + om * r5)));
  }
};

// variational stage update: A(y) * M with A = [[0, I], [Jx, Jv]]
Mat variational_apply(const MetricModel& metric, const Vec& y, const Mat& m) {
  const int n = metric.dim();
  Mat jx, jv;
  metric.spray_jacobians(y.head(n), y.tail(n), jx, jv);
  Mat out(2 * n, 2 * n);
  out.topRows(n) = m.bottomRows(n);
  out.bottomRows(n) = jx * m.topRows(n) + jv * m.bottomRows(n);
  return out;
}

// advances the variational matrix across one (already accepted) step using
// the same stage bases as the state update
Mat variational_step(const MetricModel& metric, const StageData& s, double h,
                     const Mat& y0) {
  std::array<Mat, 6> kk;
  kk[0] = variational_apply(metric, s.ys[0], y0);
  kk[1] = variational_apply(metric, s.ys[1], Mat(y0 + h * (a21 * kk[0])));
  kk[2] = variational_apply(metric, s.ys[2],
                            Mat(y0 + h * (a31 * kk[0] + a32 * kk[1])));
  kk[3] = variational_apply(
      metric, s.ys[3], Mat(y0 + h * (a41 * kk[0] + a42 * kk[1] + a43 * kk[2])));
  kk[4] = variational_apply(
      metric, s.ys[4],
      Mat(y0 + h * (a51 * kk[0] + a52 * kk[1] + a53 * kk[2] + a54 * kk[3])));
  kk[5] = variational_apply(
      metric, s.ys[5],
      Mat(y0 + h * (a61 * kk[0] + a62 * kk[1] + a63 * kk[2] + a64 * kk[3] +
                    a65 * kk[4])));
  return y0 + h * (b1 * kk[0] + b3 * kk[2] + b4 * kk[3] + b5 * kk[4] +
                   b6 * kk[5]);
}

struct DriveOptions {
  double t_end = 0.0;
  double ball_limit = 1.15;
  bool stop_at_boundary = false;
  bool record = false;
  bool with_variational = false;
  double tol_scale = 1.0;  // multiplies the error tolerances (< 1 tightens)
};

struct DriveResult {
  double t = 0.0;
  Vec y;
  bool exited = false;
  double t_exit = 0.0;
  Vec exit_point;
  std::vector<GeodesicState> states;
  Mat variational;
  double energy_drift = 0.0;
  int steps = 0;
};

DriveResult drive(const MetricModel& metric, const Vec& x0, const Vec& v0,
                  const DriveOptions& opt) {
  const int n = metric.dim();
  DriveResult res;
  Vec y(2 * n);
  y << x0, v0;
  double t = 0.0;
  const double speed0 = metric.norm(x0, v0);
  if (opt.with_variational) {
    res.variational = Mat::Identity(2 * n, 2 * n);
  }
  if (opt.record) {
    res.states.push_back({0.0, x0, v0});
  }

  auto track_drift = [&](const Vec& state) {
    const double f = metric.norm(state.head(n), state.tail(n));
    const double drift = std::abs(f - speed0);
    res.energy_drift = std::max(res.energy_drift, drift);
    if (drift > kDriftTol * std::max(1.0, speed0)) {
      throw NumericalError("speed drift along geodesic exceeds tolerance");
    }
  };

  StageData stages;
  stages.k[0] = phase_deriv(metric, y);
  // Scale the first trial step so its stage points cannot stray far from the
  // ball even when the initial velocity is large.
  double h = std::min(opt.t_end, 0.5 / std::max(1.0, speed0));
  int attempts = 0;
  while (t < opt.t_end) {
    // In boundary-stop mode keep trial steps short enough that their stage
    // points stay within the metric's extension margin beyond the sphere.
    if (opt.stop_at_boundary && h > 0.5) h = 0.5;
    if (h > opt.t_end - t) h = opt.t_end - t;
    if (h < 1e-13 * std::max(1.0, opt.t_end)) {
      throw NumericalError("step-size underflow in geodesic integration");
    }
    if (++attempts > kMaxSteps) {
      throw NumericalError("step limit exceeded in geodesic integration");
    }
    double err;
    try {
      err = attempt_step(metric, y, h, stages, opt.tol_scale);
    } catch (const ValidationError&) {
      // A trial stage escaped the metric's extension domain; the step was
      // far too long, so shrink hard and retry.
      h *= 0.25;
      continue;
    }
    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    const Vec& y1 = stages.ys[6];
    if (opt.stop_at_boundary &&
        y1.head(n).squaredNorm() - 1.0 > 0.0) {
      // first crossing of the unit sphere inside this step
      const DenseStep dense(stages, h);
      double lo = 0.0, hi = 1.0;
      while ((hi - lo) * h > kExitTol) {
        const double mid = 0.5 * (lo + hi);
        if (dense.at(mid).head(n).squaredNorm() - 1.0 > 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const double theta = 0.5 * (lo + hi);
      const Vec y_exit = dense.at(theta);
      res.exited = true;
      res.t_exit = t + theta * h;
      res.exit_point = y_exit.head(n);
      track_drift(y_exit);
      if (opt.record) {
        res.states.push_back({res.t_exit, y_exit.head(n), y_exit.tail(n)});
      }
      res.t = res.t_exit;
      res.y = y_exit;
      ++res.steps;
      return res;
    }
    if (y1.head(n).norm() > opt.ball_limit) {
      throw NumericalError(
          "geodesic left the allowed neighborhood of the ball");
    }

    if (opt.with_variational) {
      res.variational = variational_step(metric, stages, h, res.variational);
      if (res.variational.norm() > 1e8) {
        throw NumericalError("variational transport blew up along geodesic");
      }
    }

    t += h;
    y = y1;
    stages.k[0] = stages.k[6];  // first-same-as-last
    track_drift(y);
    if (opt.record) {
      res.states.push_back({t, y.head(n), y.tail(n)});
    }
    ++res.steps;
    if (t >= opt.t_end) break;
    const double factor =
        err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h *= factor;
  }
  res.t = t;
  res.y = y;
  return res;
}

}  // namespace

//---------------------------------------------------------------------------
// public operations
//---------------------------------------------------------------------------

GeodesicPath shoot(const MetricModel& metric, const Vec& x, const Vec& v,
                   double t_end) {
  if (x.size() != metric.dim() || v.size() != metric.dim()) {
    throw ValidationError("shoot: dimension mismatch");
  }
  if (x.norm() > 1.0 + 1e-9) {
    throw ValidationError("shoot: start point must lie in the closed ball");
  }
  if (!(t_end > 0.0)) {
    throw ValidationError("shoot: t_end must be positive");
  }
  const double speed = metric.norm(x, v);
  if (std::abs(speed - 1.0) > 1e-9) {
    throw ValidationError("shoot: initial velocity must be unit speed");
  }
  DriveOptions opt;
  opt.t_end = t_end;
  opt.stop_at_boundary = true;
  opt.record = true;
  const DriveResult res = drive(metric, x, v, opt);

  GeodesicPath path;
  path.states = res.states;
  path.exited = res.exited;
  path.t_plus = res.exited ? res.t_exit : 0.0;
  if (res.exited) path.exit_point = res.exit_point;
  path.energy_drift = res.energy_drift;
  return path;
}

FlowResult flow_unit_time(const MetricModel& metric, const Vec& x, const Vec& w,
                          bool with_variational, double ball_limit,
                          double tol_scale) {
  const int n = metric.dim();
  if (x.size() != n || w.size() != n) {
    throw ValidationError("flow: dimension mismatch");
  }
  FlowResult out;
  if (w.norm() < 1e-12) {
    out.x = x;
    out.v = w;
    if (with_variational) out.variational = Mat::Identity(2 * n, 2 * n);
    return out;
  }
  DriveOptions opt;
  opt.t_end = 1.0;
  opt.ball_limit = ball_limit;
  opt.with_variational = with_variational;
  opt.tol_scale = tol_scale;
  const DriveResult res = drive(metric, x, w, opt);
  out.x = res.y.head(n);
  out.v = res.y.tail(n);
  if (with_variational) out.variational = res.variational;
  out.steps = res.steps;
  return out;
}

Vec exp_map(const MetricModel& metric, const Vec& x, const Vec& w) {
  return flow_unit_time(metric, x, w, false).x;
}

JacobiTransport jacobi_transport(const MetricModel& metric,
                                 const GeodesicPath& path) {
  const int n = metric.dim();
  if (path.states.size() < 2) {
    throw ValidationError("jacobi_transport: path needs at least two states");
  }
  Mat y = Mat::Identity(2 * n, 2 * n);
  StageData stages;
  for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
    const GeodesicState& from = path.states[i];
    const GeodesicState& to = path.states[i + 1];
    const double h = to.t - from.t;
    if (h <= 0.0) continue;
    Vec base(2 * n);
    base << from.x, from.v;
    stages.k[0] = phase_deriv(metric, base);
    attempt_step(metric, base, h, stages);
    y = variational_step(metric, stages, h, y);
    if (y.norm() > 1e8) {
      throw NumericalError("variational transport blew up along geodesic");
    }
  }
  JacobiTransport transport;
  transport.pos = y.topRows(n);
  transport.vel = y.bottomRows(n);
  return transport;
}

double integrate_along_path(
    const MetricModel& metric, const GeodesicPath& path,
    const std::function<double(const Vec&, const Vec&)>& f) {
  const int n = metric.dim();
  if (!f) throw ValidationError("path integral requires an integrand");
  if (path.states.size() < 2) {
    throw ValidationError("path integral: path needs at least two states");
  }
  static const GaussLegendre rule = gauss_legendre_01(4);
  KahanSum acc;
  StageData stages;
  for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
    const GeodesicState& from = path.states[i];
    const GeodesicState& to = path.states[i + 1];
    const double h = to.t - from.t;
    if (h <= 0.0) continue;
    Vec base(2 * n);
    base << from.x, from.v;
    stages.k[0] = phase_deriv(metric, base);
    attempt_step(metric, base, h, stages);
    const DenseStep dense(stages, h);
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      const Vec y = dense.at(rule.x[j]);
      acc.add(h * rule.w[j] * f(y.head(n), y.tail(n)));
    }
  }
  return acc.value();
}

LipschitzReport dexp_lipschitz_probe(const MetricModel& metric, const Vec& x,
                                     const std::vector<double>& radii,
                                     int directions, std::uint64_t seed) {
  const int n = metric.dim();
  if (x.size() != n || x.norm() > 1.0 + 1e-9) {
    throw ValidationError("lipschitz probe: base point must lie in the ball");
  }
  if (radii.empty()) {
    throw ValidationError("lipschitz probe: need at least one radius");
  }
  for (double r : radii) {
    if (!(r > 0.0 && r <= 0.3)) {
      throw ValidationError("lipschitz probe: radii must lie in (0, 0.3]");
    }
  }
  if (directions < 1) {
    throw ValidationError("lipschitz probe: need at least one direction");
  }

  Rng rng(seed);
  std::vector<Vec> dirs;
  dirs.reserve(directions);
  for (int i = 0; i < directions; ++i) dirs.push_back(rng.unit_vector(n));

  LipschitzReport report;
  report.radii = radii;
  double sxx = 0.0, sxy = 0.0;
  for (double r : radii) {
    double worst = 0.0;
    for (const Vec& d : dirs) {
      const FlowResult flow = flow_unit_time(metric, x, Vec(r * d), true);
      const Mat dexp = flow.variational.topRightCorner(n, n);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(
          dexp - Mat::Identity(n, n)));
      worst = std::max(worst, svd.singularValues()(0));
    }
    report.deviations.push_back(worst);
    sxx += r * r;
    sxy += r * worst;
  }
  report.fitted_slope = sxy / sxx;
  return report;
}

}  // namespace ballgeo
