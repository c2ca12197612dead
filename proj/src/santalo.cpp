// ballgeo - boundary-pair quadrature: Holmes-Thompson volumes, the
// volume-difference formula, eta-hat scans, and scaling probes
#include "ballgeo/santalo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "ballgeo/geodesic.hpp"

namespace ballgeo {

namespace {

constexpr long long kBlockSize = 1 << 16;  // pairs evaluated per buffer fill
constexpr double kDetFloor = 1e-12;        // vanishing-determinant guard

// Per-dimension sign of the determinant weight in the adapted frame, fixed
// once by requiring the Euclidean volume to come out positive; with it the
// 1/area(S^{n-1}) normalization reproduces pi, 4pi/3, pi^2/2.
double frame_sign(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

struct SpherePoints {
  std::vector<Vec> points;
  std::vector<double> weights;
};

// `resolution` nodes per angular dimension; `offset` shifts the azimuth by
// half a step (used for the second grid factor so that no two nodes of a
// pair coincide or oppose exactly when the resolution is even).
SpherePoints sphere_points(int dim, int resolution, bool offset) {
  SpherePoints out;
  const double shift = offset ? 0.5 : 0.0;
  const double dphi = 2.0 * kPi / resolution;
  if (dim == 2) {
    for (int i = 0; i < resolution; ++i) {
      const double phi = dphi * (i + shift);
      Vec p(2);
      p << std::cos(phi), std::sin(phi);
      out.points.push_back(p);
      out.weights.push_back(dphi);
    }
    return out;
  }
  const GaussLegendre polar = gauss_legendre(resolution);
  if (dim == 3) {
    for (int i = 0; i < resolution; ++i) {
      const double c = polar.x[i];  // cos(theta)
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < resolution; ++j) {
        const double phi = dphi * (j + shift);
        Vec p(3);
        p << s * std::cos(phi), s * std::sin(phi), c;
        out.points.push_back(p);
        out.weights.push_back(polar.w[i] * dphi);
      }
    }
    return out;
  }
  // dim == 4: first polar angle on (0, pi) with the sin^2 area factor folded
  // into the weight, second polar via its cosine, azimuth uniform.
  for (int i = 0; i < resolution; ++i) {
    const double th1 = 0.5 * kPi * (polar.x[i] + 1.0);
    const double w1 = polar.w[i] * 0.5 * kPi * std::sin(th1) * std::sin(th1);
    const double s1 = std::sin(th1), c1 = std::cos(th1);
    for (int j = 0; j < resolution; ++j) {
      const double c2 = polar.x[j];
      const double s2 = std::sqrt(std::max(0.0, 1.0 - c2 * c2));
      for (int k = 0; k < resolution; ++k) {
        const double phi = dphi * (k + shift);
        Vec p(4);
        p << s1 * s2 * std::cos(phi), s1 * s2 * std::sin(phi), s1 * c2, c1;
        out.points.push_back(p);
        out.weights.push_back(w1 * polar.w[j] * dphi);
      }
    }
  }
  return out;
}

// Streams the surviving product pairs through `node_fn` (parallel, writing
// `width` doubles per pair into caller-invisible buffers) and then `fold_fn`
// (sequential, ascending pair index). The fold order is independent of the
// worker count, so compensated reductions downstream are bit-reproducible.
void process_pairs(
    const PairGrid& grid, int threads, int width,
    const std::function<void(const Vec&, const Vec&, double, double*)>& node_fn,
    const std::function<void(const Vec&, const Vec&, double, const double*)>&
        fold_fn) {
  const long long total = grid.product_count();
  const long long ny = static_cast<long long>(grid.points_y.size());
  const int workers = resolve_thread_count(threads);
  std::vector<double> buffer;
  std::vector<char> active;
  for (long long start = 0; start < total; start += kBlockSize) {
    const long long len = std::min(kBlockSize, total - start);
    buffer.assign(static_cast<std::size_t>(len) * width, 0.0);
    active.assign(static_cast<std::size_t>(len), 0);
    parallel_for(static_cast<std::size_t>(len), workers,
                 [&](std::size_t lo, std::size_t hi) {
                   for (std::size_t k = lo; k < hi; ++k) {
                     const long long idx = start + static_cast<long long>(k);
                     const Vec& x = grid.points_x[idx / ny];
                     const Vec& y = grid.points_y[idx % ny];
                     if ((x - y).norm() < grid.band) continue;
                     active[k] = 1;
                     const double w = grid.weights_x[idx / ny] *
                                      grid.weights_y[idx % ny];
                     node_fn(x, y, w, &buffer[k * width]);
                   }
                 });
    for (long long k = 0; k < len; ++k) {
      if (!active[static_cast<std::size_t>(k)]) continue;
      const long long idx = start + k;
      const Vec& x = grid.points_x[idx / ny];
      const Vec& y = grid.points_y[idx % ny];
      const double w =
          grid.weights_x[idx / ny] * grid.weights_y[idx % ny];
      fold_fn(x, y, w, &buffer[static_cast<std::size_t>(k) * width]);
    }
  }
}

const GaussLegendre& pencil_rule(int n) {
  static const GaussLegendre r2 = gauss_legendre_01(2);
  static const GaussLegendre r3 = gauss_legendre_01(3);
  static const GaussLegendre r4 = gauss_legendre_01(4);
  switch (n) {
    case 2: return r2;
    case 3: return r3;
    default: return r4;
  }
}

double binomial(int m, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (m - i) / (i + 1);
  return b;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void require_grid_match(const MetricModel& metric, const PairGrid& grid) {
  if (metric.dim() != grid.dim) {
    throw ValidationError("pair grid dimension does not match the metric");
  }
}

}  // namespace

double pencil_integral(const Mat& ha, const Mat& hb, int n) {
  if (n < 2 || n > 4 || ha.rows() != n - 1 || ha.cols() != n - 1 ||
      hb.rows() != n - 1 || hb.cols() != n - 1) {
    throw ValidationError("pencil integral: matrices must be (n-1) x (n-1)");
  }
  // the determinant of the pencil is a polynomial of degree n-1 in a, so the
  // n-point rule integrates it exactly
  const GaussLegendre& rule = pencil_rule(n);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = rule.x[k];
    sum += rule.w[k] * Mat((1.0 - a) * ha + a * hb).determinant();
  }
  return n * sum;
}

double mixed_determinant_sum(const Mat& ha, const Mat& hb, int n) {
  if (n < 2 || n > 4 || ha.rows() != n - 1 || ha.cols() != n - 1 ||
      hb.rows() != n - 1 || hb.cols() != n - 1) {
    throw ValidationError("mixed determinants: matrices must be (n-1) x (n-1)");
  }
  // expanding det((1-a)Ha + aHb) by multilinearity and integrating the
  // Bernstein weights a^k (1-a)^(m-k) exactly yields 1/binom(m, k) factors
  const int m = n - 1;
  std::vector<double> by_count(m + 1, 0.0);
  Mat cols(m, m);
  for (int mask = 0; mask < (1 << m); ++mask) {
    int count = 0;
    for (int c = 0; c < m; ++c) {
      if (mask & (1 << c)) {
        cols.col(c) = hb.col(c);
        ++count;
      } else {
        cols.col(c) = ha.col(c);
      }
    }
    by_count[count] += cols.determinant();
  }
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) sum += by_count[k] / binomial(m, k);
  return sum;
}

//---------------------------------------------------------------------------
// grid construction
//---------------------------------------------------------------------------

PairGrid build_pair_grid(int dim, int resolution, double band) {
  if (dim < 2 || dim > 4) {
    throw ValidationError("pair grid: dimension must be 2, 3, or 4");
  }
  if (resolution < 8 || resolution % 2 != 0) {
    throw ValidationError("pair grid: resolution must be even and at least 8");
  }
  if (!(band > 0.0 && band < 0.5)) {
    throw ValidationError("pair grid: band must lie in (0, 0.5)");
  }
  PairGrid grid;
  grid.dim = dim;
  grid.resolution = resolution;
  grid.band = band;
  SpherePoints fx = sphere_points(dim, resolution, false);
  SpherePoints fy = sphere_points(dim, resolution, true);
  grid.points_x = std::move(fx.points);
  grid.weights_x = std::move(fx.weights);
  grid.points_y = std::move(fy.points);
  grid.weights_y = std::move(fy.weights);
  const double band2 = band * band;
  for (const Vec& x : grid.points_x) {
    for (const Vec& y : grid.points_y) {
      if ((x - y).squaredNorm() >= band2) ++grid.node_count;
    }
  }
  if (grid.node_count == 0) {
    throw ValidationError("pair grid: band excludes every node");
  }
  return grid;
}

void add_cap_pairs(PairGrid& grid, const Vec& axis, int rings, int per_ring,
                   double min_offset, double max_offset) {
  if (axis.size() != grid.dim) {
    throw ValidationError("cap pairs: axis dimension mismatch");
  }
  if (rings < 1 || per_ring < 1) {
    throw ValidationError("cap pairs: need at least one ring and azimuth");
  }
  if (!(min_offset > 0.0 && min_offset <= max_offset && max_offset < 0.5)) {
    throw ValidationError("cap pairs: offsets must satisfy 0 < min <= max < 0.5");
  }
  const int n = grid.dim;
  const Vec a = axis / axis.norm();
  // orthonormal tangent basis at the axis
  std::vector<Vec> tangent;
  for (int i = 0; i < n && static_cast<int>(tangent.size()) < n - 1; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    e -= e.dot(a) * a;
    for (const Vec& t : tangent) e -= e.dot(t) * t;
    if (e.norm() > 1e-6) tangent.push_back(Vec(e / e.norm()));
  }
  const double lr = std::log(max_offset / min_offset);
  for (int r = 0; r < rings; ++r) {
    const double frac = rings == 1 ? 0.0 : static_cast<double>(r) / (rings - 1);
    const double alpha = min_offset * std::exp(lr * frac);
    for (int m = 0; m < per_ring; ++m) {
      const double phi = 2.0 * kPi * m / per_ring;
      Vec t = std::cos(phi) * tangent[0];
      if (n >= 3) t += std::sin(phi) * tangent[1];
      t /= t.norm();
      // both points tilted toward the same tangent direction, so the pair is
      // close to, but never exactly, antipodal
      const Vec x = Vec(std::cos(alpha) * a + std::sin(alpha) * t);
      const Vec y = Vec(-std::cos(alpha) * a + std::sin(alpha) * t);
      grid.extra_pairs.emplace_back(Vec(x / x.norm()), Vec(y / y.norm()));
    }
  }
}

//---------------------------------------------------------------------------
// volumes
//---------------------------------------------------------------------------

VolumeReport volume_via_pi(const MetricModel& metric, const PairGrid& grid,
                           int threads) {
  require_grid_match(metric, grid);
  const auto start = std::chrono::steady_clock::now();
  const int n = metric.dim();
  KahanSum sum_band, sum_double_band;
  long long used = 0;
  process_pairs(
      grid, threads, 1,
      [&](const Vec& x, const Vec& y, double w, double* out) {
        const DistanceJet jet = mixed_hessian(metric, x, y,
                                              HessianMethod::jacobi);
        const double det = jet.H.determinant();
        if (std::abs(det) <= kDetFloor) {
          throw NumericalError(
              "volume quadrature: vanishing Hessian determinant at a node "
              "(metric may not be simple)");
        }
        out[0] = w * jet.ell * det;
      },
      [&](const Vec& x, const Vec& y, double, const double* out) {
        ++used;
        sum_band.add(out[0]);
        if ((x - y).norm() >= 2.0 * grid.band) sum_double_band.add(out[0]);
      });
  const double norm = frame_sign(n) / sphere_surface(n);
  VolumeReport report;
  report.method = "pi_formula";
  report.dim = n;
  report.resolution = grid.resolution;
  report.band = grid.band;
  report.nodes_used = used;
  report.value_band = norm * sum_band.value();
  report.value_double_band = norm * sum_double_band.value();
  // band-truncation error scales like band^3, so halving gains a factor 8
  report.value =
      report.value_band + (report.value_band - report.value_double_band) / 7.0;
  report.richardson_estimate =
      std::abs(report.value_band - report.value_double_band) / 7.0;
  report.seconds = elapsed_seconds(start);
  return report;
}

double support_function(const MetricModel& metric, const Vec& x,
                        const Vec& theta) {
  if (theta.norm() <= 0.0) {
    throw ValidationError("support function: direction must be nonzero");
  }
  Vec v = theta / metric.norm(x, theta);
  double value = theta.dot(v);
  for (int iter = 0; iter < 80; ++iter) {
    const Mat g = metric.fundamental_tensor(x, v);
    const Vec u = g.llt().solve(theta);
    const double f = metric.norm(x, u);
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw NumericalError("support function: degenerate norm in iteration");
    }
    v = u / f;
    const double next = theta.dot(v);
    if (std::abs(next - value) <= 1e-13 * std::max(1.0, std::abs(next))) {
      return next;
    }
    value = next;
  }
  throw NumericalError("support function iteration did not converge");
}

double ht_density(const MetricModel& metric, const Vec& x,
                  int direction_resolution) {
  const int n = metric.dim();
  if (metric.family() != MetricFamily::minkowski) {
    // all position-dependent families are quadratic in the velocity, so the
    // fundamental tensor is direction-independent and the dual-ball volume
    // ratio collapses to sqrt(det G)
    Vec probe = Vec::Zero(n);
    probe[0] = 1.0;
    return std::sqrt(metric.fundamental_tensor(x, probe).determinant());
  }
  if (direction_resolution < 8) {
    throw ValidationError("density: direction resolution must be at least 8");
  }
  const SpherePoints dirs = sphere_points(n, direction_resolution, false);
  KahanSum acc;
  for (std::size_t i = 0; i < dirs.points.size(); ++i) {
    const double h = support_function(metric, x, dirs.points[i]);
    acc.add(dirs.weights[i] * std::pow(h, -n));
  }
  // dual-ball volume from its radial function 1/h, over the Euclidean ball
  return acc.value() / n / ball_volume(n);
}

VolumeReport volume_direct_ht(const MetricModel& metric, int resolution,
                              int threads) {
  const auto start = std::chrono::steady_clock::now();
  const int n = metric.dim();
  if (resolution < 8 || resolution % 2 != 0) {
    throw ValidationError("direct volume: resolution must be even and >= 8");
  }
  VolumeReport report;
  report.method = "direct_ht";
  report.dim = n;
  report.resolution = resolution;
  if (metric.family() == MetricFamily::minkowski) {
    // the norm does not depend on position: one density evaluation suffices
    report.value = ht_density(metric, Vec(Vec::Zero(n)), resolution) *
                   ball_volume(n);
    report.nodes_used = static_cast<long long>(std::pow(resolution, n - 1));
  } else {
    const SpherePoints sphere = sphere_points(n, resolution, false);
    const GaussLegendre radial = gauss_legendre_01(resolution);
    const std::size_t count = sphere.points.size();
    std::vector<double> partial(count, 0.0);
    parallel_for(count, resolve_thread_count(threads),
                 [&](std::size_t lo, std::size_t hi) {
                   for (std::size_t i = lo; i < hi; ++i) {
                     KahanSum along_ray;
                     for (int r = 0; r < resolution; ++r) {
                       const double rad = radial.x[r];
                       const Vec point = Vec(rad * sphere.points[i]);
                       along_ray.add(radial.w[r] * std::pow(rad, n - 1) *
                                     ht_density(metric, point, resolution));
                     }
                     partial[i] = sphere.weights[i] * along_ray.value();
                   }
                 });
    KahanSum total;
    for (std::size_t i = 0; i < count; ++i) total.add(partial[i]);
    report.value = total.value();
    report.nodes_used = static_cast<long long>(count) * resolution;
  }
  report.value_band = report.value;
  report.value_double_band = report.value;
  report.seconds = elapsed_seconds(start);
  return report;
}

double liouville_integral(const MetricModel& metric, const TangentField& f,
                          const PairGrid& grid, int threads) {
  require_grid_match(metric, grid);
  const int n = metric.dim();
  KahanSum sum;
  process_pairs(
      grid, threads, 1,
      [&](const Vec& x, const Vec& y, double w, double* out) {
        const DistanceJet jet = mixed_hessian(metric, x, y,
                                              HessianMethod::jacobi);
        double inner = jet.ell;
        if (f) {
          const GeodesicPath path = shoot(metric, x, jet.u, jet.ell);
          inner = integrate_along_path(metric, path, f);
        }
        out[0] = w * jet.H.determinant() * inner;
      },
      [&](const Vec&, const Vec&, double, const double* out) {
        sum.add(out[0]);
      });
  return frame_sign(n) * sum.value();
}

double volume_difference_rhs(const MetricModel& metric_a,
                             const MetricModel& metric_b, const PairGrid& grid,
                             int threads) {
  require_grid_match(metric_a, grid);
  require_grid_match(metric_b, grid);
  const int n = metric_a.dim();
  KahanSum sum;
  process_pairs(
      grid, threads, 1,
      [&](const Vec& x, const Vec& y, double w, double* out) {
        const DistanceJet ja = mixed_hessian(metric_a, x, y,
                                             HessianMethod::jacobi);
        const DistanceJet jb = mixed_hessian(metric_b, x, y,
                                             HessianMethod::jacobi);
        out[0] = w * (jb.ell - ja.ell) * pencil_integral(ja.H, jb.H, n);
      },
      [&](const Vec&, const Vec&, double, const double* out) {
        sum.add(out[0]);
      });
  return frame_sign(n) / sphere_surface(n) * sum.value();
}

//---------------------------------------------------------------------------
// eta-hat
//---------------------------------------------------------------------------

EtaHatSample etahat_eval(const MetricModel& metric_a,
                         const MetricModel& metric_b, const Vec& x,
                         const Vec& y, HessianMethod method) {
  const int n = metric_a.dim();
  if (metric_b.dim() != n) {
    throw ValidationError("eta-hat: metric dimensions differ");
  }
  EtaHatSample sample;
  sample.x = x;
  sample.y = y;
  sample.H = mixed_hessian(metric_a, x, y, method).H;
  sample.Ht = mixed_hessian(metric_b, x, y, method).H;
  const GaussLegendre& rule = pencil_rule(n);
  double integral = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = rule.x[k];
    const double det =
        Mat((1.0 - a) * sample.H + a * sample.Ht).determinant();
    sample.pencil_values.push_back(det);
    integral += rule.w[k] * det;
  }
  sample.etahat_coeff = frame_sign(n) * n * integral;
  sample.sum_form_coeff =
      frame_sign(n) * mixed_determinant_sum(sample.H, sample.Ht, n);
  return sample;
}

EtaHatScanReport etahat_scan(const MetricModel& metric_a,
                             const MetricModel& metric_b, const PairGrid& grid,
                             int threads, HessianMethod method) {
  require_grid_match(metric_a, grid);
  require_grid_match(metric_b, grid);
  const int n = metric_a.dim();
  EtaHatScanReport report;
  report.min_coeff = std::numeric_limits<double>::infinity();
  auto eval_coeff = [&](const Vec& x, const Vec& y, double* out) {
    // out[0] = coefficient, out[1] = success flag; scans survey rather than
    // integrate, so per-pair failures are tallied instead of fatal
    try {
      const Mat ha = mixed_hessian(metric_a, x, y, method).H;
      const Mat hb = mixed_hessian(metric_b, x, y, method).H;
      out[0] = frame_sign(n) * pencil_integral(ha, hb, n);
      out[1] = 1.0;
    } catch (const std::exception&) {
      out[0] = 0.0;
      out[1] = 0.0;
    }
  };
  auto tally = [&](const Vec& x, const Vec& y, const double* out) {
    ++report.nodes;
    if (out[1] == 0.0) {
      ++report.failures;
      return;
    }
    if (out[0] > 0.0) ++report.positive;
    if (out[0] < 0.0) ++report.negative;
    if (out[0] < report.min_coeff) {
      report.min_coeff = out[0];
      report.argmin_x = x;
      report.argmin_y = y;
    }
  };
  process_pairs(
      grid, threads, 2,
      [&](const Vec& x, const Vec& y, double, double* out) {
        eval_coeff(x, y, out);
      },
      [&](const Vec& x, const Vec& y, double, const double* out) {
        tally(x, y, out);
      });
  for (const auto& pair : grid.extra_pairs) {
    double out[2];
    eval_coeff(pair.first, pair.second, out);
    tally(pair.first, pair.second, out);
  }
  return report;
}

//---------------------------------------------------------------------------
// probes
//---------------------------------------------------------------------------

NearDiagonalReport near_diagonal_probe(const MetricModel& metric_a,
                                       const MetricModel& metric_b,
                                       const std::vector<double>& a_values,
                                       const std::vector<double>& separations,
                                       std::uint64_t seed) {
  const int n = metric_a.dim();
  if (metric_b.dim() != n) {
    throw ValidationError("near-diagonal probe: metric dimensions differ");
  }
  if (a_values.empty() || separations.empty()) {
    throw ValidationError("near-diagonal probe: need a-values and separations");
  }
  for (double s : separations) {
    if (!(s >= 1e-3 && s < 2.0)) {
      throw ValidationError(
          "near-diagonal probe: separations must lie in [1e-3, 2)");
    }
  }
  Rng rng(seed);
  const Vec x = rng.unit_vector(n);
  Vec t;
  do {
    t = rng.unit_vector(n);
    t -= t.dot(x) * x;
  } while (t.norm() < 1e-6);
  t /= t.norm();

  NearDiagonalReport report;
  report.a_values = a_values;
  report.separations = separations;
  report.abs_pencil_dets.assign(a_values.size(), {});
  const bool same = &metric_a == &metric_b;
  for (double sep : separations) {
    const double delta = 2.0 * std::asin(0.5 * sep);
    Vec y = Vec(std::cos(delta) * x + std::sin(delta) * t);
    y /= y.norm();
    const Mat ha = mixed_hessian(metric_a, x, y, HessianMethod::jacobi).H;
    const Mat hb =
        same ? ha : mixed_hessian(metric_b, x, y, HessianMethod::jacobi).H;
    for (std::size_t i = 0; i < a_values.size(); ++i) {
      const double a = a_values[i];
      const double det = Mat((1.0 - a) * ha + a * hb).determinant();
      report.abs_pencil_dets[i].push_back(std::abs(det));
    }
  }
  for (std::size_t i = 0; i < a_values.size(); ++i) {
    // least-squares slope of log|det| against log(separation)
    double mx = 0.0, my = 0.0;
    const std::size_t m = separations.size();
    for (std::size_t j = 0; j < m; ++j) {
      mx += std::log(separations[j]);
      my += std::log(std::max(report.abs_pencil_dets[i][j], 1e-300));
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double dx = std::log(separations[j]) - mx;
      const double dy =
          std::log(std::max(report.abs_pencil_dets[i][j], 1e-300)) - my;
      sxx += dx * dx;
      sxy += dx * dy;
    }
    report.fitted_exponents.push_back(sxx > 0.0 ? sxy / sxx : 0.0);
  }
  return report;
}

NondegeneracyReport check_nondegenerate(const MetricModel& metric,
                                        const PairGrid& grid, int threads) {
  require_grid_match(metric, grid);
  NondegeneracyReport report;
  report.min_abs_det = std::numeric_limits<double>::infinity();
  std::vector<double> dets;
  dets.reserve(static_cast<std::size_t>(
      std::min<long long>(grid.node_count, 1 << 22)));
  process_pairs(
      grid, threads, 2,
      [&](const Vec& x, const Vec& y, double, double* out) {
        try {
          const DistanceJet jet = mixed_hessian(metric, x, y,
                                                HessianMethod::jacobi);
          out[0] = jet.H.determinant();
          out[1] = 1.0;
        } catch (const std::exception&) {
          out[0] = 0.0;
          out[1] = 0.0;
        }
      },
      [&](const Vec& x, const Vec& y, double, const double* out) {
        ++report.nodes;
        if (out[1] == 0.0) {
          ++report.bvp_failures;
          return;
        }
        dets.push_back(out[0]);
        if (std::abs(out[0]) < report.min_abs_det) {
          report.min_abs_det = std::abs(out[0]);
          report.argmin_x = x;
          report.argmin_y = y;
        }
      });
  double max_abs = 0.0;
  for (double d : dets) max_abs = std::max(max_abs, std::abs(d));
  report.threshold = 1e-10 * std::max(1.0, max_abs);
  for (double d : dets) {
    if (std::abs(d) <= report.threshold) ++report.degenerate;
  }
  return report;
}

}  // namespace ballgeo
