// ballgeo - quadrature over boundary-pair space: Holmes-Thompson volumes by
// independent routes, the volume-difference formula, eta-hat evaluation and
// sign scans, and near-diagonal scaling probes
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ballgeo/common.hpp"
#include "ballgeo/distance.hpp"
#include "ballgeo/metric.hpp"

namespace ballgeo {

// Product quadrature grid on S^{n-1} x S^{n-1}. Nodes are enumerated
// implicitly as (point_x[i], point_y[j]) with weight weights_x[i]*weights_y[j]
// so that large grids never materialize a pair list. Pairs with Euclidean
// chord below `band` are excluded. The second factor carries a half-step
// azimuth offset; with the required even resolution this rules out coincident
// and antipodal node pairs exactly.
struct PairGrid {
  int dim = 0;
  int resolution = 0;
  double band = 0.0;
  std::vector<Vec> points_x, points_y;
  std::vector<double> weights_x, weights_y;
  // Explicit extra pairs carrying zero quadrature weight. They never
  // contribute to integrals; sign scans visit them, which allows refining
  // a scan near features far smaller than the grid spacing.
  std::vector<std::pair<Vec, Vec>> extra_pairs;
  long long node_count = 0;  // product pairs surviving the band cut

  long long product_count() const {
    return static_cast<long long>(points_x.size()) *
           static_cast<long long>(points_y.size());
  }
};

// Per-factor schemes: n=2 uniform angles (trapezoid, spectrally accurate for
// periodic integrands); n=3 Gauss-Legendre in cos(polar) x uniform azimuth;
// n=4 Gauss-Legendre in the first polar angle (sin^2 factor folded into the
// weight) x Gauss-Legendre in cos(second polar) x uniform azimuth. Each
// angular dimension carries `resolution` nodes. Requires resolution >= 8 and
// even, band in (0, 0.5).
PairGrid build_pair_grid(int dim, int resolution, double band);

// Appends zero-weight pairs (x near +axis, y near -axis) at `rings`
// logarithmically spaced angular offsets in [min_offset, max_offset], each
// ring sampled at `per_ring` azimuths on both sides in opposite senses.
void add_cap_pairs(PairGrid& grid, const Vec& axis, int rings, int per_ring,
                   double min_offset, double max_offset);

struct VolumeReport {
  double value = 0.0;         // Richardson-extrapolated (pi route) or direct
  std::string method;         // "pi_formula" or "direct_ht"
  int dim = 0;
  int resolution = 0;
  double band = 0.0;
  double richardson_estimate = 0.0;
  double value_band = 0.0;        // nodes with chord >= band
  double value_double_band = 0.0; // nodes with chord >= 2*band
  long long nodes_used = 0;
  double seconds = 0.0;  // wall clock; excluded from canonical JSON output
};

// Holmes-Thompson volume from boundary data: the signed sum of
// w * l(x,y) * det H(x,y) over the grid, in the adapted orthonormal frame,
// normalized by 1/area(S^{n-1}) and a fixed per-dimension sign. The
// normalization is calibrated once by requiring a positive Euclidean volume;
// it then reproduces pi, 4pi/3, and pi^2/2 across dimensions with no further
// tuning. A node whose Hessian determinant vanishes, or whose two-point solve
// fails, aborts the computation rather than biasing the sum.
VolumeReport volume_via_pi(const MetricModel& metric, const PairGrid& grid,
                           int threads = 0);

// Independent route: integrates the Holmes-Thompson density over the ball by
// spherical tensor cubature (Gauss-Legendre radius x sphere grid). For
// metrics quadratic in the velocity the density is sqrt(det G(x)); for the
// quartic family it is the dual-ball volume ratio, computed once by
// support-function quadrature since the norm does not depend on position.
VolumeReport volume_direct_ht(const MetricModel& metric, int resolution,
                              int threads = 0);

// Holmes-Thompson density at x (dual unit ball volume over the Euclidean
// ball volume). Generic route for any metric; direction_resolution controls
// the support-function quadrature for non-quadratic norms.
double ht_density(const MetricModel& metric, const Vec& x,
                  int direction_resolution = 64);

// Support function of the unit ball of F(x,.) in direction theta, by a
// fixed-point iteration on the first-order optimality condition (exact in
// one step for metrics quadratic in the velocity).
double support_function(const MetricModel& metric, const Vec& x,
                        const Vec& theta);

// Integrand on the unit tangent bundle: f(position, velocity).
using TangentField = std::function<double(const Vec&, const Vec&)>;

// Integral of f over the unit tangent bundle with respect to the invariant
// flow measure, computed as sum over pairs of w * det H * integral of f
// along the connecting unit-speed geodesic. Passing a null f integrates
// f == 1 through the identical accumulation path (the inner integral then
// being the exact length), so that the result equals
// volume_via_pi * area(S^{n-1}) by construction.
double liouville_integral(const MetricModel& metric, const TangentField& f,
                          const PairGrid& grid, int threads = 0);

// Right-hand side of the volume-difference identity:
// (1/area(S^{n-1})) * sum of w * (l_b - l_a) * M(H_a, H_b), where M is the
// symmetric mixed-determinant sum equal to n * integral over a in [0,1] of
// det((1-a) H_a + a H_b), evaluated exactly by n-point Gauss-Legendre.
// Antisymmetric under swapping the metrics.
double volume_difference_rhs(const MetricModel& metric_a,
                             const MetricModel& metric_b, const PairGrid& grid,
                             int threads = 0);

// n * integral over a in [0,1] of det((1-a) Ha + a Hb), by n-point
// Gauss-Legendre; exact, since the determinant of the (n-1)x(n-1) pencil is
// a polynomial of degree n-1 in a.
double pencil_integral(const Mat& ha, const Mat& hb, int n);

// The same quantity as an explicit sum over column subsets: sum over k of
// (sum of determinants with k columns from Hb, the rest from Ha) divided by
// binom(n-1, k).
double mixed_determinant_sum(const Mat& ha, const Mat& hb, int n);

struct EtaHatSample {
  Vec x, y;
  Mat H;   // adapted-frame mixed Hessian of metric_a
  Mat Ht;  // adapted-frame mixed Hessian of metric_b
  std::vector<double> pencil_values;  // det((1-a)H + a Ht) at Gauss nodes
  double etahat_coeff = 0.0;    // sign-calibrated n * integral of the pencil
  double sum_form_coeff = 0.0;  // mixed-determinant sum over column subsets
};

// Evaluates the eta-hat coefficient at one boundary pair in both equivalent
// forms (exact polynomial integration vs. explicit mixed-determinant sum).
// The finite-difference Hessian route survives near-diameter geodesics whose
// variational transport is ill-conditioned (twisted pullbacks near the
// poles); the default jacobi route is much faster on generic pairs.
EtaHatSample etahat_eval(const MetricModel& metric_a,
                         const MetricModel& metric_b, const Vec& x, const Vec& y,
                         HessianMethod method = HessianMethod::jacobi);

struct EtaHatScanReport {
  long long nodes = 0;     // pairs visited (grid nodes + extra pairs)
  long long failures = 0;  // pairs where a two-point solve failed
  long long positive = 0;
  long long negative = 0;
  double min_coeff = 0.0;
  Vec argmin_x, argmin_y;
};

// Evaluates eta-hat at every grid node and extra pair; reports the sign
// census and the most negative coefficient. Node failures are tallied, not
// fatal: a scan is a survey, not a quadrature.
EtaHatScanReport etahat_scan(const MetricModel& metric_a,
                             const MetricModel& metric_b, const PairGrid& grid,
                             int threads = 0,
                             HessianMethod method = HessianMethod::jacobi);

struct NearDiagonalReport {
  std::vector<double> a_values;
  std::vector<double> separations;
  // abs_pencil_dets[i][j] = |det((1-a_i) H + a_i Ht)| at separation j
  std::vector<std::vector<double>> abs_pencil_dets;
  std::vector<double> fitted_exponents;  // slope of log|det| vs log(sep), per a
};

// Scaling of the pencil determinant as the pair approaches the diagonal
// along a fixed random great-circle direction.
NearDiagonalReport near_diagonal_probe(const MetricModel& metric_a,
                                       const MetricModel& metric_b,
                                       const std::vector<double>& a_values,
                                       const std::vector<double>& separations,
                                       std::uint64_t seed = 7);

struct NondegeneracyReport {
  long long nodes = 0;
  long long degenerate = 0;    // |det H| at or below threshold
  long long bvp_failures = 0;  // two-point solves that did not converge
  double min_abs_det = 0.0;
  double threshold = 0.0;
  Vec argmin_x, argmin_y;
};

// Surveys |det H| over the grid. Determinants within 1e-10 of zero relative
// to the largest observed magnitude, or failed solves, are evidence against
// the metric being simple.
NondegeneracyReport check_nondegenerate(const MetricModel& metric,
                                        const PairGrid& grid, int threads = 0);

}  // namespace ballgeo
