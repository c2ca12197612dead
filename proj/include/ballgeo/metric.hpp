// ballgeo - reversible Finsler metrics on the closed unit ball: the norm F,
// the fundamental tensor g_w, and the geodesic spray for five built-in families
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "ballgeo/common.hpp"
#include "ballgeo/fieldexpr.hpp"

namespace ballgeo {

enum class MetricFamily {
  euclidean,
  conformal,
  riemannian,
  pullback_flat,
  minkowski,
};

std::string family_name(MetricFamily family);

// A reversible Finsler metric on the closed unit ball. Instances are immutable
// and all operations are pure, so a single model may be evaluated from many
// threads concurrently.
class MetricModel {
 public:
  virtual ~MetricModel() = default;

  MetricFamily family() const { return family_; }
  int dim() const { return dim_; }

  // F(x, v): positively 1-homogeneous and even in v, zero only at v = 0.
  // x must lie in the closed unit ball (a small numerical margin is allowed
  // because adaptive integration may momentarily step just outside).
  virtual double norm(const Vec& x, const Vec& v) const = 0;

  // Fundamental tensor g_w at (x, w != 0): the v-Hessian of F^2/2. Analytic
  // for all families except minkowski, which uses symmetrized second-order
  // central differences with step 1e-4 * |w|. Positive definiteness is
  // verified per call for the families where it depends on parameters.
  virtual Mat fundamental_tensor(const Vec& x, const Vec& w) const;

  // g_w(w, v), i.e. the tensor contracted with its own base vector. By Euler
  // homogeneity this equals 1/2 <grad_v F^2(w), v>; minkowski overrides with
  // the analytic gradient to avoid finite-difference noise in derivative
  // quantities built on top of it.
  virtual double g_base_inner(const Vec& x, const Vec& w, const Vec& v) const;

  // Right-hand side of the geodesic equation: gamma'' = spray(gamma, gamma').
  // Homogeneous of degree 2 in v; F(gamma, gamma') is constant on solutions.
  // The default assembles the Euler-Lagrange equations of F^2/2 by central
  // finite differences in x (step 1e-5) and solves with the fundamental
  // tensor; families with closed-form coefficients override.
  virtual Vec spray(const Vec& x, const Vec& v) const;

  // Partial derivatives of spray with respect to x and v, used by the
  // variational (Jacobi) equation. Default: central differences, step 1e-5.
  virtual void spray_jacobians(const Vec& x, const Vec& v, Mat& jac_x,
                               Mat& jac_v) const;

  // {"family": ..., "dim": ..., "params": {...}}; round-trips through
  // metric_from_json.
  nlohmann::ordered_json to_json() const;

 protected:
  MetricModel(MetricFamily family, int dim) : family_(family), dim_(dim) {}

  virtual nlohmann::ordered_json params_json() const = 0;

  void check_point(const Vec& x) const;
  void check_vector_dim(const Vec& v) const;

 private:
  MetricFamily family_;
  int dim_;
};

std::unique_ptr<MetricModel> make_euclidean(int dim);
std::unique_ptr<MetricModel> make_conformal(int dim, FieldExpr lambda);
std::unique_ptr<MetricModel> make_riemannian(int dim,
                                             std::vector<FieldExpr> g_entries);
// Twisted-sphere pullback of the flat metric, scaled by r; dimension 3 only.
// r <= 0 selects the default scale 10 * sqrt(s^2 + 4).
std::unique_ptr<MetricModel> make_pullback_flat(double s, double r = 0.0);
// F(v) = ((sum v_i^2)^2 + epsilon * sum v_i^4)^(1/4); epsilon in [0, 0.2].
std::unique_ptr<MetricModel> make_minkowski(int dim, double epsilon);

// Parses {"family", "dim", "params"} with per-family parameter fields:
// "lambda" (conformal), "g" (riemannian, row-major expression array),
// "s"/"r" (pullback_flat), "epsilon" (minkowski).
std::unique_ptr<MetricModel> metric_from_json(const nlohmann::json& spec);
std::unique_ptr<MetricModel> metric_from_file(const std::string& path);

// Sampled estimate of the uniform norm-equivalence constant C1 >= 1 with
// (1/C1^2) |v|^2 <= g_u(v, v) <= C1^2 |v|^2 on all samples. The origin is
// always included among the sampled base points.
struct BoundsReport {
  double C1;
  int sample_count;
  double max_ratio;
  double min_ratio;
};

BoundsReport bounds_probe(const MetricModel& metric, int samples,
                          std::uint64_t seed = 12345);

}  // namespace ballgeo
