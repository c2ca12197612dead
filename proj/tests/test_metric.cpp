// ballgeo - metric family tests: norms, fundamental tensors, sprays,
// homogeneity/reversibility invariants, JSON round-trips, bounds probe
#include "doctest.h"

#include <cmath>

#include "ballgeo/common.hpp"
#include "ballgeo/fieldexpr.hpp"
#include "ballgeo/metric.hpp"

using namespace ballgeo;

namespace {

Vec make_vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec make_vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

std::unique_ptr<MetricModel> conformal_bump(int dim, double amp) {
  std::string r2 = "x1^2";
  for (int i = 2; i <= dim; ++i) r2 += "+x" + std::to_string(i) + "^2";
  const std::string src = "1 + " + std::to_string(amp) + "*exp(-(" + r2 + "))";
  return make_conformal(dim, FieldExpr::parse(src, dim));
}

std::vector<std::unique_ptr<MetricModel>> all_test_metrics() {
  std::vector<std::unique_ptr<MetricModel>> metrics;
  metrics.push_back(make_euclidean(2));
  metrics.push_back(make_euclidean(3));
  metrics.push_back(make_euclidean(4));
  metrics.push_back(conformal_bump(2, 0.05));
  metrics.push_back(conformal_bump(3, 0.05));
  metrics.push_back(make_riemannian(
      2, {FieldExpr::parse("1 + 0.1*x1^2", 2), FieldExpr::parse("0.05*x1*x2", 2),
          FieldExpr::parse("0.05*x1*x2", 2), FieldExpr::parse("1 + 0.1*x2^2", 2)}));
  metrics.push_back(make_pullback_flat(2.0));
  metrics.push_back(make_minkowski(2, 0.1));
  metrics.push_back(make_minkowski(3, 0.1));
  metrics.push_back(make_minkowski(4, 0.2));
  return metrics;
}

bool is_finite_difference_family(const MetricModel& m) {
  return m.family() == MetricFamily::minkowski;
}

}  // namespace

//---------------------------------------------------------------------------
// norms
//---------------------------------------------------------------------------

TEST_CASE("euclidean norm of (3,4) is 5") {
  auto m = make_euclidean(2);
  CHECK(m->norm(make_vec2(0.2, -0.1), make_vec2(3, 4)) == doctest::Approx(5.0));
}

TEST_CASE("constant conformal factor scales the norm") {
  auto m = make_conformal(2, FieldExpr::parse("2", 2));
  CHECK(m->norm(make_vec2(0.3, 0.1), make_vec2(3, 4)) == doctest::Approx(10.0));
}

TEST_CASE("minkowski with epsilon 0 degenerates to euclidean") {
  auto mink = make_minkowski(3, 0.0);
  auto eucl = make_euclidean(3);
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const Vec x = rng.ball_point(3);
    const Vec v = 3.0 * rng.unit_vector(3);
    CHECK(mink->norm(x, v) == doctest::Approx(eucl->norm(x, v)).epsilon(1e-14));
  }
}

TEST_CASE("norm rejects points far outside the ball") {
  auto m = make_euclidean(2);
  CHECK_THROWS_AS(m->norm(make_vec2(5.0, 0.0), make_vec2(1, 0)),
                  ValidationError);
}

TEST_CASE("homogeneity and reversibility across all families") {
  Rng rng(991);
  for (const auto& m : all_test_metrics()) {
    const int n = m->dim();
    for (int k = 0; k < 50; ++k) {
      const Vec x = 0.9 * rng.ball_point(n);
      const Vec v = rng.unit_vector(n) * rng.uniform(0.1, 3.0);
      const double f = m->norm(x, v);
      CHECK(f > 0.0);
      CHECK(m->norm(x, Vec(-v)) == f);  // even in v, exactly
      const double t = rng.uniform(-2.0, 2.0);
      if (std::abs(t) < 0.05) continue;
      CHECK(std::abs(m->norm(x, Vec(t * v)) - std::abs(t) * f) <= 1e-12 * f);
    }
  }
}

//---------------------------------------------------------------------------
// fundamental tensor
//---------------------------------------------------------------------------

TEST_CASE("euclidean tensor is the identity") {
  auto m = make_euclidean(3);
  const Mat g = m->fundamental_tensor(make_vec3(0.1, 0.2, -0.3),
                                      make_vec3(0.5, -1.0, 2.0));
  CHECK((g - Mat::Identity(3, 3)).norm() == doctest::Approx(0.0));
}

TEST_CASE("conformal tensor is lambda^2 times the identity") {
  auto m = conformal_bump(2, 0.05);
  const Vec x = make_vec2(0.0, 0.0);
  const Mat g = m->fundamental_tensor(x, make_vec2(1.0, 0.4));
  CHECK(g(0, 0) == doctest::Approx(1.05 * 1.05).epsilon(1e-14));
  CHECK(g(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("tensor contracted twice with its base vector gives F^2") {
  Rng rng(313);
  for (const auto& m : all_test_metrics()) {
    const int n = m->dim();
    const double tol = is_finite_difference_family(*m) ? 1e-5 : 1e-8;
    for (int k = 0; k < 25; ++k) {
      const Vec x = 0.9 * rng.ball_point(n);
      const Vec w = rng.unit_vector(n) * rng.uniform(0.3, 2.0);
      const double f2 = std::pow(m->norm(x, w), 2);
      const Mat g = m->fundamental_tensor(x, w);
      CHECK(w.dot(g * w) == doctest::Approx(f2).epsilon(tol));
      CHECK(m->g_base_inner(x, w, w) == doctest::Approx(f2).epsilon(tol));
    }
  }
}

TEST_CASE("tensor is scale-invariant in the base vector") {
  Rng rng(41);
  for (const auto& m : all_test_metrics()) {
    const int n = m->dim();
    const Vec x = 0.5 * rng.ball_point(n);
    const Vec w = rng.unit_vector(n);
    const Mat g = m->fundamental_tensor(x, w);
    for (double t : {0.5, -2.0}) {
      const Mat gt = m->fundamental_tensor(x, Vec(t * w));
      const double tol = is_finite_difference_family(*m) ? 1e-6 : 1e-12;
      CHECK((gt - g).norm() <= tol * g.norm());
    }
  }
}

TEST_CASE("tensor is positive definite at sampled base vectors") {
  Rng rng(577);
  for (const auto& m : all_test_metrics()) {
    const int n = m->dim();
    for (int k = 0; k < 10; ++k) {
      const Vec x = 0.9 * rng.ball_point(n);
      const Vec w = rng.unit_vector(n);
      Eigen::SelfAdjointEigenSolver<Mat> eigs(m->fundamental_tensor(x, w));
      CHECK(eigs.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("tensor with zero base vector is rejected") {
  auto m = make_euclidean(2);
  CHECK_THROWS_AS(m->fundamental_tensor(make_vec2(0, 0), make_vec2(0, 0)),
                  ValidationError);
}

//---------------------------------------------------------------------------
// spray
//---------------------------------------------------------------------------

TEST_CASE("euclidean and minkowski sprays vanish") {
  Rng rng(11);
  for (int dim : {2, 3, 4}) {
    auto eucl = make_euclidean(dim);
    auto mink = make_minkowski(dim, 0.15);
    for (int k = 0; k < 5; ++k) {
      const Vec x = 0.8 * rng.ball_point(dim);
      const Vec v = rng.unit_vector(dim);
      CHECK(eucl->spray(x, v).norm() == 0.0);
      // x-independent norm: Euler-Lagrange differences cancel exactly
      CHECK(mink->spray(x, v).norm() == 0.0);
    }
  }
}

TEST_CASE("spray is 2-homogeneous in the velocity") {
  Rng rng(2025);
  for (const auto& m : all_test_metrics()) {
    const int n = m->dim();
    const Vec x = 0.6 * rng.ball_point(n);
    const Vec v = rng.unit_vector(n);
    const Vec base = m->spray(x, v);
    for (double t : {0.5, 2.0}) {
      const Vec scaled = m->spray(x, Vec(t * v));
      CHECK((scaled - t * t * base).norm() <= 1e-6 * (1.0 + base.norm()));
    }
  }
}

TEST_CASE("analytic conformal spray matches the riemannian assembly") {
  // the same metric entered through two code paths: closed-form conformal
  // coefficients vs Christoffel symbols of the matrix field lambda^2 * I
  const std::string lam = "1 + 0.05*exp(-(x1^2+x2^2))";
  auto conf = make_conformal(2, FieldExpr::parse(lam, 2));
  auto riem = make_riemannian(
      2, {FieldExpr::parse("(" + lam + ")^2", 2), FieldExpr::parse("0", 2),
          FieldExpr::parse("0", 2), FieldExpr::parse("(" + lam + ")^2", 2)});
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const Vec x = 0.9 * rng.ball_point(2);
    const Vec v = rng.unit_vector(2);
    CHECK((conf->spray(x, v) - riem->spray(x, v)).norm() <= 1e-6);
  }
}

TEST_CASE("conformal spray jacobians match finite differences") {
  auto conf = conformal_bump(2, 0.05);
  Rng rng(17);
  const Vec x = make_vec2(0.31, -0.22);
  const Vec v = rng.unit_vector(2);
  Mat jx, jv;
  conf->spray_jacobians(x, v, jx, jv);

  const double h = 1e-6;
  Mat fd_x(2, 2), fd_v(2, 2);
  for (int j = 0; j < 2; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    fd_x.col(j) = (conf->spray(xp, v) - conf->spray(xm, v)) / (2.0 * h);
    Vec vp = v, vm = v;
    vp[j] += h;
    vm[j] -= h;
    fd_v.col(j) = (conf->spray(x, vp) - conf->spray(x, vm)) / (2.0 * h);
  }
  CHECK((jx - fd_x).norm() <= 2e-4);
  CHECK((jv - fd_v).norm() <= 1e-6);
}

//---------------------------------------------------------------------------
// bounds probe
//---------------------------------------------------------------------------

TEST_CASE("bounds probe on euclidean reports C1 = 1") {
  auto m = make_euclidean(3);
  const BoundsReport report = bounds_probe(*m, 200);
  CHECK(report.C1 == doctest::Approx(1.0));
  CHECK(report.sample_count == 200);
}

TEST_CASE("bounds probe attains the conformal supremum at the origin") {
  auto m = conformal_bump(2, 0.1);  // lambda in [1, 1.1], max at 0
  const BoundsReport report = bounds_probe(*m, 500);
  CHECK(std::abs(report.C1 - 1.1) <= 1e-6);
}

TEST_CASE("bounds probe on minkowski stays above 1") {
  auto m = make_minkowski(3, 0.1);
  const BoundsReport report = bounds_probe(*m, 300);
  CHECK(report.C1 >= 1.0);
  CHECK(report.max_ratio <= 1.2);
}

TEST_CASE("bounds probe rejects tiny sample counts") {
  auto m = make_euclidean(2);
  CHECK_THROWS_AS(bounds_probe(*m, 10), ValidationError);
}

//---------------------------------------------------------------------------
// JSON schema
//---------------------------------------------------------------------------

TEST_CASE("metric JSON round-trips for every family") {
  for (const auto& m : all_test_metrics()) {
    const nlohmann::ordered_json spec = m->to_json();
    auto back = metric_from_json(spec);
    CHECK(back->to_json() == spec);
    Rng rng(99);
    const Vec x = 0.7 * rng.ball_point(m->dim());
    const Vec v = rng.unit_vector(m->dim());
    CHECK(back->norm(x, v) == m->norm(x, v));
  }
}

TEST_CASE("metric JSON validation rejects malformed specs") {
  using nlohmann::json;
  CHECK_THROWS_AS(metric_from_json(json{{"family", "moebius"}, {"dim", 2}}),
                  ValidationError);
  CHECK_THROWS_AS(metric_from_json(json{{"family", "euclidean"}, {"dim", 5}}),
                  ValidationError);
  CHECK_THROWS_AS(
      metric_from_json(json{{"family", "minkowski"},
                            {"dim", 2},
                            {"params", {{"epsilon", 0.5}}}}),
      ValidationError);
  CHECK_THROWS_AS(
      metric_from_json(json{{"family", "pullback_flat"},
                            {"dim", 2},
                            {"params", {{"s", 2.0}}}}),
      ValidationError);
  CHECK_THROWS_AS(
      metric_from_json(json{{"family", "riemannian"},
                            {"dim", 2},
                            {"params", {{"g", {"1", "0", "0"}}}}}),
      ValidationError);
  CHECK_THROWS_AS(
      metric_from_json(json{{"family", "conformal"}, {"dim", 2}}),
      ValidationError);
}
