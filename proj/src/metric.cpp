// ballgeo - metric families: euclidean, conformal, riemannian (matrix field),
// twisted-sphere pullback, and a quartic minkowski perturbation
#include "ballgeo/metric.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include "ballgeo/counterexample.hpp"

namespace ballgeo {

namespace {

// Finite-difference steps. The x-step is shared by field gradients and
// Euler-Lagrange assembly; the v-step for tensor Hessians is relative to |w|;
// the coarser field-Hessian step balances truncation against roundoff for
// second differences.
constexpr double kStepX = 1e-5;
constexpr double kStepTensorRel = 1e-4;
constexpr double kStepFieldHess = 1e-4;
// angular step for differencing direction-only quantities on the sphere;
// smaller steps lose more to roundoff than they gain in truncation once the
// differenced matrix is ill-conditioned (sharp twists near the poles)
constexpr double kStepAngle = 1e-6;

void require_positive_definite(const Mat& g, const char* what) {
  Eigen::SelfAdjointEigenSolver<Mat> eigs(g, Eigen::EigenvaluesOnly);
  if (eigs.info() != Eigen::Success || eigs.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError(std::string(what) +
                         ": fundamental tensor is not positive definite");
  }
}

//---------------------------------------------------------------------------
// euclidean
//---------------------------------------------------------------------------

class EuclideanMetric final : public MetricModel {
 public:
  explicit EuclideanMetric(int dim) : MetricModel(MetricFamily::euclidean, dim) {}

  double norm(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    return v.norm();
  }

  Mat fundamental_tensor(const Vec& x, const Vec& w) const override {
    check_point(x);
    check_vector_dim(w);
    if (w.norm() == 0.0) throw ValidationError("fundamental tensor needs w != 0");
    return Mat::Identity(dim(), dim());
  }

  double g_base_inner(const Vec& x, const Vec& w, const Vec& v) const override {
    check_point(x);
    return w.dot(v);
  }

  Vec spray(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    return Vec::Zero(dim());
  }

  void spray_jacobians(const Vec& x, const Vec& v, Mat& jac_x,
                       Mat& jac_v) const override {
    check_point(x);
    check_vector_dim(v);
    jac_x = Mat::Zero(dim(), dim());
    jac_v = Mat::Zero(dim(), dim());
  }

 protected:
  nlohmann::ordered_json params_json() const override {
    return nlohmann::ordered_json::object();
  }
};

//---------------------------------------------------------------------------
// conformal: g = lambda(x)^2 * identity
//---------------------------------------------------------------------------

class ConformalMetric final : public MetricModel {
 public:
  ConformalMetric(int dim, FieldExpr lambda)
      : MetricModel(MetricFamily::conformal, dim), lambda_(std::move(lambda)) {}

  double norm(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    return factor(x) * v.norm();
  }

  Mat fundamental_tensor(const Vec& x, const Vec& w) const override {
    check_point(x);
    check_vector_dim(w);
    if (w.norm() == 0.0) throw ValidationError("fundamental tensor needs w != 0");
    const double f = factor(x);
    return f * f * Mat::Identity(dim(), dim());
  }

  double g_base_inner(const Vec& x, const Vec& w, const Vec& v) const override {
    check_point(x);
    const double f = factor(x);
    return f * f * w.dot(v);
  }

  // gamma'' = -2 <b, v> v + |v|^2 b with b = grad log(lambda)
  Vec spray(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    const Vec b = grad_log(x);
    return -2.0 * b.dot(v) * v + v.squaredNorm() * b;
  }

  void spray_jacobians(const Vec& x, const Vec& v, Mat& jac_x,
                       Mat& jac_v) const override {
    check_point(x);
    check_vector_dim(v);
    const int n = dim();
    const Vec b = grad_log(x);
    jac_v = -2.0 * (v * b.transpose()) - 2.0 * b.dot(v) * Mat::Identity(n, n) +
            2.0 * (b * v.transpose());
    const Mat hess = hess_log(x);
    jac_x = (v.squaredNorm() * Mat::Identity(n, n) - 2.0 * (v * v.transpose())) *
            hess;
  }

 protected:
  nlohmann::ordered_json params_json() const override {
    return {{"lambda", lambda_.source()}};
  }

 private:
  double factor(const Vec& x) const {
    const double f = lambda_.eval(x);
    if (!(f > 0.0)) {
      throw NumericalError("conformal factor is not positive at a sample point");
    }
    return f;
  }

  Vec grad_log(const Vec& x) const {
    const int n = dim();
    const double f = factor(x);
    Vec g(n);
    Vec p = x;
    for (int i = 0; i < n; ++i) {
      const double xi = p[i];
      p[i] = xi + kStepX;
      const double fp = lambda_.eval(p);
      p[i] = xi - kStepX;
      const double fm = lambda_.eval(p);
      p[i] = xi;
      g[i] = (fp - fm) / (2.0 * kStepX * f);
    }
    return g;
  }

  // Hessian of log(lambda) = (Hess lambda)/lambda - b b^T
  Mat hess_log(const Vec& x) const {
    const int n = dim();
    const double f = factor(x);
    const double h = kStepFieldHess;
    Mat hess(n, n);
    Vec p = x;
    for (int i = 0; i < n; ++i) {
      const double xi = p[i];
      p[i] = xi + h;
      const double fp = lambda_.eval(p);
      p[i] = xi - h;
      const double fm = lambda_.eval(p);
      p[i] = xi;
      hess(i, i) = (fp - 2.0 * f + fm) / (h * h);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double xi = p[i];
        const double xj = p[j];
        p[i] = xi + h; p[j] = xj + h;
        const double fpp = lambda_.eval(p);
        p[j] = xj - h;
        const double fpm = lambda_.eval(p);
        p[i] = xi - h; p[j] = xj + h;
        const double fmp = lambda_.eval(p);
        p[j] = xj - h;
        const double fmm = lambda_.eval(p);
        p[i] = xi; p[j] = xj;
        hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      }
    }
    const Vec b = grad_log(x);
    return hess / f - b * b.transpose();
  }

  FieldExpr lambda_;
};

//---------------------------------------------------------------------------
// riemannian: g = G(x), entries given by field expressions
//---------------------------------------------------------------------------

class RiemannianMetric final : public MetricModel {
 public:
  RiemannianMetric(int dim, std::vector<FieldExpr> entries)
      : MetricModel(MetricFamily::riemannian, dim),
        entries_(std::move(entries)) {}

  double norm(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    const double q = v.dot(matrix_at(x) * v);
    if (q < 0.0) {
      throw NumericalError("riemannian matrix field is not positive definite");
    }
    return std::sqrt(q);
  }

  Mat fundamental_tensor(const Vec& x, const Vec& w) const override {
    check_point(x);
    check_vector_dim(w);
    if (w.norm() == 0.0) throw ValidationError("fundamental tensor needs w != 0");
    Mat g = matrix_at(x);
    require_positive_definite(g, "riemannian");
    return g;
  }

  double g_base_inner(const Vec& x, const Vec& w, const Vec& v) const override {
    check_point(x);
    return w.dot(matrix_at(x) * v);
  }

  // gamma''_l = -Gamma^l_ij v^i v^j with Christoffel symbols assembled from
  // central differences of the matrix field
  Vec spray(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    const int n = dim();
    std::vector<Mat> dg(n);
    Vec p = x;
    for (int k = 0; k < n; ++k) {
      const double xk = p[k];
      p[k] = xk + kStepX;
      const Mat gp = matrix_at(p);
      p[k] = xk - kStepX;
      const Mat gm = matrix_at(p);
      p[k] = xk;
      dg[k] = (gp - gm) / (2.0 * kStepX);
    }
    Vec lower(n);
    Vec sum = Vec::Zero(n);
    for (int i = 0; i < n; ++i) sum += v[i] * (dg[i] * v);
    for (int k = 0; k < n; ++k) {
      lower[k] = sum[k] - 0.5 * v.dot(dg[k] * v);
    }
    const Mat g = matrix_at(x);
    return -g.llt().solve(lower);
  }

 protected:
  nlohmann::ordered_json params_json() const override {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const FieldExpr& e : entries_) entries.push_back(e.source());
    return {{"g", entries}};
  }

 private:
  Mat matrix_at(const Vec& x) const {
    const int n = dim();
    Mat g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        g(i, j) = entries_[static_cast<std::size_t>(i) * n + j].eval(x);
      }
    }
    return 0.5 * (g + g.transpose());
  }

  std::vector<FieldExpr> entries_;
};

//---------------------------------------------------------------------------
// pullback_flat: F(x, v) = r * |Dphi(x) v| for the twisted-sphere ball map
//---------------------------------------------------------------------------

class PullbackFlatMetric final : public MetricModel {
 public:
  explicit PullbackFlatMetric(const CtexParams& params)
      : MetricModel(MetricFamily::pullback_flat, 3), params_(params) {}

  double norm(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    return params_.r * (ctex_dphi_ball(params_, x) * v).norm();
  }

  Mat fundamental_tensor(const Vec& x, const Vec& w) const override {
    check_point(x);
    check_vector_dim(w);
    if (w.norm() == 0.0) throw ValidationError("fundamental tensor needs w != 0");
    const Mat d = ctex_dphi_ball(params_, x);
    return params_.r * params_.r * (d.transpose() * d);
  }

  double g_base_inner(const Vec& x, const Vec& w, const Vec& v) const override {
    check_point(x);
    const Mat d = ctex_dphi_ball(params_, x);
    return params_.r * params_.r * (d * w).dot(d * v);
  }

  // the image curve phi(gamma) is affine, so
  // gamma'' = -Dphi^{-1} D2phi(v, v). Dphi depends only on the direction
  // x/|x| (phi is 1-homogeneous), so its derivative along v is an angular
  // derivative scaled by the exact tangential rate |P v|/|x|; differencing
  // with a fixed angular step keeps the truncation error independent of |x|,
  // which matters for near-diameter chords passing close to the center
  Vec spray(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    const double vn = v.norm();
    if (vn == 0.0) return Vec::Zero(3);
    const double nx = x.norm();
    if (nx < 1e-300) {
      throw NumericalError("pullback spray undefined at the origin");
    }
    const Vec u = x / nx;
    Vec w = v - u * u.dot(v);
    const double wn = w.norm();
    Vec accel = Vec::Zero(3);
    if (wn <= vn * 1e-16) return accel;  // radial motion: Dphi is constant
    const Vec what = w / wn;
    Vec up = u + kStepAngle * what;
    up /= up.norm();
    Vec um = u - kStepAngle * what;
    um /= um.norm();
    const Mat dp = ctex_dphi_ball(params_, up);
    const Mat dm = ctex_dphi_ball(params_, um);
    const Vec second = ((dp - dm) / (2.0 * kStepAngle)) * v * (wn / nx);
    const Mat d = ctex_dphi_ball(params_, x);
    Eigen::Matrix3d d3 = d;
    Eigen::Vector3d rhs = second;
    Eigen::Vector3d out = d3.partialPivLu().solve(rhs);
    accel = -out;
    return accel;
  }

  // variational coefficients by central differences, with the x-step scaled
  // to |x|: the spray is (-1)-homogeneous in x, so a relative step keeps the
  // angular increment (and hence the truncation error) uniform along
  // near-center passages
  void spray_jacobians(const Vec& x, const Vec& v, Mat& jac_x,
                       Mat& jac_v) const override {
    check_point(x);
    check_vector_dim(v);
    jac_x.resize(3, 3);
    jac_v.resize(3, 3);
    const double hx = kStepX * std::max(x.norm(), 1e-8);
    Vec q = x;
    for (int j = 0; j < 3; ++j) {
      const double xj = q[j];
      q[j] = xj + hx;
      const Vec sp = spray(q, v);
      q[j] = xj - hx;
      const Vec sm = spray(q, v);
      q[j] = xj;
      jac_x.col(j) = (sp - sm) / (2.0 * hx);
    }
    const double hv = kStepX * std::max(1.0, v.norm());
    Vec u = v;
    for (int j = 0; j < 3; ++j) {
      const double vj = u[j];
      u[j] = vj + hv;
      const Vec sp = spray(x, u);
      u[j] = vj - hv;
      const Vec sm = spray(x, u);
      u[j] = vj;
      jac_v.col(j) = (sp - sm) / (2.0 * hv);
    }
  }

  const CtexParams& params() const { return params_; }

 protected:
  nlohmann::ordered_json params_json() const override {
    return {{"s", params_.s}, {"r", params_.r}};
  }

 private:
  CtexParams params_;
};

//---------------------------------------------------------------------------
// minkowski: F(v) = ((sum v_i^2)^2 + epsilon * sum v_i^4)^(1/4)
//---------------------------------------------------------------------------

class MinkowskiMetric final : public MetricModel {
 public:
  MinkowskiMetric(int dim, double epsilon)
      : MetricModel(MetricFamily::minkowski, dim), epsilon_(epsilon) {}

  double norm(const Vec& x, const Vec& v) const override {
    check_point(x);
    check_vector_dim(v);
    const double q = v.squaredNorm();
    double quartic = 0.0;
    for (int i = 0; i < dim(); ++i) quartic += v[i] * v[i] * v[i] * v[i];
    return std::pow(q * q + epsilon_ * quartic, 0.25);
  }

  Mat fundamental_tensor(const Vec& x, const Vec& w) const override {
    Mat g = MetricModel::fundamental_tensor(x, w);
    require_positive_definite(g, "minkowski");
    return g;
  }

  // analytic: g_w(w, v) = sum_k (|w|^2 w_k + epsilon w_k^3) v_k / F(w)^2
  double g_base_inner(const Vec& x, const Vec& w, const Vec& v) const override {
    check_point(x);
    const double f = norm(x, w);
    if (f == 0.0) throw ValidationError("g_base_inner needs w != 0");
    const double q = w.squaredNorm();
    double acc = 0.0;
    for (int i = 0; i < dim(); ++i) {
      acc += (q * w[i] + epsilon_ * w[i] * w[i] * w[i]) * v[i];
    }
    return acc / (f * f);
  }

 protected:
  nlohmann::ordered_json params_json() const override {
    return {{"epsilon", epsilon_}};
  }

 private:
  double epsilon_;
};

}  // namespace

//---------------------------------------------------------------------------
// base-class defaults
//---------------------------------------------------------------------------

void MetricModel::check_point(const Vec& x) const {
  if (x.size() != dim_) {
    throw ValidationError("point dimension does not match metric dimension");
  }
  // All families extend smoothly beyond the sphere; a generous margin keeps
  // adaptive trial steps (which may momentarily leave the ball) total while
  // still rejecting clearly out-of-domain queries.
  if (x.norm() > 4.0) {
    throw ValidationError("point lies far outside the closed unit ball");
  }
}

void MetricModel::check_vector_dim(const Vec& v) const {
  if (v.size() != dim_) {
    throw ValidationError("vector dimension does not match metric dimension");
  }
}

Mat MetricModel::fundamental_tensor(const Vec& x, const Vec& w) const {
  check_point(x);
  check_vector_dim(w);
  const double wn = w.norm();
  if (wn == 0.0) throw ValidationError("fundamental tensor needs w != 0");
  const double h = kStepTensorRel * wn;
  const int n = dim();
  auto energy = [&](const Vec& v) {
    const double f = norm(x, v);
    return 0.5 * f * f;
  };
  const double e0 = energy(w);
  Mat g(n, n);
  Vec p = w;
  for (int i = 0; i < n; ++i) {
    const double wi = p[i];
    p[i] = wi + h;
    const double ep = energy(p);
    p[i] = wi - h;
    const double em = energy(p);
    p[i] = wi;
    g(i, i) = (ep - 2.0 * e0 + em) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double wi = p[i];
      const double wj = p[j];
      p[i] = wi + h; p[j] = wj + h;
      const double epp = energy(p);
      p[j] = wj - h;
      const double epm = energy(p);
      p[i] = wi - h; p[j] = wj + h;
      const double emp = energy(p);
      p[j] = wj - h;
      const double emm = energy(p);
      p[i] = wi; p[j] = wj;
      g(i, j) = g(j, i) = (epp - epm - emp + emm) / (4.0 * h * h);
    }
  }
  return 0.5 * (g + g.transpose());
}

double MetricModel::g_base_inner(const Vec& x, const Vec& w, const Vec& v) const {
  return w.dot(fundamental_tensor(x, w) * v);
}

Vec MetricModel::spray(const Vec& x, const Vec& v) const {
  check_point(x);
  check_vector_dim(v);
  const int n = dim();
  const double vn = v.norm();
  if (vn == 0.0) return Vec::Zero(n);
  const double hv = kStepTensorRel * vn;
  auto energy = [&](const Vec& q, const Vec& u) {
    const double f = norm(q, u);
    return 0.5 * f * f;
  };
  // conjugate momentum p_k = d(F^2/2)/dv_k by central differences
  auto momentum = [&](const Vec& q) {
    Vec m(n);
    Vec u = v;
    for (int k = 0; k < n; ++k) {
      const double vk = u[k];
      u[k] = vk + hv;
      const double ep = energy(q, u);
      u[k] = vk - hv;
      const double em = energy(q, u);
      u[k] = vk;
      m[k] = (ep - em) / (2.0 * hv);
    }
    return m;
  };
  // rhs_k = d(F^2/2)/dx_k - sum_j v_j dp_k/dx_j, then gamma'' = g^{-1} rhs
  Vec rhs(n);
  Vec grad_x(n);
  Mat dp_dx(n, n);
  Vec q = x;
  for (int j = 0; j < n; ++j) {
    const double xj = q[j];
    q[j] = xj + kStepX;
    const Vec mp = momentum(q);
    const double ep = energy(q, v);
    q[j] = xj - kStepX;
    const Vec mm = momentum(q);
    const double em = energy(q, v);
    q[j] = xj;
    dp_dx.col(j) = (mp - mm) / (2.0 * kStepX);
    grad_x[j] = (ep - em) / (2.0 * kStepX);
  }
  rhs = grad_x - dp_dx * v;
  const Mat g = fundamental_tensor(x, v);
  Mat lhs = g;
  Eigen::LLT<Mat> llt(lhs);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("singular fundamental tensor in spray assembly");
  }
  return llt.solve(rhs);
}

void MetricModel::spray_jacobians(const Vec& x, const Vec& v, Mat& jac_x,
                                  Mat& jac_v) const {
  check_point(x);
  check_vector_dim(v);
  const int n = dim();
  jac_x.resize(n, n);
  jac_v.resize(n, n);
  Vec q = x;
  for (int j = 0; j < n; ++j) {
    const double xj = q[j];
    q[j] = xj + kStepX;
    const Vec sp = spray(q, v);
    q[j] = xj - kStepX;
    const Vec sm = spray(q, v);
    q[j] = xj;
    jac_x.col(j) = (sp - sm) / (2.0 * kStepX);
  }
  Vec u = v;
  for (int j = 0; j < n; ++j) {
    const double vj = u[j];
    u[j] = vj + kStepX;
    const Vec sp = spray(x, u);
    u[j] = vj - kStepX;
    const Vec sm = spray(x, u);
    u[j] = vj;
    jac_v.col(j) = (sp - sm) / (2.0 * kStepX);
  }
}

std::string family_name(MetricFamily family) {
  switch (family) {
    case MetricFamily::euclidean: return "euclidean";
    case MetricFamily::conformal: return "conformal";
    case MetricFamily::riemannian: return "riemannian";
    case MetricFamily::pullback_flat: return "pullback_flat";
    case MetricFamily::minkowski: return "minkowski";
  }
  throw ValidationError("unknown metric family");
}

nlohmann::ordered_json MetricModel::to_json() const {
  nlohmann::ordered_json out;
  out["family"] = family_name(family_);
  out["dim"] = dim_;
  out["params"] = params_json();
  return out;
}

//---------------------------------------------------------------------------
// factories and JSON parsing
//---------------------------------------------------------------------------

namespace {

void check_dim(int dim) {
  if (dim < 2 || dim > 4) {
    throw ValidationError("metric dimension must be 2, 3, or 4");
  }
}

}  // namespace

std::unique_ptr<MetricModel> make_euclidean(int dim) {
  check_dim(dim);
  return std::make_unique<EuclideanMetric>(dim);
}

std::unique_ptr<MetricModel> make_conformal(int dim, FieldExpr lambda) {
  check_dim(dim);
  if (lambda.dim() != dim) {
    throw ValidationError("conformal factor dimension does not match metric");
  }
  return std::make_unique<ConformalMetric>(dim, std::move(lambda));
}

std::unique_ptr<MetricModel> make_riemannian(int dim,
                                             std::vector<FieldExpr> g_entries) {
  check_dim(dim);
  if (g_entries.size() != static_cast<std::size_t>(dim) * dim) {
    throw ValidationError("riemannian matrix field needs dim*dim entries");
  }
  for (const FieldExpr& e : g_entries) {
    if (e.dim() != dim) {
      throw ValidationError("matrix entry dimension does not match metric");
    }
  }
  return std::make_unique<RiemannianMetric>(dim, std::move(g_entries));
}

std::unique_ptr<MetricModel> make_pullback_flat(double s, double r) {
  return std::make_unique<PullbackFlatMetric>(CtexParams(s, r));
}

std::unique_ptr<MetricModel> make_minkowski(int dim, double epsilon) {
  check_dim(dim);
  if (!(epsilon >= 0.0 && epsilon <= 0.2)) {
    throw ValidationError("minkowski epsilon must lie in [0, 0.2]");
  }
  return std::make_unique<MinkowskiMetric>(dim, epsilon);
}

std::unique_ptr<MetricModel> metric_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw ValidationError("metric spec must be an object");
  if (!spec.contains("family") || !spec["family"].is_string()) {
    throw ValidationError("metric spec needs a string \"family\" field");
  }
  if (!spec.contains("dim") || !spec["dim"].is_number_integer()) {
    throw ValidationError("metric spec needs an integer \"dim\" field");
  }
  const std::string family = spec["family"].get<std::string>();
  const int dim = spec["dim"].get<int>();
  check_dim(dim);
  const nlohmann::json params = spec.contains("params")
                                    ? spec["params"]
                                    : nlohmann::json::object();
  if (!params.is_object()) {
    throw ValidationError("metric \"params\" must be an object");
  }

  auto need_number = [&](const char* key) {
    if (!params.contains(key) || !params[key].is_number()) {
      throw ValidationError(std::string("metric params need a numeric \"") +
                            key + "\" field");
    }
    return params[key].get<double>();
  };

  if (family == "euclidean") {
    return make_euclidean(dim);
  }
  if (family == "conformal") {
    if (!params.contains("lambda") || !params["lambda"].is_string()) {
      throw ValidationError("conformal params need a string \"lambda\" field");
    }
    return make_conformal(
        dim, FieldExpr::parse(params["lambda"].get<std::string>(), dim));
  }
  if (family == "riemannian") {
    if (!params.contains("g") || !params["g"].is_array()) {
      throw ValidationError("riemannian params need an array \"g\" field");
    }
    std::vector<FieldExpr> entries;
    for (const auto& item : params["g"]) {
      if (!item.is_string()) {
        throw ValidationError("riemannian \"g\" entries must be strings");
      }
      entries.push_back(FieldExpr::parse(item.get<std::string>(), dim));
    }
    return make_riemannian(dim, std::move(entries));
  }
  if (family == "pullback_flat") {
    if (dim != 3) {
      throw ValidationError("pullback_flat is defined in dimension 3 only");
    }
    const double s = need_number("s");
    const double r = params.contains("r") ? need_number("r") : 0.0;
    return make_pullback_flat(s, r);
  }
  if (family == "minkowski") {
    return make_minkowski(dim, need_number("epsilon"));
  }
  throw ValidationError("unknown metric family \"" + family + "\"");
}

std::unique_ptr<MetricModel> metric_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open metric spec file: " + path);
  nlohmann::json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::parse_error& err) {
    throw ValidationError("metric spec JSON parse error: " +
                          std::string(err.what()));
  }
  return metric_from_json(spec);
}

//---------------------------------------------------------------------------
// norm-equivalence probe
//---------------------------------------------------------------------------

BoundsReport bounds_probe(const MetricModel& metric, int samples,
                          std::uint64_t seed) {
  if (samples < 100) {
    throw ValidationError("bounds_probe needs at least 100 samples");
  }
  Rng rng(seed);
  const int n = metric.dim();
  double max_ratio = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    // anchor the first base point at the origin, where radial-bump conformal
    // factors attain their extremes
    const Vec x = (k == 0) ? Vec(Vec::Zero(n)) : rng.ball_point(n);
    const Vec u = rng.unit_vector(n);
    const Vec v = rng.unit_vector(n);
    const Mat g = metric.fundamental_tensor(x, u);
    const double ratio = std::sqrt(v.dot(g * v));
    max_ratio = std::max(max_ratio, ratio);
    min_ratio = std::min(min_ratio, ratio);
  }
  BoundsReport report;
  report.sample_count = samples;
  report.max_ratio = max_ratio;
  report.min_ratio = min_ratio;
  report.C1 = std::max({1.0, max_ratio, 1.0 / min_ratio});
  return report;
}

}  // namespace ballgeo
