// ballgeo - shared numerical utilities: small dense types, error taxonomy,
// deterministic RNG, compensated summation, Gauss-Legendre rules, thread pool
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ballgeo {

// All ambient dimensions are in {2,3,4}; geodesic phase space is at most 8
// doubles. Fixed-capacity Eigen types keep every hot-loop object on the stack.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

inline constexpr double kPi = 3.14159265358979323846;

// Thrown for malformed input: bad expressions, bad metric specs, bad grid or
// CLI parameters, violated preconditions. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a computation fails numerically: boundary-value non-convergence,
// energy drift, singular linearization, domain errors during field evaluation.
// CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

//---------------------------------------------------------------------------
// Deterministic RNG
//
// SplitMix64 core with hand-rolled uniform/normal/sphere transforms so that
// sampled probes are reproducible bit-for-bit for a given seed, independent
// of the standard library's distribution implementations.
//---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  // uniformly distributed point on the unit sphere S^{dim-1}
  Vec unit_vector(int dim) {
    Vec v(dim);
    double n2 = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      n2 = v.squaredNorm();
    } while (n2 < 1e-12);
    return v / std::sqrt(n2);
  }

  // uniformly distributed point in the closed unit ball
  Vec ball_point(int dim) {
    const double r = std::pow(uniform(), 1.0 / dim);
    return r * unit_vector(dim);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

//---------------------------------------------------------------------------
// Compensated (Kahan-Neumaier) summation
//
// Quadrature reductions always run single-threaded over a fixed index order,
// so results are bit-identical regardless of how many workers produced the
// per-node terms.
//---------------------------------------------------------------------------

class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

//---------------------------------------------------------------------------
// Gauss-Legendre rules
//---------------------------------------------------------------------------

struct GaussLegendre {
  std::vector<double> x;  // nodes in (-1, 1)
  std::vector<double> w;  // weights, sum = 2
};

// Nodes by Newton iteration on the Legendre recurrence. Accurate to ~1e-15;
// unit tests check polynomial moments up to degree 2n-1.
GaussLegendre gauss_legendre(int n);

// n-point rule mapped to [0, 1]
GaussLegendre gauss_legendre_01(int n);

//---------------------------------------------------------------------------
// Sphere / ball constants (ambient dimension n in {2,3,4})
//---------------------------------------------------------------------------

double sphere_surface(int n);  // area of S^{n-1}: 2pi, 4pi, 2pi^2
double ball_volume(int n);     // pi, 4pi/3, pi^2/2

//---------------------------------------------------------------------------
// Parallel node evaluation
//
// Contiguous index ranges are handed to plain std::threads; results must be
// written to caller-owned per-index storage. Reductions happen afterwards in
// index order (see KahanSum above), so thread count never changes output.
//---------------------------------------------------------------------------

// Resolves the worker count: flag value wins if > 0, else the environment
// variable BALLGEO_THREADS, else std::thread::hardware_concurrency().
int resolve_thread_count(int flag_value);

// fn(begin, end) is called for disjoint [begin, end) covering [0, total).
// Exceptions thrown by fn propagate (first one wins).
void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace ballgeo
