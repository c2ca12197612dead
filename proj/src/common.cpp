// ballgeo - implementations for shared numerical utilities
#include "ballgeo/common.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>

namespace ballgeo {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: order must be >= 1");
  GaussLegendre rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence: evaluates P_n and P_n'
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // refresh P_n' at the converged node for the weight
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;          // ascending order
    rule.x[n - 1 - i] = x;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

GaussLegendre gauss_legendre_01(int n) {
  GaussLegendre rule = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = 0.5 * (rule.x[i] + 1.0);
    rule.w[i] *= 0.5;
  }
  return rule;
}

double sphere_surface(int n) {
  switch (n) {
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    case 4: return 2.0 * M_PI * M_PI;
    default: throw ValidationError("sphere_surface: dimension must be 2, 3 or 4");
  }
}

double ball_volume(int n) {
  switch (n) {
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    case 4: return M_PI * M_PI / 2.0;
    default: throw ValidationError("ball_volume: dimension must be 2, 3 or 4");
  }
}

int resolve_thread_count(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("BALLGEO_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  const std::size_t nthreads =
      std::min<std::size_t>(std::max(threads, 1), total);
  if (nthreads == 1) {
    fn(0, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::mutex err_mutex;
  std::exception_ptr first_error;
  const std::size_t chunk = (total + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end]() {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ballgeo
