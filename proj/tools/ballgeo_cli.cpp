// ballgeo - command-line entry point. Parses metric specs, dispatches
// computations, and emits machine-readable reports: JSON for structured
// results, CSV for convergence tables and geodesic dumps.
//
// Exit codes: 0 success, 2 validation error (bad flags, malformed JSON,
// dimension mismatch, violated preconditions), 3 numerical failure
// (boundary-value non-convergence, degenerate node, integrator blow-up).
//
// Every JSON report embeds the resolved mathematical configuration under
// "config" (with metric specs inlined, not referenced by path), so outputs
// are self-describing. Execution machinery that cannot change the numbers —
// worker thread count, output path, wall-clock timings — is deliberately
// excluded, which keeps reports byte-identical across thread counts and
// repeated runs.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ballgeo/common.hpp"
#include "ballgeo/counterexample.hpp"
#include "ballgeo/distance.hpp"
#include "ballgeo/geodesic.hpp"
#include "ballgeo/metric.hpp"
#include "ballgeo/report_json.hpp"
#include "ballgeo/santalo.hpp"

namespace {

using ballgeo::MetricModel;
using ballgeo::NumericalError;
using ballgeo::PairGrid;
using ballgeo::ValidationError;
using ballgeo::Vec;
using nlohmann::ordered_json;

Vec to_vec(const std::vector<double>& values) {
  if (values.empty() || values.size() > 8) {
    throw ValidationError("coordinate list must have 1..8 entries, got " +
                          std::to_string(values.size()));
  }
  Vec v(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    v[static_cast<int>(i)] = values[i];
  }
  return v;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);  // binary: LF even on CRLF platforms
  if (!out) throw ValidationError("cannot open output file: " + output_path);
  out << text;
  if (!out) throw ValidationError("failed writing output file: " + output_path);
}

std::unique_ptr<MetricModel> load_metric(const std::string& path, int dim) {
  auto metric = ballgeo::metric_from_file(path);
  if (dim > 0 && metric->dim() != dim) {
    throw ValidationError("dimension mismatch: --dim " + std::to_string(dim) +
                          " but metric '" + path + "' has dim " +
                          std::to_string(metric->dim()));
  }
  return metric;
}

ordered_json hessian_method_name(ballgeo::HessianMethod method) {
  return method == ballgeo::HessianMethod::jacobi ? "jacobi" : "fd";
}

ballgeo::HessianMethod parse_hessian_method(const std::string& name) {
  return name == "jacobi" ? ballgeo::HessianMethod::jacobi
                          : ballgeo::HessianMethod::finite_difference;
}

//---------------------------------------------------------------------------
// volume / voldiff
//---------------------------------------------------------------------------

struct VolumeOpts {
  std::string metric_path;
  int dim = 0;
  int resolution = 0;
  double band = 0.0;
  std::string method = "both";
  std::vector<int> table;  // optional: convergence-table resolutions
  int threads = 0;
  std::string output;
};

void run_volume(const VolumeOpts& opt) {
  const auto metric = load_metric(opt.metric_path, opt.dim);
  const int threads = ballgeo::resolve_thread_count(opt.threads);

  if (!opt.table.empty()) {
    // CSV convergence table: one row per resolution at the fixed band.
    if (opt.method == "both") {
      throw ValidationError(
          "--table requires --method pi or direct (one table, one method)");
    }
    std::string csv = ballgeo::volume_csv_header() + "\n";
    for (int res : opt.table) {
      ballgeo::VolumeReport report;
      if (opt.method == "pi") {
        const PairGrid grid = ballgeo::build_pair_grid(opt.dim, res, opt.band);
        report = ballgeo::volume_via_pi(*metric, grid, threads);
      } else {
        report = ballgeo::volume_direct_ht(*metric, res, threads);
        report.band = opt.band;
      }
      csv += ballgeo::volume_csv_row(report) + "\n";
    }
    emit(csv, opt.output);
    return;
  }

  ordered_json config;
  config["subcommand"] = "volume";
  config["metric"] = metric->to_json();
  config["dim"] = opt.dim;
  config["resolution"] = opt.resolution;
  config["band"] = opt.band;
  config["method"] = opt.method;

  ordered_json out;
  out["config"] = std::move(config);
  if (opt.method == "pi" || opt.method == "both") {
    const PairGrid grid =
        ballgeo::build_pair_grid(opt.dim, opt.resolution, opt.band);
    out["pi_formula"] =
        ballgeo::volume_report_json(ballgeo::volume_via_pi(*metric, grid, threads));
  }
  if (opt.method == "direct" || opt.method == "both") {
    out["direct_ht"] = ballgeo::volume_report_json(
        ballgeo::volume_direct_ht(*metric, opt.resolution, threads));
  }
  emit(out.dump(2) + "\n", opt.output);
}

struct VoldiffOpts {
  std::string metric_a_path, metric_b_path;
  int dim = 0;
  int resolution = 0;
  double band = 0.0;
  std::string method = "none";  // optional direct/pi/both volume cross-check
  int threads = 0;
  std::string output;
};

void run_voldiff(const VoldiffOpts& opt) {
  const auto metric_a = load_metric(opt.metric_a_path, opt.dim);
  const auto metric_b = load_metric(opt.metric_b_path, opt.dim);
  const int threads = ballgeo::resolve_thread_count(opt.threads);
  const PairGrid grid =
      ballgeo::build_pair_grid(opt.dim, opt.resolution, opt.band);

  ordered_json config;
  config["subcommand"] = "voldiff";
  config["metric_a"] = metric_a->to_json();
  config["metric_b"] = metric_b->to_json();
  config["dim"] = opt.dim;
  config["resolution"] = opt.resolution;
  config["band"] = opt.band;
  config["method"] = opt.method;

  ordered_json out;
  out["config"] = std::move(config);
  // Boundary-data route: vol(b) - vol(a) from lengths and mixed Hessians of
  // both metrics on the shared grid.
  out["value"] =
      ballgeo::volume_difference_rhs(*metric_a, *metric_b, grid, threads);

  const bool want_pi = opt.method == "pi" || opt.method == "both";
  const bool want_direct = opt.method == "direct" || opt.method == "both";
  if (want_pi) {
    const auto va = ballgeo::volume_via_pi(*metric_a, grid, threads);
    const auto vb = ballgeo::volume_via_pi(*metric_b, grid, threads);
    out["lhs_pi"] = vb.value - va.value;
    out["volume_a_pi"] = ballgeo::volume_report_json(va);
    out["volume_b_pi"] = ballgeo::volume_report_json(vb);
  }
  if (want_direct) {
    const auto va =
        ballgeo::volume_direct_ht(*metric_a, opt.resolution, threads);
    const auto vb =
        ballgeo::volume_direct_ht(*metric_b, opt.resolution, threads);
    out["lhs_direct"] = vb.value - va.value;
    out["volume_a_direct"] = ballgeo::volume_report_json(va);
    out["volume_b_direct"] = ballgeo::volume_report_json(vb);
  }
  emit(out.dump(2) + "\n", opt.output);
}

//---------------------------------------------------------------------------
// hessian
//---------------------------------------------------------------------------

struct HessianOpts {
  std::string metric_path;
  std::vector<double> x, y;
  std::string method = "jacobi";
  std::string output;
};

void run_hessian(const HessianOpts& opt) {
  const auto metric = load_metric(opt.metric_path, 0);
  const Vec x = to_vec(opt.x);
  const Vec y = to_vec(opt.y);
  const auto method = parse_hessian_method(opt.method);
  const auto jet = ballgeo::mixed_hessian(*metric, x, y, method);

  ordered_json config;
  config["subcommand"] = "hessian";
  config["metric"] = metric->to_json();
  config["x"] = ballgeo::vec_json(x);
  config["y"] = ballgeo::vec_json(y);
  config["method"] = hessian_method_name(method);

  ordered_json out;
  out["config"] = std::move(config);
  out.update(ballgeo::distance_jet_json(jet));
  emit(out.dump(2) + "\n", opt.output);
}

//---------------------------------------------------------------------------
// etahat-scan
//---------------------------------------------------------------------------

struct ScanOpts {
  std::string metric_a_path, metric_b_path;
  int dim = 0;
  int resolution = 0;
  double band = 0.0;
  std::string method = "jacobi";
  std::vector<double> cap_axis;
  int cap_rings = 0;
  int cap_per_ring = 4;
  double cap_min_offset = 1e-3;
  double cap_max_offset = 3e-3;
  int threads = 0;
  std::string output;
};

void run_etahat_scan(const ScanOpts& opt) {
  const auto metric_a = load_metric(opt.metric_a_path, opt.dim);
  const auto metric_b = load_metric(opt.metric_b_path, opt.dim);
  const int threads = ballgeo::resolve_thread_count(opt.threads);
  const auto method = parse_hessian_method(opt.method);

  PairGrid grid = ballgeo::build_pair_grid(opt.dim, opt.resolution, opt.band);
  Vec axis;
  if (opt.cap_rings > 0) {
    axis = opt.cap_axis.empty() ? Vec(Vec::Unit(opt.dim, opt.dim - 1))
                                : to_vec(opt.cap_axis);
    ballgeo::add_cap_pairs(grid, axis, opt.cap_rings, opt.cap_per_ring,
                           opt.cap_min_offset, opt.cap_max_offset);
  }

  ordered_json config;
  config["subcommand"] = "etahat-scan";
  config["metric_a"] = metric_a->to_json();
  config["metric_b"] = metric_b->to_json();
  config["dim"] = opt.dim;
  config["resolution"] = opt.resolution;
  config["band"] = opt.band;
  config["method"] = hessian_method_name(method);
  if (opt.cap_rings > 0) {
    ordered_json caps;
    caps["axis"] = ballgeo::vec_json(axis);
    caps["rings"] = opt.cap_rings;
    caps["per_ring"] = opt.cap_per_ring;
    caps["min_offset"] = opt.cap_min_offset;
    caps["max_offset"] = opt.cap_max_offset;
    config["cap_pairs"] = std::move(caps);
  }

  ordered_json out;
  out["config"] = std::move(config);
  out.update(ballgeo::etahat_scan_json(
      ballgeo::etahat_scan(*metric_a, *metric_b, grid, threads, method)));
  emit(out.dump(2) + "\n", opt.output);
}

//---------------------------------------------------------------------------
// counterexample
//---------------------------------------------------------------------------

struct CtexOpts {
  double s = 0.0;
  double r = 0.0;  // <= 0 selects the default scale
  long long pairs = 10000;
  std::uint64_t seed = 20240;
  double probe_extent = 20.0;
  int probe_resolution = 401;
  std::string output;
};

void run_counterexample(const CtexOpts& opt) {
  const ballgeo::CtexParams p(opt.s, opt.r);
  const Eigen::Matrix2d A = ballgeo::ctex_matrix_A(p);

  // The numeric cross-check needs a pair tilted off the exact pole pair (the
  // adapted frame degenerates at antipodes). The smallest offset is tried
  // first; at large twist strength the geodesic solver cannot meet its
  // residual contract that close to the diameter, so the ladder widens the
  // tilt until a solve succeeds.
  const std::vector<double> offsets = {1e-4, 1e-3, 1e-2};

  ordered_json config;
  config["subcommand"] = "counterexample";
  config["s"] = opt.s;
  config["r"] = p.r;
  config["distance_pairs"] = opt.pairs;
  config["seed"] = opt.seed;
  config["probe_extent"] = opt.probe_extent;
  config["probe_resolution"] = opt.probe_resolution;
  config["numeric_offsets"] = offsets;

  ordered_json out;
  out["config"] = std::move(config);
  out["A"] = ordered_json::array(
      {ordered_json::array({A(0, 0), A(0, 1)}),
       ordered_json::array({A(1, 0), A(1, 1)})});
  out["trA"] = A.trace();
  out["detA"] = A.determinant();
  out["r"] = p.r;
  out["etahat_closed_form"] = ballgeo::ctex_etahat_at_poles(p);

  bool numeric_ok = false;
  double numeric = 0.0, offset_used = 0.0;
  for (double offset : offsets) {
    try {
      numeric = ballgeo::ctex_etahat_numeric(p, offset);
      offset_used = offset;
      numeric_ok = true;
      break;
    } catch (const NumericalError&) {
      // try the next tilt
    }
  }
  out["etahat_numeric"] = numeric_ok ? ordered_json(numeric) : ordered_json(nullptr);
  out["etahat_numeric_offset"] =
      numeric_ok ? ordered_json(offset_used) : ordered_json(nullptr);

  const auto probe =
      ballgeo::ctex_ratio_bound_probe(p, opt.probe_extent, opt.probe_resolution);
  out["ratio_sup"] = probe.sup_singular_value;

  ballgeo::Rng rng(opt.seed);
  bool distance_ok = true;
  for (long long i = 0; i < opt.pairs; ++i) {
    const Vec x = rng.unit_vector(3);
    const Vec y = rng.unit_vector(3);
    const double chord = (x - y).norm();
    if (ballgeo::ctex_distance(p, x, y) < chord * (1.0 - 1e-12)) {
      distance_ok = false;
      break;
    }
  }
  out["distance_check_pass"] = distance_ok;
  out["ratio_bound"] = ballgeo::ratio_bound_json(probe);
  emit(out.dump(2) + "\n", opt.output);
}

//---------------------------------------------------------------------------
// probe family
//---------------------------------------------------------------------------

struct BoundsOpts {
  std::string metric_path;
  int samples = 2000;
  std::uint64_t seed = 12345;
  std::string output;
};

void run_probe_bounds(const BoundsOpts& opt) {
  const auto metric = load_metric(opt.metric_path, 0);
  ordered_json config;
  config["subcommand"] = "probe bounds";
  config["metric"] = metric->to_json();
  config["samples"] = opt.samples;
  config["seed"] = opt.seed;

  ordered_json out;
  out["config"] = std::move(config);
  out.update(
      ballgeo::bounds_json(ballgeo::bounds_probe(*metric, opt.samples, opt.seed)));
  emit(out.dump(2) + "\n", opt.output);
}

struct LipschitzOpts {
  std::string metric_path;
  std::vector<double> x;
  std::vector<double> radii = {0.025, 0.05, 0.1, 0.2, 0.4};
  int directions = 16;
  std::uint64_t seed = 2024;
  std::string output;
};

void run_probe_lipschitz(const LipschitzOpts& opt) {
  const auto metric = load_metric(opt.metric_path, 0);
  const Vec x = opt.x.empty() ? Vec(Vec::Zero(metric->dim())) : to_vec(opt.x);

  ordered_json config;
  config["subcommand"] = "probe lipschitz";
  config["metric"] = metric->to_json();
  config["x"] = ballgeo::vec_json(x);
  config["radii"] = opt.radii;
  config["directions"] = opt.directions;
  config["seed"] = opt.seed;

  ordered_json out;
  out["config"] = std::move(config);
  out.update(ballgeo::lipschitz_json(ballgeo::dexp_lipschitz_probe(
      *metric, x, opt.radii, opt.directions, opt.seed)));
  emit(out.dump(2) + "\n", opt.output);
}

struct NearDiagonalOpts {
  std::string metric_a_path, metric_b_path;
  std::vector<double> a_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> separations = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0};
  std::uint64_t seed = 7;
  std::string output;
};

void run_probe_near_diagonal(const NearDiagonalOpts& opt) {
  const auto metric_a = load_metric(opt.metric_a_path, 0);
  const auto metric_b = load_metric(opt.metric_b_path, 0);
  if (metric_a->dim() != metric_b->dim()) {
    throw ValidationError("dimension mismatch between the two metrics");
  }

  ordered_json config;
  config["subcommand"] = "probe near-diagonal";
  config["metric_a"] = metric_a->to_json();
  config["metric_b"] = metric_b->to_json();
  config["a_values"] = opt.a_values;
  config["separations"] = opt.separations;
  config["seed"] = opt.seed;

  ordered_json out;
  out["config"] = std::move(config);
  out.update(ballgeo::near_diagonal_json(ballgeo::near_diagonal_probe(
      *metric_a, *metric_b, opt.a_values, opt.separations, opt.seed)));
  emit(out.dump(2) + "\n", opt.output);
}

struct NondegenerateOpts {
  std::string metric_path;
  int dim = 0;
  int resolution = 16;
  double band = 0.02;
  int threads = 0;
  std::string output;
};

void run_probe_nondegenerate(const NondegenerateOpts& opt) {
  const auto metric = load_metric(opt.metric_path, opt.dim);
  const int threads = ballgeo::resolve_thread_count(opt.threads);
  const PairGrid grid =
      ballgeo::build_pair_grid(opt.dim, opt.resolution, opt.band);

  ordered_json config;
  config["subcommand"] = "probe nondegenerate";
  config["metric"] = metric->to_json();
  config["dim"] = opt.dim;
  config["resolution"] = opt.resolution;
  config["band"] = opt.band;

  ordered_json out;
  out["config"] = std::move(config);
  out.update(ballgeo::nondegeneracy_json(
      ballgeo::check_nondegenerate(*metric, grid, threads)));
  emit(out.dump(2) + "\n", opt.output);
}

//---------------------------------------------------------------------------
// geodesic (CSV dump)
//---------------------------------------------------------------------------

struct GeodesicOpts {
  std::string metric_path;
  std::vector<double> x, v;
  double t_end = 2.0;
  std::string output;
};

void run_geodesic(const GeodesicOpts& opt) {
  const auto metric = load_metric(opt.metric_path, 0);
  const Vec x = to_vec(opt.x);
  Vec v = to_vec(opt.v);
  if (x.size() != metric->dim() || v.size() != metric->dim()) {
    throw ValidationError("--x/--v must have exactly dim = " +
                          std::to_string(metric->dim()) + " coordinates");
  }
  const double speed = metric->norm(x, v);
  if (!(speed > 0.0)) {
    throw ValidationError("--v must be a nonzero direction");
  }
  v /= speed;  // unit-speed parametrization, the path contract

  const auto path = ballgeo::shoot(*metric, x, v, opt.t_end);

  const int n = metric->dim();
  std::string csv = "t";
  for (int i = 1; i <= n; ++i) csv += ",x" + std::to_string(i);
  for (int i = 1; i <= n; ++i) csv += ",v" + std::to_string(i);
  csv += "\n";
  char buf[64];
  for (const auto& state : path.states) {
    std::snprintf(buf, sizeof(buf), "%.17g", state.t);
    csv += buf;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", state.x[i]);
      csv += buf;
    }
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", state.v[i]);
      csv += buf;
    }
    csv += "\n";
  }
  emit(csv, opt.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ballgeo: boundary-distance computations for simple metrics on the "
      "unit ball (Holmes-Thompson volumes via the Santalo formula, "
      "volume-difference identities, eta-hat sign scans, and the "
      "twisted-pullback construction)"};
  app.require_subcommand(1);

  VolumeOpts vol;
  auto* sc_volume =
      app.add_subcommand("volume", "Holmes-Thompson volume of one metric");
  sc_volume->add_option("--metric", vol.metric_path, "metric spec JSON file")
      ->required();
  sc_volume->add_option("--dim", vol.dim, "ambient dimension (2, 3, or 4)")
      ->required();
  sc_volume
      ->add_option("--resolution", vol.resolution,
                   "nodes per angular dimension (even, >= 8)")
      ->required();
  sc_volume
      ->add_option("--band", vol.band,
                   "diagonal exclusion band: drop pairs with chord < band")
      ->required();
  sc_volume
      ->add_option("--method", vol.method,
                   "pi (boundary-pair formula), direct (density cubature), both")
      ->check(CLI::IsMember({"pi", "direct", "both"}));
  sc_volume
      ->add_option("--table", vol.table,
                   "emit a CSV convergence table at these resolutions instead "
                   "of a JSON report")
      ->delimiter(',');
  sc_volume->add_option("--threads", vol.threads,
                        "worker threads (0 = BALLGEO_THREADS env or hardware)");
  sc_volume->add_option("--output", vol.output, "write to file instead of stdout");
  sc_volume->callback([&vol] { run_volume(vol); });

  VoldiffOpts vd;
  auto* sc_voldiff = app.add_subcommand(
      "voldiff",
      "volume difference vol(b) - vol(a) from boundary data of both metrics");
  sc_voldiff->add_option("--metric-a", vd.metric_a_path, "first metric spec")
      ->required();
  sc_voldiff->add_option("--metric-b", vd.metric_b_path, "second metric spec")
      ->required();
  sc_voldiff->add_option("--dim", vd.dim, "ambient dimension")->required();
  sc_voldiff->add_option("--resolution", vd.resolution, "nodes per angular dimension")
      ->required();
  sc_voldiff->add_option("--band", vd.band, "diagonal exclusion band")->required();
  sc_voldiff
      ->add_option("--method", vd.method,
                   "optional volume cross-check: none, pi, direct, both")
      ->check(CLI::IsMember({"none", "pi", "direct", "both"}));
  sc_voldiff->add_option("--threads", vd.threads, "worker threads");
  sc_voldiff->add_option("--output", vd.output, "write to file instead of stdout");
  sc_voldiff->callback([&vd] { run_voldiff(vd); });

  HessianOpts hs;
  auto* sc_hessian = app.add_subcommand(
      "hessian", "distance jet of a boundary pair (mixed Hessian in the "
                 "adapted frame, with its block decomposition)");
  sc_hessian->add_option("--metric", hs.metric_path, "metric spec JSON file")
      ->required();
  sc_hessian
      ->add_option("--x", hs.x, "first boundary point, comma-separated (use "
                               "--x=-1,0,0 for negative leads)")
      ->delimiter(',')
      ->required();
  sc_hessian->add_option("--y", hs.y, "second boundary point, comma-separated")
      ->delimiter(',')
      ->required();
  sc_hessian
      ->add_option("--method", hs.method,
                   "jacobi (variational end map) or fd (finite differences)")
      ->check(CLI::IsMember({"jacobi", "fd"}));
  sc_hessian->add_option("--output", hs.output, "write to file instead of stdout");
  sc_hessian->callback([&hs] { run_hessian(hs); });

  ScanOpts sc;
  auto* sc_scan = app.add_subcommand(
      "etahat-scan",
      "sign census of the eta-hat coefficient over a boundary-pair grid");
  sc_scan->add_option("--metric-a", sc.metric_a_path, "first metric spec")
      ->required();
  sc_scan->add_option("--metric-b", sc.metric_b_path, "second metric spec")
      ->required();
  sc_scan->add_option("--dim", sc.dim, "ambient dimension")->required();
  sc_scan->add_option("--resolution", sc.resolution, "nodes per angular dimension")
      ->required();
  sc_scan->add_option("--band", sc.band, "diagonal exclusion band")->required();
  sc_scan
      ->add_option("--method", sc.method,
                   "mixed-Hessian route: jacobi or fd (fd survives "
                   "near-diameter geodesics)")
      ->check(CLI::IsMember({"jacobi", "fd"}));
  sc_scan->add_option("--cap-axis", sc.cap_axis,
                      "axis for zero-weight cap pairs (default last axis)")
      ->delimiter(',');
  sc_scan->add_option("--cap-rings", sc.cap_rings,
                      "add cap pairs at this many offset rings (0 = none)");
  sc_scan->add_option("--cap-per-ring", sc.cap_per_ring, "azimuths per cap ring");
  sc_scan->add_option("--cap-min-offset", sc.cap_min_offset,
                      "smallest cap tilt angle (radians)");
  sc_scan->add_option("--cap-max-offset", sc.cap_max_offset,
                      "largest cap tilt angle (radians)");
  sc_scan->add_option("--threads", sc.threads, "worker threads");
  sc_scan->add_option("--output", sc.output, "write to file instead of stdout");
  sc_scan->callback([&sc] { run_etahat_scan(sc); });

  CtexOpts cx;
  auto* sc_ctex = app.add_subcommand(
      "counterexample",
      "twisted-pullback construction: pole matrix, closed-form and numeric "
      "eta-hat at the poles, distortion-ratio probe, distance domination");
  sc_ctex->add_option("--s", cx.s, "twist strength (> 1)")->required();
  sc_ctex->add_option("--r", cx.r,
                      "metric scale (<= 0 selects 10*sqrt(s^2+4))");
  sc_ctex->add_option("--pairs", cx.pairs,
                      "random boundary pairs for the distance check");
  sc_ctex->add_option("--seed", cx.seed, "seed for the distance-check sampler");
  sc_ctex->add_option("--probe-extent", cx.probe_extent,
                      "half-width of the chart grid for the ratio probe");
  sc_ctex->add_option("--probe-resolution", cx.probe_resolution,
                      "grid points per side for the ratio probe");
  sc_ctex->add_option("--output", cx.output, "write to file instead of stdout");
  sc_ctex->callback([&cx] { run_counterexample(cx); });

  auto* sc_probe =
      app.add_subcommand("probe", "diagnostic probes of metric regularity");
  sc_probe->require_subcommand(1);

  BoundsOpts pb;
  auto* sc_bounds = sc_probe->add_subcommand(
      "bounds", "sampled uniform norm-equivalence constant");
  sc_bounds->add_option("--metric", pb.metric_path, "metric spec JSON file")
      ->required();
  sc_bounds->add_option("--samples", pb.samples, "sample count (>= 100)");
  sc_bounds->add_option("--seed", pb.seed, "sampler seed");
  sc_bounds->add_option("--output", pb.output, "write to file instead of stdout");
  sc_bounds->callback([&pb] { run_probe_bounds(pb); });

  LipschitzOpts pl;
  auto* sc_lip = sc_probe->add_subcommand(
      "lipschitz", "operator deviation of the exponential differential vs radius");
  sc_lip->add_option("--metric", pl.metric_path, "metric spec JSON file")
      ->required();
  sc_lip->add_option("--x", pl.x, "base point (default origin)")->delimiter(',');
  sc_lip->add_option("--radii", pl.radii, "radii to probe")->delimiter(',');
  sc_lip->add_option("--directions", pl.directions, "directions per radius");
  sc_lip->add_option("--seed", pl.seed, "direction sampler seed");
  sc_lip->add_option("--output", pl.output, "write to file instead of stdout");
  sc_lip->callback([&pl] { run_probe_lipschitz(pl); });

  NearDiagonalOpts pn;
  auto* sc_near = sc_probe->add_subcommand(
      "near-diagonal", "pencil-determinant scaling toward the diagonal");
  sc_near->add_option("--metric-a", pn.metric_a_path, "first metric spec")
      ->required();
  sc_near->add_option("--metric-b", pn.metric_b_path, "second metric spec")
      ->required();
  sc_near->add_option("--a-values", pn.a_values, "pencil parameters in [0,1]")
      ->delimiter(',');
  sc_near->add_option("--separations", pn.separations, "boundary separations")
      ->delimiter(',');
  sc_near->add_option("--seed", pn.seed, "direction seed");
  sc_near->add_option("--output", pn.output, "write to file instead of stdout");
  sc_near->callback([&pn] { run_probe_near_diagonal(pn); });

  NondegenerateOpts pd;
  auto* sc_nondeg = sc_probe->add_subcommand(
      "nondegenerate", "survey |det H| over a boundary-pair grid");
  sc_nondeg->add_option("--metric", pd.metric_path, "metric spec JSON file")
      ->required();
  sc_nondeg->add_option("--dim", pd.dim, "ambient dimension")->required();
  sc_nondeg->add_option("--resolution", pd.resolution, "nodes per angular dimension");
  sc_nondeg->add_option("--band", pd.band, "diagonal exclusion band");
  sc_nondeg->add_option("--threads", pd.threads, "worker threads");
  sc_nondeg->add_option("--output", pd.output, "write to file instead of stdout");
  sc_nondeg->callback([&pd] { run_probe_nondegenerate(pd); });

  GeodesicOpts gd;
  auto* sc_geo = app.add_subcommand(
      "geodesic",
      "integrate one geodesic and dump the recorded states as CSV "
      "(t,x1..xn,v1..vn); the velocity is normalized to unit speed");
  sc_geo->add_option("--metric", gd.metric_path, "metric spec JSON file")
      ->required();
  sc_geo->add_option("--x", gd.x, "initial point, comma-separated")
      ->delimiter(',')
      ->required();
  sc_geo->add_option("--v", gd.v, "initial direction, comma-separated")
      ->delimiter(',')
      ->required();
  sc_geo->add_option("--t-end", gd.t_end,
                     "integrate until this time or boundary exit");
  sc_geo->add_option("--output", gd.output, "write to file instead of stdout");
  sc_geo->callback([&gd] { run_geodesic(gd); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
