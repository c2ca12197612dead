// ballgeo - canonical JSON serialization of reports.
#include "ballgeo/report_json.hpp"

#include <cstdio>
#include <string>

namespace ballgeo {

using nlohmann::ordered_json;

ordered_json vec_json(const Vec& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json mat_json_rows(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json volume_report_json(const VolumeReport& report,
                                bool include_seconds) {
  ordered_json j;
  j["value"] = report.value;
  j["method"] = report.method;
  j["dim"] = report.dim;
  j["resolution"] = report.resolution;
  j["band"] = report.band;
  j["richardson_estimate"] = report.richardson_estimate;
  j["value_band"] = report.value_band;
  j["value_double_band"] = report.value_double_band;
  j["nodes_used"] = report.nodes_used;
  if (include_seconds) j["seconds"] = report.seconds;
  return j;
}

ordered_json distance_jet_json(const DistanceJet& jet) {
  ordered_json frame;
  ordered_json shared = ordered_json::array();
  for (const Vec& e : jet.frame.shared) shared.push_back(vec_json(e));
  frame["shared"] = std::move(shared);
  frame["e_xy"] = vec_json(jet.frame.e_xy);
  frame["e_yx"] = vec_json(jet.frame.e_yx);

  ordered_json j;
  j["ell"] = jet.ell;
  j["u"] = vec_json(jet.u);
  j["H"] = mat_json_rows(jet.H);
  j["Q"] = mat_json_rows(jet.Q);
  j["c"] = vec_json(jet.c);
  j["r"] = vec_json(jet.r);
  j["s"] = jet.s;
  j["frame"] = std::move(frame);
  j["x"] = vec_json(jet.x);
  j["y"] = vec_json(jet.y);
  j["d1"] = vec_json(jet.d1);
  return j;
}

ordered_json etahat_scan_json(const EtaHatScanReport& report) {
  ordered_json j;
  j["nodes"] = report.nodes;
  j["failures"] = report.failures;
  j["positive"] = report.positive;
  j["negative"] = report.negative;
  j["min_coeff"] = report.min_coeff;
  j["argmin_x"] = vec_json(report.argmin_x);
  j["argmin_y"] = vec_json(report.argmin_y);
  return j;
}

ordered_json near_diagonal_json(const NearDiagonalReport& report) {
  ordered_json dets = ordered_json::array();
  for (const auto& row : report.abs_pencil_dets) {
    ordered_json r = ordered_json::array();
    for (double d : row) r.push_back(d);
    dets.push_back(std::move(r));
  }
  ordered_json j;
  j["a_values"] = report.a_values;
  j["separations"] = report.separations;
  j["abs_pencil_dets"] = std::move(dets);
  j["fitted_exponents"] = report.fitted_exponents;
  return j;
}

ordered_json nondegeneracy_json(const NondegeneracyReport& report) {
  ordered_json j;
  j["nodes"] = report.nodes;
  j["degenerate"] = report.degenerate;
  j["bvp_failures"] = report.bvp_failures;
  j["min_abs_det"] = report.min_abs_det;
  j["threshold"] = report.threshold;
  j["argmin_x"] = vec_json(report.argmin_x);
  j["argmin_y"] = vec_json(report.argmin_y);
  return j;
}

ordered_json bounds_json(const BoundsReport& report) {
  ordered_json j;
  j["C1"] = report.C1;
  j["sample_count"] = report.sample_count;
  j["max_ratio"] = report.max_ratio;
  j["min_ratio"] = report.min_ratio;
  return j;
}

ordered_json lipschitz_json(const LipschitzReport& report) {
  ordered_json j;
  j["radii"] = report.radii;
  j["deviations"] = report.deviations;
  j["fitted_slope"] = report.fitted_slope;
  return j;
}

ordered_json ratio_bound_json(const RatioBoundReport& report) {
  ordered_json j;
  j["sup_singular_value"] = report.sup_singular_value;
  j["bound_r"] = report.bound_r;
  j["min_det_dphi"] = report.min_det_dphi;
  j["far_field_max"] = report.far_field_max;
  j["grid_points"] = report.grid_points;
  j["sup_below_bound"] = report.sup_below_bound;
  j["det_above_half"] = report.det_above_half;
  return j;
}

std::string volume_csv_header() {
  return "resolution,band,value,richardson,seconds";
}

std::string volume_csv_row(const VolumeReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.6g,%.17g,%.17g,%.3f",
                report.resolution, report.band, report.value,
                report.richardson_estimate, report.seconds);
  return buf;
}

}  // namespace ballgeo
