// ballgeo - canonical JSON serialization of reports. One fixed field order
// per report type, shared by the command-line tool and the determinism
// tests: byte-identical results must serialize to byte-identical text.
#pragma once

#include "json.hpp"

#include "ballgeo/counterexample.hpp"
#include "ballgeo/distance.hpp"
#include "ballgeo/geodesic.hpp"
#include "ballgeo/metric.hpp"
#include "ballgeo/santalo.hpp"

namespace ballgeo {

nlohmann::ordered_json vec_json(const Vec& v);
nlohmann::ordered_json mat_json_rows(const Mat& m);  // row-major nested arrays

// Wall-clock seconds are excluded unless requested: canonical outputs must
// not depend on machine speed.
nlohmann::ordered_json volume_report_json(const VolumeReport& report,
                                          bool include_seconds = false);
nlohmann::ordered_json distance_jet_json(const DistanceJet& jet);
nlohmann::ordered_json etahat_scan_json(const EtaHatScanReport& report);
nlohmann::ordered_json near_diagonal_json(const NearDiagonalReport& report);
nlohmann::ordered_json nondegeneracy_json(const NondegeneracyReport& report);
nlohmann::ordered_json bounds_json(const BoundsReport& report);
nlohmann::ordered_json lipschitz_json(const LipschitzReport& report);
nlohmann::ordered_json ratio_bound_json(const RatioBoundReport& report);

// One CSV line per volume report: resolution,band,value,richardson,seconds.
std::string volume_csv_header();
std::string volume_csv_row(const VolumeReport& report);

}  // namespace ballgeo
