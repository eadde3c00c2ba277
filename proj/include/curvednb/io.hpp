#pragma once

// Plain-text output: CSV tables for trajectories and probe reports.
// All reals are written with 17 significant digits so files round-trip
// doubles exactly and identical inputs give byte-identical outputs.

#include <string>
#include <vector>

#include "curvednb/dynamics.hpp"
#include "curvednb/experiments.hpp"

namespace curvednb {

std::string format_real(double value);

// Columns: t, q{i}_x{m} for every body and ambient coordinate, then
// d{i}_{j} for every pair i < j; one row per stored sample.
void write_trajectory_csv(const std::vector<AmbientState>& series,
                          const std::string& path);

// Columns: record_id, r, n, min_distance.
void write_min_distance_csv(const MinDistanceReport& report,
                            const std::string& path);

// Columns: r, A_squared.
void write_boundedness_csv(const BoundednessReport& report,
                           const std::string& path);

// Columns: delta, pair_term.
void write_cluster_blowup_csv(const ClusterBlowupReport& report,
                              const std::string& path);

}  // namespace curvednb
