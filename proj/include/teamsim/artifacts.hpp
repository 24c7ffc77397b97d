#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "teamsim/integrator.hpp"

// Serialization of run artifacts. All numeric output uses 17 significant
// digits with '.' as the decimal separator, so replays with the same
// config and seed are byte-identical.

namespace teamsim {

/// printf "%.17g" formatting.
std::string format_g17(double v);

/// RFC-4180-style CSV: header "t,<metric...>,w0..w{n-1}", one row per
/// sample. Metrics are emitted in the given order; a metric missing from
/// a sample is written as an empty field.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj,
                          const std::vector<std::string>& metric_names);

/// Row-major appraisal snapshot with its time stamp.
void write_appraisal_json(const std::filesystem::path& path, double t,
                          const Eigen::MatrixXd& a);

/// 8-bit binary PGM (P5). Entries are mapped on the absolute [0,1] scale
/// with darker pixels for larger values; each entry becomes a
/// `cell` x `cell` pixel block.
void write_appraisal_pgm(const std::filesystem::path& path,
                         const Eigen::MatrixXd& a, int cell = 32);

/// Grayscale-ramp SVG of the same data, for viewers without PGM support.
void write_appraisal_svg(const std::filesystem::path& path,
                         const Eigen::MatrixXd& a, int cell = 32);

/// Stamp used in snapshot/heatmap filenames: fixed-width zero-padded time
/// with three decimals, e.g. "0010.500".
std::string time_stamp(double t);

}  // namespace teamsim
