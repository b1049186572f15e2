#pragma once

#include <string>

#include "types.hpp"

namespace satcs {

/// Element-wise clamp of raw measurements into [y_min, y_max].
Eigen::VectorXd clip(const Eigen::VectorXd& y_raw, double y_min, double y_max);

/// Split clipped measurements into unsaturated and saturated parts, keeping
/// original row order within each part. A value equal to a threshold counts
/// as saturated; values outside [y_min, y_max] are rejected.
SaturatedDataset partition_measurements(const Eigen::MatrixXd& phi,
                                        const Eigen::VectorXd& y_clipped,
                                        double y_min, double y_max);

/// Interleave y1 and y2 back into original row order via idx1/idx2.
Eigen::VectorXd reconstruct_clipped(const SaturatedDataset& ds);

// Dataset directory layout: phi1.csv, y1.csv, phi2.csv, y2.csv, s2.csv,
// meta.csv (y_min, y_max, n). Row provenance is not stored; loaded datasets
// index rows in stored order.
void save_dataset(const SaturatedDataset& ds, const std::string& dir);
SaturatedDataset load_dataset(const std::string& dir);

void save_ground_truth(const GroundTruth& gt, const std::string& path);
GroundTruth load_ground_truth(const std::string& path);

}  // namespace satcs
