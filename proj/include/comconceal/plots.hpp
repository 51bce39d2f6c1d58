#pragma once

#include <string>
#include <vector>

#include "comconceal/stats.hpp"

namespace comconceal {

/// Writes deterministic SVG figures derived from a record set into out_dir:
/// per-(mu, sigma_c) line charts of mean M1/M2 vs beta_b with +-1 s.d. bands
/// (one polyline per method) and relative-improvement heatmaps over
/// (mu, sigma_c) whose cell labels match mean_relative_improvement().
/// Returns the written paths.
std::vector<std::string> emit_plots(const std::vector<ExperimentRecord>& records,
                                    const std::string& out_dir);

/// Label formatting shared between the heatmap cells and their cross-check.
std::string heatmap_label(double percent);

}  // namespace comconceal
