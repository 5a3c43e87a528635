#pragma once

#include <string>
#include <vector>

#include "nirbench/metrics.hpp"
#include "nirbench/train.hpp"

namespace nirbench {

/// Static text-only SVG plots (no rasterization).
std::string clarke_grid_svg(const std::vector<double>& ref, const std::vector<double>& pred,
                            const std::string& title);
std::string bland_altman_svg(const std::vector<double>& ref, const std::vector<double>& pred,
                             const std::string& title);
std::string linearity_svg(const std::vector<double>& ref, const std::vector<double>& pred,
                          const std::string& title);
std::string loss_history_svg(const std::vector<nn::EpochRow>& history, const std::string& title);
/// One axis per benchmark criterion (6 axes), all normalized to [0, 1]
/// with larger = better.
std::string radar_svg(const std::vector<ModelReport>& reports);

}  // namespace nirbench
