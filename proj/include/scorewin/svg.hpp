#pragma once

#include <string>

#include "scorewin/analysis.hpp"

namespace scorewin::svg {

// Self-contained SVG line plot of a binned curve: one marker per non-empty
// bin at (bin center, aggregate), connected in x order. No external
// references; output depends only on the curve and labels.
std::string render_curve(const analysis::BinnedCurve& curve,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label);

void save_curve(const analysis::BinnedCurve& curve, const std::string& title,
                const std::string& x_label, const std::string& y_label,
                const std::string& path);

}  // namespace scorewin::svg
