#pragma once

#include "fasthcs/diagnostics.hpp"
#include "fasthcs/simharness.hpp"

#include <optional>
#include <string>

namespace fasthcs::io {

/// Diagnostic plot: scaled SD on x, scaled OD on y, one circle per
/// observation and dashed reference lines at 1. Rows labelled as outliers
/// are drawn in a second colour. Infinite distances are pinned to the edge.
std::string diagnostic_svg(const DiagnosticReport& report,
                           const std::optional<std::vector<RowLabel>>& labels = std::nullopt,
                           const std::string& title = "Diagnostic plot");

/// Bias curves against nu: one panel per (p, q, epsilon, config), one
/// colour per method, solid median and dotted 75th percentile.
std::string bias_panels_svg(const std::vector<sim::SummaryRow>& summary);

}  // namespace fasthcs::io
