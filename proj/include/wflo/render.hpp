#pragma once

#include <optional>
#include <string>

#include "wflo/farm_domain.hpp"
#include "wflo/qip_mrf.hpp"

namespace wflo {

struct RenderOptions {
  double width_px = 600.0;
  std::optional<double> wind_from_deg;  // draws a wind arrow when set
};

/// Grid cells, turbine markers and an optional wind arrow. Output bytes
/// depend only on the inputs.
std::string render_svg(const Layout& layout, const FarmGrid& grid, const RenderOptions& opts = {});

}  // namespace wflo
