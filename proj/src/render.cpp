#include "wflo/render.hpp"

#include <cmath>
#include <fmt/format.h>

#include "wflo/error.hpp"
#include "wflo/wake_jensen.hpp"

namespace wflo {

std::string render_svg(const Layout& layout, const FarmGrid& grid, const RenderOptions& opts) {
  if (layout.size() != grid.size()) {
    throw Error(fmt::format("layout has {} cells but the grid has {}", layout.size(), grid.size()));
  }
  const auto& b = grid.bounds();
  const double span_x = b.max_x - b.min_x;
  const double span_y = b.max_y - b.min_y;
  if (!(span_x > 0.0 && span_y > 0.0)) throw Error("grid bounds are degenerate");
  const double margin = 20.0;
  const double scale = opts.width_px / span_x;
  const double w = opts.width_px + 2 * margin;
  const double h = span_y * scale + 2 * margin;
  // SVG y grows downward; north is up.
  auto px = [&](double x) { return margin + (x - b.min_x) * scale; };
  auto py = [&](double y) { return margin + (b.max_y - y) * scale; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.2f}\" height=\"{:.2f}\" "
      "viewBox=\"0 0 {:.2f} {:.2f}\">\n",
      w, h, w, h);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"white\"/>\n",
                     w, h);
  const double side = grid.cell_side() * scale;
  out += "<g fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.5\">\n";
  for (const auto& cell : grid.cells()) {
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/>\n",
                       px(cell.centroid.x) - side / 2, py(cell.centroid.y) - side / 2, side, side);
  }
  out += "</g>\n<g fill=\"#1f4e79\">\n";
  const double radius = std::max(2.0, side * 0.3);
  for (std::size_t i : layout.selected()) {
    const auto& c = grid.centroid(i);
    out += fmt::format("<circle data-cell=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\"/>\n", i,
                       px(c.x), py(c.y), radius);
  }
  out += "</g>\n";
  if (opts.wind_from_deg) {
    const Point d = downwind_unit(*opts.wind_from_deg);
    const double cx = w / 2, cy = h / 2, len = 0.35 * std::min(w, h);
    const double x1 = cx - d.x * len / 2, y1 = cy + d.y * len / 2;
    const double x2 = cx + d.x * len / 2, y2 = cy - d.y * len / 2;
    out += "<defs><marker id=\"head\" markerWidth=\"10\" markerHeight=\"10\" refX=\"8\" refY=\"5\" "
           "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n";
    out += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#c0392b\" "
        "stroke-width=\"3\" marker-end=\"url(#head)\"/>\n",
        x1, y1, x2, y2);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace wflo
