#pragma once

#include <cstddef>
#include <filesystem>

#include "wflo/farm_domain.hpp"
#include "wflo/qip_mrf.hpp"
#include "wflo/trws.hpp"

namespace wflo {

/// Ranks cells by min-marginal advantage (label-0 energy minus label-1
/// energy, descending, lower index first on ties) and takes the first k that
/// are compatible with the cells already taken. Throws if fewer than k fit.
Layout round_top_k(const SolveReport& report, std::size_t k, const ProximityPairs& exclusions);

/// Best-improvement single-turbine moves on X^T W X until no move improves
/// or `max_passes` moves were made. Throws on an infeasible input.
Layout repair_swap(const Layout& layout, const QipModel& qip, std::size_t max_passes = 100000);

/// Makes an arbitrary labeling feasible: drops conflicting cells and then the
/// costliest ones down to k, then adds the cheapest compatible cells up to k.
/// Throws if the exclusions leave fewer than k compatible cells.
Layout fix_count(const Layout& layout, const QipModel& qip);

/// Repairs both the min-marginal rounding and the count-fixed MAP labeling
/// and returns the lower-energy result.
Layout decode_and_repair(const SolveReport& report, const QipModel& qip,
                         std::size_t max_passes = 100000);

/// `cell_index,x_m,y_m`, one selected cell per row.
void write_layout_csv(const Layout& layout, const FarmGrid& grid,
                      const std::filesystem::path& path);
/// Reads the selected indices back; coordinates are checked against the grid.
Layout read_layout_csv(const std::filesystem::path& path, const FarmGrid& grid);

}  // namespace wflo
