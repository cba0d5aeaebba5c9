#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qot/costs.hpp"
#include "qot/grid.hpp"
#include "qot/region.hpp"
#include "qot/transport.hpp"

namespace qot::io {

/// Round-trip decimal form (17 significant digits).
std::string format_number(double value);

/// Reads rows `x,re,im` (an optional header line is skipped). Row count must
/// be N and each x must match the grid node within 1e-9; InputError otherwise.
StateVector load_state_csv(const std::filesystem::path& path, const CenteredGrid& grid);
std::string state_csv(const StateVector& state);

/// Reads rows `m,n,flag` with signed node indices; unspecified nodes are 0.
PhaseRegion load_mask_csv(const std::filesystem::path& path, const CenteredGrid& grid);
std::string mask_csv(const PhaseRegion& region);

/// Reads rows `m,n,value`; every one of the N² nodes must appear exactly once.
CostMatrix load_cost_csv(const std::filesystem::path& path, const CenteredGrid& grid);

/// Rows `m,n,weight` for entries above `threshold`, signed node indices.
std::string coupling_csv(const Coupling& coupling, int row_offset, int col_offset, double threshold = 0.0);

/// Writes via a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace qot::io
