#include "qot/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qot/errors.hpp"

namespace qot::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size();
}

// Data rows of a CSV file; a first line that does not parse as numbers is
// treated as a header.
std::vector<std::vector<double>> read_rows(const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    std::vector<double> values(cells.size());
    bool ok = cells.size() == columns;
    for (std::size_t i = 0; ok && i < cells.size(); ++i) ok = parse_double(cells[i], values[i]);
    if (!ok) {
      if (rows.empty() && lineno == 1) continue;
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                       " numeric columns");
    }
    rows.push_back(std::move(values));
  }
  return rows;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

StateVector load_state_csv(const std::filesystem::path& path, const CenteredGrid& grid) {
  const auto rows = read_rows(path, 3);
  const std::size_t n = grid.N();
  if (rows.size() != n) {
    throw InputError(path.string() + ": " + std::to_string(rows.size()) + " rows, grid has " + std::to_string(n));
  }
  std::vector<cplx> amps(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(rows[i][0] - grid.x_at(i)) > 1e-9) {
      throw InputError(path.string() + ": row " + std::to_string(i + 1) + " has x = " + format_number(rows[i][0]) +
                       ", grid node is " + format_number(grid.x_at(i)));
    }
    amps[i] = {rows[i][1], rows[i][2]};
  }
  return StateVector(grid, std::move(amps));
}

std::string state_csv(const StateVector& state) {
  const CenteredGrid& g = state.grid();
  const bool pos = state.representation() == Representation::position;
  std::string out = pos ? "x,re,im\n" : "k,re,im\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    out += format_number(pos ? g.x_at(i) : g.k_at(i)) + "," + format_number(state[i].real()) + "," +
           format_number(state[i].imag()) + "\n";
  }
  return out;
}

PhaseRegion load_mask_csv(const std::filesystem::path& path, const CenteredGrid& grid) {
  PhaseRegion region = PhaseRegion::none(grid);
  region.description = "file:" + path.string();
  const int M = grid.M();
  for (const auto& row : read_rows(path, 3)) {
    const double m = row[0], n = row[1];
    if (m != std::floor(m) || n != std::floor(n) || std::abs(m) > M || std::abs(n) > M) {
      throw InputError(path.string() + ": node (" + format_number(m) + ", " + format_number(n) + ") is off the grid");
    }
    region.mask[grid.index(static_cast<int>(m)) * grid.N() + grid.index(static_cast<int>(n))] = row[2] != 0.0;
  }
  return region;
}

CostMatrix load_cost_csv(const std::filesystem::path& path, const CenteredGrid& grid) {
  const std::size_t n = grid.N();
  const int M = grid.M();
  CostMatrix cost{grid, std::vector<double>(n * n, 0.0), 0.0};
  std::vector<unsigned char> seen(n * n, 0);
  for (const auto& row : read_rows(path, 3)) {
    const double m = row[0], k = row[1];
    if (m != std::floor(m) || k != std::floor(k) || std::abs(m) > M || std::abs(k) > M) {
      throw InputError(path.string() + ": node (" + format_number(m) + ", " + format_number(k) + ") is off the grid");
    }
    if (!std::isfinite(row[2])) throw InputError(path.string() + ": non-finite cost value");
    const std::size_t c = grid.index(static_cast<int>(m)) * n + grid.index(static_cast<int>(k));
    if (seen[c]++) throw InputError(path.string() + ": duplicate node (" + format_number(m) + ", " + format_number(k) + ")");
    cost.entries[c] = row[2];
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw InputError(path.string() + ": cost file does not cover every node");
  cost.lower_bound = *std::min_element(cost.entries.begin(), cost.entries.end());
  return cost;
}

std::string mask_csv(const PhaseRegion& region) {
  const CenteredGrid& g = region.grid;
  std::string out = "m,n,flag\n";
  for (std::size_t m = 0; m < static_cast<std::size_t>(g.N()); ++m)
    for (std::size_t n = 0; n < static_cast<std::size_t>(g.N()); ++n)
      out += std::to_string(g.node(m)) + "," + std::to_string(g.node(n)) + "," + (region(m, n) ? "1" : "0") + "\n";
  return out;
}

std::string coupling_csv(const Coupling& coupling, int row_offset, int col_offset, double threshold) {
  std::string out = "m,n,weight\n";
  for (std::size_t i = 0; i < coupling.rows; ++i) {
    for (std::size_t j = 0; j < coupling.cols; ++j) {
      const double w = coupling(i, j);
      if (w <= threshold) continue;
      out += std::to_string(static_cast<int>(i) + row_offset) + "," + std::to_string(static_cast<int>(j) + col_offset) +
             "," + format_number(w) + "\n";
    }
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw InputError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace qot::io
