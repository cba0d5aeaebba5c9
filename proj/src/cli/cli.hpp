#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qot/costs.hpp"
#include "qot/grid.hpp"
#include "qot/region.hpp"

namespace qot::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericError = 3 };

/// Parses `args` (without the program name), runs the command and writes its
/// report to `out` or the --output file. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool pass;
  double value;
  double tolerance;
};

struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  std::vector<Check> checks;
  /// When set, CSV output is this table instead of the name,value listing.
  std::optional<std::vector<std::string>> table_header;
  std::vector<std::vector<double>> table_rows;

  void check(std::string name, double value, double tolerance, bool pass) {
    checks.push_back({std::move(name), pass, value, tolerance});
  }
  bool all_pass() const;
  std::string to_json() const;
  std::string to_csv() const;
};

/// Options shared by every command.
struct GridOptions {
  int M = 64;
  std::optional<double> length;  // calibrated when absent
  CenteredGrid build() const;
};

/// hermite:<n> | pfield:<sinh|tanh|linear>[:lambda] | file:<path>
StateVector parse_state(const std::string& spec, const CenteredGrid& grid);
/// x2k2 | separable:<potential> | indicator:<region> | file:<path>
CostMatrix parse_cost(const std::string& spec, const CenteredGrid& grid);
/// disk:R | square:R | box:a,b | cobox:a,b | full | none | file:<path>
PhaseRegion parse_region(const std::string& spec, const CenteredGrid& grid);
/// "lo,hi[;lo,hi...]", or "all" for the whole line, or "empty".
IntervalSet parse_intervals(const std::string& spec);
/// harmonic (x²/2) | cosh (cosh x (cosh x - 1)) | quartic (x⁴) | zero
std::vector<double> named_potential(const std::string& name, const CenteredGrid& grid);
/// sinh | tanh | linear
std::vector<double> named_p_field(const std::string& name, const CenteredGrid& grid);

struct VerifyOptions {
  GridOptions grid;
  double perturb_u = 0.0;
};

Report run_verify(const VerifyOptions& options);

}  // namespace qot::cli
