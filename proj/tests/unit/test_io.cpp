#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qot/errors.hpp"
#include "qot/io.hpp"
#include "qot/states.hpp"

using namespace qot;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qot_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(io::format_number(v)) == v);
  CHECK(io::format_number(0.5) == "0.5");
}

TEST_CASE("state files") {
  const auto g = CenteredGrid::calibrated(6);
  const StateVector h = hermite_state(3, g);
  const fs::path p = scratch("state.csv");
  io::write_atomic(p, io::state_csv(h));
  const StateVector back = io::load_state_csv(p, g);
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(back[i] == h[i]);

  CHECK_THROWS_AS(io::load_state_csv(p, CenteredGrid::calibrated(5)), InputError);
  CHECK_THROWS_AS(io::load_state_csv(p, CenteredGrid::make(6, 3.0)), InputError);
  write(p, "x,re,im\n0,1\n");
  CHECK_THROWS_AS(io::load_state_csv(p, g), InputError);
  CHECK_THROWS_AS(io::load_state_csv(scratch("missing.csv"), g), InputError);
}

TEST_CASE("mask and cost files") {
  const auto g = CenteredGrid::calibrated(2);
  const PhaseRegion disk = PhaseRegion::disk(g, 2.0);
  const fs::path p = scratch("mask.csv");
  io::write_atomic(p, io::mask_csv(disk));
  CHECK(io::load_mask_csv(p, g).mask == disk.mask);

  write(p, "m,n,flag\n-2,1,1\n");
  const PhaseRegion one = io::load_mask_csv(p, g);
  CHECK(one.count() == 1);
  CHECK(one(g.index(-2), g.index(1)));
  write(p, "m,n,flag\n3,0,1\n");
  CHECK_THROWS_AS(io::load_mask_csv(p, g), InputError);

  std::string text = "m,n,value\n";
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n) text += std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(m * n) + "\n";
  write(p, text);
  const CostMatrix c = io::load_cost_csv(p, g);
  CHECK(c(g.index(2), g.index(-1)) == -2.0);
  CHECK(c.lower_bound == -4.0);
  write(p, "m,n,value\n0,0,1\n");
  CHECK_THROWS_AS(io::load_cost_csv(p, g), InputError);
}

TEST_CASE("coupling output") {
  Coupling c{2, 2, {0.5, 0.0, 0.0, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  CHECK(io::coupling_csv(c, -1, -1) == "m,n,weight\n-1,-1,0.5\n0,0,0.5\n");
}

TEST_CASE("atomic write leaves no temporary behind") {
  const fs::path p = scratch("atomic.txt");
  io::write_atomic(p, "first");
  io::write_atomic(p, "second");
  std::ifstream in(p);
  std::string s;
  in >> s;
  CHECK(s == "second");
  CHECK_FALSE(fs::exists(fs::path(p.string() + ".tmp")));
  CHECK_THROWS_AS(io::write_atomic(scratch("no/such/dir/file"), "x"), InputError);
}
