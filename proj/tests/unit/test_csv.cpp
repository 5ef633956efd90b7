#include <catch_amalgamated.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "idsm/csv.hpp"

using namespace idsm;

namespace {

double parse(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  REQUIRE(ec == std::errc{});
  REQUIRE(ptr == s.data() + s.size());
  return x;
}

}  // namespace

TEST_CASE("doubles round-trip through their text form") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 5000; ++i) {
    const double x = std::ldexp(mant(gen), expo(gen));
    CHECK(parse(format_double(x)) == x);
  }
  for (double x : {0.0, 1.0, -2.5, 1e-320, std::numeric_limits<double>::max(), 0.1}) {
    CHECK(parse(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("paths header and rows") {
  PathBundle p;
  p.grid = {0.0, 0.5, 1.0};
  p.X = {0.0, 1.0, 2.0};
  p.M = {0.0, 0.25, 0.5};
  p.A = {0.0, 0.75, 1.5};
  std::ostringstream out;
  write_paths_csv(out, p);
  CHECK(out.str() == "t,X,M,A\n0,0,0,0\n0.5,1,0.25,0.75\n1,2,0.5,1.5\n");

  p.G = {0.0, -1.0, 3.0};
  std::ostringstream with_g;
  write_paths_csv(with_g, p);
  CHECK(with_g.str().rfind("t,X,M,A,G\n", 0) == 0);
  CHECK(with_g.str().find("0.5,1,0.25,0.75,-1\n") != std::string::npos);
}

TEST_CASE("jumps carry the mixing-point label") {
  MixingPoint a;
  a.label = "slow";
  a.levy = LevyMeasure1D::stable(1.5, 1.0);
  MixingPoint b = a;
  b.label = "fast";
  const ModelSpec model({a, b});
  std::ostringstream out;
  write_jumps_csv(out, {{0.25, -1.5, 1, 0}, {0.5, 2.0, 0, 3}}, model);
  CHECK(out.str() == "time,size,v\n0.25,-1.5,fast\n0.5,2,slow\n");
  std::ostringstream empty;
  write_jumps_csv(empty, {}, model);
  CHECK(empty.str() == "time,size,v\n");
}
