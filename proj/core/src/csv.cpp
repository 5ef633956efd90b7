#include "idsm/csv.hpp"

#include <charconv>
#include <system_error>

namespace idsm {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) {
    return "nan";
  }
  return {buf, res.ptr};
}

void write_paths_csv(std::ostream& out, const PathBundle& path) {
  const bool gaussian = path.has_gaussian();
  out << (gaussian ? "t,X,M,A,G\n" : "t,X,M,A\n");
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    out << format_double(path.grid[k]) << ',' << format_double(path.X[k]) << ','
        << format_double(path.M[k]) << ',' << format_double(path.A[k]);
    if (gaussian) {
      out << ',' << format_double(path.G[k]);
    }
    out << '\n';
  }
}

void write_jumps_csv(std::ostream& out, const std::vector<Jump>& jumps, const ModelSpec& model) {
  out << "time,size,v\n";
  for (const auto& j : jumps) {
    out << format_double(j.time) << ',' << format_double(j.size) << ',' << model.point(j.v).label
        << '\n';
  }
}

}  // namespace idsm
