#include "pathlaw/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pathlaw {

namespace {

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

}  // namespace

Path read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("path csv: empty input");
  strip_cr(line);
  if (line != "s,phi")
    throw std::runtime_error("path csv: expected header 's,phi', got '" + line + "'");

  std::vector<double> s, phi;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("path csv: missing comma on line " + std::to_string(lineno));
    std::size_t pos1 = 0, pos2 = 0;
    double sv, pv;
    try {
      sv = std::stod(line.substr(0, comma), &pos1);
      pv = std::stod(line.substr(comma + 1), &pos2);
    } catch (const std::exception&) {
      throw std::runtime_error("path csv: parse error on line " + std::to_string(lineno));
    }
    if (!std::isfinite(sv) || !std::isfinite(pv))
      throw std::runtime_error("path csv: non-finite value on line " + std::to_string(lineno));
    s.push_back(sv);
    phi.push_back(pv);
  }
  if (s.size() < 3) throw std::runtime_error("path csv: need at least 3 rows");
  if (std::abs(s.front()) > 1e-12)
    throw std::runtime_error("path csv: first node must be s = 0");

  const std::size_t n = s.size() - 1;
  const double t_end = s.back();
  if (!(t_end > 0.0)) throw std::runtime_error("path csv: last node must be positive");
  const double ds = t_end / static_cast<double>(n);
  for (std::size_t k = 0; k + 1 <= n; ++k) {
    const double gap = s[k + 1] - s[k];
    if (std::abs(gap - ds) > 1e-9 * ds)
      throw std::runtime_error("path csv: non-uniform spacing at row " + std::to_string(k + 2));
  }
  return Path(TimeGrid(t_end, n), std::move(phi));
}

Path read_path_csv_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open " + filename);
  return read_path_csv(in);
}

void write_path_csv(std::ostream& out, const Path& path) {
  out << "s,phi\n";
  char buf[64];
  for (std::size_t k = 0; k < path.n_nodes(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", path.grid.node(k), path.values[k]);
    out << buf;
  }
}

void write_path_csv_file(const std::string& filename, const Path& path) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open " + filename + " for writing");
  write_path_csv(out, path);
}

void write_paths_long_csv(std::ostream& out, const std::vector<Path>& paths) {
  out << "ordinal,s,phi\n";
  char buf[80];
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    for (std::size_t k = 0; k < p.n_nodes(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, p.grid.node(k), p.values[k]);
      out << buf;
    }
  }
}

}  // namespace pathlaw
