#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathlaw {

/// Uniform discretization of [0, t_end]: nodes s_k = k * t_end / n_steps.
/// Node indices are symmetric under k -> n_steps - k, which keeps time
/// reversal an exact index operation.
struct TimeGrid {
  double t_end = 1.0;
  std::size_t n_steps = 2;

  TimeGrid() = default;
  TimeGrid(double t, std::size_t n) : t_end(t), n_steps(n) {
    if (!(t_end > 0.0) || !std::isfinite(t_end))
      throw std::invalid_argument("TimeGrid: t_end must be positive and finite");
    if (n_steps < 2)
      throw std::invalid_argument("TimeGrid: n_steps must be >= 2");
  }

  double dt() const { return t_end / static_cast<double>(n_steps); }
  double node(std::size_t k) const {
    return t_end * static_cast<double>(k) / static_cast<double>(n_steps);
  }
  std::size_t n_nodes() const { return n_steps + 1; }

  bool operator==(const TimeGrid&) const = default;
};

/// A real-valued function sampled on a TimeGrid. Paths are immutable
/// values; transforms return fresh paths.
struct Path {
  TimeGrid grid;
  std::vector<double> values;  // phi at s_0 .. s_n

  Path() : values(3, 0.0) {}
  Path(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n_nodes())
      throw std::invalid_argument("Path: values size must equal n_steps + 1");
    for (std::size_t k = 0; k < values.size(); ++k)
      if (!std::isfinite(values[k]))
        throw std::invalid_argument("Path: non-finite value at node " + std::to_string(k));
  }

  std::size_t n_nodes() const { return values.size(); }
  double endpoint() const { return values.back(); }
};

}  // namespace pathlaw
