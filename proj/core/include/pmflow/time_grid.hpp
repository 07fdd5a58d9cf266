#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pmflow {

// Strictly increasing positive time nodes. Geometric grids are the common
// case: node ratios are uniform so self-similar rescalings land on nodes.
struct TimeGrid {
  std::vector<double> nodes;

  void validate() const {
    if (nodes.size() < 2)
      throw std::invalid_argument("TimeGrid: need at least two nodes");
    double prev = 0.0;
    for (double t : nodes) {
      if (!(t > prev))
        throw std::invalid_argument(
            "TimeGrid: nodes must be positive and strictly increasing");
      prev = t;
    }
  }

  static TimeGrid geometric(double t_min, double t_max, double ratio) {
    if (!(t_min > 0.0) || !(t_max > t_min) || !(ratio > 1.0))
      throw std::invalid_argument("TimeGrid::geometric: bad parameters");
    TimeGrid g;
    for (double t = t_min; t < t_max * (1.0 + 1e-12); t *= ratio)
      g.nodes.push_back(t);
    return g;
  }

  // Index of the node equal to t (relative tolerance 1e-9); -1 if absent.
  int find(double t) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (std::abs(nodes[i] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
        return static_cast<int>(i);
    return -1;
  }
};

}  // namespace pmflow
