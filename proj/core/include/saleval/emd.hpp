#pragma once

#include <vector>

#include "saleval/core_types.hpp"

namespace saleval {

struct MassPoint {
  int cell = 0;  // row-major index into the grid
  double mass = 0.0;
};

/// Balanced transportation problem over grid cells. Ground distance is the
/// Euclidean distance between cell centers in grid units.
struct TransportProblem {
  std::vector<MassPoint> supplies;
  std::vector<MassPoint> demands;
  int grid_width = 1;

  double cost(int from_cell, int to_cell) const;
};

struct TransportFlow {
  int from_cell = 0;
  int to_cell = 0;
  double mass = 0.0;
};

struct TransportSolution {
  double cost = 0.0;
  std::vector<TransportFlow> flows;
};

/// Exact minimum-cost solution via the transportation simplex.
TransportSolution solve_transport(const TransportProblem& problem);

struct EmdConfig {
  int max_side = 32;       // grids larger than this get integer-factor downsampling
  bool downsample = true;  // area-average downsampling on/off
};

/// Earth mover's distance between two maps after normalizing both to sum 1.
/// Cost is reported in downsampled-pixel units when downsampling applies.
double emd_metric(const DensityMap& sal, const DensityMap& gt, const EmdConfig& cfg = {});

}  // namespace saleval
