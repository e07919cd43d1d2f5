#pragma once

#include <optional>
#include <vector>

#include "fpilab/lattice.hpp"
#include "fpilab/measure.hpp"

namespace fpilab {

struct ApReport {
  double p = 1;
  double constant = 1;
  Cube argmax;
  LatticeGrid grid;
};

// Discrete [w]_{A1}: max over grid-aligned subcubes R (of `within`, default
// the whole grid) of avg(w, R) / min-node(w, R). Ties go to the smallest
// corner, then the smallest side.
ApReport a1_constant(const ScalarField& w, const std::optional<CellBox>& within = std::nullopt);
ApReport a1_constant(const WeightSpec& w, const LatticeGrid& grid);

// Discrete [w]_{Ap}, p > 1: max over subcubes of avg(w) avg(w^{1-p'})^{p-1}.
// p == 1 falls back to a1_constant.
ApReport ap_constant(const ScalarField& w, double p,
                     const std::optional<CellBox>& within = std::nullopt);
ApReport ap_constant(const WeightSpec& w, double p, const LatticeGrid& grid);

/// lhs <= factor * core, reported as ratio = lhs / (factor * core).
struct CoreRatio {
  double lhs = 0;
  double core = 0;
  double factor = 1;
  double ratio = 0;
};
CoreRatio make_ratio(double lhs, double core, double factor);

// avg_Q u <= [w]_{Ap}^{1/p} (w(Q)^-1 sum_Q u^p w)^{1/p}. The constant defaults
// to the discrete [w]_{Ap} over the whole grid. u must be non-negative.
CoreRatio check_ap_function_inequality(const ScalarField& w, double p, const ScalarField& u,
                                       const CellBox& q,
                                       std::optional<double> constant = std::nullopt);

// The same inequality for u = chi_E; `in_e` flags the nodes of the grid that
// belong to E, which must be a non-empty subset of the nodes of Q.
CoreRatio check_ap_set_inequality(const ScalarField& w, double p, const std::vector<bool>& in_e,
                                  const CellBox& q,
                                  std::optional<double> constant = std::nullopt);

}  // namespace fpilab
