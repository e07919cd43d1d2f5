#pragma once

#include <optional>

#include "fpilab/lattice.hpp"
#include "fpilab/measure.hpp"
#include "fpilab/weights.hpp"

namespace fpilab {

enum class MaximalVariant { centered, noncentered, local, weighted_centered };
enum class EvalPath { fast, oracle };

/// M^c_alpha, M_alpha, M_{alpha,Q0} and M^c_w, all of them suprema of
/// l(R)^alpha mu(R) / |R| over a discrete cube family:
///   centered           Q(x, k h), k = 1..2N, mu extended by zero
///   noncentered        grid-aligned cubes containing x
///   local              grid-aligned cubes containing x and inside q0 (0 off q0)
///   weighted_centered  Q(x, k h) with w(R)^-1 int_R |u| dw; |u| is the measure density
struct MaximalSpec {
  MaximalVariant variant = MaximalVariant::noncentered;
  double alpha = 0;
  std::optional<CellBox> q0;
  std::optional<ScalarField> weight;
};

// The fast path uses summed-area tables, the oracle sums every cube directly.
// Both accumulate the same fixed-point cell values, so they agree bit for bit.
ScalarField maximal_function(const MaximalSpec& spec, const DiscreteMeasure& mu,
                             EvalPath path = EvalPath::fast);
ScalarField maximal_function(const MaximalSpec& spec, const ScalarField& u,
                             EvalPath path = EvalPath::fast);

// M(M mu), two noncentered passes.
ScalarField iterated_maximal(const DiscreteMeasure& mu);

// I_alpha mu at every node, 0 < alpha < n. Nodes y != x contribute by the
// midpoint rule; the cell of x contributes density(x) h^alpha C(n, alpha)
// with C the integral of |z|^{alpha-n} over the unit cell.
ScalarField riesz_field(const DiscreteMeasure& mu, double alpha);
double riesz_potential(const DiscreteMeasure& mu, double alpha, std::size_t node,
                       const std::optional<CellBox>& q0 = std::nullopt);

// int_{[-1/2,1/2]^n} |z|^{alpha-n} dz: closed form for n = 1, 4^n-way
// subdivision (depth 2, Gauss-Legendre leaves) of the self-similar shell for n = 2, 3.
double self_cell_integral(int dim, double alpha);

/// Per-node ratio field plus the row for its maximiser: lhs(x*) <= factor core(x*).
struct PointwiseRatio {
  ScalarField rho;
  std::size_t argmax = 0;
  CoreRatio at_max;
};

enum class HedbergBound { eq1, eq2, eq3 };

// I_alpha(chi_Q0 mu)(x) <= (C/alpha) core(x) with core
//   eq1: mu(Q0)^{alpha/n} M^c(chi_Q0 mu)(x)^{(n-alpha)/n}   every node
//   eq2: l(Q0)^alpha M(chi_Q0 mu)(x)                        nodes of Q0
//   eq3: [w]^{(n-alpha)/n} w(Q0)^{alpha/n} w(x)^{(n-alpha)/n} every node, mu = w dx
PointwiseRatio check_hedberg(HedbergBound bound, const DiscreteMeasure& mu, double alpha,
                             const CellBox& q0);

enum class FeffermanStein { weak, strong };

// weak:   sup_t t mu{Mu > t} <= C int |u| M mu dx
// strong: ||Mu||_{L^p(mu)}   <= C p' ||u||_{L^p(M mu dx)}
CoreRatio check_fefferman_stein(FeffermanStein mode, const ScalarField& u,
                                const DiscreteMeasure& mu, double p);

// int_Q0 M_{alpha,Q0} u w <= (C/alpha) [w]^{1+alpha/n} l(Q0)^alpha int_Q0 u w
CoreRatio check_local_frac_maximal_bound(const ScalarField& u, const ScalarField& w, double alpha,
                                         const CellBox& q0);

// Discrete [M(g chi_Q)^{1/n'}]_{A1}, n >= 2.
ApReport check_coifman_rochberg(const ScalarField& g, const CellBox& q);

}  // namespace fpilab
