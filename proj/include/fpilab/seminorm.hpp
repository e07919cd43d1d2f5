#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpilab/lattice.hpp"
#include "fpilab/measure.hpp"
#include "fpilab/weights.hpp"

namespace fpilab {

// (sum_x sum_{y != x} |u(x)-u(y)|^p |x-y|^{-n-delta p} h^n mu(cell x))^{1/p}
// over the nodes of q. Diagonal pairs are excluded; diagonal_depth > 0 adds
// the linearised self-cell term |grad u(x)|^p h^{p(1-delta)} D(e) mu(cell x),
// D integrated over the unit cell with `diagonal_depth` subdivision levels.
double gagliardo_seminorm(const ScalarField& u, double p, double delta, const DiscreteMeasure& mu,
                          const CellBox& q, int diagonal_depth = 0);

// (h^n sum_q |grad u|^p w)^{1/p}
double sobolev_seminorm(const ScalarField& u, double p, const ScalarField& w, const CellBox& q);
double sobolev_seminorm(const ScalarField& u, double p, const WeightSpec& w, const CellBox& q);

// avg_q |u - u_q|
double poincare_oscillation(const ScalarField& u, const CellBox& q);

struct WeightedSample {
  double value = 0;
  double weight = 0;
};

// sup_t t (mu{|F| > t} / mu(total))^{1/q}, exact on the finite sample set;
// `normalized = false` drops the division by the total.
double marcinkiewicz_quasinorm(std::vector<WeightedSample> samples, double q, bool normalized);

/// |u(x)-u(y)| / |x-y|^{n+delta} on Q x Q with the product measure
/// mu(x) x dy. Symmetric, so every unordered pair carries (mu_x + mu_y) h^n.
/// Beyond `full_limit` ordered pairs every x keeps a seeded stratified subset
/// of partners with proportionally larger weights.
struct ProductKernelSamples {
  std::vector<WeightedSample> samples;
  bool subsampled = false;
};
inline constexpr std::size_t kFullPairLimit = 100'000'000;
ProductKernelSamples product_kernel_samples(const ScalarField& u, double delta,
                                            const DiscreteMeasure& mu, const CellBox& q,
                                            std::uint64_t seed = 0,
                                            std::size_t full_limit = kFullPairLimit);

// mu(Q)^-1 int u^q dmu <= r/(r-q) ||u||^q_{L^{r,inf}(Q, dmu/mu(Q))}, 0 < q < r.
CoreRatio kolmogorov_check(const ScalarField& u, double q, double r, const DiscreteMeasure& mu,
                           const CellBox& box);

enum class Representation { l43, l44, l45 };

struct RepresentationParams {
  double alpha = 1;
  std::optional<double> beta;  // l43, defaults to alpha
  double r = 1;                // l44
  std::optional<double> eta;   // l44, defaults to (n - alpha) / 2
  std::size_t pair_cap = 10'000'000;
  std::uint64_t seed = 0;
};

struct RepresentationResult {
  CoreRatio at_max;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t evaluated = 0;
  bool sampled = false;
};

// kappa = 1 and C(n) dropped; q0 is the whole grid cube.
//   l43: |u(x)-u(y)| <= (1/beta) |x-y|^beta (M_{alpha-beta,Q0} g(x) + M_{alpha-beta,Q0} g(y))
//   l44: |u(x)-u_Q0| <= alpha^{-1/r'} eta^{-1/r} l(Q0)^{alpha/r'} I_alpha(g^r chi_Q0)(x)^{1/r}
//   l45: |u(x)-u(y)| <= |x-y| min M(g chi_Q0)^{1/n} max M(g chi_Q0)^{1/n'}
// Pairs (l43, l45) are all unordered node pairs up to pair_cap, otherwise a
// seeded sample of pair_cap of them.
RepresentationResult check_representation(Representation lemma, const ScalarField& u,
                                          const ScalarField& g, const RepresentationParams& params);

// Core value for one pair; x == y throws degenerate-pair. For l44 only x is used.
double representation_rhs(Representation lemma, const ScalarField& g,
                          const RepresentationParams& params, std::size_t x, std::size_t y);

}  // namespace fpilab
