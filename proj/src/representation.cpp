#include <cmath>
#include <random>

#include "fpilab/error.hpp"
#include "fpilab/maximal.hpp"
#include "fpilab/parallel.hpp"
#include "fpilab/seminorm.hpp"

namespace fpilab {

namespace {

struct Prepared {
  Representation lemma;
  const LatticeGrid* grid;
  Eigen::ArrayXd field;  // M_{alpha-beta} g, I_alpha(g^r) or M g
  double factor = 1;
  double beta = 1;
  double inv_r = 1;      // 1/r
  double inv_rp = 0;     // 1/r'
  double ell_term = 1;   // l(Q0)^{alpha/r'}
};

Prepared prepare(Representation lemma, const ScalarField& g, const RepresentationParams& p) {
  const LatticeGrid& grid = g.grid();
  const int n = grid.dim();
  require((g.values() >= 0).all(), ErrorKind::precondition_error, "g must be non-negative");
  Prepared out{lemma, &grid, {}, 1, 1, 1, 0, 1};
  switch (lemma) {
    case Representation::l43: {
      const double beta = p.beta.value_or(p.alpha);
      require(beta > 0 && beta <= p.alpha && p.alpha < n, ErrorKind::invalid_exponents,
              "the representation needs 0 < beta <= alpha < n");
      MaximalSpec spec{MaximalVariant::local, p.alpha - beta, grid.full_box(), std::nullopt};
      out.field = maximal_function(spec, g).values();
      out.beta = beta;
      out.factor = 1 / beta;
      break;
    }
    case Representation::l44: {
      require(p.alpha > 0 && p.alpha < n, ErrorKind::invalid_exponent, "the representation needs 0 < alpha < n");
      require(p.r >= 1 && std::isfinite(p.r), ErrorKind::invalid_exponent, "the representation needs 1 <= r < inf");
      const double eta = p.eta.value_or((n - p.alpha) / 2);
      require(eta > 0 && eta < n - p.alpha, ErrorKind::invalid_exponent,
              "the representation needs 0 < eta < n - alpha");
      out.inv_r = 1 / p.r;
      out.inv_rp = p.r == 1 ? 0.0 : 1 - 1 / p.r;
      const ScalarField gr(grid, g.values().pow(p.r));
      out.field = riesz_field(DiscreteMeasure::from_field(gr), p.alpha).values();
      out.factor = std::pow(p.alpha, -out.inv_rp) * std::pow(eta, -out.inv_r);
      out.ell_term = std::pow(grid.cube().side, p.alpha * out.inv_rp);
      break;
    }
    case Representation::l45:
      require(n >= 2, ErrorKind::dimension_error, "the representation needs n >= 2");
      out.field = maximal_function(MaximalSpec{}, g).values();
      break;
  }
  return out;
}

double core_at(const Prepared& pr, std::size_t x, std::size_t y) {
  const LatticeGrid& g = *pr.grid;
  const auto fx = pr.field[static_cast<Eigen::Index>(x)];
  if (pr.lemma == Representation::l44) return pr.ell_term * std::pow(fx, pr.inv_r);
  require(x != y, ErrorKind::degenerate_pair, "x and y coincide");
  const auto fy = pr.field[static_cast<Eigen::Index>(y)];
  const double d = (g.node(x) - g.node(y)).norm();
  if (pr.lemma == Representation::l43) return std::pow(d, pr.beta) * (fx + fy);
  const double n = g.dim();
  return d * std::pow(std::min(fx, fy), 1 / n) * std::pow(std::max(fx, fy), (n - 1) / n);
}

struct Candidate {
  double ratio = -1;
  double lhs = 0, core = 0;
  std::size_t x = 0, y = 0;
};

Candidate evaluate(const Prepared& pr, const ScalarField& u, double mean, std::size_t x,
                   std::size_t y) {
  const double lhs = pr.lemma == Representation::l44 ? std::abs(u[x] - mean) : std::abs(u[x] - u[y]);
  const double core = core_at(pr, x, y);
  double ratio = 0;
  if (lhs != 0) {
    require(core > 0, ErrorKind::numerical_error, "representation core vanishes where u varies");
    ratio = lhs / (pr.factor * core);
  }
  return {ratio, lhs, core, x, y};
}

void keep(Candidate& best, const Candidate& c) {
  if (c.ratio > best.ratio) best = c;
}

}  // namespace

double representation_rhs(Representation lemma, const ScalarField& g,
                          const RepresentationParams& params, std::size_t x, std::size_t y) {
  require(x < g.grid().node_count() && y < g.grid().node_count(), ErrorKind::domain_error,
          "node index out of range");
  const Prepared pr = prepare(lemma, g, params);
  return pr.factor * core_at(pr, x, y);
}

RepresentationResult check_representation(Representation lemma, const ScalarField& u,
                                          const ScalarField& g,
                                          const RepresentationParams& params) {
  require(u.grid() == g.grid(), ErrorKind::precondition_error, "u and g live on different grids");
  const LatticeGrid& grid = u.grid();
  const Prepared pr = prepare(lemma, g, params);
  const std::size_t m = grid.node_count();
  const double mean = u.values().mean();
  RepresentationResult res;
  Candidate best;

  if (lemma == Representation::l44) {
    for (std::size_t x = 0; x < m; ++x) keep(best, evaluate(pr, u, mean, x, x));
    res.evaluated = m;
  } else if (m * (m - 1) / 2 <= params.pair_cap) {
    std::vector<Candidate> rows(m);
    parallel_for(m, [&](std::size_t x) {
      Candidate b;
      for (std::size_t y = x + 1; y < m; ++y) keep(b, evaluate(pr, u, mean, x, y));
      rows[x] = b;
    });
    for (const auto& c : rows) keep(best, c);
    res.evaluated = m * (m - 1) / 2;
  } else {
    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs(params.pair_cap);
    for (auto& pq : pairs) {
      const std::size_t x = pick(rng);
      std::size_t y = pick(rng);
      while (y == x) y = pick(rng);
      pq = {x, y};
    }
    std::vector<Candidate> vals(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
      vals[k] = evaluate(pr, u, mean, pairs[k].first, pairs[k].second);
    });
    for (const auto& c : vals) keep(best, c);
    res.evaluated = pairs.size();
    res.sampled = true;
  }
  res.x = best.x;
  res.y = best.y;
  res.at_max = CoreRatio{best.lhs, best.core, pr.factor, std::max(0.0, best.ratio)};
  return res;
}

}  // namespace fpilab
