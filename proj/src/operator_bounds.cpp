#include <cmath>

#include "fpilab/error.hpp"
#include "fpilab/maximal.hpp"
#include "fpilab/seminorm.hpp"

namespace fpilab {

namespace {

void check_q0(const LatticeGrid& g, const CellBox& q0) {
  for (int a = 0; a < g.dim(); ++a) {
    require(q0.size >= 1 && q0.lo[a] >= 0 && q0.lo[a] + q0.size <= g.res(),
            ErrorKind::domain_error, "Q0 leaves the grid cube");
  }
}

}  // namespace

PointwiseRatio check_hedberg(HedbergBound bound, const DiscreteMeasure& mu, double alpha,
                             const CellBox& q0) {
  const LatticeGrid& g = mu.grid();
  const int n = g.dim();
  require(std::isfinite(alpha) && alpha > 0 && alpha < n, ErrorKind::invalid_exponent,
          "Riesz potentials need 0 < alpha < n");
  check_q0(g, q0);
  const DiscreteMeasure local = mu.restricted(q0);
  const Eigen::ArrayXd pot = riesz_field(local, alpha).values();
  const double theta = (n - alpha) / n;
  const double mass = local.total_mass();
  require(mass > 0, ErrorKind::precondition_error, "mu(Q0) = 0");

  Eigen::ArrayXd core(pot.size());
  std::vector<bool> active(g.node_count(), true);
  switch (bound) {
    case HedbergBound::eq1: {
      MaximalSpec spec{MaximalVariant::centered, 0, std::nullopt, std::nullopt};
      const Eigen::ArrayXd mc = maximal_function(spec, local).values();
      core = std::pow(mass, alpha / n) * mc.pow(theta);
      break;
    }
    case HedbergBound::eq2: {
      const Eigen::ArrayXd m = maximal_function(MaximalSpec{}, local).values();
      core = std::pow(q0.size * g.spacing(), alpha) * m;
      for (std::size_t k = 0; k < g.node_count(); ++k) active[k] = g.contains(q0, g.multi_index(k));
      break;
    }
    case HedbergBound::eq3: {
      require(!mu.has_atoms(), ErrorKind::precondition_error, "the A1 bound takes mu = w dx");
      const ScalarField w(g, mu.density(), FieldKind::weight_density);
      const double a1 = a1_constant(w).constant;
      core = std::pow(a1, theta) * std::pow(mass, alpha / n) * w.values().pow(theta);
      break;
    }
  }

  Eigen::ArrayXd rho = Eigen::ArrayXd::Zero(pot.size());
  std::size_t arg = 0;
  double best = -1;
  for (Eigen::Index k = 0; k < pot.size(); ++k) {
    if (!active[static_cast<std::size_t>(k)]) continue;
    require(core[k] > 0, ErrorKind::numerical_error, "Hedberg core vanishes at a node");
    rho[k] = alpha * pot[k] / core[k];
    if (rho[k] > best) {
      best = rho[k];
      arg = static_cast<std::size_t>(k);
    }
  }
  const auto a = static_cast<Eigen::Index>(arg);
  return PointwiseRatio{ScalarField(g, rho), arg, make_ratio(pot[a], core[a], 1 / alpha)};
}

CoreRatio check_fefferman_stein(FeffermanStein mode, const ScalarField& u,
                                const DiscreteMeasure& mu, double p) {
  require(u.grid() == mu.grid(), ErrorKind::precondition_error, "u and mu live on different grids");
  if (mode == FeffermanStein::strong) {
    require(std::isfinite(p) && p > 1, ErrorKind::invalid_exponent, "strong type needs 1 < p < inf");
  }
  const LatticeGrid& g = u.grid();
  const Eigen::ArrayXd mu_cells = mu.cell_masses();
  const Eigen::ArrayXd mu_max = maximal_function(MaximalSpec{}, mu).values();
  const Eigen::ArrayXd mu_u = maximal_function(MaximalSpec{}, u).values();
  const double vol = g.cell_volume();
  if (mode == FeffermanStein::weak) {
    std::vector<WeightedSample> samples(g.node_count());
    for (std::size_t k = 0; k < samples.size(); ++k) {
      samples[k] = {mu_u[static_cast<Eigen::Index>(k)], mu_cells[static_cast<Eigen::Index>(k)]};
    }
    const double lhs = marcinkiewicz_quasinorm(std::move(samples), 1, false);
    const double core = vol * (u.values().abs() * mu_max).sum();
    return make_ratio(lhs, core, 1);
  }
  const double lhs = std::pow((mu_u.pow(p) * mu_cells).sum(), 1 / p);
  const double core = std::pow(vol * (u.values().abs().pow(p) * mu_max).sum(), 1 / p);
  return make_ratio(lhs, core, p / (p - 1));
}

CoreRatio check_local_frac_maximal_bound(const ScalarField& u, const ScalarField& w, double alpha,
                                         const CellBox& q0) {
  const LatticeGrid& g = u.grid();
  require(w.grid() == g, ErrorKind::precondition_error, "u and w live on different grids");
  require(std::isfinite(alpha) && alpha > 0 && alpha < g.dim(), ErrorKind::invalid_exponent,
          "the local fractional bound needs 0 < alpha < n");
  require((u.values() >= 0).all(), ErrorKind::precondition_error, "u must be non-negative");
  check_q0(g, q0);
  const double a1 = a1_constant(w).constant;
  MaximalSpec spec{MaximalVariant::local, alpha, q0, std::nullopt};
  const ScalarField m = maximal_function(spec, u);
  double lhs = 0, core = 0;
  for_each_in_box(g.dim(), q0, [&](const Index3& i) {
    lhs += m.at(i) * w.at(i);
    core += u.at(i) * w.at(i);
  });
  const double vol = g.cell_volume();
  const double ell = q0.size * g.spacing();
  const double factor = std::pow(a1, 1 + alpha / g.dim()) * std::pow(ell, alpha) / alpha;
  return make_ratio(vol * lhs, vol * core, factor);
}

ApReport check_coifman_rochberg(const ScalarField& g, const CellBox& q) {
  const LatticeGrid& grid = g.grid();
  const int n = grid.dim();
  require(n >= 2, ErrorKind::dimension_error, "Coifman-Rochberg needs n >= 2 (n' = n/(n-1))");
  require((g.values() >= 0).all(), ErrorKind::precondition_error, "g must be non-negative");
  check_q0(grid, q);
  const DiscreteMeasure local = DiscreteMeasure::from_field(g).restricted(q);
  require(local.total_mass() > 0, ErrorKind::precondition_error, "g vanishes on Q");
  const Eigen::ArrayXd m = maximal_function(MaximalSpec{}, local).values();
  return a1_constant(ScalarField(grid, m.pow((n - 1.0) / n), FieldKind::weight_density));
}

}  // namespace fpilab
