#include "fpilab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "fpilab/catalog.hpp"
#include "fpilab/error.hpp"
#include "fpilab/maximal.hpp"
#include "fpilab/seminorm.hpp"
#include "fpilab/weights.hpp"

namespace fpilab {

namespace {

[[noreturn]] void hypothesis(const std::string& id, const std::string& what) {
  fail(ErrorKind::domain_error, id + " requires " + what);
}

bool uses_weight(const std::string& id) {
  return id == "T21" || id == "T22" || id == "T23" || id == "L41" || id == "L42C" ||
         id == "APF" || id == "APS";
}

bool uses_measure(const std::string& id) {
  return id == "E51" || id == "L42A" || id == "L42B" || id == "FSW" || id == "FSS" ||
         id == "KOLM";
}

bool uses_func(const std::string& id) { return id.rfind("L42", 0) != 0; }

double dual(double p) { return p / (p - 1); }

double beta_of(const std::string& id, const VerifyParams& v) {
  if (v.beta) return *v.beta;
  return id == "R62" ? v.delta / 2 : v.delta;
}

double eta_of(const VerifyParams& v) { return v.eta.value_or((v.dim - v.alpha) / 2); }

struct Setup {
  LatticeGrid grid;
  CellBox q;
  ScalarField u;
  std::optional<WeightSpec> weight;
  MeasureSpec measure;
};

Setup build(const std::string& id, const VerifyParams& v) {
  const LatticeGrid grid = make_grid(Cube::unit(v.dim), v.res);
  const FuncSpec f = FuncSpec::parse(v.func);
  const ScalarField base = sample_function(f, grid);
  ScalarField u(grid, base.values() * v.u_scale);
  std::optional<WeightSpec> w;
  MeasureSpec mu = MeasureSpec::lebesgue();
  if (uses_weight(id) || uses_measure(id)) {
    mu = MeasureSpec::parse(v.weight, v.atoms);
    if (mu.density && v.w_scale != 1) mu.density = mu.density->scaled(v.w_scale);
    if (uses_weight(id)) {
      require(mu.density && mu.atoms.empty(), ErrorKind::domain_error,
              id + " requires a weight measure w dx (no atoms)");
      w = mu.density;
    }
  }
  return Setup{grid, grid.full_box(), std::move(u), std::move(w), std::move(mu)};
}

double gradient_average(const ScalarField& u, double p) {
  const ScalarField ones(u.grid(), Eigen::ArrayXd::Ones(u.values().size()), FieldKind::weight_density);
  return sobolev_seminorm(u, p, ones, u.grid().full_box()) / std::pow(u.grid().cube().volume(), 1 / p);
}

// (avg_Q int_Q |u(x)-u(y)|^p / |x-y|^{n+delta p} dy dx)^{1/p}
double normalized_gagliardo(const ScalarField& u, double p, double delta, int depth) {
  const DiscreteMeasure leb = DiscreteMeasure::sample(MeasureSpec::lebesgue(), u.grid());
  return gagliardo_seminorm(u, p, delta, leb, u.grid().full_box(), depth) /
         std::pow(u.grid().cube().volume(), 1 / p);
}

}  // namespace

const std::vector<std::string>& inequality_ids() {
  static const std::vector<std::string> ids = {
      "P1",  "F0",  "F1",  "EA",  "T21", "T22", "T23", "E51", "L41", "L42A", "L42B", "L42C",
      "L43", "L44", "L45", "FSW", "FSS", "APF", "APS", "CR",  "KOLM", "L61", "R62"};
  return ids;
}

bool is_inequality_id(std::string_view id) {
  const auto& ids = inequality_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

double alpha_delta_p(double delta, double p) {
  require(delta > 0 && delta < 1, ErrorKind::domain_error, "alpha(delta,p) requires 0<δ<1");
  require(p >= 1 && std::isfinite(p), ErrorKind::domain_error, "alpha(delta,p) requires 1≤p<∞");
  const double s = (1 - delta) * p;
  if (std::abs(s - 1) <= 1e-12) return 1.0;
  if (s < 1) return std::pow((1 - s) * s, 1 / p);
  return std::pow(s - 1, 1 / p);
}

void check_hypotheses(const std::string& id, const VerifyParams& v) {
  if (!is_inequality_id(id)) fail(ErrorKind::parse_error, "unknown inequality id '" + id + "'");
  if (v.dim < 1 || v.dim > 3) fail(ErrorKind::dimension_error, "dimension must be 1, 2 or 3");
  if (!(v.delta > 0 && v.delta < 1)) hypothesis(id, "0<δ<1");
  if (!(v.p >= 1 && std::isfinite(v.p))) hypothesis(id, "1≤p<∞");
  const int n = v.dim;
  if (id == "F1") {
    if (v.delta < 0.5) hypothesis(id, "1/2≤δ<1");
    if (!(v.p < n / v.delta)) hypothesis(id, "1≤p<n/δ");
  }
  if (id == "T21" || id == "E51" || id == "FSS") {
    if (!(v.p > 1)) hypothesis(id, "1<p<∞");
  }
  if (id == "T22" || id == "T23") {
    if (v.p != 1) hypothesis(id, "p=1");
  }
  if (id == "T21" || id == "T22" || id == "T23") {
    if (n < 2) hypothesis(id, "n≥2");
  }
  if (id == "L45" || id == "CR") {
    if (n < 2) fail(ErrorKind::dimension_error, id + " requires n≥2");
  }
  if (id == "L41" || id.rfind("L42", 0) == 0 || id == "L44" || id == "L43") {
    if (!(v.alpha > 0 && v.alpha < n)) hypothesis(id, "0<α<n");
  }
  if (id == "L43") {
    const double b = beta_of(id, v);
    if (!(b > 0 && b <= v.alpha)) hypothesis(id, "0<β≤α<n");
  }
  if (id == "L44") {
    if (!(v.r >= 1 && std::isfinite(v.r))) hypothesis(id, "1≤r<∞");
    const double eta = eta_of(v);
    if (!(eta > 0 && eta < n - v.alpha)) hypothesis(id, "0<η<n-α");
  }
  if (id == "R62") {
    const double b = beta_of(id, v);
    if (!(b > 0 && b <= v.delta)) hypothesis(id, "0<β≤δ<1");
  }
  if (id == "KOLM") {
    if (!(v.q > 0 && v.q < v.r && std::isfinite(v.r))) {
      fail(ErrorKind::invalid_exponents, "KOLM requires 0<q<r<∞");
    }
  }
}

double explicit_factor(const std::string& id, const VerifyParams& v, double w, double ell) {
  check_hypotheses(id, v);
  const double p = v.p, d = v.delta, n = v.dim;
  if (id == "P1") return ell;
  if (id == "F0") return std::pow(ell, d);
  if (id == "F1") {
    const double inv_pp = p == 1 ? 0.0 : 1 - 1 / p;
    return std::pow(1 - d, 1 / p) / std::pow(n - d * p, inv_pp) * std::pow(ell, d);
  }
  if (id == "EA") return std::pow(1 - d, -1 / p) * ell;
  if (id == "T21") return dual(p) * std::pow(1 - d, -1 / p) * std::pow(w, 2 / p) * ell;
  if (id == "T22") return w / ((1 - d) * (1 - d)) * ell;
  if (id == "T23") return std::pow(w, 2 + (1 - d) / n) / (d * (1 - d)) * ell;
  if (id == "E51") return dual(p) * std::pow(1 - d, -1 / p) * ell;
  if (id == "L41") return std::pow(w, 1 + v.alpha / n) * std::pow(ell, v.alpha) / v.alpha;
  if (id.rfind("L42", 0) == 0) return 1 / v.alpha;
  if (id == "L43") return 1 / beta_of(id, v);
  if (id == "L44") {
    const double inv_rp = v.r == 1 ? 0.0 : 1 - 1 / v.r;
    return std::pow(v.alpha, -inv_rp) * std::pow(eta_of(v), -1 / v.r);
  }
  if (id == "FSS") return dual(p);
  if (id == "APF" || id == "APS") return std::pow(w, 1 / p);
  if (id == "KOLM") return v.r / (v.r - v.q);
  if (id == "L61") return std::pow(ell, 1 - d) / alpha_delta_p(d, p);
  return 1.0;  // L45, FSW, CR, R62
}

InequalityReport verify_inequality(const std::string& id, const VerifyParams& v) {
  check_hypotheses(id, v);
  InequalityReport rep;
  rep.id = id;
  rep.n = v.dim;
  rep.N = v.res;
  rep.p = v.p;
  rep.delta = v.delta;
  rep.eta = eta_of(v);
  rep.r = v.r;
  rep.diag_depth = v.diag_depth;
  rep.func = uses_func(id) ? FuncSpec::parse(v.func).label() : "none";
  if (id == "T23") rep.normalized = v.normalized;

  const Setup s = build(id, v);
  const LatticeGrid& g = s.grid;
  const double ell = g.cube().side;
  const double p = v.p, d = v.delta;
  rep.weight = "lebesgue";
  rep.a1_est = 1;
  std::optional<ScalarField> wf;
  if (s.weight) {
    wf = sample_weight(*s.weight, g);
    rep.weight = s.weight->label();
    rep.a1_est = a1_constant(*wf).constant;
  } else if (uses_measure(id)) {
    rep.weight = s.measure.label();
    rep.a1_est = s.measure.density ? a1_constant(*s.measure.density, g).constant : 0.0;
  }

  CoreRatio cr;
  try {
    if (id == "P1") {
      cr = make_ratio(poincare_oscillation(s.u, s.q), gradient_average(s.u, p),
                      explicit_factor(id, v, 1, ell));
    } else if (id == "F0" || id == "F1") {
      cr = make_ratio(poincare_oscillation(s.u, s.q), normalized_gagliardo(s.u, p, d, v.diag_depth),
                      explicit_factor(id, v, 1, ell));
    } else if (id == "EA") {
      cr = make_ratio(std::pow(ell, d) * normalized_gagliardo(s.u, p, d, v.diag_depth),
                      gradient_average(s.u, p), explicit_factor(id, v, 1, ell));
    } else if (id == "L61") {
      cr = make_ratio(normalized_gagliardo(s.u, p, d, v.diag_depth), gradient_average(s.u, p),
                      explicit_factor(id, v, 1, ell));
    } else if (id == "R62") {
      const double b = beta_of(id, v);
      cr = make_ratio(std::pow(ell, b) * normalized_gagliardo(s.u, p, b, v.diag_depth),
                      std::pow(ell, d) * normalized_gagliardo(s.u, p, d, v.diag_depth),
                      explicit_factor(id, v, 1, ell));
    } else if (id == "T21" || id == "T22") {
      const DiscreteMeasure mu = DiscreteMeasure::sample(s.measure, g);
      cr = make_ratio(std::pow(ell, d) * gagliardo_seminorm(s.u, p, d, mu, s.q, v.diag_depth),
                      sobolev_seminorm(s.u, p, *wf, s.q), explicit_factor(id, v, rep.a1_est, ell));
    } else if (id == "T23") {
      const DiscreteMeasure mu = DiscreteMeasure::sample(s.measure, g);
      auto samples = product_kernel_samples(s.u, d, mu, s.q, v.seed);
      rep.subsampled = samples.subsampled;
      const double weak = marcinkiewicz_quasinorm(std::move(samples.samples), 1, v.normalized);
      cr = make_ratio(std::pow(ell, d) * weak, sobolev_seminorm(s.u, 1, *wf, s.q),
                      explicit_factor(id, v, rep.a1_est, ell));
    } else if (id == "E51") {
      const DiscreteMeasure mu = DiscreteMeasure::sample(s.measure, g);
      const ScalarField m2 = iterated_maximal(mu);
      const ScalarField grad = gradient_magnitude(s.u);
      const double core =
          std::pow(g.cell_volume() * (grad.values().pow(p) * m2.values()).sum(), 1 / p);
      cr = make_ratio(std::pow(ell, d) * gagliardo_seminorm(s.u, p, d, mu, s.q, v.diag_depth),
                      core, explicit_factor(id, v, 1, ell));
    } else if (id == "L41") {
      const ScalarField au(g, s.u.values().abs());
      cr = check_local_frac_maximal_bound(au, *wf, v.alpha, s.q);
    } else if (id == "L42A" || id == "L42B" || id == "L42C") {
      const HedbergBound b = id == "L42A"   ? HedbergBound::eq1
                             : id == "L42B" ? HedbergBound::eq2
                                            : HedbergBound::eq3;
      const MeasureSpec ms = id == "L42C" ? MeasureSpec{s.weight, {}} : s.measure;
      cr = check_hedberg(b, DiscreteMeasure::sample(ms, g), v.alpha, s.q).at_max;
    } else if (id == "L43" || id == "L44" || id == "L45") {
      RepresentationParams rp;
      rp.alpha = v.alpha;
      rp.beta = beta_of(id, v);
      rp.r = v.r;
      rp.eta = eta_of(v);
      rp.pair_cap = v.pair_cap;
      rp.seed = v.seed;
      const Representation lemma = id == "L43"   ? Representation::l43
                                   : id == "L44" ? Representation::l44
                                                 : Representation::l45;
      const auto res = check_representation(lemma, s.u, gradient_magnitude(s.u), rp);
      rep.subsampled = res.sampled;
      cr = res.at_max;
    } else if (id == "FSW" || id == "FSS") {
      cr = check_fefferman_stein(id == "FSW" ? FeffermanStein::weak : FeffermanStein::strong, s.u,
                                 DiscreteMeasure::sample(s.measure, g), p);
    } else if (id == "APF" || id == "APS") {
      const double ap = ap_constant(*wf, p).constant;
      const ScalarField au(g, s.u.values().abs());
      if (id == "APF") {
        cr = check_ap_function_inequality(*wf, p, au, s.q, ap);
      } else {
        const double mean = au.values().mean();
        std::vector<bool> in_e(g.node_count());
        for (std::size_t k = 0; k < in_e.size(); ++k) in_e[k] = au[k] >= mean;
        cr = check_ap_set_inequality(*wf, p, in_e, s.q, ap);
      }
    } else if (id == "CR") {
      const ScalarField au(g, s.u.values().abs());
      const double c = check_coifman_rochberg(au, s.q).constant;
      cr = make_ratio(c, 1, 1);
    } else if (id == "KOLM") {
      const ScalarField au(g, s.u.values().abs());
      cr = kolmogorov_check(au, v.q, v.r, DiscreteMeasure::sample(s.measure, g), s.q);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numerical_error) throw;
    rep.valid = false;
    cr = CoreRatio{NAN, NAN, NAN, NAN};
  }
  rep.lhs = cr.lhs;
  rep.rhs_core = cr.core;
  rep.k_factor = cr.factor;
  rep.ratio = cr.ratio;
  if (!(std::isfinite(rep.lhs) && std::isfinite(rep.rhs_core) && std::isfinite(rep.k_factor) &&
        std::isfinite(rep.ratio) && std::isfinite(rep.a1_est))) {
    rep.valid = false;
  }
  return rep;
}

}  // namespace fpilab
