#include <doctest.h>

#include <cmath>

#include "fpilab/catalog.hpp"
#include "fpilab/error.hpp"
#include "fpilab/measure.hpp"
#include "fpilab/weights.hpp"

using namespace fpilab;

namespace {

// Plain double enumeration of every grid-aligned cube.
double brute_a1(const ScalarField& w) {
  const LatticeGrid& g = w.grid();
  double best = 0;
  for_each_subcube(g.dim(), g.full_box(), [&](const CellBox& b) {
    double sum = 0, lo = INFINITY;
    int count = 0;
    for_each_in_box(g.dim(), b, [&](const Index3& i) {
      sum += w.at(i);
      lo = std::min(lo, w.at(i));
      ++count;
    });
    best = std::max(best, sum / count / lo);
  });
  return best;
}

double brute_ap(const ScalarField& w, double p) {
  const LatticeGrid& g = w.grid();
  const double e = 1 - p / (p - 1);
  double best = 0;
  for_each_subcube(g.dim(), g.full_box(), [&](const CellBox& b) {
    double s = 0, t = 0;
    int count = 0;
    for_each_in_box(g.dim(), b, [&](const Index3& i) {
      s += w.at(i);
      t += std::pow(w.at(i), e);
      ++count;
    });
    best = std::max(best, s / count * std::pow(t / count, p - 1));
  });
  return best;
}

ScalarField weight(const char* spec, const LatticeGrid& g) { return sample_weight(WeightSpec::parse(spec), g); }

}  // namespace

TEST_CASE("weight specs") {
  CHECK(WeightSpec::parse("power:a=0.5,center=0,0").label() == "power:a=0.5,center=0,0");
  CHECK(WeightSpec::parse("prod:(constant:c=2)*(step:axis=1,t=0.5,lo=1,hi=3)").kind() ==
        WeightSpec::Kind::product);
  CHECK_THROWS_AS(WeightSpec::parse("power:a=0.5,centre=0"), Error);
  CHECK_THROWS_AS(WeightSpec::parse("wobbly:c=1"), Error);
  // a power centre on a node is singular
  CHECK_THROWS_AS(weight("power:a=0.5,center=0.5", make_grid(Cube::unit(1), 5)), Error);
  CHECK_THROWS_AS(weight("constant:c=-1", make_grid(Cube::unit(1), 4)), Error);
}

TEST_CASE("A1 constant") {
  const LatticeGrid g = make_grid(Cube::unit(2), 8);
  CHECK(a1_constant(weight("constant:c=1", g)).constant == 1.0);

  const LatticeGrid g1 = make_grid(Cube::unit(1), 64);
  const ScalarField step = weight("step:axis=1,t=0.5,lo=1,hi=2", g1);
  const ApReport r = a1_constant(step);
  // best cube: one low cell plus the 32 high ones
  CHECK(r.constant == doctest::Approx(65.0 / 33).epsilon(1e-15));
  CHECK(r.constant == doctest::Approx(brute_a1(step)).epsilon(1e-13));
  CHECK(r.argmax.side == doctest::Approx(33.0 / 64));

  for (int n = 1; n <= 3; ++n) {
    const LatticeGrid gn = make_grid(Cube::unit(n), n == 3 ? 6 : 10);
    const std::string zero = n == 1 ? "0" : n == 2 ? "0,0" : "0,0,0";
    const std::string one = n == 1 ? "1" : n == 2 ? "1,1" : "1,1,1";
    for (const std::string& s : {"power:a=0.5,center=" + zero, std::string("step:axis=1,t=0.3,lo=2,hi=0.5"),
                                 "prod:(power:a=0.3,center=" + one + ")*(step:axis=1,t=0.5,lo=1,hi=4)"}) {
      const ScalarField w = weight(s.c_str(), gn);
      CHECK(a1_constant(w).constant == doctest::Approx(brute_a1(w)).epsilon(1e-13));
      for (double p : {1.5, 2.0, 4.0}) {
        CHECK(ap_constant(w, p).constant == doctest::Approx(brute_ap(w, p)).epsilon(1e-12));
      }
    }
  }

  Point c(1);
  c << -1.0;
  double est[2];
  for (int k = 0; k < 2; ++k) {
    const LatticeGrid gp = make_grid(Cube(1, c, 2.0), 64 << k);
    est[k] = a1_constant(weight("power:a=0.5,center=0", gp)).constant;
    CHECK(est[k] >= 1);
  }
  CHECK(std::abs(est[0] / est[1] - 1) <= 0.05);
}

TEST_CASE("A1 is 0-homogeneous") {
  const LatticeGrid g = make_grid(Cube::unit(2), 12);
  const ScalarField w = weight("power:a=0.7,center=0.25,0.25", g);
  const double a = a1_constant(w).constant;
  CHECK(a1_constant(ScalarField(g, 4.0 * w.values(), FieldKind::weight_density)).constant == a);
  CHECK(a1_constant(ScalarField(g, 3.0 * w.values(), FieldKind::weight_density)).constant ==
        doctest::Approx(a).epsilon(1e-12));
  CHECK(ap_constant(ScalarField(g, 4.0 * w.values(), FieldKind::weight_density), 2).constant ==
        ap_constant(w, 2).constant);
}

TEST_CASE("Ap constant") {
  const LatticeGrid g = make_grid(Cube::unit(2), 8);
  for (double p : {1.5, 2.0, 4.0}) CHECK(ap_constant(weight("constant:c=3", g), p).constant == 1.0);
  const LatticeGrid g1 = make_grid(Cube::unit(1), 32);
  const ScalarField step = weight("step:axis=1,t=0.5,lo=1,hi=2", g1);
  CHECK(ap_constant(step, 2).constant <= a1_constant(step).constant + 1e-12);
  CHECK(ap_constant(step, 1).constant == a1_constant(step).constant);
}

TEST_CASE("Ap function and set inequalities") {
  const LatticeGrid g = make_grid(Cube::unit(2), 16);
  const ScalarField w = weight("power:a=0.5,center=0,0", g);
  const ScalarField one(g, Eigen::ArrayXd::Ones(256));
  for (double p : {1.5, 2.0}) {
    const double ap = ap_constant(w, p).constant;
    const CoreRatio r = check_ap_function_inequality(w, p, one, g.full_box());
    CHECK(r.ratio == doctest::Approx(std::pow(ap, -1 / p)).epsilon(1e-12));
    CHECK(r.ratio <= 1);
    const std::vector<bool> all(g.node_count(), true);
    CHECK(check_ap_set_inequality(w, p, all, g.full_box()).ratio ==
          doctest::Approx(std::pow(ap, -1 / p)).epsilon(1e-12));
  }

  // chi_E with w = 1, p = 2: avg chi_E = |E|/|Q| and the core is (|E|/|Q|)^{1/2}
  const ScalarField lebesgue(g, Eigen::ArrayXd::Ones(256), FieldKind::weight_density);
  Eigen::ArrayXd chi = Eigen::ArrayXd::Zero(256);
  std::vector<bool> in_e(256, false);
  for (int k = 0; k < 256; k += 3) {
    chi[k] = 1;
    in_e[static_cast<std::size_t>(k)] = true;
  }
  const double frac = chi.sum() / 256;
  const CoreRatio f = check_ap_function_inequality(lebesgue, 2, ScalarField(g, chi), g.full_box());
  CHECK(f.ratio == doctest::Approx(std::sqrt(frac)).epsilon(1e-12));
  const CoreRatio s = check_ap_set_inequality(lebesgue, 2, in_e, g.full_box());
  CHECK(s.ratio == doctest::Approx(std::sqrt(frac)).epsilon(1e-12));

  // low-weight half of a step weight
  const LatticeGrid g1 = make_grid(Cube::unit(1), 32);
  const ScalarField step = weight("step:axis=1,t=0.5,lo=1,hi=5", g1);
  std::vector<bool> low(32, false);
  for (int k = 0; k < 16; ++k) low[static_cast<std::size_t>(k)] = true;
  CHECK(check_ap_set_inequality(step, 2, low, g1.full_box()).ratio <= 1 + 1e-12);

  CHECK_THROWS_AS(check_ap_set_inequality(step, 2, std::vector<bool>(32, false), g1.full_box()), Error);
  CHECK_THROWS_AS(check_ap_function_inequality(step, 2, ScalarField(g1, -Eigen::ArrayXd::Ones(32)),
                                               g1.full_box()),
                  Error);
}

TEST_CASE("measures") {
  const LatticeGrid g = make_grid(Cube::unit(2), 8);
  Point c(2);
  c << 0.25, 0.25;
  const Cube r(2, c, 0.5);
  CHECK(measure_of(MeasureSpec::lebesgue(), r, g) == 0.25);
  const MeasureSpec atom{std::nullopt, parse_atoms("0.5,0.5:2")};
  CHECK(measure_of(atom, r, g) == 2.0);
  const MeasureSpec both = MeasureSpec::parse("constant:c=1", "0.5,0.5:2");
  CHECK(measure_of(both, r, g) == 2.25);
  CHECK(both.label() == "constant:c=1+atoms=0.5,0.5:2");
  CHECK_THROWS_AS(parse_atoms("0.5,0.5"), Error);
  const DiscreteMeasure d = DiscreteMeasure::sample(both, g);
  CHECK(d.cell_masses().sum() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(d.restricted(g.align(r)).total_mass() == 2.25);
}
