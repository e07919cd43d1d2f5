#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fpilab/catalog.hpp"
#include "fpilab/error.hpp"
#include "fpilab/exact_sum.hpp"
#include "fpilab/field_io.hpp"
#include "fpilab/lattice.hpp"

using namespace fpilab;

namespace {

ScalarField from(const LatticeGrid& g, double (*f)(const Point&)) {
  Eigen::ArrayXd v(static_cast<Eigen::Index>(g.node_count()));
  for (std::size_t k = 0; k < g.node_count(); ++k) v[static_cast<Eigen::Index>(k)] = f(g.node(k));
  return ScalarField(g, v);
}

}  // namespace

TEST_CASE("cell centred nodes") {
  const LatticeGrid g1 = make_grid(Cube::unit(1), 2);
  CHECK(g1.spacing() == 0.5);
  CHECK(g1.node(std::size_t{0})[0] == 0.25);
  CHECK(g1.node(std::size_t{1})[0] == 0.75);

  const LatticeGrid g2 = make_grid(Cube::unit(2), 4);
  CHECK(g2.node_count() == 16);
  CHECK(g2.spacing() == 0.25);

  Point c(1);
  c << 2.0;
  const LatticeGrid g3 = make_grid(Cube(1, c, 3.0), 3);
  CHECK(g3.spacing() == 1.0);
  CHECK(g3.node(std::size_t{2})[0] == 4.5);
}

TEST_CASE("bad resolutions and alignment") {
  CHECK_THROWS_AS(make_grid(Cube::unit(2), 0), Error);
  CHECK_THROWS_AS(make_grid(Cube::unit(3), 1024), Error);
  const LatticeGrid g = make_grid(Cube::unit(1), 4);
  Point c(1);
  c << 0.1;
  try {
    g.align(Cube(1, c, 0.25));
    FAIL("expected alignment-error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::alignment_error);
  }
}

TEST_CASE("cube averages") {
  const LatticeGrid g = make_grid(Cube::unit(2), 8);
  CHECK(cube_average(ScalarField(g, Eigen::ArrayXd::Constant(64, 3.0)), g.full_box()) == 3.0);
  CHECK(cube_average(from(g, [](const Point& x) { return x[0]; }), g.full_box()) ==
        doctest::Approx(0.5).epsilon(1e-15));
  const LatticeGrid g1 = make_grid(Cube::unit(1), 64);
  const double avg = cube_average(from(g1, [](const Point& x) { return x[0] * x[0]; }), g1.full_box());
  // composite midpoint error for x^2 is h^2/12
  CHECK(std::abs(avg - 1.0 / 3) == doctest::Approx(g1.spacing() * g1.spacing() / 12).epsilon(1e-9));
}

TEST_CASE("gradients") {
  const LatticeGrid g = make_grid(Cube::unit(2), 16);
  const auto c = gradient_magnitude(ScalarField(g, Eigen::ArrayXd::Constant(256, 7.0)));
  CHECK(c.values().abs().maxCoeff() == 0.0);
  const auto a = gradient_magnitude(from(g, [](const Point& x) { return x[0] + 2 * x[1]; }));
  CHECK((a.values() - std::sqrt(5.0)).abs().maxCoeff() < 1e-12);

  double last = 0;
  for (int n : {32, 64}) {
    const LatticeGrid g1 = make_grid(Cube::unit(1), n);
    const auto s = gradient(from(g1, [](const Point& x) { return std::sin(M_PI * x[0]); }));
    double err = 0;
    for (std::size_t k = 0; k < g1.node_count(); ++k) {
      err = std::max(err, std::abs(s[0][static_cast<Eigen::Index>(k)] - M_PI * std::cos(M_PI * g1.node(k)[0])));
    }
    if (last > 0) CHECK(err < last / 3);
    last = err;
  }
  CHECK_THROWS_AS(gradient(ScalarField(make_grid(Cube::unit(1), 2), Eigen::ArrayXd::Zero(2))), Error);
}

TEST_CASE("subcube enumeration") {
  CHECK(subcube_count(2, 1) == 3);
  CHECK(subcube_count(3, 1) == 6);
  CHECK(subcube_count(4, 2) == 30);
  CHECK(enumerate_subcubes(make_grid(Cube::unit(2), 4)).size() == 30);
  const auto one = enumerate_subcubes(make_grid(Cube::unit(1), 2));
  REQUIRE(one.size() == 3);
}

TEST_CASE("summed-area table equals direct sums") {
  for (int n = 1; n <= 3; ++n) {
    Index3 ext{1, 1, 1};
    for (int a = 0; a < n; ++a) ext[a] = 5;
    WideLattice cells(ext);
    std::uint64_t s = 12345;
    for (int i = 0; i < ext[0]; ++i)
      for (int j = 0; j < ext[1]; ++j)
        for (int k = 0; k < ext[2]; ++k) {
          s = s * 6364136223846793005ULL + 1442695040888963407ULL;
          cells({i, j, k}) = static_cast<Wide>(s >> 20) - (Wide{1} << 43);
        }
    const SummedAreaTable sat(cells);
    for (int lo = 0; lo < 5; ++lo)
      for (int hi = lo + 1; hi <= 5; ++hi) {
        Index3 l{0, 0, 0}, h{1, 1, 1};
        for (int a = 0; a < n; ++a) {
          l[a] = lo;
          h[a] = hi;
        }
        CHECK(sat.box_sum(l, h) == cells.direct_sum(l, h));
      }
  }
}

TEST_CASE("field files") {
  const LatticeGrid g = make_grid(Cube::unit(2), 8);
  for (const auto& e : function_catalog()) {
    const ScalarField f = sample_function(FuncSpec::parse(e.id), g);
    std::stringstream ss;
    write_field(ss, f);
    const ScalarField back = read_field(ss);
    CHECK(back.grid() == g);
    CHECK((back.values() == f.values()).all());
  }
  std::stringstream text;
  write_field(text, ScalarField(make_grid(Cube::unit(1), 3), Eigen::ArrayXd::Ones(3)));
  std::string s = text.str();
  std::stringstream short_file(s.substr(0, s.rfind('1')));
  try {
    read_field(short_file);
    FAIL("expected format-error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::format_error);
  }
  std::stringstream nan_file(s.substr(0, s.rfind('1')) + "nan\n");
  try {
    read_field(nan_file);
    FAIL("expected data-error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::data_error);
  }
}

TEST_CASE("function catalog") {
  CHECK_THROWS_AS(FuncSpec::parse("nosuch"), Error);
  CHECK_THROWS_AS(FuncSpec::parse("gauss:width=1"), Error);
  CHECK(FuncSpec::parse("gauss").label() == "gauss");
  const LatticeGrid g = make_grid(Cube::unit(1), 4);
  CHECK((sample_function(FuncSpec::parse("const:c=2"), g).values() == 2.0).all());
}
