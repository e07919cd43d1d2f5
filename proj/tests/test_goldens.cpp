#include <doctest.h>

#include <cmath>

#include "fpilab/verify.hpp"

using namespace fpilab;

namespace {

// Frozen from verified N=32 runs; every golden is re-checked at N=32 and N=64.
struct Golden {
  const char* id;
  const char* weight;
  const char* atoms;
  const char* func;
  double p;
  double alpha;
  double ratio;
};

const Golden kGoldens[] = {
    {"L42B", "constant:c=1", "", "gauss", 2, 1, 3.5128623627413256},
    {"FSS", "constant:c=1", "", "oscillatory", 2, 1, 0.75640275921934297},
    {"L41", "power:a=0.5,center=0,0", "", "bump", 2, 0.5, 0.67828452999092304},
    {"CR", "constant:c=1", "", "gauss:sigma=0.05", 2, 1, 1.9350781955075489},
    {"FSW", "none", "0,0:1", "bump", 2, 1, 0.53455880272988843},
};

}  // namespace

TEST_CASE("golden ratios") {
  for (const auto& g : kGoldens) {
    for (int n : {32, 64}) {
      VerifyParams v;
      v.dim = 2;
      v.res = n;
      v.p = g.p;
      v.alpha = g.alpha;
      v.weight = g.weight;
      v.atoms = g.atoms;
      v.func = g.func;
      const double r = verify_inequality(g.id, v).ratio;
      INFO(g.id << " N=" << n << " ratio=" << r);
      CHECK(std::abs(r / g.ratio - 1) <= 0.2);
      if (n == 32) CHECK(r == doctest::Approx(g.ratio).epsilon(1e-9));
    }
  }
}

TEST_CASE("golden L61 delta-sweep spread") {
  const double golden = 3.0464780745567515;
  for (int n : {32, 64}) {
    SweepAxes axes;
    axes.ids = {"L61"};
    for (int k = 0; k < 10; ++k) axes.deltas.push_back(0.5 + 0.05 * k);
    VerifyParams v;
    v.dim = 1;
    v.res = n;
    v.p = 2;
    v.weight = "constant:c=1";
    v.func = "gauss";
    const auto rows = sweep(axes, v).rows;
    double lo = INFINITY, hi = 0;
    for (const auto& r : rows) {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    CHECK(hi / lo <= 5);
    CHECK(std::abs(hi / lo / golden - 1) <= 0.2);
  }
}

TEST_CASE("L41 alpha sweep stays within a factor 5") {
  double lo = INFINITY, hi = 0;
  for (double a : {0.25, 0.5, 1.0}) {
    VerifyParams v;
    v.dim = 2;
    v.res = 32;
    v.alpha = a;
    v.weight = "power:a=0.5,center=0,0";
    v.func = "bump";
    const double r = verify_inequality("L41", v).ratio;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo < 5);
}
