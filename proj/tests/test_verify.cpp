#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fpilab/config.hpp"
#include "fpilab/error.hpp"
#include "fpilab/verify.hpp"

using namespace fpilab;

namespace {

std::string hypothesis_message(const std::string& id, const VerifyParams& v) {
  try {
    check_hypotheses(id, v);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

VerifyParams params(int dim, int res, double p, double delta, const char* weight, const char* func) {
  VerifyParams v;
  v.dim = dim;
  v.res = res;
  v.p = p;
  v.delta = delta;
  v.weight = weight;
  v.func = func;
  return v;
}

}  // namespace

TEST_CASE("alpha(delta, p)") {
  CHECK(std::abs(alpha_delta_p(0.5, 2) - 1) <= 1e-12);
  CHECK(std::abs(alpha_delta_p(0.75, 2) - 0.5) <= 1e-12);
  CHECK(std::abs(alpha_delta_p(0.25, 2) - std::sqrt(0.5)) <= 1e-12);
  CHECK(alpha_delta_p(0.5 + 1e-14, 2) == 1.0);

  // alpha / (1 - delta)^{1/p} on delta = 0.50, 0.51, .., 0.99
  const double lo[] = {0.5, 0.2}, hi[] = {0.99, std::sqrt(2.0)};
  for (int pi = 0; pi < 2; ++pi) {
    const double p = pi + 1.0;
    double mn = INFINITY, mx = 0;
    for (int k = 50; k <= 99; ++k) {
      const double d = k / 100.0;
      const double v = alpha_delta_p(d, p) / std::pow(1 - d, 1 / p);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    CHECK(mn == doctest::Approx(lo[pi]).epsilon(1e-9));
    CHECK(mx == doctest::Approx(hi[pi]).epsilon(1e-9));
  }
}

TEST_CASE("explicit factors") {
  VerifyParams v = params(2, 8, 2, 0.5, "constant:c=1", "gauss");
  CHECK(explicit_factor("T21", v, 1, 1) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-15));
  v.p = 1;
  CHECK(explicit_factor("T22", v, 1, 1) == doctest::Approx(4).epsilon(1e-15));
  v.p = 2;
  v.delta = 0.75;
  CHECK(explicit_factor("L61", v, 1, 1) == doctest::Approx(2).epsilon(1e-12));
  v.delta = 0.5;
  CHECK(explicit_factor("T21", v, 2, 1) == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-15));
  v.r = 1;
  v.alpha = 0.5;
  v.eta = 0.5;
  CHECK(explicit_factor("L44", v, 1) == doctest::Approx(2).epsilon(1e-15));
}

TEST_CASE("hypothesis gates") {
  VerifyParams v = params(2, 8, 1, 0.5, "constant:c=1", "gauss");
  CHECK(hypothesis_message("T21", v).find("1<p<∞") != std::string::npos);
  CHECK(hypothesis_message("T22", v).empty());
  v.p = 2;
  CHECK(hypothesis_message("T22", v).find("p=1") != std::string::npos);
  v.delta = 0.4;
  CHECK(hypothesis_message("F1", v).find("1/2≤δ<1") != std::string::npos);
  v.delta = 0.6;
  v.p = 4;
  CHECK(hypothesis_message("F1", v).find("1≤p<n/δ") != std::string::npos);
  v.delta = 1;
  CHECK(hypothesis_message("P1", v).find("0<δ<1") != std::string::npos);
  v.delta = 0.5;
  v.dim = 1;
  try {
    check_hypotheses("L45", v);
    FAIL("L45 accepted n = 1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension_error);
  }
  v.dim = 2;
  CHECK_THROWS_AS(check_hypotheses("T99", v), Error);
  v.q = 1;
  v.r = 1;
  try {
    check_hypotheses("KOLM", v);
    FAIL("KOLM accepted q = r");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_exponents);
  }
  v = params(2, 8, 2, 0.5, "constant:c=1", "gauss");
  v.atoms = "0.5,0.5:1";
  CHECK_THROWS_AS(verify_inequality("T21", v), Error);
  CHECK(verify_inequality("E51", v).valid);
}

TEST_CASE("reports") {
  const auto c = verify_inequality("T21", params(2, 16, 2, 0.5, "power:a=0.5,center=0,0", "const:c=1"));
  CHECK(c.lhs == 0.0);
  CHECK(c.ratio == 0.0);

  for (int n : {64, 128}) {
    const auto r = verify_inequality("L61", params(1, n, 2, 0.5, "constant:c=1", "linear"));
    CHECK(r.rhs_core == doctest::Approx(1).epsilon(1e-14));
    CHECK(r.k_factor == 1.0);
    CHECK(std::abs(r.ratio - 1) <= 1.0 / n);
  }

  const auto a = verify_inequality("T22", params(2, 32, 1, 0.7, "power:a=0.5,center=0,0", "gauss"));
  const auto b = verify_inequality("T22", params(2, 64, 1, 0.7, "power:a=0.5,center=0,0", "gauss"));
  CHECK(std::abs(b.ratio / a.ratio - 1) <= 0.2);
  CHECK(a.a1_est > 1);
  CHECK(a.weight == "power:a=0.5,center=0,0");
}

TEST_CASE("scale invariance") {
  for (const char* id : {"P1", "F0", "F1", "EA", "T21", "T22", "T23", "E51", "L61"}) {
    const bool one = std::string(id) == "T22" || std::string(id) == "T23";
    VerifyParams v = params(2, 12, one ? 1 : 1.5, 0.6, "power:a=0.5,center=0,0", "oscillatory");
    const double base = verify_inequality(id, v).ratio;
    v.u_scale = 2;
    CHECK(verify_inequality(id, v).ratio == doctest::Approx(base).epsilon(1e-12));
    v.u_scale = 3;
    CHECK(verify_inequality(id, v).ratio == doctest::Approx(base).epsilon(1e-12));
    if (id[0] == 'T') {
      v.u_scale = 1;
      v.w_scale = 3;
      CHECK(verify_inequality(id, v).ratio == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("T21 and EA consistency for w = 1") {
  for (const char* f : {"gauss", "oscillatory", "bump"}) {
    const auto v = params(2, 16, 2, 0.6, "constant:c=1", f);
    const double t21 = verify_inequality("T21", v).ratio;
    const double ea = verify_inequality("EA", v).ratio;
    // same two seminorms, K differs by p'
    CHECK(t21 == doctest::Approx(ea / 2).epsilon(1e-12));
  }
}

TEST_CASE("CSV output") {
  std::vector<InequalityReport> rows{
      verify_inequality("T23", params(2, 8, 1, 0.5, "power:a=0.5,center=0,0", "gauss")),
      verify_inequality("P1", params(2, 8, 2, 0.5, "constant:c=1", "gauss"))};
  sort_reports(rows);
  CHECK(rows[0].id == "P1");
  std::ostringstream os;
  write_report_csv(os, rows, true);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "id,n,N,p,delta,weight,func,eta,r,diag_depth,lhs,rhs_core,k_factor,ratio,a1_est,normalized");
  std::getline(in, line);
  CHECK(line.rfind("P1,2,8,2,0.5,lebesgue,gauss,", 0) == 0);
  CHECK(line.substr(line.size() - 3) == ",na");
  std::getline(in, line);
  CHECK(line.find("\"power:a=0.5,center=0,0\"") != std::string::npos);
  CHECK(line.substr(line.size() - 6) == ",false");
  std::getline(in, line);
  CHECK(line.rfind("# summary id=P1 rows=1 ", 0) == 0);

  rows[1].subsampled = true;
  std::ostringstream os2;
  write_report_csv(os2, rows, false);
  CHECK(os2.str().find("normalized,subsampled\n") != std::string::npos);
  CHECK(os2.str().find(",false,true\n") != std::string::npos);
}

TEST_CASE("sweeps") {
  SweepAxes axes;
  axes.ids = {"T21"};
  axes.ps = {1.5, 2, 4, 1};
  axes.deltas = {0.5};
  VerifyParams base = params(2, 8, 2, 0.5, "power:a=0.5,center=0,0", "gauss");
  const SweepTable t = sweep(axes, base);
  CHECK(t.rows.size() == 3);
  CHECK(t.skipped.size() == 1);
  for (const auto& r : t.rows) CHECK(std::isfinite(r.ratio));
  CHECK(t.rows[0].p == 1.5);
  CHECK(t.rows[2].p == 4);

  axes.ps = {1};
  try {
    sweep(axes, base);
    FAIL("expected nothing-to-sweep");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::nothing_to_sweep);
  }
}

TEST_CASE("convergence studies") {
  const auto v = params(1, 8, 2, 0.5, "constant:c=1", "linear");
  const auto rows = convergence_study("L61", v, {16, 32, 64});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ratio < rows[1].ratio);
  CHECK(rows[1].ratio < rows[2].ratio);
  CHECK(rows[2].ratio < 1);
  REQUIRE(rows[2].order);
  CHECK(*rows[2].order == doctest::Approx(1).epsilon(0.05));
  CHECK(std::abs(*rows[2].extrapolated - 1) < 1e-3);
  CHECK(!rows[1].order);

  const auto t22 = convergence_study("T22", params(2, 8, 1, 0.5, "power:a=0.5,center=0,0", "gauss"), {16, 32});
  CHECK(std::abs(t22[1].ratio / t22[0].ratio - 1) <= 0.25);

  for (const auto& r : convergence_study("P1", params(2, 8, 2, 0.5, "constant:c=1", "const:c=2"), {8, 16}))
    CHECK(r.ratio == 0.0);
  CHECK_THROWS_AS(convergence_study("L61", v, {32, 16}), Error);
  CHECK_THROWS_AS(convergence_study("L61", v, {16, 16}), Error);
}

TEST_CASE("config files") {
  const auto e = parse_config("# comment\n dim = 2 \n\nweight = power:a=0.5,center=0,0 # trailing\n--grid=16\n");
  REQUIRE(e.size() == 3);
  CHECK(e[0] == ConfigEntry{"dim", "2"});
  CHECK(e[1] == ConfigEntry{"weight", "power:a=0.5,center=0,0"});
  CHECK(e[2] == ConfigEntry{"grid", "16"});
  CHECK(config_tokens(e)[1] == "--weight=power:a=0.5,center=0,0");
  CHECK_THROWS_AS(parse_config("dim 2\n"), Error);
}
