// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "fpilab/catalog.hpp"
#include "fpilab/error.hpp"
#include "fpilab/maximal.hpp"
#include "fpilab/parallel.hpp"
#include "fpilab/verify.hpp"

using namespace fpilab;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int number, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", number, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

VerifyParams params(int dim, int res, double p, double delta, const std::string& weight,
                    const std::string& func) {
  VerifyParams v;
  v.dim = dim;
  v.res = res;
  v.p = p;
  v.delta = delta;
  v.weight = weight;
  v.func = func;
  return v;
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& e : function_catalog()) ids.push_back(e.id);
  return ids;
}

// Runs `body`, turning library errors into a failed criterion.
void guarded(int number, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(number, false, std::string("threw ") + e.what());
  }
}

void criterion1() {
  const auto t0 = Clock::now();
  const double e64 = std::abs(verify_inequality("L61", params(1, 64, 2, 0.5, "constant:c=1", "linear")).ratio - 1);
  const double e128 = std::abs(verify_inequality("L61", params(1, 128, 2, 0.5, "constant:c=1", "linear")).ratio - 1);
  const double t = seconds_since(t0);
  report(1, e64 <= 0.05 && e128 <= 0.6 * e64 && t < 5,
         fmt("L61 u=x: err(64)=%.3g err(128)=%.3g time=%.2fs", e64, e128, t));
}

void criterion2() {
  const double a = alpha_delta_p(0.5, 2), b = alpha_delta_p(0.75, 2), c = alpha_delta_p(0.25, 2);
  const bool ok = std::abs(a - 1) <= 1e-12 && std::abs(b - 0.5) <= 1e-12 &&
                  std::abs(c - std::sqrt(0.5)) <= 1e-12;
  report(2, ok, fmt("alpha(0.5,2)=%.17g alpha(0.75,2)=%.17g alpha(0.25,2)=%.17g", a, b, c));
}

void criterion3() {
  const auto t0 = Clock::now();
  const MaximalVariant variants[] = {MaximalVariant::centered, MaximalVariant::noncentered,
                                     MaximalVariant::local, MaximalVariant::weighted_centered};
  int compared = 0, mismatched = 0;
  for (int n = 1; n <= 3; ++n) {
    const LatticeGrid g = make_grid(Cube::unit(n), 16);
    const ScalarField w = sample_weight(WeightSpec::parse("step:axis=1,t=0.375,lo=1,hi=3"), g);
    for (const char* f : {"gauss", "oscillatory:k=3"}) {
      const ScalarField s = sample_function(FuncSpec::parse(f), g);
      const ScalarField u(g, s.values().abs());
      for (auto v : variants)
        for (double alpha : {0.0, 0.5}) {
          MaximalSpec spec{v, alpha, std::nullopt, std::nullopt};
          if (v == MaximalVariant::local) spec.q0 = CellBox{{2, 2, 2}, 11};
          if (v == MaximalVariant::weighted_centered) spec.weight = w;
          const Eigen::ArrayXd fast = maximal_function(spec, u, EvalPath::fast).values();
          const Eigen::ArrayXd slow = maximal_function(spec, u, EvalPath::oracle).values();
          ++compared;
          if (!(fast == slow).all()) ++mismatched;
        }
    }
  }
  const double t = seconds_since(t0);
  report(3, mismatched == 0 && t < 60,
         fmt("%.0f field pairs compared, %.0f differ, time=%.1fs", compared, mismatched, t));
}

void criterion4() {
  const std::string weights[] = {"constant:c=1", "step:axis=1,t=0.5,lo=1,hi=4", "power:a=0.5,center=0,0"};
  double worst = 0;
  std::string where;
  int rows = 0;
  for (const auto& f : catalog_ids())
    for (double p : {1.5, 2.0})
      for (const auto& w : weights)
        for (const char* id : {"KOLM", "APF", "APS"}) {
          VerifyParams v = params(2, 32, p, 0.5, w, f);
          std::vector<std::pair<double, double>> qr{{0.5, 1}};
          if (std::string(id) == "KOLM") qr.push_back({1, 2});
          for (auto [q, r] : qr) {
            v.q = q;
            v.r = r;
            const double ratio = verify_inequality(id, v).ratio;
            ++rows;
            if (!(ratio <= worst)) {
              worst = ratio;
              where = std::string(id) + " " + f + " " + w;
            }
          }
        }
  report(4, worst <= 1 + 1e-9, fmt("%.0f rows, max ratio=%.17g", rows, worst) + " (" + where + ")");
}

void criterion5() {
  const auto t0 = Clock::now();
  double worst = 0;
  std::string cells;
  for (int n : {1, 2})
    for (double p : {1.0, 2.0})
      for (const char* f : {"gauss", "oscillatory"}) {
        SweepAxes axes;
        axes.ids = {"L61"};
        for (int k = 0; k < 10; ++k) axes.deltas.push_back(0.5 + 0.05 * k);
        axes.ps = {p};
        axes.funcs = {f};
        const SweepTable t = sweep(axes, params(n, 64, p, 0.5, "constant:c=1", f));
        double lo = INFINITY, hi = 0;
        for (const auto& r : t.rows) {
          lo = std::min(lo, r.ratio);
          hi = std::max(hi, r.ratio);
        }
        const double spread = hi / lo;
        worst = std::max(worst, spread);
        cells += fmt(" n=%.0f,p=%.0f,", n, p) + f + fmt(":%.3f", spread);
      }
  const double t = seconds_since(t0);
  report(5, worst <= 5 && t < 600, fmt("max spread=%.3f time=%.1fs;", worst, t) + cells);
}

void criterion6() {
  double worst_change = 0, worst_scale = 0, min_ratio = INFINITY;
  bool finite = true;
  for (const char* id : {"T21", "T22", "T23"})
    for (const char* w : {"power:a=0,center=0,0", "power:a=0.5,center=0,0"})
      for (double d : {0.3, 0.6, 0.9}) {
        const double p = std::string(id) == "T21" ? 2 : 1;
        VerifyParams v = params(2, 32, p, d, w, "gauss");
        const InequalityReport a = verify_inequality(id, v);
        v.res = 64;
        const InequalityReport b = verify_inequality(id, v);
        finite = finite && a.valid && b.valid;
        min_ratio = std::min({min_ratio, a.ratio, b.ratio});
        worst_change = std::max(worst_change, std::abs(b.ratio / a.ratio - 1));
        v.res = 32;
        v.u_scale = 2;
        v.w_scale = 3;
        const double s = verify_inequality(id, v).ratio;
        worst_scale = std::max(worst_scale, std::abs(s / a.ratio - 1));
      }
  report(6, finite && min_ratio > 0 && worst_change <= 0.25 && worst_scale <= 1e-12,
         fmt("min ratio=%.4g max grid change=%.4f max scale deviation=%.3g", min_ratio, worst_change,
             worst_scale));
}

void criterion7() {
  double worst = 0;
  bool finite = true;
  std::string where;
  auto stable = [&](const char* id, VerifyParams v) {
    const InequalityReport a = verify_inequality(id, v);
    v.res *= 2;
    const InequalityReport b = verify_inequality(id, v);
    finite = finite && a.valid && b.valid;
    const double change = a.ratio == b.ratio ? 0 : std::abs(b.ratio / a.ratio - 1);
    if (change > worst) {
      worst = change;
      where = std::string(id) + " " + v.func;
    }
  };
  for (const char* id : {"L42A", "L42B", "L42C"}) {
    for (const char* w : {"constant:c=1", "power:a=0.5,center=0,0"}) stable(id, params(2, 32, 2, 0.5, w, "gauss"));
  }
  for (const auto& f : catalog_ids())
    for (const char* id : {"L43", "L44", "L45"}) stable(id, params(2, 32, 2, 0.5, "constant:c=1", f));

  bool rejects = false;
  try {
    verify_inequality("L45", params(1, 32, 2, 0.5, "constant:c=1", "gauss"));
  } catch (const Error& e) {
    rejects = e.kind() == ErrorKind::dimension_error;
  }
  VerifyParams v = params(2, 16, 2, 0.5, "constant:c=1", "gauss");
  v.alpha = 0.7;
  v.eta = 0.4;
  const bool r1 = std::abs(explicit_factor("L44", v, 1) - 1 / 0.4) <= 1e-15 &&
                  std::abs(verify_inequality("L44", v).k_factor - 1 / 0.4) <= 1e-15;
  report(7, finite && worst <= 0.2 && rejects && r1,
         fmt("max N=32->64 change=%.4f", worst) + " (" + where + ")" +
             (rejects ? ", L45 rejects n=1" : ", L45 accepted n=1") +
             (r1 ? ", L44 r=1 drops alpha^{-1/r'}" : ", L44 r=1 factor wrong"));
}

void criterion8() {
  SweepAxes axes;
  axes.ids = {"T21", "T23", "E51", "L42A", "L43", "L44", "L45", "FSW", "CR", "KOLM", "L61"};
  axes.deltas = {0.4, 0.8};
  axes.ps = {1, 2};
  axes.weights = {"power:a=0.5,center=0,0"};
  axes.funcs = {"gauss", "bump"};
  VerifyParams base = params(2, 16, 2, 0.5, "constant:c=1", "gauss");
  base.atoms.clear();
  std::string out[2];
  const int workers[2] = {1, 8};
  for (int k = 0; k < 2; ++k) {
    set_thread_count(workers[k]);
    std::ostringstream os;
    write_report_csv(os, sweep(axes, base).rows, true);
    out[k] = os.str();
  }
  set_thread_count(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  report(8, out[0] == out[1] && !out[0].empty(),
         fmt("%.0f bytes, 1 vs 8 workers ", static_cast<double>(out[0].size())) +
             (out[0] == out[1] ? "identical" : "differ"));
}

}  // namespace

int main() {
  set_thread_count(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  return failures == 0 ? 0 : 1;
}
