#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <tuple>

#include "fpilab/error.hpp"
#include "fpilab/verify.hpp"

namespace fpilab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::size_t id_rank(const std::string& id) {
  const auto& ids = inequality_ids();
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
}

}  // namespace

void sort_reports(std::vector<InequalityReport>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const InequalityReport& a, const InequalityReport& b) {
    return std::forward_as_tuple(id_rank(a.id), a.delta, a.p, a.weight, a.func, a.N) <
           std::forward_as_tuple(id_rank(b.id), b.delta, b.p, b.weight, b.func, b.N);
  });
}

void write_report_csv(std::ostream& os, const std::vector<InequalityReport>& rows, bool summary) {
  const bool extra = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.subsampled; });
  os << "id,n,N,p,delta,weight,func,eta,r,diag_depth,lhs,rhs_core,k_factor,ratio,a1_est,normalized";
  if (extra) os << ",subsampled";
  os << '\n';
  for (const auto& r : rows) {
    os << r.id << ',' << r.n << ',' << r.N << ',' << num(r.p) << ',' << num(r.delta) << ','
       << field(r.weight) << ',' << field(r.func) << ',' << num(r.eta) << ',' << num(r.r) << ','
       << r.diag_depth << ',' << num(r.lhs) << ',' << num(r.rhs_core) << ',' << num(r.k_factor)
       << ',' << num(r.ratio) << ',' << num(r.a1_est) << ','
       << (r.normalized ? (*r.normalized ? "true" : "false") : "na");
    if (extra) os << ',' << (r.subsampled ? "true" : "false");
    os << '\n';
  }
  if (!summary) return;
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_id;
  for (const auto& r : rows) {
    if (!by_id.count(r.id)) order.push_back(r.id);
    by_id[r.id].push_back(r.ratio);
  }
  for (const auto& id : order) {
    const auto& v = by_id[id];
    const double hi = *std::max_element(v.begin(), v.end());
    const double lo = *std::min_element(v.begin(), v.end());
    os << "# summary id=" << id << " rows=" << v.size() << " max_ratio=" << num(hi)
       << " min_ratio=" << num(lo) << " spread=" << (lo > 0 ? num(hi / lo) : std::string("inf"))
       << '\n';
  }
}

SweepTable sweep(const SweepAxes& axes, const VerifyParams& base) {
  auto or_base = [](const auto& list, const auto& fallback) {
    using T = std::decay_t<decltype(fallback)>;
    return list.empty() ? std::vector<T>{fallback} : std::vector<T>(list.begin(), list.end());
  };
  const auto deltas = or_base(axes.deltas, base.delta);
  const auto ps = or_base(axes.ps, base.p);
  const auto weights = or_base(axes.weights, base.weight);
  const auto funcs = or_base(axes.funcs, base.func);

  SweepTable table;
  std::vector<VerifyParams> jobs;
  std::vector<std::string> job_ids;
  for (const auto& id : axes.ids) {
    for (double d : deltas) {
      for (double p : ps) {
        for (const auto& w : weights) {
          for (const auto& f : funcs) {
            VerifyParams v = base;
            v.delta = d;
            v.p = p;
            v.weight = w;
            v.func = f;
            try {
              check_hypotheses(id, v);
            } catch (const Error& e) {
              if (e.kind() == ErrorKind::parse_error) throw;
              table.skipped.push_back(id + " delta=" + num(d) + " p=" + num(p) + " weight=" + w +
                                      " func=" + f + ": " + e.what());
              continue;
            }
            jobs.push_back(v);
            job_ids.push_back(id);
          }
        }
      }
    }
  }
  if (jobs.empty()) fail(ErrorKind::nothing_to_sweep, "no admissible combination to sweep");
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    table.rows.push_back(verify_inequality(job_ids[k], jobs[k]));
  }
  sort_reports(table.rows);
  return table;
}

std::vector<ConvergenceRow> convergence_study(const std::string& id, const VerifyParams& base,
                                              const std::vector<int>& grids) {
  require(!grids.empty(), ErrorKind::domain_error, "empty N-list");
  for (std::size_t k = 1; k < grids.size(); ++k) {
    require(grids[k] > grids[k - 1], ErrorKind::domain_error, "N-list must be strictly ascending");
  }
  std::vector<ConvergenceRow> rows;
  for (int n : grids) {
    VerifyParams v = base;
    v.res = n;
    const InequalityReport r = verify_inequality(id, v);
    require(r.valid, ErrorKind::numerical_error, "invalid report at N=" + std::to_string(n));
    rows.push_back({n, r.lhs, r.rhs_core, r.ratio, std::nullopt, std::nullopt});
  }
  for (std::size_t k = 2; k < rows.size(); ++k) {
    const double r1 = rows[k - 2].ratio, r2 = rows[k - 1].ratio, r3 = rows[k].ratio;
    const double e1 = r2 - r1, e2 = r3 - r2;
    const double step = static_cast<double>(rows[k].N) / rows[k - 1].N;
    if (e1 == 0 || e2 == 0) continue;
    const double order = std::log(std::abs(e1 / e2)) / std::log(step);
    if (!std::isfinite(order)) continue;
    rows[k].order = order;
    const double denom = std::pow(step, order) - 1;
    if (denom != 0 && std::isfinite(denom)) rows[k].extrapolated = r3 + (r3 - r2) / denom;
  }
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::string& id,
                           const std::vector<ConvergenceRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("na"); };
  os << "id,N,lhs,rhs_core,ratio,order,extrapolated\n";
  for (const auto& r : rows) {
    os << id << ',' << r.N << ',' << num(r.lhs) << ',' << num(r.rhs_core) << ',' << num(r.ratio)
       << ',' << opt(r.order) << ',' << opt(r.extrapolated) << '\n';
  }
}

}  // namespace fpilab
