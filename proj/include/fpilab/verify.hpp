#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpilab {

// In report order.
const std::vector<std::string>& inequality_ids();
bool is_inequality_id(std::string_view id);

struct VerifyParams {
  int dim = 2;
  int res = 32;
  double p = 2;
  double delta = 0.5;
  std::string weight = "constant:c=1";
  std::string atoms;
  std::string func = "gauss";
  double alpha = 1;
  std::optional<double> beta;
  std::optional<double> eta;
  double r = 1;
  double q = 0.5;
  int diag_depth = 0;
  bool normalized = false;
  std::size_t pair_cap = 10'000'000;
  std::uint64_t seed = 0;
  // u -> u_scale u and w -> w_scale w, for invariance checks.
  double u_scale = 1;
  double w_scale = 1;
};

/// One inequality instance lhs <= k_factor * rhs_core (C(n) dropped).
struct InequalityReport {
  std::string id;
  int n = 0;
  int N = 0;
  double p = 0;
  double delta = 0;
  std::string weight;
  std::string func;
  double eta = 0;
  double r = 0;
  int diag_depth = 0;
  double lhs = 0;
  double rhs_core = 0;
  double k_factor = 0;
  double ratio = 0;
  double a1_est = 0;
  std::optional<bool> normalized;  // T23 only
  bool subsampled = false;
  bool valid = true;
};

// (1-(1-d)p)^{1/p} ((1-d)p)^{1/p}, ((1-d)p-1)^{1/p} or 1 when (1-d)p = 1 (within 1e-12).
double alpha_delta_p(double delta, double p);

// Throws domain-error (or dimension-error) naming the violated hypothesis.
void check_hypotheses(const std::string& id, const VerifyParams& params);

// Explicit factor K of `id` on a cube of side ell; weight_estimate is [w]_{A1}
// ([w]_{Ap} for APF/APS). Ids whose factor depends on more than that take it
// from `params` (alpha, beta, eta, r, q).
double explicit_factor(const std::string& id, const VerifyParams& params, double weight_estimate,
                    double ell = 1.0);

InequalityReport verify_inequality(const std::string& id, const VerifyParams& params);

// Rows by (id order, delta, p, weight, func, N).
void sort_reports(std::vector<InequalityReport>& rows);

// Header, rows with 17 significant digits, then `# summary` lines per id when
// `summary` is set. A `subsampled` column is appended only if some row needs it.
void write_report_csv(std::ostream& os, const std::vector<InequalityReport>& rows, bool summary);

struct SweepAxes {
  std::vector<std::string> ids;
  std::vector<double> deltas;
  std::vector<double> ps;
  std::vector<std::string> weights;
  std::vector<std::string> funcs;
};

struct SweepTable {
  std::vector<InequalityReport> rows;
  std::vector<std::string> skipped;  // one reason per rejected combination
};

// Every admissible combination of the axes on top of `base`; throws
// nothing-to-sweep when none is admissible.
SweepTable sweep(const SweepAxes& axes, const VerifyParams& base);

struct ConvergenceRow {
  int N = 0;
  double lhs = 0;
  double rhs_core = 0;
  double ratio = 0;
  std::optional<double> order;         // observed order from the last three ratios
  std::optional<double> extrapolated;  // Richardson estimate of the limit ratio
};

// N-list must be strictly ascending.
std::vector<ConvergenceRow> convergence_study(const std::string& id, const VerifyParams& base,
                                              const std::vector<int>& grids);
void write_convergence_csv(std::ostream& os, const std::string& id,
                           const std::vector<ConvergenceRow>& rows);

}  // namespace fpilab
