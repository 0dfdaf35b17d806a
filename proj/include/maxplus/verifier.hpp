#ifndef MAXPLUS_VERIFIER_HPP
#define MAXPLUS_VERIFIER_HPP

#include <optional>
#include <string>
#include <vector>

#include "maxplus/graph.hpp"
#include "maxplus/lyapunov.hpp"
#include "maxplus/model.hpp"

namespace maxplus {

enum class HypStatus { kSatisfied, kViolated, kNotCertified };

const char* to_string(HypStatus s);

struct HypothesisEntry {
  std::string theorem;     // which theorem the hypothesis belongs to
  std::string hypothesis;  // short id, e.g. "h1_no_bottom_lines[c2]"
  HypStatus status = HypStatus::kNotCertified;
  std::string witness;  // offending atom/row/component, or the reason
};

// Whether the law almost surely avoids all-bottom rows (keeps x finite).
HypothesisEntry check_global_no_bottom_line(const MatrixModel& model);

// Hypothesis 1: for every component, the restriction of the law to the nodes
// of the components tied for the reachable max exponent has no bottom row.
std::vector<HypothesisEntry> check_h1_no_bottom_lines(const MatrixModel& model,
                                                      const ComponentDecomposition& decomp);

struct PrecedenceStatus {
  HypStatus structural = HypStatus::kNotCertified;  // diagonals almost surely finite
  bool diagonals_integrable = false;
  std::string witness;
};

PrecedenceStatus check_precedence(const MatrixModel& model);

enum class Verdict { kConverges, kDiverges, kNotCertified };

const char* to_string(Verdict v);

struct RouteResult {
  std::string route;  // "iid_iff" | "fixed_structure" | "precedence"
  Verdict verdict = Verdict::kNotCertified;
  std::string detail;
};

struct VerdictReport {
  Verdict verdict = Verdict::kNotCertified;
  std::string theorem;  // the route that decided, empty if none
  std::string justification;
  std::vector<RouteResult> routes;
  std::vector<HypothesisEntry> hypotheses;
};

// Decision tree over the convergence theorems; never extrapolates beyond
// their hypotheses, so "not certified" is a normal outcome.
VerdictReport make_verdict(const MatrixModel& model, const ComponentDecomposition& decomp);

enum class CoordVerdict { kConvergent, kDivergent, kInconclusive };

const char* to_string(CoordVerdict v);

struct CoordinateDiagnostics {
  TropicalScalar liminf_est;  // min of x_i(k,0)/k over the window
  TropicalScalar limsup_est;  // max of the same
  double gap = 0.0;
  double threshold = 0.0;
  bool bottom_seen = false;
  CoordVerdict verdict = CoordVerdict::kInconclusive;
};

struct ConvergenceDiagnostics {
  long horizon = 0;
  long window_start = 0;  // liminf/limsup range over every k in (window_start, horizon]
  uint64_t replicate = 0;
  std::vector<CoordinateDiagnostics> coords;
  std::vector<long> checkpoint_steps;
  std::vector<std::vector<TropicalScalar>> checkpoint_scaled;  // x(k,0)/k snapshots
  CoordVerdict overall = CoordVerdict::kInconclusive;
  static constexpr const char* kThresholdFormula = "max(0.1*scale, 5/sqrt(n))";
};

// One-trajectory liminf/limsup probes of x(k,0)/k. A coordinate is flagged
// divergent only when its window gap exceeds the stored threshold.
ConvergenceDiagnostics empirical_convergence(const MatrixModel& model, long horizon,
                                             int checkpoints, uint64_t replicate = 0);

struct ChainReport {
  std::vector<int> i_nodes, j_nodes;  // original labels, 0-based
  bool g_b_strongly_connected = false;
  double p_d_all_bottom = 1.0;
  bool preconditions_hold = false;
  HypStatus hyp3 = HypStatus::kNotCertified;
  std::string reason;
  int num_states = 0;
  int num_recurrent_classes = 0;
  bool exit_reachable_from_all = false;
  std::vector<uint32_t> states;                           // packed reachable skeletons
  std::vector<std::vector<std::pair<int, double>>> transitions;  // aggregated per state
  std::vector<double> row_sums;
  std::vector<long> exit_histogram;  // index = exit time (matrices consumed); [0] unused
  int runs = 0;
  int censored = 0;
  long max_steps = 0;
};

// Structure-skeleton Markov chain of the upper-left block of the split along
// (I, J), with the empirical first-exit times through the D block.
ChainReport reachability_chain(const MatrixModel& model, std::span<const int> i_nodes,
                               std::span<const int> j_nodes, int runs = 1000,
                               long max_steps = 1000);

struct CoordinateConsistency {
  int node = 0;  // original label, 0-based
  TropicalScalar empirical;
  TropicalScalar predicted;
  bool integrable = true;
  bool within_tol = false;
};

struct ConsistencyReport {
  std::vector<CoordinateConsistency> coords;
  double tol = 0.05;
  long horizon = 0;
  bool h1_satisfied = false;
  bool consistent = false;  // over the integrable coordinates
};

// Probes the per-coordinate limits against the predicted vector; coordinates
// whose own component is not integrable are flagged and excluded from the
// aggregate (almost-sure convergence can fail there).
ConsistencyReport check_thcn_consistency(const MatrixModel& model,
                                         const ComponentDecomposition& decomp, long horizon,
                                         double tol = 0.05);

struct AnalyzeOptions {
  EstimateOptions estimate;
  long diag_horizon = 100000;
  int checkpoints = 200;
  long consistency_horizon = 100000;
  double consistency_tol = 0.05;
  bool run_chains = true;
  int chain_runs = 1000;
  long chain_max_steps = 1000;
};

struct AnalysisReport {
  MatrixModel model;
  ComponentDecomposition decomposition;
  ExponentEstimate gamma, gamma_b;
  MaxDecompositionReport decomposition_check;
  LimitPrediction limit;
  VerdictReport verdict_report;
  ConvergenceDiagnostics diagnostics;
  std::vector<ChainReport> chains;
  std::optional<ConsistencyReport> consistency;
  AnalyzeOptions options;
};

AnalysisReport analyze(const MatrixModel& model, const AnalyzeOptions& opts = {});

}  // namespace maxplus

#endif
