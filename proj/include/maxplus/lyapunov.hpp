#ifndef MAXPLUS_LYAPUNOV_HPP
#define MAXPLUS_LYAPUNOV_HPP

#include <vector>

#include "maxplus/exponent.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/model.hpp"

namespace maxplus {

struct EstimateOptions {
  long horizon = 10000;
  int replicates = 32;
  int threads = 0;  // <= 0: pick from hardware
  long recenter_every = 1000;
  uint64_t stream_base = 0;  // replicate r uses stream stream_base + r
};

// x(k, 0) driven forward one matrix at a time. The trajectory is re-centered
// by its max coordinate every recenter_every steps; the subtracted total is
// carried in an exact offset, which tropical homogeneity makes sound.
class TrajectoryRunner {
 public:
  explicit TrajectoryRunner(int dim, long recenter_every = 1000);

  void step(const TropicalMatrix& a);
  long steps() const { return k_; }
  TropicalScalar coord(int i) const { return shifted(x_[i], offset_); }
  TropicalScalar max_coord() const { return shifted(x_.max_entry(), offset_); }
  TropicalScalar min_coord() const { return shifted(x_.min_entry(), offset_); }
  bool collapsed() const { return x_.all_bottom(); }

 private:
  TropicalVector x_;
  double offset_ = 0.0;
  long k_ = 0;
  long recenter_every_;
};

// A law that always emits the same matrix.
bool is_constant_model(const MatrixModel& model);
TropicalMatrix constant_matrix_of(const MatrixModel& model);

// Max mean weight over all cycles of a constant matrix (Karp per component);
// bottom when the graph has no cycle.
TropicalScalar max_cycle_mean(const TropicalMatrix& a);

// Per-node growth rate of x_i(n,0)/n for a constant matrix: the best cycle
// mean among components reachable from the node, bottom if none.
std::vector<TropicalScalar> node_growth_rates(const TropicalMatrix& a);

// gamma(A): mean over replicates of max_i x_i(n,0)/n. Constant models short-
// circuit to the exact cycle-mean value. If any replicate collapses to the
// all-bottom state the estimate is bottom and the count is reported.
ExponentEstimate estimate_top_exponent(const MatrixModel& model, const EstimateOptions& opts = {});

// gamma_b(A): same with min_i.
ExponentEstimate estimate_bottom_exponent(const MatrixModel& model,
                                          const EstimateOptions& opts = {});

// gamma of one component: closed form for singletons (mean loop weight, or
// bottom when the loop can vanish), exact cycle mean for constant submodels,
// Monte Carlo on the extracted submodel otherwise.
ExponentEstimate component_exponent(const MatrixModel& model, const StructureInfo& info, int m,
                                    const EstimateOptions& opts = {});

ComponentDecomposition full_decomposition(const MatrixModel& model,
                                          const EstimateOptions& opts = {});

// Entry i carries the exponent of the best component reachable from i.
struct LimitPrediction {
  std::vector<TropicalScalar> values;
  std::vector<int> component_of;  // provenance, per entry
  std::vector<ExponentEstimate> source;
};

LimitPrediction predicted_limit(const ComponentDecomposition& decomp);

struct MaxDecompositionReport {
  ExponentEstimate direct;         // gamma(A) on the whole model
  ExponentEstimate component_max;  // max_m gamma^(m)
  double discrepancy = 0.0;
  double combined_se = 0.0;
  double tolerance = 0.0;  // max(1e-9, 3 * combined_se)
  bool within = false;
};

MaxDecompositionReport check_max_decomposition(const MatrixModel& model,
                                               const ComponentDecomposition& decomp,
                                               const EstimateOptions& opts = {});
MaxDecompositionReport check_max_decomposition(const MatrixModel& model,
                                               const EstimateOptions& opts = {});

}  // namespace maxplus

#endif
