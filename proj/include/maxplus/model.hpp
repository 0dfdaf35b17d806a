#ifndef MAXPLUS_MODEL_HPP
#define MAXPLUS_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxplus/rng.hpp"
#include "maxplus/semiring.hpp"

namespace maxplus {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { kIidFinite, kPeriodic, kEntrywiseIid };

// Law of one random scalar; used for the shared per-step draw of parametric
// entrywise models (e.g. the common -X_n appearing in several entries).
struct ScalarDist {
  enum class Kind { kConstant, kUniform, kPareto } kind = Kind::kConstant;
  double a = 0.0;  // constant value / uniform lower bound / pareto alpha
  double b = 0.0;  // uniform upper bound

  static ScalarDist constant(double v) { return {Kind::kConstant, v, 0.0}; }
  static ScalarDist uniform(double lo, double hi) { return {Kind::kUniform, lo, hi}; }
  static ScalarDist pareto(double alpha) { return {Kind::kPareto, alpha, 0.0}; }

  double sample(SplitMix64& rng) const;
  bool mean_is_finite() const;
  double mean() const;  // pre: mean_is_finite()
  double min_support() const;

  friend bool operator==(const ScalarDist&, const ScalarDist&) = default;
};

// Per-entry law for ENTRYWISE_IID models. An entry is bottom with probability
// bottom_mass, otherwise drawn from the listed kind. kNegShared evaluates to
// minus the model's shared per-step draw.
struct EntryDist {
  enum class Kind { kConstant, kUniform, kGaussian, kBottom, kNegShared } kind = Kind::kBottom;
  double a = 0.0;  // constant value / uniform lo / gaussian mu
  double b = 0.0;  // uniform hi / gaussian sigma
  double bottom_mass = 0.0;

  static EntryDist bottom() { return {Kind::kBottom, 0.0, 0.0, 0.0}; }
  static EntryDist constant(double v, double q = 0.0) { return {Kind::kConstant, v, 0.0, q}; }
  static EntryDist uniform(double lo, double hi, double q = 0.0) {
    return {Kind::kUniform, lo, hi, q};
  }
  static EntryDist gaussian(double mu, double sigma, double q = 0.0) {
    return {Kind::kGaussian, mu, sigma, q};
  }
  static EntryDist neg_shared(double q = 0.0) { return {Kind::kNegShared, 0.0, 0.0, q}; }

  double bottom_probability() const { return kind == Kind::kBottom ? 1.0 : bottom_mass; }
  bool never_finite() const { return bottom_probability() >= 1.0; }
  bool always_finite() const { return bottom_probability() <= 0.0; }

  friend bool operator==(const EntryDist&, const EntryDist&) = default;
};

// Law of the stationary matrix sequence (A(n)) plus the seed that stands in
// for the underlying probability space. Sampling is deterministic per
// (model, seed, replicate).
struct MatrixModel {
  ModelKind kind = ModelKind::kIidFinite;
  int dim = 1;
  uint64_t seed = 0;

  std::vector<TropicalMatrix> atoms;  // IID_FINITE
  std::vector<double> probs;

  std::vector<TropicalMatrix> cycle;  // PERIODIC, phase uniform over positions

  std::vector<std::vector<EntryDist>> entries;  // ENTRYWISE_IID, [row][col]
  std::optional<ScalarDist> shared;             // one extra draw per step

  bool integrable = true;
  std::string integrable_note;

  // Original node indices after submodel extraction; empty means identity.
  std::vector<int> node_labels;
  std::string name;

  int label_of(int i) const {
    return node_labels.empty() ? i : node_labels[static_cast<size_t>(i)];
  }

  void validate() const;  // throws ModelError
};

// Deterministic stream of A(0), A(1), ... for one (model, seed, replicate).
// Draw order per step: shared scalar first (if any), then entries row-major;
// IID_FINITE takes one uniform per step; PERIODIC draws its phase up front.
class Realization {
 public:
  Realization(const MatrixModel& model, uint64_t replicate);
  // Testing/diagnostics hook: pin the periodic phase instead of drawing it.
  Realization(const MatrixModel& model, uint64_t replicate, int forced_phase);

  TropicalMatrix next();
  int phase() const { return phase_; }

  // Index of the atom the last next() used (IID_FINITE / PERIODIC only).
  int last_choice() const { return last_choice_; }

 private:
  const MatrixModel* model_;
  SplitMix64 rng_;
  int phase_ = 0;
  long step_ = 0;
  int last_choice_ = -1;
};

std::vector<TropicalMatrix> sample_sequence(const MatrixModel& model, long n, uint64_t replicate);

// Support skeleton: entry (i,j) finite iff A_ij(0) is finite with positive probability.
StructureMatrix support_matrix(const MatrixModel& model);

// True iff P(A_ij(0) = bottom) is 0 or 1 for every entry.
bool fixed_structure_check(const MatrixModel& model);

// Whether ergodicity of every shift power theta^k, k <= dim, is certified by
// the model's form: i.i.d. laws always are; a uniform-phase cycle of length L
// only when gcd(k, L) = 1 for all k <= dim.
struct ErgodicityStatus {
  bool certified = false;
  std::string reason;
};
ErgodicityStatus ergodicity_certified(const MatrixModel& model);

// True when every entry law has finite conditional mean absolute value (or is
// almost surely bottom); finite-atom kinds qualify automatically.
bool entries_integrable(const MatrixModel& model);

// Same, restricted to the square block over `nodes`.
bool submodel_integrable(const MatrixModel& model, std::span<const int> nodes);

MatrixModel permute_model(const MatrixModel& model, std::span<const int> perm);

// The worked examples shipped with the tool.
MatrixModel example_exchanges(uint64_t seed = 42);
MatrixModel example_mairesse(double p, uint64_t seed = 42);
// Third diagonal entry is -1 so that the component exponents are
// (bottom, 0, -1) and the candidate limit (0, 0, -1). Direct iteration gives
// x_1(n,0) = max(-X_{n-1}, -(n-1)) and y_1(n,0) = max(-X_(1), -(n-1)) where
// X_(1) is the draw of the first factor applied last.
MatrixModel example_integrability(ScalarDist x_dist = ScalarDist::pareto(0.9),
                                  uint64_t seed = 42);

struct BuiltinParams {
  double p = 0.5;
  double alpha = 0.9;
  uint64_t seed = 42;
};
MatrixModel builtin_example(const std::string& name, const BuiltinParams& params = {});

}  // namespace maxplus

#endif
