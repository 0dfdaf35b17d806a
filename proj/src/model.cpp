#include "maxplus/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maxplus {

double ScalarDist::sample(SplitMix64& rng) const {
  switch (kind) {
    case Kind::kConstant:
      return a;
    case Kind::kUniform:
      return a + (b - a) * rng.next_unit();
    case Kind::kPareto:
      return rng.next_pareto(a);
  }
  throw ModelError("unknown scalar distribution kind");
}

bool ScalarDist::mean_is_finite() const {
  return kind != Kind::kPareto || a > 1.0;
}

double ScalarDist::mean() const {
  switch (kind) {
    case Kind::kConstant:
      return a;
    case Kind::kUniform:
      return 0.5 * (a + b);
    case Kind::kPareto:
      if (a <= 1.0) throw ModelError("pareto mean is infinite for alpha <= 1");
      return a / (a - 1.0);
  }
  throw ModelError("unknown scalar distribution kind");
}

double ScalarDist::min_support() const {
  switch (kind) {
    case Kind::kConstant:
      return a;
    case Kind::kUniform:
      return a;
    case Kind::kPareto:
      return 1.0;
  }
  throw ModelError("unknown scalar distribution kind");
}

namespace {

constexpr double kProbTolerance = 1e-12;

void validate_prob(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) throw ModelError("probabilities must be finite and >= 0");
}

void validate_entry(const EntryDist& e) {
  if (!(e.bottom_mass >= 0.0) || e.bottom_mass > 1.0)
    throw ModelError("entry bottom mass must lie in [0, 1]");
  if (e.kind == EntryDist::Kind::kUniform && !(e.a <= e.b))
    throw ModelError("uniform entry needs a <= b");
  if (e.kind == EntryDist::Kind::kGaussian && !(e.b >= 0.0))
    throw ModelError("gaussian entry needs sigma >= 0");
}

}  // namespace

void MatrixModel::validate() const {
  if (dim < 1 || dim > kMaxDim) throw ModelError("model dimension out of range");
  if (!node_labels.empty() && static_cast<int>(node_labels.size()) != dim)
    throw ModelError("node label map does not match dimension");
  switch (kind) {
    case ModelKind::kIidFinite: {
      if (atoms.empty()) throw ModelError("IID_FINITE model needs at least one atom");
      if (atoms.size() != probs.size()) throw ModelError("atoms and probs length mismatch");
      double total = 0.0;
      for (double p : probs) {
        validate_prob(p);
        total += p;
      }
      if (std::abs(total - 1.0) > kProbTolerance) throw ModelError("atom probabilities must sum to 1");
      for (const TropicalMatrix& a : atoms)
        if (a.dim() != dim) throw ModelError("atom dimension mismatch");
      break;
    }
    case ModelKind::kPeriodic: {
      if (cycle.empty()) throw ModelError("PERIODIC model needs a nonempty cycle");
      for (const TropicalMatrix& a : cycle)
        if (a.dim() != dim) throw ModelError("cycle element dimension mismatch");
      break;
    }
    case ModelKind::kEntrywiseIid: {
      if (static_cast<int>(entries.size()) != dim) throw ModelError("entry rows mismatch");
      bool uses_shared = false;
      for (const auto& row : entries) {
        if (static_cast<int>(row.size()) != dim) throw ModelError("entry cols mismatch");
        for (const EntryDist& e : row) {
          validate_entry(e);
          uses_shared |= e.kind == EntryDist::Kind::kNegShared;
        }
      }
      if (uses_shared && !shared) throw ModelError("neg_shared entry needs a shared distribution");
      break;
    }
  }
}

Realization::Realization(const MatrixModel& model, uint64_t replicate)
    : model_(&model), rng_(model.seed, replicate) {
  if (model.kind == ModelKind::kPeriodic)
    phase_ = static_cast<int>(rng_.next_u64() % model.cycle.size());
}

Realization::Realization(const MatrixModel& model, uint64_t replicate, int forced_phase)
    : model_(&model), rng_(model.seed, replicate), phase_(forced_phase) {
  if (model.kind != ModelKind::kPeriodic) throw ModelError("phase is only meaningful for PERIODIC");
  if (forced_phase < 0 || forced_phase >= static_cast<int>(model.cycle.size()))
    throw ModelError("phase out of range");
}

TropicalMatrix Realization::next() {
  const MatrixModel& m = *model_;
  switch (m.kind) {
    case ModelKind::kIidFinite: {
      const double u = rng_.next_unit();
      double acc = 0.0;
      size_t pick = m.atoms.size() - 1;
      for (size_t k = 0; k < m.probs.size(); ++k) {
        acc += m.probs[k];
        if (u < acc) {
          pick = k;
          break;
        }
      }
      last_choice_ = static_cast<int>(pick);
      ++step_;
      return m.atoms[pick];
    }
    case ModelKind::kPeriodic: {
      const size_t pos = (static_cast<size_t>(phase_) + static_cast<size_t>(step_)) % m.cycle.size();
      last_choice_ = static_cast<int>(pos);
      ++step_;
      return m.cycle[pos];
    }
    case ModelKind::kEntrywiseIid: {
      double shared_value = 0.0;
      if (m.shared) shared_value = m.shared->sample(rng_);
      TropicalMatrix a(m.dim);
      for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j < m.dim; ++j) {
          const EntryDist& e = m.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
          if (e.kind == EntryDist::Kind::kBottom) continue;
          if (e.bottom_mass > 0.0 && rng_.next_unit() < e.bottom_mass) continue;
          switch (e.kind) {
            case EntryDist::Kind::kConstant:
              a.at(i, j) = TropicalScalar(e.a);
              break;
            case EntryDist::Kind::kUniform:
              a.at(i, j) = TropicalScalar(e.a + (e.b - e.a) * rng_.next_unit());
              break;
            case EntryDist::Kind::kGaussian:
              a.at(i, j) = TropicalScalar(rng_.next_gaussian(e.a, e.b));
              break;
            case EntryDist::Kind::kNegShared:
              a.at(i, j) = TropicalScalar(-shared_value);
              break;
            case EntryDist::Kind::kBottom:
              break;
          }
        }
      }
      last_choice_ = -1;
      ++step_;
      return a;
    }
  }
  throw ModelError("unknown model kind");
}

std::vector<TropicalMatrix> sample_sequence(const MatrixModel& model, long n, uint64_t replicate) {
  if (n < 0) throw ModelError("sample length must be >= 0");
  model.validate();
  Realization stream(model, replicate);
  std::vector<TropicalMatrix> seq;
  seq.reserve(static_cast<size_t>(n));
  for (long k = 0; k < n; ++k) seq.push_back(stream.next());
  return seq;
}

StructureMatrix support_matrix(const MatrixModel& model) {
  StructureMatrix s(model.dim);
  switch (model.kind) {
    case ModelKind::kIidFinite:
      for (size_t k = 0; k < model.atoms.size(); ++k)
        if (model.probs[k] > 0.0) s.merge(structure_of(model.atoms[k]));
      break;
    case ModelKind::kPeriodic:
      for (const TropicalMatrix& a : model.cycle) s.merge(structure_of(a));
      break;
    case ModelKind::kEntrywiseIid:
      for (int i = 0; i < model.dim; ++i)
        for (int j = 0; j < model.dim; ++j)
          s.set(i, j, !model.entries[static_cast<size_t>(i)][static_cast<size_t>(j)].never_finite());
      break;
  }
  return s;
}

bool fixed_structure_check(const MatrixModel& model) {
  switch (model.kind) {
    case ModelKind::kIidFinite: {
      const StructureMatrix first = structure_of(model.atoms.front());
      for (size_t k = 1; k < model.atoms.size(); ++k)
        if (model.probs[k] > 0.0 && structure_of(model.atoms[k]) != first) return false;
      return true;
    }
    case ModelKind::kPeriodic: {
      const StructureMatrix first = structure_of(model.cycle.front());
      for (size_t k = 1; k < model.cycle.size(); ++k)
        if (structure_of(model.cycle[k]) != first) return false;
      return true;
    }
    case ModelKind::kEntrywiseIid:
      for (const auto& row : model.entries)
        for (const EntryDist& e : row) {
          const double q = e.bottom_probability();
          if (q > 0.0 && q < 1.0) return false;
        }
      return true;
  }
  return false;
}

ErgodicityStatus ergodicity_certified(const MatrixModel& model) {
  if (model.kind != ModelKind::kPeriodic)
    return {true, "i.i.d. sequence: every shift power is ergodic"};
  const long L = static_cast<long>(model.cycle.size());
  for (long k = 2; k <= model.dim; ++k)
    if (std::gcd(k, L) != 1)
      return {false, "cycle length " + std::to_string(L) + " shares a factor with shift power " +
                         std::to_string(k) + "; theta^" + std::to_string(k) +
                         " is not certified ergodic"};
  return {true, "cycle length coprime with every shift power up to the dimension"};
}

namespace {

bool entry_integrable(const EntryDist& e, const std::optional<ScalarDist>& shared) {
  switch (e.kind) {
    case EntryDist::Kind::kBottom:
      return true;  // almost surely bottom never contributes to the max
    case EntryDist::Kind::kConstant:
    case EntryDist::Kind::kUniform:
    case EntryDist::Kind::kGaussian:
      return true;
    case EntryDist::Kind::kNegShared:
      return shared && shared->mean_is_finite();
  }
  return false;
}

}  // namespace

bool entries_integrable(const MatrixModel& model) {
  if (model.kind != ModelKind::kEntrywiseIid) return true;
  for (const auto& row : model.entries)
    for (const EntryDist& e : row)
      if (!entry_integrable(e, model.shared)) return false;
  return true;
}

bool submodel_integrable(const MatrixModel& model, std::span<const int> nodes) {
  if (model.kind != ModelKind::kEntrywiseIid) return true;
  for (int i : nodes)
    for (int j : nodes)
      if (!entry_integrable(model.entries[static_cast<size_t>(i)][static_cast<size_t>(j)],
                            model.shared))
        return false;
  return true;
}

MatrixModel permute_model(const MatrixModel& model, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != model.dim) throw ModelError("permutation size mismatch");
  MatrixModel out = model;
  auto permute_matrix = [&](const TropicalMatrix& a) {
    TropicalMatrix r(a.dim());
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j)
        r.at(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]) = a.at(i, j);
    return r;
  };
  for (auto& a : out.atoms) a = permute_matrix(a);
  for (auto& a : out.cycle) a = permute_matrix(a);
  if (model.kind == ModelKind::kEntrywiseIid) {
    out.entries = model.entries;
    for (int i = 0; i < model.dim; ++i)
      for (int j = 0; j < model.dim; ++j)
        out.entries[static_cast<size_t>(perm[static_cast<size_t>(i)])]
                   [static_cast<size_t>(perm[static_cast<size_t>(j)])] =
            model.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  if (!model.node_labels.empty()) {
    out.node_labels.assign(static_cast<size_t>(model.dim), 0);
    for (int i = 0; i < model.dim; ++i)
      out.node_labels[static_cast<size_t>(perm[static_cast<size_t>(i)])] = model.label_of(i);
  }
  return out;
}

MatrixModel example_exchanges(uint64_t seed) {
  const TropicalScalar b = TropicalScalar::bottom();
  MatrixModel m;
  m.kind = ModelKind::kPeriodic;
  m.dim = 2;
  m.seed = seed;
  m.cycle = {TropicalMatrix::from_rows({{b, 0.0}, {0.0, b}}),
             TropicalMatrix::from_rows({{b, 1.0}, {0.0, b}})};
  m.integrable = true;
  m.integrable_note = "finite cycle entries";
  m.name = "exchanges";
  m.validate();
  return m;
}

MatrixModel example_mairesse(double p, uint64_t seed) {
  if (!(p > 0.0) || !(p < 1.0)) throw ModelError("mairesse needs p in (0, 1)");
  const TropicalScalar b = TropicalScalar::bottom();
  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = 3;
  m.seed = seed;
  m.atoms = {TropicalMatrix::from_rows({{0.0, b, b}, {0.0, b, b}, {0.0, 1.0, 1.0}}),
             TropicalMatrix::from_rows({{0.0, b, b}, {0.0, b, 0.0}, {0.0, 0.0, b}})};
  m.probs = {p, 1.0 - p};
  m.integrable = true;
  m.integrable_note = "finite atom entries";
  m.name = "mairesse";
  m.validate();
  return m;
}

MatrixModel example_integrability(ScalarDist x_dist, uint64_t seed) {
  if (x_dist.min_support() < 1.0) throw ModelError("integrability example needs X >= 1");
  MatrixModel m;
  m.kind = ModelKind::kEntrywiseIid;
  m.dim = 3;
  m.seed = seed;
  m.shared = x_dist;
  m.entries = {
      {EntryDist::neg_shared(), EntryDist::neg_shared(), EntryDist::constant(0.0)},
      {EntryDist::bottom(), EntryDist::constant(0.0), EntryDist::constant(0.0)},
      {EntryDist::bottom(), EntryDist::bottom(), EntryDist::constant(-1.0)},
  };
  m.integrable = x_dist.mean_is_finite();
  m.integrable_note = m.integrable
                          ? "E[X] finite"
                          : "E[X] = +inf, so the -X entries are not integrable";
  m.name = "integrability";
  m.validate();
  return m;
}

MatrixModel builtin_example(const std::string& name, const BuiltinParams& params) {
  if (name == "exchanges") return example_exchanges(params.seed);
  if (name == "mairesse") return example_mairesse(params.p, params.seed);
  if (name == "integrability")
    return example_integrability(ScalarDist::pareto(params.alpha), params.seed);
  throw ModelError("unknown builtin example: " + name);
}

}  // namespace maxplus
