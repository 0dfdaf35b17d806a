#include "maxplus/lyapunov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace maxplus {

TrajectoryRunner::TrajectoryRunner(int dim, long recenter_every)
    : x_(TropicalVector::zeros(dim)), recenter_every_(recenter_every) {}

void TrajectoryRunner::step(const TropicalMatrix& a) {
  x_ = mat_vec(a, x_);
  ++k_;
  if (recenter_every_ > 0 && k_ % recenter_every_ == 0) {
    const TropicalScalar c = x_.max_entry();
    if (c.is_finite()) {
      for (int i = 0; i < x_.dim(); ++i) x_[i] = shifted(x_[i], -c.value());
      offset_ += c.value();
    }
  }
}

bool is_constant_model(const MatrixModel& model) {
  switch (model.kind) {
    case ModelKind::kIidFinite:
      return model.atoms.size() == 1;
    case ModelKind::kPeriodic:
      return model.cycle.size() == 1;
    case ModelKind::kEntrywiseIid:
      for (const auto& row : model.entries)
        for (const EntryDist& e : row) {
          if (e.kind == EntryDist::Kind::kBottom) continue;
          if (e.bottom_mass != 0.0) return false;
          if (e.kind == EntryDist::Kind::kConstant) continue;
          if (e.kind == EntryDist::Kind::kNegShared && model.shared &&
              model.shared->kind == ScalarDist::Kind::kConstant)
            continue;
          return false;
        }
      return true;
  }
  return false;
}

TropicalMatrix constant_matrix_of(const MatrixModel& model) {
  switch (model.kind) {
    case ModelKind::kIidFinite:
      return model.atoms.front();
    case ModelKind::kPeriodic:
      return model.cycle.front();
    case ModelKind::kEntrywiseIid: {
      TropicalMatrix a(model.dim);
      for (int i = 0; i < model.dim; ++i)
        for (int j = 0; j < model.dim; ++j) {
          const EntryDist& e = model.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
          switch (e.kind) {
            case EntryDist::Kind::kConstant:
              a.at(i, j) = TropicalScalar(e.a);
              break;
            case EntryDist::Kind::kNegShared:
              a.at(i, j) = TropicalScalar(-model.shared->a);
              break;
            default:
              break;
          }
        }
      return a;
    }
  }
  throw ModelError("unknown model kind");
}

namespace {

// Karp's max-mean-cycle formula on one strongly connected node set.
TropicalScalar karp_cycle_mean(const TropicalMatrix& a, const std::vector<int>& scc) {
  const int s = static_cast<int>(scc.size());
  if (s == 1) return a.at(scc[0], scc[0]);  // bottom when there is no loop

  std::vector<std::vector<TropicalScalar>> d(
      static_cast<size_t>(s) + 1,
      std::vector<TropicalScalar>(static_cast<size_t>(s), TropicalScalar::bottom()));
  d[0][0] = TropicalScalar(0.0);  // source scc[0]
  for (int k = 1; k <= s; ++k)
    for (int u = 0; u < s; ++u) {
      if (d[static_cast<size_t>(k) - 1][static_cast<size_t>(u)].is_bottom()) continue;
      for (int v = 0; v < s; ++v) {
        const TropicalScalar w = a.at(scc[static_cast<size_t>(u)], scc[static_cast<size_t>(v)]);
        d[static_cast<size_t>(k)][static_cast<size_t>(v)] =
            max(d[static_cast<size_t>(k)][static_cast<size_t>(v)],
                d[static_cast<size_t>(k) - 1][static_cast<size_t>(u)] + w);
      }
    }

  TropicalScalar best = TropicalScalar::bottom();
  for (int v = 0; v < s; ++v) {
    if (d[static_cast<size_t>(s)][static_cast<size_t>(v)].is_bottom()) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < s; ++k) {
      if (d[static_cast<size_t>(k)][static_cast<size_t>(v)].is_bottom()) continue;
      const double ratio = (d[static_cast<size_t>(s)][static_cast<size_t>(v)].value() -
                            d[static_cast<size_t>(k)][static_cast<size_t>(v)].value()) /
                           static_cast<double>(s - k);
      worst = std::min(worst, ratio);
    }
    if (worst < std::numeric_limits<double>::infinity())
      best = max(best, TropicalScalar(worst));
  }
  return best;
}

}  // namespace

TropicalScalar max_cycle_mean(const TropicalMatrix& a) {
  const auto sccs = strongly_connected_components(incidence_graph(structure_of(a)).adj);
  TropicalScalar best = TropicalScalar::bottom();
  for (const auto& scc : sccs) best = max(best, karp_cycle_mean(a, scc));
  return best;
}

std::vector<TropicalScalar> node_growth_rates(const TropicalMatrix& a) {
  const auto adj = incidence_graph(structure_of(a)).adj;
  const auto sccs = strongly_connected_components(adj);
  const int k = static_cast<int>(sccs.size());
  std::vector<int> comp_of(static_cast<size_t>(a.dim()), -1);
  for (int m = 0; m < k; ++m)
    for (int node : sccs[static_cast<size_t>(m)]) comp_of[static_cast<size_t>(node)] = m;

  std::vector<std::vector<int>> comp_adj(static_cast<size_t>(k));
  for (int i = 0; i < a.dim(); ++i)
    for (int j : adj[static_cast<size_t>(i)])
      if (comp_of[static_cast<size_t>(i)] != comp_of[static_cast<size_t>(j)])
        comp_adj[static_cast<size_t>(comp_of[static_cast<size_t>(i)])].push_back(
            comp_of[static_cast<size_t>(j)]);

  std::vector<TropicalScalar> comp_mean(static_cast<size_t>(k));
  for (int m = 0; m < k; ++m) comp_mean[static_cast<size_t>(m)] = karp_cycle_mean(a, sccs[static_cast<size_t>(m)]);

  // Best reachable cycle mean per component, propagated in reverse topological
  // order; component ids ascend along reachability is not guaranteed, so use
  // a fixed-point sweep (K <= 64 keeps this cheap).
  std::vector<TropicalScalar> best(comp_mean);
  for (int pass = 0; pass < k; ++pass) {
    bool changed = false;
    for (int m = 0; m < k; ++m)
      for (int l : comp_adj[static_cast<size_t>(m)])
        if (best[static_cast<size_t>(l)] > best[static_cast<size_t>(m)]) {
          best[static_cast<size_t>(m)] = best[static_cast<size_t>(l)];
          changed = true;
        }
    if (!changed) break;
  }

  std::vector<TropicalScalar> rates(static_cast<size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) rates[static_cast<size_t>(i)] = best[static_cast<size_t>(comp_of[static_cast<size_t>(i)])];
  return rates;
}

namespace {

template <typename Fn>
void run_replicates(int replicates, int threads, Fn&& body) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = static_cast<int>(hw == 0 ? 1 : hw);
  }
  threads = std::min(threads, replicates);
  if (threads <= 1) {
    for (int r = 0; r < replicates; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < replicates; r = next.fetch_add(1)) body(r);
    });
  for (auto& th : pool) th.join();
}

ExponentEstimate estimate_extreme(const MatrixModel& model, const EstimateOptions& opts,
                                  bool top) {
  model.validate();
  if (opts.horizon < 1 || opts.replicates < 1)
    throw ModelError("estimate needs horizon >= 1 and replicates >= 1");

  ExponentEstimate est;
  est.method = ExponentEstimate::Method::kMonteCarlo;
  est.horizon = opts.horizon;
  est.replicates = opts.replicates;

  if (is_constant_model(model)) {
    const TropicalMatrix a = constant_matrix_of(model);
    est.method = ExponentEstimate::Method::kClosedForm;
    if (top) {
      est.point = max_cycle_mean(a);
    } else {
      const auto rates = node_growth_rates(a);
      TropicalScalar worst = rates.front();
      for (TropicalScalar r : rates) worst = min(worst, r);
      est.point = worst;
    }
    return est;
  }

  std::vector<TropicalScalar> values(static_cast<size_t>(opts.replicates));
  run_replicates(opts.replicates, opts.threads, [&](int r) {
    Realization stream(model, opts.stream_base + static_cast<uint64_t>(r));
    TrajectoryRunner traj(model.dim, opts.recenter_every);
    for (long k = 0; k < opts.horizon; ++k) {
      traj.step(stream.next());
      if (traj.collapsed()) break;
    }
    if (traj.collapsed()) {
      values[static_cast<size_t>(r)] = TropicalScalar::bottom();
      return;
    }
    const TropicalScalar v = top ? traj.max_coord() : traj.min_coord();
    values[static_cast<size_t>(r)] =
        scaled(v, 1.0 / static_cast<double>(opts.horizon));
  });

  int bottoms = 0;
  for (TropicalScalar v : values)
    if (v.is_bottom()) ++bottoms;
  est.bottom_replicates = bottoms;
  if (bottoms > 0) {
    est.point = TropicalScalar::bottom();
    return est;
  }

  double mean = 0.0;
  for (TropicalScalar v : values) mean += v.value();
  mean /= static_cast<double>(opts.replicates);
  double ss = 0.0;
  for (TropicalScalar v : values) {
    const double d = v.value() - mean;
    ss += d * d;
  }
  est.point = TropicalScalar(mean);
  est.se = opts.replicates > 1
               ? std::sqrt(ss / static_cast<double>(opts.replicates - 1)) /
                     std::sqrt(static_cast<double>(opts.replicates))
               : 0.0;
  return est;
}

}  // namespace

ExponentEstimate estimate_top_exponent(const MatrixModel& model, const EstimateOptions& opts) {
  return estimate_extreme(model, opts, /*top=*/true);
}

ExponentEstimate estimate_bottom_exponent(const MatrixModel& model, const EstimateOptions& opts) {
  return estimate_extreme(model, opts, /*top=*/false);
}

namespace {

// Exact mean of the diagonal law at a singleton node; bottom when the loop
// can vanish with positive probability (the 1x1 product then dies almost
// surely) or when the conditional mean diverges.
ExponentEstimate singleton_exponent(const MatrixModel& model, int node) {
  switch (model.kind) {
    case ModelKind::kIidFinite: {
      double mean = 0.0;
      for (size_t k = 0; k < model.atoms.size(); ++k) {
        const TropicalScalar t = model.atoms[k].at(node, node);
        if (t.is_bottom()) {
          if (model.probs[k] > 0.0) return ExponentEstimate::closed_form(TropicalScalar::bottom());
          continue;
        }
        mean += model.probs[k] * t.value();
      }
      return ExponentEstimate::closed_form(TropicalScalar(mean));
    }
    case ModelKind::kPeriodic: {
      double total = 0.0;
      for (const TropicalMatrix& a : model.cycle) {
        const TropicalScalar t = a.at(node, node);
        if (t.is_bottom()) return ExponentEstimate::closed_form(TropicalScalar::bottom());
        total += t.value();
      }
      return ExponentEstimate::closed_form(
          TropicalScalar(total / static_cast<double>(model.cycle.size())));
    }
    case ModelKind::kEntrywiseIid: {
      const EntryDist& e = model.entries[static_cast<size_t>(node)][static_cast<size_t>(node)];
      if (e.bottom_probability() > 0.0)
        return ExponentEstimate::closed_form(TropicalScalar::bottom());
      switch (e.kind) {
        case EntryDist::Kind::kConstant:
          return ExponentEstimate::closed_form(TropicalScalar(e.a));
        case EntryDist::Kind::kUniform:
          return ExponentEstimate::closed_form(TropicalScalar(0.5 * (e.a + e.b)));
        case EntryDist::Kind::kGaussian:
          return ExponentEstimate::closed_form(TropicalScalar(e.a));
        case EntryDist::Kind::kNegShared:
          if (!model.shared->mean_is_finite())
            return ExponentEstimate::closed_form(TropicalScalar::bottom());
          return ExponentEstimate::closed_form(TropicalScalar(-model.shared->mean()));
        case EntryDist::Kind::kBottom:
          return ExponentEstimate::closed_form(TropicalScalar::bottom());
      }
      break;
    }
  }
  throw ModelError("unknown model kind");
}

}  // namespace

ExponentEstimate component_exponent(const MatrixModel& model, const StructureInfo& info, int m,
                                    const EstimateOptions& opts) {
  if (m < 0 || m >= static_cast<int>(info.components.size()))
    throw ModelError("component index out of range");
  const auto& nodes = info.components[static_cast<size_t>(m)];
  if (nodes.size() == 1) return singleton_exponent(model, nodes[0]);
  const MatrixModel sub = restrict_model(model, nodes);
  if (is_constant_model(sub))
    return ExponentEstimate::closed_form(max_cycle_mean(constant_matrix_of(sub)));
  return estimate_top_exponent(sub, opts);
}

ComponentDecomposition full_decomposition(const MatrixModel& model, const EstimateOptions& opts) {
  const StructureInfo info = analyze_structure(model);
  std::vector<ExponentEstimate> exps;
  exps.reserve(info.components.size());
  for (int m = 0; m < static_cast<int>(info.components.size()); ++m)
    exps.push_back(component_exponent(model, info, m, opts));
  return decompose(model, exps);
}

LimitPrediction predicted_limit(const ComponentDecomposition& decomp) {
  LimitPrediction p;
  p.values.resize(static_cast<size_t>(decomp.dim()));
  p.component_of.resize(static_cast<size_t>(decomp.dim()));
  p.source.resize(static_cast<size_t>(decomp.dim()));
  for (int i = 0; i < decomp.dim(); ++i) {
    const int m = decomp.component_of(i);
    p.values[static_cast<size_t>(i)] = decomp.comps[static_cast<size_t>(m)].gamma_square.point;
    p.component_of[static_cast<size_t>(i)] = m;
    p.source[static_cast<size_t>(i)] = decomp.comps[static_cast<size_t>(m)].gamma_square;
  }
  return p;
}

MaxDecompositionReport check_max_decomposition(const MatrixModel& model,
                                               const ComponentDecomposition& decomp,
                                               const EstimateOptions& opts) {
  MaxDecompositionReport r;
  r.direct = estimate_top_exponent(model, opts);
  ExponentEstimate best = decomp.comps.front().gamma_round;
  for (const ComponentSets& c : decomp.comps)
    if (c.gamma_round.point > best.point) best = c.gamma_round;
  r.component_max = best;

  if (r.direct.point.is_bottom() && best.point.is_bottom()) {
    r.discrepancy = 0.0;
  } else if (r.direct.point.is_bottom() || best.point.is_bottom()) {
    r.discrepancy = std::numeric_limits<double>::infinity();
  } else {
    r.discrepancy = std::abs(r.direct.point.value() - best.point.value());
  }
  r.combined_se = std::sqrt(r.direct.se_or_zero() * r.direct.se_or_zero() +
                            best.se_or_zero() * best.se_or_zero());
  r.tolerance = std::max(1e-9, 3.0 * r.combined_se);
  r.within = r.discrepancy <= r.tolerance;
  return r;
}

MaxDecompositionReport check_max_decomposition(const MatrixModel& model,
                                               const EstimateOptions& opts) {
  return check_max_decomposition(model, full_decomposition(model, opts), opts);
}

}  // namespace maxplus
