#include "maxplus/graph.hpp"

#include <algorithm>
#include <cmath>

namespace maxplus {

IncidenceGraph incidence_graph(const StructureMatrix& support) {
  IncidenceGraph g;
  g.dim = support.dim();
  g.adj.assign(static_cast<size_t>(g.dim), {});
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j)
      if (support.at(i, j)) g.adj[static_cast<size_t>(i)].push_back(j);
  return g;
}

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(static_cast<size_t>(n), -1);
  std::vector<int> low(static_cast<size_t>(n), 0);
  std::vector<char> on_stack(static_cast<size_t>(n), 0);
  std::vector<int> stack;
  stack.reserve(static_cast<size_t>(n));
  std::vector<std::pair<int, int>> frames;  // (node, next child slot); iterative for deep graphs
  std::vector<std::vector<int>> sccs;
  int next_index = 0;

  for (int root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    frames.emplace_back(root, 0);
    while (!frames.empty()) {
      const int v = frames.back().first;
      if (index[static_cast<size_t>(v)] == -1) {
        index[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = next_index++;
        stack.push_back(v);
        on_stack[static_cast<size_t>(v)] = 1;
      }
      int child = -1;
      {
        int& ci = frames.back().second;
        const auto& succ = adj[static_cast<size_t>(v)];
        while (ci < static_cast<int>(succ.size())) {
          const int w = succ[static_cast<size_t>(ci++)];
          if (index[static_cast<size_t>(w)] == -1) {
            child = w;
            break;
          }
          if (on_stack[static_cast<size_t>(w)])
            low[static_cast<size_t>(v)] =
                std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
        }
      }
      if (child != -1) {
        frames.emplace_back(child, 0);
        continue;
      }
      if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
        std::vector<int> scc;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(w)] = 0;
          scc.push_back(w);
        } while (w != v);
        std::sort(scc.begin(), scc.end());
        sccs.push_back(std::move(scc));
      }
      frames.pop_back();
      if (!frames.empty()) {
        const int p = frames.back().first;
        low[static_cast<size_t>(p)] =
            std::min(low[static_cast<size_t>(p)], low[static_cast<size_t>(v)]);
      }
    }
  }
  std::sort(sccs.begin(), sccs.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return sccs;
}

bool is_strongly_connected(const StructureMatrix& support) {
  return strongly_connected_components(incidence_graph(support).adj).size() == 1;
}

StructureInfo analyze_structure(const MatrixModel& model) {
  model.validate();
  StructureInfo info;
  info.dim = model.dim;
  info.support = support_matrix(model);
  info.adj = incidence_graph(info.support).adj;
  info.components = strongly_connected_components(info.adj);
  const int k = static_cast<int>(info.components.size());

  info.comp_of_node.assign(static_cast<size_t>(info.dim), -1);
  for (int m = 0; m < k; ++m)
    for (int node : info.components[static_cast<size_t>(m)])
      info.comp_of_node[static_cast<size_t>(node)] = m;

  info.comp_adj.assign(static_cast<size_t>(k), {});
  for (int i = 0; i < info.dim; ++i)
    for (int j : info.adj[static_cast<size_t>(i)]) {
      const int m = info.comp_of_node[static_cast<size_t>(i)];
      const int l = info.comp_of_node[static_cast<size_t>(j)];
      if (m != l) info.comp_adj[static_cast<size_t>(m)].push_back(l);
    }
  for (auto& row : info.comp_adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  // Reflexive-transitive reachability over the condensation; K <= 64 so one
  // bit mask per component suffices.
  std::vector<uint64_t> mask(static_cast<size_t>(k), 0);
  std::vector<int> order;
  order.reserve(static_cast<size_t>(k));
  {
    // Kahn's algorithm; completing it certifies the condensation is acyclic.
    std::vector<int> indegree(static_cast<size_t>(k), 0);
    for (int m = 0; m < k; ++m)
      for (int l : info.comp_adj[static_cast<size_t>(m)]) ++indegree[static_cast<size_t>(l)];
    std::vector<int> queue;
    for (int m = 0; m < k; ++m)
      if (indegree[static_cast<size_t>(m)] == 0) queue.push_back(m);
    info.initial_comp.assign(static_cast<size_t>(k), 0);
    for (int m : queue) info.initial_comp[static_cast<size_t>(m)] = 1;
    while (!queue.empty()) {
      const int m = queue.back();
      queue.pop_back();
      order.push_back(m);
      for (int l : info.comp_adj[static_cast<size_t>(m)])
        if (--indegree[static_cast<size_t>(l)] == 0) queue.push_back(l);
    }
    if (static_cast<int>(order.size()) != k)
      throw std::logic_error("condensation has a cycle; SCC computation is broken");
  }
  info.topo_order = order;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int m = *it;
    uint64_t bits = 1ull << m;
    for (int l : info.comp_adj[static_cast<size_t>(m)]) bits |= mask[static_cast<size_t>(l)];
    mask[static_cast<size_t>(m)] = bits;
  }

  info.e_sets.assign(static_cast<size_t>(k), {});
  info.f_nodes.assign(static_cast<size_t>(k), {});
  for (int m = 0; m < k; ++m) {
    for (int l = 0; l < k; ++l)
      if (mask[static_cast<size_t>(m)] & (1ull << l)) info.e_sets[static_cast<size_t>(m)].push_back(l);
    for (int l : info.e_sets[static_cast<size_t>(m)])
      for (int node : info.components[static_cast<size_t>(l)])
        info.f_nodes[static_cast<size_t>(m)].push_back(node);
    std::sort(info.f_nodes[static_cast<size_t>(m)].begin(), info.f_nodes[static_cast<size_t>(m)].end());
  }

  info.trivial.assign(static_cast<size_t>(k), 0);
  info.final_comp.assign(static_cast<size_t>(k), 0);
  for (int m = 0; m < k; ++m) {
    const auto& nodes = info.components[static_cast<size_t>(m)];
    if (nodes.size() == 1 && !info.support.at(nodes[0], nodes[0]))
      info.trivial[static_cast<size_t>(m)] = 1;
    if (info.e_sets[static_cast<size_t>(m)].size() == 1) info.final_comp[static_cast<size_t>(m)] = 1;
  }
  return info;
}

namespace {

struct TieDecision {
  bool tied = false;
  bool used_slack = false;
};

TieDecision tied_exponents(const ExponentEstimate& lo, const ExponentEstimate& hi) {
  if (lo.point.is_bottom() && hi.point.is_bottom()) return {true, false};
  if (lo.point.is_bottom() != hi.point.is_bottom()) return {false, false};
  if (lo.point == hi.point) return {true, false};
  const bool both_closed = lo.method == ExponentEstimate::Method::kClosedForm &&
                           hi.method == ExponentEstimate::Method::kClosedForm;
  if (both_closed) return {false, false};
  const double tau = std::max(1e-9, 3.0 * (lo.se_or_zero() + hi.se_or_zero()));
  if (std::abs(hi.point.value() - lo.point.value()) <= tau) return {true, true};
  return {false, false};
}

}  // namespace

ComponentDecomposition decompose(const MatrixModel& model,
                                 const std::vector<ExponentEstimate>& gamma_round) {
  ComponentDecomposition d;
  d.structure = analyze_structure(model);
  const int k = static_cast<int>(d.structure.components.size());
  if (static_cast<int>(gamma_round.size()) != k)
    throw ModelError("decompose needs one exponent per component");

  std::vector<ExponentEstimate> gamma_square(static_cast<size_t>(k));
  for (int m = 0; m < k; ++m) {
    ExponentEstimate best = gamma_round[static_cast<size_t>(m)];
    for (int l : d.structure.e_sets[static_cast<size_t>(m)]) {
      const ExponentEstimate& cand = gamma_round[static_cast<size_t>(l)];
      if (cand.point > best.point ||
          (cand.point == best.point && best.method == ExponentEstimate::Method::kMonteCarlo &&
           cand.method == ExponentEstimate::Method::kClosedForm))
        best = cand;
    }
    gamma_square[static_cast<size_t>(m)] = best;
  }

  d.comps.resize(static_cast<size_t>(k));
  for (int m = 0; m < k; ++m) {
    ComponentSets& c = d.comps[static_cast<size_t>(m)];
    c.nodes = d.structure.components[static_cast<size_t>(m)];
    c.e_set = d.structure.e_sets[static_cast<size_t>(m)];
    c.f_nodes = d.structure.f_nodes[static_cast<size_t>(m)];
    c.final_comp = d.structure.final_comp[static_cast<size_t>(m)] != 0;
    c.initial_comp = d.structure.initial_comp[static_cast<size_t>(m)] != 0;
    c.trivial_comp = d.structure.trivial[static_cast<size_t>(m)] != 0;
    c.gamma_round = gamma_round[static_cast<size_t>(m)];
    c.gamma_square = gamma_square[static_cast<size_t>(m)];
    for (int l : c.e_set) {
      const TieDecision t =
          tied_exponents(gamma_square[static_cast<size_t>(l)], gamma_square[static_cast<size_t>(m)]);
      if (t.tied) {
        c.g_set.push_back(l);
        c.tie_used_se_slack |= t.used_slack;
      }
    }
    for (int l : c.g_set)
      for (int node : d.structure.components[static_cast<size_t>(l)]) c.h_nodes.push_back(node);
    std::sort(c.h_nodes.begin(), c.h_nodes.end());
    c.dominating = c.g_set.size() == 1 && c.g_set.front() == m;
  }
  return d;
}

MatrixModel restrict_model(const MatrixModel& model, std::span<const int> nodes) {
  if (nodes.empty()) throw ModelError("cannot restrict a model to an empty node set");
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    if (nodes[i] >= nodes[i + 1]) throw ModelError("restriction nodes must be strictly increasing");
  if (nodes.front() < 0 || nodes.back() >= model.dim)
    throw ModelError("restriction node out of range");

  MatrixModel out;
  out.kind = model.kind;
  out.dim = static_cast<int>(nodes.size());
  out.seed = model.seed;
  out.probs = model.probs;
  out.shared = model.shared;
  out.name = model.name;
  for (const TropicalMatrix& a : model.atoms) out.atoms.push_back(restrict_matrix(a, nodes));
  for (const TropicalMatrix& a : model.cycle) out.cycle.push_back(restrict_matrix(a, nodes));
  if (model.kind == ModelKind::kEntrywiseIid) {
    out.entries.resize(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
      for (size_t j = 0; j < nodes.size(); ++j)
        out.entries[i].push_back(
            model.entries[static_cast<size_t>(nodes[i])][static_cast<size_t>(nodes[j])]);
  }
  out.integrable = model.kind == ModelKind::kEntrywiseIid
                       ? submodel_integrable(model, nodes)
                       : model.integrable;
  out.integrable_note = model.integrable_note;
  out.node_labels.reserve(nodes.size());
  for (int n : nodes) out.node_labels.push_back(model.label_of(n));
  out.validate();
  return out;
}

MatrixModel extract_submodel(const MatrixModel& model, const StructureInfo& info, int m,
                             SubmodelKind kind) {
  if (m < 0 || m >= static_cast<int>(info.components.size()))
    throw ModelError("component index out of range");
  switch (kind) {
    case SubmodelKind::kRound:
      return restrict_model(model, info.components[static_cast<size_t>(m)]);
    case SubmodelKind::kSquare:
      return restrict_model(model, info.f_nodes[static_cast<size_t>(m)]);
    case SubmodelKind::kBrace:
      throw ModelError("brace submodel needs a full decomposition");
  }
  throw ModelError("unknown submodel kind");
}

MatrixModel extract_submodel(const MatrixModel& model, const ComponentDecomposition& decomp, int m,
                             SubmodelKind kind) {
  if (m < 0 || m >= decomp.num_components()) throw ModelError("component index out of range");
  if (kind == SubmodelKind::kBrace)
    return restrict_model(model, decomp.comps[static_cast<size_t>(m)].h_nodes);
  return extract_submodel(model, decomp.structure, m, kind);
}

BlockSplit block_split(const MatrixModel& model, std::span<const int> i_nodes,
                       std::span<const int> j_nodes) {
  model.validate();
  std::vector<int> I(i_nodes.begin(), i_nodes.end());
  std::vector<int> J(j_nodes.begin(), j_nodes.end());
  std::sort(I.begin(), I.end());
  std::sort(J.begin(), J.end());
  if (I.empty()) throw ModelError("block split needs a nonempty I");
  for (int v : J)
    if (std::binary_search(I.begin(), I.end(), v))
      throw ModelError("block split needs disjoint I and J");

  const StructureMatrix support = support_matrix(model);
  for (int j : J)
    for (int i : I)
      if (support.at(j, i))
        throw BlockStructureViolation("entry (" + std::to_string(model.label_of(j) + 1) + "," +
                                      std::to_string(model.label_of(i) + 1) +
                                      ") can be finite: lower-left block is not empty");

  BlockSplit split;
  split.i_nodes = I;
  split.j_nodes = J;
  split.b_model = restrict_model(model, I);
  if (!J.empty()) split.c_model = restrict_model(model, J);

  if (!J.empty() && model.kind == ModelKind::kEntrywiseIid)
    throw ModelError("block split of entrywise models is not supported");
  const auto& elems = model.kind == ModelKind::kPeriodic ? model.cycle : model.atoms;
  for (const TropicalMatrix& a : elems) {
    RectBlock d(static_cast<int>(I.size()), static_cast<int>(J.size()));
    for (size_t r = 0; r < I.size(); ++r)
      for (size_t c = 0; c < J.size(); ++c)
        d.at(static_cast<int>(r), static_cast<int>(c)) =
            a.at(I[r], J[c]);
    split.d_blocks.push_back(std::move(d));
  }
  if (model.kind == ModelKind::kPeriodic)
    split.probs.assign(model.cycle.size(), 1.0 / static_cast<double>(model.cycle.size()));
  else
    split.probs = model.probs;
  return split;
}

}  // namespace maxplus
