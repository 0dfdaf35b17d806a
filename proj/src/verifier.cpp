#include "maxplus/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace maxplus {

const char* to_string(HypStatus s) {
  switch (s) {
    case HypStatus::kSatisfied:
      return "satisfied";
    case HypStatus::kViolated:
      return "violated";
    case HypStatus::kNotCertified:
      return "not_certified";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kConverges:
      return "converges";
    case Verdict::kDiverges:
      return "diverges";
    case Verdict::kNotCertified:
      return "not_certified";
  }
  return "?";
}

const char* to_string(CoordVerdict v) {
  switch (v) {
    case CoordVerdict::kConvergent:
      return "convergent";
    case CoordVerdict::kDivergent:
      return "divergent";
    case CoordVerdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

std::string node_name(const MatrixModel& model, int local) {
  return std::to_string(model.label_of(local) + 1);
}

std::string node_set_name(const MatrixModel& model, const std::vector<int>& nodes) {
  std::string s = "{";
  for (size_t i = 0; i < nodes.size(); ++i) s += (i ? "," : "") + node_name(model, nodes[i]);
  return s + "}";
}

// P(a given row of the restriction is entirely bottom), independent entries.
double entrywise_row_bottom_prob(const MatrixModel& model, int row,
                                 const std::vector<int>& cols) {
  double p = 1.0;
  for (int j : cols)
    p *= model.entries[static_cast<size_t>(row)][static_cast<size_t>(j)].bottom_probability();
  return p;
}

}  // namespace

HypothesisEntry check_global_no_bottom_line(const MatrixModel& model) {
  HypothesisEntry e;
  e.theorem = "all";
  e.hypothesis = "no_bottom_line";
  e.status = HypStatus::kSatisfied;
  e.witness = "every matrix of the law keeps a finite entry in each row";
  switch (model.kind) {
    case ModelKind::kIidFinite:
      for (size_t k = 0; k < model.atoms.size(); ++k) {
        if (model.probs[k] <= 0.0) continue;
        const auto rows = bottom_lines(model.atoms[k]);
        if (!rows.empty()) {
          e.status = HypStatus::kViolated;
          e.witness = "atom " + std::to_string(k + 1) + " has an all-bottom row at node " +
                      node_name(model, rows.front());
          return e;
        }
      }
      return e;
    case ModelKind::kPeriodic:
      for (size_t k = 0; k < model.cycle.size(); ++k) {
        const auto rows = bottom_lines(model.cycle[k]);
        if (!rows.empty()) {
          e.status = HypStatus::kViolated;
          e.witness = "cycle element " + std::to_string(k + 1) +
                      " has an all-bottom row at node " + node_name(model, rows.front());
          return e;
        }
      }
      return e;
    case ModelKind::kEntrywiseIid: {
      std::vector<int> all(static_cast<size_t>(model.dim));
      for (int j = 0; j < model.dim; ++j) all[static_cast<size_t>(j)] = j;
      for (int i = 0; i < model.dim; ++i) {
        const double p = entrywise_row_bottom_prob(model, i, all);
        if (p > 0.0) {
          e.status = HypStatus::kViolated;
          e.witness = "row at node " + node_name(model, i) + " is all-bottom with probability " +
                      std::to_string(p);
          return e;
        }
      }
      return e;
    }
  }
  return e;
}

std::vector<HypothesisEntry> check_h1_no_bottom_lines(const MatrixModel& model,
                                                      const ComponentDecomposition& decomp) {
  std::vector<HypothesisEntry> out;
  for (int m = 0; m < decomp.num_components(); ++m) {
    const ComponentSets& c = decomp.comps[static_cast<size_t>(m)];
    HypothesisEntry e;
    e.theorem = "general_scheme";
    e.hypothesis = "h1_no_bottom_lines[c" + std::to_string(m + 1) + "]";
    e.status = HypStatus::kSatisfied;
    e.witness = "restriction to " + node_set_name(model, c.h_nodes) + " keeps all rows finite";
    switch (model.kind) {
      case ModelKind::kIidFinite:
      case ModelKind::kPeriodic: {
        const auto& elems = model.kind == ModelKind::kPeriodic ? model.cycle : model.atoms;
        for (size_t k = 0; k < elems.size(); ++k) {
          if (model.kind == ModelKind::kIidFinite && model.probs[k] <= 0.0) continue;
          const auto rows = bottom_lines(restrict_matrix(elems[k], c.h_nodes));
          if (!rows.empty()) {
            const double p = model.kind == ModelKind::kIidFinite
                                 ? model.probs[k]
                                 : 1.0 / static_cast<double>(elems.size());
            e.status = HypStatus::kViolated;
            e.witness = "atom " + std::to_string(k + 1) + " restricted to " +
                        node_set_name(model, c.h_nodes) + " has an all-bottom row at node " +
                        node_name(model, c.h_nodes[static_cast<size_t>(rows.front())]) +
                        " (probability " + std::to_string(p) + ")";
            break;
          }
        }
        break;
      }
      case ModelKind::kEntrywiseIid: {
        for (int local = 0; local < static_cast<int>(c.h_nodes.size()); ++local) {
          const int row = c.h_nodes[static_cast<size_t>(local)];
          const double p = entrywise_row_bottom_prob(model, row, c.h_nodes);
          if (p > 0.0) {
            e.status = HypStatus::kViolated;
            e.witness = "row at node " + node_name(model, row) + " restricted to " +
                        node_set_name(model, c.h_nodes) + " is all-bottom with probability " +
                        std::to_string(p);
            break;
          }
        }
        break;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

PrecedenceStatus check_precedence(const MatrixModel& model) {
  PrecedenceStatus st;
  st.structural = HypStatus::kSatisfied;
  st.witness = "all diagonal entries are almost surely finite";
  switch (model.kind) {
    case ModelKind::kIidFinite:
    case ModelKind::kPeriodic: {
      const auto& elems = model.kind == ModelKind::kPeriodic ? model.cycle : model.atoms;
      for (size_t k = 0; k < elems.size(); ++k) {
        if (model.kind == ModelKind::kIidFinite && model.probs[k] <= 0.0) continue;
        for (int i = 0; i < model.dim; ++i)
          if (elems[k].at(i, i).is_bottom()) {
            st.structural = HypStatus::kViolated;
            st.witness = (model.kind == ModelKind::kPeriodic ? "cycle element " : "atom ") +
                         std::to_string(k + 1) + " has a bottom diagonal at node " +
                         node_name(model, i);
            st.diagonals_integrable = false;
            return st;
          }
      }
      st.diagonals_integrable = true;  // finite constants
      return st;
    }
    case ModelKind::kEntrywiseIid: {
      for (int i = 0; i < model.dim; ++i) {
        const EntryDist& e = model.entries[static_cast<size_t>(i)][static_cast<size_t>(i)];
        if (!e.always_finite()) {
          st.structural = HypStatus::kViolated;
          st.witness = "diagonal entry at node " + node_name(model, i) +
                       " vanishes with probability " + std::to_string(e.bottom_probability());
          st.diagonals_integrable = false;
          return st;
        }
      }
      st.diagonals_integrable = model.integrable;
      return st;
    }
  }
  return st;
}

VerdictReport make_verdict(const MatrixModel& model, const ComponentDecomposition& decomp) {
  VerdictReport rep;
  const HypothesisEntry h0 = check_global_no_bottom_line(model);
  const std::vector<HypothesisEntry> h1 = check_h1_no_bottom_lines(model, decomp);
  const PrecedenceStatus prec = check_precedence(model);
  const ErgodicityStatus ergodic = ergodicity_certified(model);
  const bool fixed = fixed_structure_check(model);
  const bool iid = model.kind != ModelKind::kPeriodic;

  const bool h0_ok = h0.status == HypStatus::kSatisfied;
  bool h1_all_ok = true;
  std::string h1_witness;
  for (const HypothesisEntry& e : h1)
    if (e.status == HypStatus::kViolated) {
      h1_all_ok = false;
      if (h1_witness.empty()) h1_witness = e.witness;
    }

  rep.hypotheses.push_back(h0);
  rep.hypotheses.insert(rep.hypotheses.end(), h1.begin(), h1.end());
  {
    HypothesisEntry pe;
    pe.theorem = "precedence";
    pe.hypothesis = "diagonals_finite";
    pe.status = prec.structural;
    pe.witness = prec.witness;
    rep.hypotheses.push_back(pe);
    HypothesisEntry ee;
    ee.theorem = "fixed_structure";
    ee.hypothesis = "shift_powers_ergodic";
    ee.status = ergodic.certified ? HypStatus::kSatisfied : HypStatus::kNotCertified;
    ee.witness = ergodic.reason;
    rep.hypotheses.push_back(ee);
    HypothesisEntry ie;
    ie.theorem = "all";
    ie.hypothesis = "entries_integrable";
    ie.status = model.integrable ? HypStatus::kSatisfied : HypStatus::kNotCertified;
    ie.witness = model.integrable_note.empty() ? "declared" : model.integrable_note;
    rep.hypotheses.push_back(ie);
    HypothesisEntry fe;
    fe.theorem = "fixed_structure";
    fe.hypothesis = "fixed_structure";
    fe.status = fixed ? HypStatus::kSatisfied : HypStatus::kViolated;
    fe.witness = fixed ? "every entry is almost surely finite or almost surely bottom"
                       : "the finite support varies across realizations";
    rep.hypotheses.push_back(fe);
  }

  RouteResult a;
  a.route = "iid_iff";
  if (!iid) {
    a.detail = "law is not i.i.d.";
  } else if (!h0_ok) {
    a.detail = "a matrix of the law can have an all-bottom row: " + h0.witness;
  } else if (!model.integrable) {
    a.detail = "entries are not declared integrable: " + model.integrable_note;
  } else if (!h1_all_ok) {
    a.verdict = Verdict::kDiverges;
    a.detail = "necessary condition fails: " + h1_witness;
  } else {
    a.verdict = Verdict::kConverges;
    a.detail = "i.i.d., integrable, and every tied-reachable restriction keeps its rows finite";
  }
  rep.routes.push_back(a);

  RouteResult b;
  b.route = "fixed_structure";
  if (!h0_ok) {
    b.detail = "a matrix of the law can have an all-bottom row";
  } else if (!fixed) {
    b.detail = "structure is not fixed";
  } else if (!entries_integrable(model) || !model.integrable) {
    b.detail = "some entry is neither integrable nor almost surely bottom";
  } else if (!ergodic.certified) {
    b.detail = ergodic.reason;
  } else {
    b.verdict = Verdict::kConverges;
    b.detail = "fixed structure with certified ergodic shift powers";
  }
  rep.routes.push_back(b);

  RouteResult c;
  c.route = "precedence";
  if (prec.structural != HypStatus::kSatisfied) {
    c.detail = prec.witness;
  } else if (!prec.diagonals_integrable || !model.integrable) {
    c.detail = "diagonals finite but integrability not established";
  } else {
    c.verdict = Verdict::kConverges;
    c.detail = "integrable entries with almost surely finite diagonals";
  }
  rep.routes.push_back(c);

  for (const RouteResult& r : rep.routes)
    if (r.verdict == Verdict::kConverges) {
      rep.verdict = Verdict::kConverges;
      rep.theorem = r.route;
      rep.justification = r.route + ": " + r.detail;
      return rep;
    }
  if (a.verdict == Verdict::kDiverges) {
    rep.verdict = Verdict::kDiverges;
    rep.theorem = "iid_iff";
    rep.justification = "iid_iff: " + a.detail;
    return rep;
  }
  rep.verdict = Verdict::kNotCertified;
  rep.justification =
      "no convergence theorem applies; empirical diagnostics attached are non-probative";
  return rep;
}

ConvergenceDiagnostics empirical_convergence(const MatrixModel& model, long horizon,
                                             int checkpoints, uint64_t replicate) {
  model.validate();
  if (horizon < 1000) throw ModelError("empirical convergence needs horizon >= 1000");
  if (checkpoints < 1) throw ModelError("need at least one checkpoint");

  ConvergenceDiagnostics diag;
  diag.horizon = horizon;
  diag.window_start = horizon / 2;
  diag.replicate = replicate;

  std::vector<long> steps;
  for (int t = 1; t <= checkpoints; ++t) {
    const long k = std::max<long>(1, (horizon * t) / checkpoints);
    if (steps.empty() || steps.back() != k) steps.push_back(k);
  }
  diag.checkpoint_steps = steps;

  struct Acc {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool finite_seen = false;
    bool bottom_seen = false;
  };
  std::vector<Acc> acc(static_cast<size_t>(model.dim));

  Realization stream(model, replicate);
  TrajectoryRunner traj(model.dim);
  size_t next_cp = 0;
  for (long k = 1; k <= horizon; ++k) {
    traj.step(stream.next());
    if (k > diag.window_start) {
      for (int i = 0; i < model.dim; ++i) {
        const TropicalScalar v = traj.coord(i);
        Acc& a = acc[static_cast<size_t>(i)];
        if (v.is_bottom()) {
          a.bottom_seen = true;
        } else {
          const double s = v.value() / static_cast<double>(k);
          a.finite_seen = true;
          a.lo = std::min(a.lo, s);
          a.hi = std::max(a.hi, s);
        }
      }
    }
    if (next_cp < steps.size() && k == steps[next_cp]) {
      std::vector<TropicalScalar> snap(static_cast<size_t>(model.dim));
      for (int i = 0; i < model.dim; ++i)
        snap[static_cast<size_t>(i)] = scaled(traj.coord(i), 1.0 / static_cast<double>(k));
      diag.checkpoint_scaled.push_back(std::move(snap));
      ++next_cp;
    }
  }

  bool any_div = false, all_conv = true;
  for (int i = 0; i < model.dim; ++i) {
    const Acc& a = acc[static_cast<size_t>(i)];
    CoordinateDiagnostics cd;
    cd.bottom_seen = a.bottom_seen;
    if (!a.finite_seen) {
      cd.liminf_est = TropicalScalar::bottom();
      cd.limsup_est = TropicalScalar::bottom();
      cd.gap = 0.0;
      cd.threshold = 5.0 / std::sqrt(static_cast<double>(horizon));
      cd.verdict = CoordVerdict::kConvergent;  // constant at bottom
    } else {
      cd.liminf_est = TropicalScalar(a.lo);
      cd.limsup_est = TropicalScalar(a.hi);
      cd.gap = a.hi - a.lo;
      const double scale = a.hi;  // known floor 0: trajectories start from the zero vector
      cd.threshold = std::max(0.1 * scale, 5.0 / std::sqrt(static_cast<double>(horizon)));
      if (a.bottom_seen) {
        cd.verdict = CoordVerdict::kInconclusive;
      } else if (cd.gap > cd.threshold) {
        cd.verdict = CoordVerdict::kDivergent;
      } else if (cd.gap <= 0.5 * cd.threshold) {
        cd.verdict = CoordVerdict::kConvergent;
      } else {
        cd.verdict = CoordVerdict::kInconclusive;
      }
    }
    any_div |= cd.verdict == CoordVerdict::kDivergent;
    all_conv &= cd.verdict == CoordVerdict::kConvergent;
    diag.coords.push_back(cd);
  }
  diag.overall = any_div ? CoordVerdict::kDivergent
                         : (all_conv ? CoordVerdict::kConvergent : CoordVerdict::kInconclusive);
  return diag;
}

ChainReport reachability_chain(const MatrixModel& model, std::span<const int> i_nodes,
                               std::span<const int> j_nodes, int runs, long max_steps) {
  model.validate();
  if (model.kind != ModelKind::kIidFinite)
    throw ModelError("reachability chain supports IID_FINITE models only");
  if (i_nodes.size() > 4) throw GuardError("reachability chain supports |I| <= 4");

  const BlockSplit split = block_split(model, i_nodes, j_nodes);
  ChainReport rep;
  for (int v : split.i_nodes) rep.i_nodes.push_back(model.label_of(v));
  for (int v : split.j_nodes) rep.j_nodes.push_back(model.label_of(v));
  rep.runs = runs;
  rep.max_steps = max_steps;

  rep.g_b_strongly_connected = is_strongly_connected(support_matrix(split.b_model));
  rep.p_d_all_bottom = 0.0;
  if (split.j_nodes.empty()) {
    rep.p_d_all_bottom = 1.0;
  } else {
    for (size_t k = 0; k < split.d_blocks.size(); ++k)
      if (split.d_blocks[k].all_bottom()) rep.p_d_all_bottom += split.probs[k];
  }
  rep.preconditions_hold = rep.g_b_strongly_connected && rep.p_d_all_bottom < 1.0;
  if (!rep.g_b_strongly_connected) {
    rep.hyp3 = HypStatus::kNotCertified;
    rep.reason = "upper-left block graph is not strongly connected; split outside hypothesis scope";
  } else if (rep.p_d_all_bottom >= 1.0) {
    rep.hyp3 = HypStatus::kNotCertified;
    rep.reason = "D block is almost surely all-bottom; split outside hypothesis scope";
  } else {
    rep.hyp3 = HypStatus::kSatisfied;
    rep.reason = "i.i.d. atoms with a reachable exit column leave the block almost surely";
  }

  // Skeleton chain R(n) = structure(B(1) ... B(n)), started at the identity
  // R(0) so the first exit check (D(-1) alone) is part of the walk.
  const int ni = static_cast<int>(split.i_nodes.size());
  const int nj = static_cast<int>(split.j_nodes.size());
  std::vector<StructureMatrix> b_hats;
  for (const TropicalMatrix& b : split.b_model.atoms) b_hats.push_back(structure_of(b));

  std::vector<StructureMatrix> states;
  std::map<uint32_t, int> state_index;
  auto intern = [&](const StructureMatrix& s) {
    const uint32_t key = s.pack();
    auto it = state_index.find(key);
    if (it != state_index.end()) return it->second;
    const int id = static_cast<int>(states.size());
    states.push_back(s);
    state_index.emplace(key, id);
    return id;
  };

  std::vector<std::vector<int>> atom_target;  // [state][atom]
  intern(StructureMatrix::identity(ni));
  for (size_t s = 0; s < states.size(); ++s) {
    std::vector<int> targets;
    for (const StructureMatrix& bh : b_hats) {
      const StructureMatrix f = mat_mul(states[s], bh);
      targets.push_back(intern(f));
    }
    atom_target.push_back(std::move(targets));
  }
  rep.num_states = static_cast<int>(states.size());
  for (const StructureMatrix& s : states) rep.states.push_back(s.pack());

  std::vector<std::vector<int>> adj(states.size());
  rep.transitions.resize(states.size());
  rep.row_sums.assign(states.size(), 0.0);
  for (size_t s = 0; s < states.size(); ++s) {
    std::map<int, double> agg;
    for (size_t k = 0; k < b_hats.size(); ++k) agg[atom_target[s][k]] += split.probs[k];
    for (const auto& [t, p] : agg) {
      rep.transitions[s].emplace_back(t, p);
      rep.row_sums[s] += p;
      if (p > 0.0) adj[s].push_back(t);
    }
  }

  const auto sccs = strongly_connected_components(adj);
  std::vector<int> class_of(states.size(), -1);
  for (size_t c = 0; c < sccs.size(); ++c)
    for (int s : sccs[c]) class_of[static_cast<size_t>(s)] = static_cast<int>(c);
  std::vector<char> recurrent_class(sccs.size(), 1);
  for (size_t s = 0; s < states.size(); ++s)
    for (int t : adj[s])
      if (class_of[s] != class_of[static_cast<size_t>(t)])
        recurrent_class[static_cast<size_t>(class_of[s])] = 0;
  for (char r : recurrent_class) rep.num_recurrent_classes += r ? 1 : 0;

  // Per (state, atom, i): does drawing this atom now expose a finite D row?
  std::vector<std::vector<char>> d_hat(split.d_blocks.size(),
                                       std::vector<char>(static_cast<size_t>(ni), 0));
  for (size_t k = 0; k < split.d_blocks.size(); ++k)
    for (int l = 0; l < ni; ++l)
      for (int j = 0; j < nj; ++j)
        if (split.d_blocks[k].at(l, j).is_finite()) d_hat[k][static_cast<size_t>(l)] = 1;
  auto exit_now = [&](const StructureMatrix& e, size_t atom, int i) {
    if (split.probs[atom] <= 0.0) return false;
    for (int l = 0; l < ni; ++l)
      if (e.at(i, l) && d_hat[atom][static_cast<size_t>(l)]) return true;
    return false;
  };

  // For every row i: walking from the identity and skipping the exit-labeled
  // transitions, an exit opportunity must stay reachable. On a finite chain
  // this is exactly "the no-exit event has probability zero".
  rep.exit_reachable_from_all = nj > 0;
  for (int i = 0; i < ni && rep.exit_reachable_from_all; ++i) {
    std::vector<char> can_exit(states.size(), 0);  // an exit-labeled edge leaves here
    std::vector<std::vector<int>> quiet_adj(states.size());
    for (size_t s = 0; s < states.size(); ++s)
      for (size_t k = 0; k < b_hats.size(); ++k) {
        if (split.probs[k] <= 0.0) continue;
        if (exit_now(states[s], k, i))
          can_exit[s] = 1;
        else
          quiet_adj[s].push_back(atom_target[s][static_cast<size_t>(k)]);
      }
    // Fixed point: from which states does a quiet walk still reach an exit?
    std::vector<char> good = can_exit;
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t s = 0; s < states.size(); ++s) {
        if (good[s]) continue;
        for (int t : quiet_adj[s])
          if (good[static_cast<size_t>(t)]) {
            good[s] = 1;
            changed = true;
            break;
          }
      }
    }
    // States reachable without exiting, starting at the identity R(0).
    std::vector<char> seen(states.size(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      if (!good[static_cast<size_t>(s)]) rep.exit_reachable_from_all = false;
      for (int t : quiet_adj[static_cast<size_t>(s)])
        if (!seen[static_cast<size_t>(t)]) {
          seen[static_cast<size_t>(t)] = 1;
          stack.push_back(t);
        }
    }
  }

  // Empirical exit times: matrices consumed until every i in I has seen a
  // finite (B(-1)...B(-t+1) D(-t) 0)_i.
  if (nj > 0 && rep.p_d_all_bottom < 1.0) {
    std::vector<long> hist;
    for (int run = 0; run < runs; ++run) {
      Realization stream(model, kChainRunStreamBase + static_cast<uint64_t>(run));
      StructureMatrix r = StructureMatrix::identity(ni);
      std::vector<char> pending(static_cast<size_t>(ni), 1);
      int remaining = ni;
      long exit_at = -1;
      for (long t = 1; t <= max_steps && remaining > 0; ++t) {
        stream.next();
        const size_t k = static_cast<size_t>(stream.last_choice());
        for (int i = 0; i < ni; ++i) {
          if (!pending[static_cast<size_t>(i)]) continue;
          bool hit = false;
          for (int l = 0; l < ni && !hit; ++l) hit = r.at(i, l) && d_hat[k][static_cast<size_t>(l)];
          if (hit) {
            pending[static_cast<size_t>(i)] = 0;
            --remaining;
            exit_at = t;
          }
        }
        if (remaining == 0) break;
        r = mat_mul(r, b_hats[k]);
      }
      if (remaining > 0) {
        ++rep.censored;
      } else {
        if (static_cast<size_t>(exit_at) >= hist.size()) hist.resize(static_cast<size_t>(exit_at) + 1, 0);
        ++hist[static_cast<size_t>(exit_at)];
      }
    }
    rep.exit_histogram = std::move(hist);
  }
  return rep;
}

ConsistencyReport check_thcn_consistency(const MatrixModel& model,
                                         const ComponentDecomposition& decomp, long horizon,
                                         double tol) {
  model.validate();
  if (horizon < 1) throw ModelError("consistency check needs horizon >= 1");
  ConsistencyReport rep;
  rep.tol = tol;
  rep.horizon = horizon;

  const LimitPrediction limit = predicted_limit(decomp);
  Realization stream(model, 0);
  TrajectoryRunner traj(model.dim);
  for (long k = 0; k < horizon; ++k) traj.step(stream.next());

  const auto h1 = check_h1_no_bottom_lines(model, decomp);
  rep.h1_satisfied = true;
  for (const HypothesisEntry& e : h1) rep.h1_satisfied &= e.status == HypStatus::kSatisfied;

  rep.consistent = true;
  for (int i = 0; i < model.dim; ++i) {
    CoordinateConsistency cc;
    cc.node = model.label_of(i);
    cc.empirical = scaled(traj.coord(i), 1.0 / static_cast<double>(horizon));
    cc.predicted = limit.values[static_cast<size_t>(i)];
    const int m = limit.component_of[static_cast<size_t>(i)];
    cc.integrable = submodel_integrable(model, decomp.comps[static_cast<size_t>(m)].nodes);
    if (cc.predicted.is_bottom() || cc.empirical.is_bottom())
      cc.within_tol = cc.predicted.is_bottom() == cc.empirical.is_bottom();
    else
      cc.within_tol = std::abs(cc.empirical.value() - cc.predicted.value()) <= tol;
    if (cc.integrable) rep.consistent &= cc.within_tol;
    rep.coords.push_back(cc);
  }
  return rep;
}

namespace {

// Hypothesis 2 of the general scheme is a statement about almost-sure limits
// of right products; only empirical support at a finite horizon is reported.
HypothesisEntry probe_hyp2(const MatrixModel& model, const ComponentDecomposition& decomp, int m,
                           long horizon) {
  HypothesisEntry e;
  e.theorem = "general_scheme";
  e.hypothesis = "h2_dominating_right_limit[c" + std::to_string(m + 1) + "]";
  e.status = HypStatus::kNotCertified;
  const ComponentSets& c = decomp.comps[static_cast<size_t>(m)];
  if (c.gamma_round.point.is_bottom()) {
    e.witness = "component exponent is bottom; probe skipped";
    return e;
  }
  const MatrixModel sub = restrict_model(model, c.nodes);
  const long n = std::min<long>(horizon, 20000);
  const auto seq = sample_sequence(sub, n, 0);
  const TropicalVector y = right_product(seq, TropicalVector::zeros(sub.dim));
  double worst = 0.0;
  bool bottom = false;
  for (int i = 0; i < sub.dim; ++i) {
    if (y[i].is_bottom()) {
      bottom = true;
      break;
    }
    worst = std::max(worst, std::abs(y[i].value() / static_cast<double>(n) -
                                     c.gamma_round.point.value()));
  }
  const double slack = 0.05 + 3.0 * c.gamma_round.se_or_zero();
  std::ostringstream os;
  if (bottom) {
    os << "not decidable from a finite sample; empirically unsupported (a coordinate of y(" << n
       << ",0) is bottom)";
  } else {
    os << "not decidable from a finite sample; empirically "
       << (worst <= slack ? "supported" : "unsupported") << " (max deviation " << worst << " at n="
       << n << ", slack " << slack << ")";
  }
  e.witness = os.str();
  return e;
}

}  // namespace

AnalysisReport analyze(const MatrixModel& model, const AnalyzeOptions& opts) {
  model.validate();
  AnalysisReport rep;
  rep.model = model;
  rep.options = opts;
  rep.decomposition = full_decomposition(model, opts.estimate);
  rep.gamma = estimate_top_exponent(model, opts.estimate);
  rep.gamma_b = estimate_bottom_exponent(model, opts.estimate);
  rep.decomposition_check = check_max_decomposition(model, rep.decomposition, opts.estimate);
  rep.limit = predicted_limit(rep.decomposition);
  rep.verdict_report = make_verdict(model, rep.decomposition);
  for (int m = 0; m < rep.decomposition.num_components(); ++m)
    if (rep.decomposition.comps[static_cast<size_t>(m)].dominating)
      rep.verdict_report.hypotheses.push_back(
          probe_hyp2(model, rep.decomposition, m, opts.diag_horizon));
  rep.diagnostics = empirical_convergence(model, opts.diag_horizon, opts.checkpoints);
  if (opts.run_chains && model.kind == ModelKind::kIidFinite) {
    for (int m = 0; m < rep.decomposition.num_components(); ++m) {
      const ComponentSets& c = rep.decomposition.comps[static_cast<size_t>(m)];
      if (c.nodes.size() > 4) continue;
      std::vector<int> j_nodes;
      for (int v : c.h_nodes)
        if (!std::binary_search(c.nodes.begin(), c.nodes.end(), v)) j_nodes.push_back(v);
      if (j_nodes.empty()) continue;
      try {
        rep.chains.push_back(
            reachability_chain(model, c.nodes, j_nodes, opts.chain_runs, opts.chain_max_steps));
      } catch (const BlockStructureViolation&) {
        // A back arc from the tied descendants would merge the components;
        // never expected here, but a chain report is optional anyway.
      }
    }
  }
  rep.consistency =
      check_thcn_consistency(model, rep.decomposition, opts.consistency_horizon,
                             opts.consistency_tol);
  return rep;
}

}  // namespace maxplus
