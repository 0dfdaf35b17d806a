#include "maxplus/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace maxplus {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_scalar(TropicalScalar t) {
  return t.is_bottom() ? "-inf" : format_double(t.value());
}

Json scalar_to_json(TropicalScalar t) {
  if (t.is_bottom()) return Json("-inf");
  return Json(t.value());
}

TropicalScalar scalar_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return TropicalScalar::bottom();
    throw ModelError("matrix entry string must be \"-inf\", got \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_number()) throw ModelError("matrix entry must be a number or \"-inf\"");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ModelError("matrix entries must be finite reals");
  return TropicalScalar(v);
}

Json matrix_to_json(const TropicalMatrix& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.dim(); ++j) row.push_back(scalar_to_json(a.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

TropicalMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ModelError("matrix must be a nonempty array of rows");
  const int d = static_cast<int>(j.size());
  TropicalMatrix a(d);
  for (int i = 0; i < d; ++i) {
    const Json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw ModelError("matrix rows must all have the matrix dimension");
    for (int c = 0; c < d; ++c) a.at(i, c) = scalar_from_json(row[static_cast<size_t>(c)]);
  }
  return a;
}

namespace {

Json entry_to_json(const EntryDist& e) {
  Json j;
  switch (e.kind) {
    case EntryDist::Kind::kConstant:
      j["kind"] = "constant";
      j["value"] = e.a;
      break;
    case EntryDist::Kind::kUniform:
      j["kind"] = "uniform";
      j["a"] = e.a;
      j["b"] = e.b;
      break;
    case EntryDist::Kind::kGaussian:
      j["kind"] = "gaussian";
      j["mu"] = e.a;
      j["sigma"] = e.b;
      break;
    case EntryDist::Kind::kBottom:
      j["kind"] = "bottom";
      break;
    case EntryDist::Kind::kNegShared:
      j["kind"] = "neg_shared";
      break;
  }
  if (e.kind != EntryDist::Kind::kBottom && e.bottom_mass > 0.0) j["bottom_mass"] = e.bottom_mass;
  return j;
}

EntryDist entry_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ModelError("entry descriptor needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  EntryDist e;
  if (kind == "constant") {
    e.kind = EntryDist::Kind::kConstant;
    e.a = j.at("value").get<double>();
  } else if (kind == "uniform") {
    e.kind = EntryDist::Kind::kUniform;
    e.a = j.at("a").get<double>();
    e.b = j.at("b").get<double>();
  } else if (kind == "gaussian") {
    e.kind = EntryDist::Kind::kGaussian;
    e.a = j.at("mu").get<double>();
    e.b = j.at("sigma").get<double>();
  } else if (kind == "bottom") {
    e.kind = EntryDist::Kind::kBottom;
  } else if (kind == "neg_shared") {
    e.kind = EntryDist::Kind::kNegShared;
  } else {
    throw ModelError("unknown entry kind: " + kind);
  }
  if (j.contains("bottom_mass")) e.bottom_mass = j.at("bottom_mass").get<double>();
  return e;
}

Json shared_to_json(const ScalarDist& d) {
  Json j;
  switch (d.kind) {
    case ScalarDist::Kind::kConstant:
      j["kind"] = "constant";
      j["value"] = d.a;
      break;
    case ScalarDist::Kind::kUniform:
      j["kind"] = "uniform";
      j["a"] = d.a;
      j["b"] = d.b;
      break;
    case ScalarDist::Kind::kPareto:
      j["kind"] = "pareto";
      j["alpha"] = d.a;
      break;
  }
  return j;
}

ScalarDist shared_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return ScalarDist::constant(j.at("value").get<double>());
  if (kind == "uniform") return ScalarDist::uniform(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "pareto") return ScalarDist::pareto(j.at("alpha").get<double>());
  throw ModelError("unknown shared distribution kind: " + kind);
}

std::string kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kIidFinite:
      return "iid_finite";
    case ModelKind::kPeriodic:
      return "periodic";
    case ModelKind::kEntrywiseIid:
      return "entrywise_iid";
  }
  return "?";
}

}  // namespace

Json model_to_json(const MatrixModel& model) {
  Json j;
  j["dim"] = model.dim;
  j["kind"] = kind_name(model.kind);
  switch (model.kind) {
    case ModelKind::kIidFinite: {
      Json atoms = Json::array();
      for (const TropicalMatrix& a : model.atoms) atoms.push_back(matrix_to_json(a));
      j["atoms"] = std::move(atoms);
      j["probs"] = model.probs;
      break;
    }
    case ModelKind::kPeriodic: {
      Json cycle = Json::array();
      for (const TropicalMatrix& a : model.cycle) cycle.push_back(matrix_to_json(a));
      j["cycle"] = std::move(cycle);
      break;
    }
    case ModelKind::kEntrywiseIid: {
      Json rows = Json::array();
      for (const auto& row : model.entries) {
        Json r = Json::array();
        for (const EntryDist& e : row) r.push_back(entry_to_json(e));
        rows.push_back(std::move(r));
      }
      j["entries"] = std::move(rows);
      if (model.shared) j["shared"] = shared_to_json(*model.shared);
      break;
    }
  }
  j["seed"] = model.seed;
  j["integrable"] = model.integrable;
  if (!model.integrable_note.empty()) j["note"] = model.integrable_note;
  if (!model.node_labels.empty()) j["labels"] = model.node_labels;
  if (!model.name.empty()) j["name"] = model.name;
  return j;
}

MatrixModel model_from_json(const Json& j) {
  if (!j.is_object()) throw ModelError("model config must be a JSON object");
  MatrixModel m;
  if (!j.contains("dim") || !j.contains("kind")) throw ModelError("model config needs dim and kind");
  m.dim = j.at("dim").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "iid_finite") {
    m.kind = ModelKind::kIidFinite;
    if (!j.contains("atoms")) throw ModelError("iid_finite model needs atoms");
    for (const Json& a : j.at("atoms")) m.atoms.push_back(matrix_from_json(a));
    if (j.contains("probs")) {
      m.probs = j.at("probs").get<std::vector<double>>();
    } else {
      m.probs.assign(m.atoms.size(), 1.0 / static_cast<double>(m.atoms.size()));
    }
  } else if (kind == "periodic") {
    m.kind = ModelKind::kPeriodic;
    if (!j.contains("cycle")) throw ModelError("periodic model needs a cycle");
    for (const Json& a : j.at("cycle")) m.cycle.push_back(matrix_from_json(a));
  } else if (kind == "entrywise_iid") {
    m.kind = ModelKind::kEntrywiseIid;
    if (!j.contains("entries")) throw ModelError("entrywise model needs entries");
    for (const Json& row : j.at("entries")) {
      std::vector<EntryDist> r;
      for (const Json& e : row) r.push_back(entry_from_json(e));
      m.entries.push_back(std::move(r));
    }
    if (j.contains("shared")) m.shared = shared_from_json(j.at("shared"));
  } else {
    throw ModelError("unknown model kind: " + kind);
  }
  if (j.contains("seed")) m.seed = j.at("seed").get<uint64_t>();
  if (m.kind == ModelKind::kEntrywiseIid) {
    if (!j.contains("integrable"))
      throw ModelError("entrywise models must declare \"integrable\"");
    m.integrable = j.at("integrable").get<bool>();
  } else {
    // Finite atom entries are bounded, so these kinds are always integrable.
    if (j.contains("integrable") && !j.at("integrable").get<bool>())
      throw ModelError("finite-support models are automatically integrable");
    m.integrable = true;
  }
  if (j.contains("note")) m.integrable_note = j.at("note").get<std::string>();
  if (j.contains("labels")) m.node_labels = j.at("labels").get<std::vector<int>>();
  if (j.contains("name")) m.name = j.at("name").get<std::string>();
  m.validate();
  return m;
}

MatrixModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ModelError("cannot parse model file " + path + ": " + ex.what());
  }
  return model_from_json(j);
}

std::string canonical_model_text(const MatrixModel& model) {
  return model_to_json(model).dump(2) + "\n";
}

namespace {

const char* method_name(ExponentEstimate::Method m) {
  return m == ExponentEstimate::Method::kClosedForm ? "closed_form" : "monte_carlo";
}

}  // namespace

void write_exponent_csv(std::ostream& os, const ComponentDecomposition& decomp) {
  os << "component,gamma_round,gamma_square,stderr,method\n";
  for (int m = 0; m < decomp.num_components(); ++m) {
    const ComponentSets& c = decomp.comps[static_cast<size_t>(m)];
    os << (m + 1) << ',' << format_scalar(c.gamma_round.point) << ','
       << format_scalar(c.gamma_square.point) << ','
       << (c.gamma_round.has_se() ? format_double(c.gamma_round.se) : std::string("na")) << ','
       << method_name(c.gamma_round.method) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const MatrixModel& model, long horizon,
                          uint64_t replicate) {
  os << "n";
  for (int i = 0; i < model.dim; ++i) os << ",x_" << (model.label_of(i) + 1);
  os << '\n';
  Realization stream(model, replicate);
  TropicalVector x = TropicalVector::zeros(model.dim);
  for (long n = 0; n <= horizon; ++n) {
    os << n;
    for (int i = 0; i < model.dim; ++i) os << ',' << format_scalar(x[i]);
    os << '\n';
    if (n < horizon) x = mat_vec(stream.next(), x);
  }
}

Json estimate_to_json(const ExponentEstimate& e) {
  Json j;
  j["point"] = scalar_to_json(e.point);
  if (e.has_se())
    j["stderr"] = e.se;
  else
    j["stderr"] = nullptr;
  j["method"] = method_name(e.method);
  if (e.method == ExponentEstimate::Method::kMonteCarlo) {
    j["horizon"] = e.horizon;
    j["replicates"] = e.replicates;
    if (e.bottom_replicates > 0) j["bottom_replicates"] = e.bottom_replicates;
  }
  return j;
}

namespace {

Json nodes_to_json(const MatrixModel& model, const std::vector<int>& nodes) {
  Json arr = Json::array();
  for (int v : nodes) arr.push_back(model.label_of(v) + 1);
  return arr;
}

Json comp_ids_to_json(const std::vector<int>& comps) {
  Json arr = Json::array();
  for (int m : comps) arr.push_back(m + 1);
  return arr;
}

}  // namespace

Json decomposition_to_json(const ComponentDecomposition& decomp, const MatrixModel& model) {
  Json j;
  j["num_components"] = decomp.num_components();
  Json comps = Json::array();
  for (int m = 0; m < decomp.num_components(); ++m) {
    const ComponentSets& c = decomp.comps[static_cast<size_t>(m)];
    Json cj;
    cj["index"] = m + 1;
    cj["nodes"] = nodes_to_json(model, c.nodes);
    cj["e_set"] = comp_ids_to_json(c.e_set);
    cj["f_nodes"] = nodes_to_json(model, c.f_nodes);
    cj["g_set"] = comp_ids_to_json(c.g_set);
    cj["h_nodes"] = nodes_to_json(model, c.h_nodes);
    cj["final"] = c.final_comp;
    cj["initial"] = c.initial_comp;
    cj["trivial"] = c.trivial_comp;
    cj["dominating"] = c.dominating;
    cj["gamma_round"] = estimate_to_json(c.gamma_round);
    cj["gamma_square"] = estimate_to_json(c.gamma_square);
    cj["tie_used_se_slack"] = c.tie_used_se_slack;
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  Json edges = Json::array();
  for (int m = 0; m < decomp.num_components(); ++m)
    for (int l : decomp.structure.comp_adj[static_cast<size_t>(m)]) {
      Json e = Json::array();
      e.push_back(m + 1);
      e.push_back(l + 1);
      edges.push_back(std::move(e));
    }
  j["dag_edges"] = std::move(edges);
  return j;
}

Json limit_to_json(const LimitPrediction& limit) {
  Json j;
  Json vals = Json::array();
  for (TropicalScalar v : limit.values) vals.push_back(scalar_to_json(v));
  j["values"] = std::move(vals);
  Json prov = Json::array();
  for (size_t i = 0; i < limit.values.size(); ++i) {
    Json p;
    p["component"] = limit.component_of[i] + 1;
    p["method"] = method_name(limit.source[i].method);
    prov.push_back(std::move(p));
  }
  j["provenance"] = std::move(prov);
  return j;
}

Json hypotheses_to_json(const std::vector<HypothesisEntry>& entries) {
  Json arr = Json::array();
  for (const HypothesisEntry& e : entries) {
    Json j;
    j["theorem"] = e.theorem;
    j["hypothesis"] = e.hypothesis;
    j["status"] = to_string(e.status);
    j["witness"] = e.witness;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json verdict_to_json(const VerdictReport& v) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  j["theorem"] = v.theorem;
  j["justification"] = v.justification;
  Json routes = Json::array();
  for (const RouteResult& r : v.routes) {
    Json rj;
    rj["route"] = r.route;
    rj["verdict"] = to_string(r.verdict);
    rj["detail"] = r.detail;
    routes.push_back(std::move(rj));
  }
  j["routes"] = std::move(routes);
  j["hypotheses"] = hypotheses_to_json(v.hypotheses);
  return j;
}

Json diagnostics_to_json(const ConvergenceDiagnostics& d) {
  Json j;
  j["horizon"] = d.horizon;
  j["window_start"] = d.window_start;
  j["replicate"] = d.replicate;
  j["threshold_formula"] = ConvergenceDiagnostics::kThresholdFormula;
  Json coords = Json::array();
  for (size_t i = 0; i < d.coords.size(); ++i) {
    const CoordinateDiagnostics& c = d.coords[i];
    Json cj;
    cj["coordinate"] = i + 1;
    cj["liminf_est"] = scalar_to_json(c.liminf_est);
    cj["limsup_est"] = scalar_to_json(c.limsup_est);
    cj["gap"] = c.gap;
    cj["threshold"] = c.threshold;
    cj["verdict"] = to_string(c.verdict);
    coords.push_back(std::move(cj));
  }
  j["coordinates"] = std::move(coords);
  j["overall"] = to_string(d.overall);
  Json cps = Json::array();
  for (size_t t = 0; t < d.checkpoint_steps.size(); ++t) {
    Json cj;
    cj["n"] = d.checkpoint_steps[t];
    Json vals = Json::array();
    for (TropicalScalar v : d.checkpoint_scaled[t]) vals.push_back(scalar_to_json(v));
    cj["scaled"] = std::move(vals);
    cps.push_back(std::move(cj));
  }
  j["checkpoints"] = std::move(cps);
  return j;
}

Json chain_to_json(const ChainReport& c) {
  Json j;
  Json inodes = Json::array();
  for (int v : c.i_nodes) inodes.push_back(v + 1);
  Json jnodes = Json::array();
  for (int v : c.j_nodes) jnodes.push_back(v + 1);
  j["i_nodes"] = std::move(inodes);
  j["j_nodes"] = std::move(jnodes);
  j["g_b_strongly_connected"] = c.g_b_strongly_connected;
  j["p_d_all_bottom"] = c.p_d_all_bottom;
  j["preconditions_hold"] = c.preconditions_hold;
  j["hyp3"] = to_string(c.hyp3);
  j["reason"] = c.reason;
  j["num_states"] = c.num_states;
  j["num_recurrent_classes"] = c.num_recurrent_classes;
  j["exit_reachable_from_all"] = c.exit_reachable_from_all;
  Json hist = Json::array();
  for (size_t t = 1; t < c.exit_histogram.size(); ++t) {
    if (c.exit_histogram[t] == 0) continue;
    Json h;
    h["exit_time"] = t;
    h["count"] = c.exit_histogram[t];
    hist.push_back(std::move(h));
  }
  j["exit_histogram"] = std::move(hist);
  j["runs"] = c.runs;
  j["censored"] = c.censored;
  j["max_steps"] = c.max_steps;
  return j;
}

Json consistency_to_json(const ConsistencyReport& c) {
  Json j;
  j["horizon"] = c.horizon;
  j["tol"] = c.tol;
  j["h1_satisfied"] = c.h1_satisfied;
  j["consistent"] = c.consistent;
  Json coords = Json::array();
  for (const CoordinateConsistency& cc : c.coords) {
    Json cj;
    cj["node"] = cc.node + 1;
    cj["empirical"] = scalar_to_json(cc.empirical);
    cj["predicted"] = scalar_to_json(cc.predicted);
    cj["integrable"] = cc.integrable;
    cj["within_tol"] = cc.within_tol;
    coords.push_back(std::move(cj));
  }
  j["coordinates"] = std::move(coords);
  return j;
}

Json report_to_json(const AnalysisReport& rep) {
  Json j;
  j["tool"] = "maxplus";
  j["model"] = model_to_json(rep.model);
  Json opts;
  opts["horizon"] = rep.options.estimate.horizon;
  opts["replicates"] = rep.options.estimate.replicates;
  opts["diag_horizon"] = rep.options.diag_horizon;
  opts["checkpoints"] = rep.options.checkpoints;
  opts["consistency_horizon"] = rep.options.consistency_horizon;
  j["options"] = std::move(opts);
  j["decomposition"] = decomposition_to_json(rep.decomposition, rep.model);
  Json exps;
  exps["gamma"] = estimate_to_json(rep.gamma);
  exps["gamma_b"] = estimate_to_json(rep.gamma_b);
  Json check;
  check["direct"] = estimate_to_json(rep.decomposition_check.direct);
  check["component_max"] = estimate_to_json(rep.decomposition_check.component_max);
  check["discrepancy"] = rep.decomposition_check.discrepancy;
  check["combined_stderr"] = rep.decomposition_check.combined_se;
  check["tolerance"] = rep.decomposition_check.tolerance;
  check["within_3_sigma"] = rep.decomposition_check.within;
  exps["decomposition_check"] = std::move(check);
  j["exponents"] = std::move(exps);
  j["predicted_limit"] = limit_to_json(rep.limit);
  j["verdict"] = verdict_to_json(rep.verdict_report);
  j["diagnostics"] = diagnostics_to_json(rep.diagnostics);
  Json chains = Json::array();
  for (const ChainReport& c : rep.chains) chains.push_back(chain_to_json(c));
  j["chains"] = std::move(chains);
  if (rep.consistency) j["consistency"] = consistency_to_json(*rep.consistency);
  Json thresholds;
  thresholds["divergence_gap"] = ConvergenceDiagnostics::kThresholdFormula;
  thresholds["sigma_rule"] = 3;
  thresholds["tie_slack"] = "max(1e-9, 3*(se_l+se_m))";
  thresholds["consistency_tol"] = rep.options.consistency_tol;
  thresholds["decomposition_tolerance"] = rep.decomposition_check.tolerance;
  j["thresholds"] = std::move(thresholds);
  return j;
}

}  // namespace maxplus
