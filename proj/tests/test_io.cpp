#include <doctest.h>

#include <sstream>

#include "maxplus/io.hpp"
#include "maxplus/lyapunov.hpp"
#include "test_util.hpp"

using namespace maxplus;
using testutil::bot;

TEST_CASE("matrix literals use -inf for bottom") {
  const Json j = Json::parse(R"([[0, "-inf"], [1, 2]])");
  const TropicalMatrix a = matrix_from_json(j);
  CHECK(a.at(0, 0) == TropicalScalar(0.0));
  CHECK(a.at(0, 1).is_bottom());
  CHECK(a.at(1, 0) == TropicalScalar(1.0));
  CHECK(matrix_to_json(a) == j);

  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([[0, "bottom"], [1, 2]])")), ModelError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([[0], [1, 2]])")), ModelError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[]")), ModelError);
}

TEST_CASE("model configs round-trip bit-exactly") {
  for (const MatrixModel& m :
       {example_mairesse(0.1, 99), example_exchanges(5), example_integrability(),
        testutil::precedence_fixture(), testutil::d4_fixture()}) {
    const std::string text = canonical_model_text(m);
    const MatrixModel parsed = model_from_json(Json::parse(text));
    CHECK(canonical_model_text(parsed) == text);
  }
}

TEST_CASE("restricted models round-trip with labels") {
  const MatrixModel ma = example_mairesse(0.5, 1);
  const std::vector<int> nodes = {1, 2};
  const MatrixModel sub = restrict_model(ma, nodes);
  const std::string text = canonical_model_text(sub);
  const MatrixModel parsed = model_from_json(Json::parse(text));
  CHECK(parsed.node_labels == std::vector<int>{1, 2});
  CHECK(canonical_model_text(parsed) == text);
}

TEST_CASE("model config errors") {
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"dim": 2})")), ModelError);
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"dim": 2, "kind": "martian"})")), ModelError);
  CHECK_THROWS_AS(
      model_from_json(Json::parse(
          R"({"dim": 2, "kind": "iid_finite", "atoms": [[[0,0],[0,0]]], "probs": [0.5, 0.5]})")),
      ModelError);
  CHECK_THROWS_AS(
      model_from_json(Json::parse(
          R"({"dim": 2, "kind": "iid_finite", "atoms": [[[0,0],[0,0]]], "probs": [0.9]})")),
      ModelError);
  CHECK_THROWS_AS(load_model_file("/nonexistent/path.json"), ModelError);
}

TEST_CASE("probs default to uniform when omitted") {
  const MatrixModel m = model_from_json(Json::parse(
      R"({"dim": 1, "kind": "iid_finite", "atoms": [[[0]], [[1]]], "seed": 3})"));
  CHECK(m.probs == std::vector<double>{0.5, 0.5});
}

TEST_CASE("integrability flag is automatic for finite-support kinds") {
  const MatrixModel m = model_from_json(
      Json::parse(R"({"dim": 1, "kind": "iid_finite", "atoms": [[[0]]], "probs": [1.0]})"));
  CHECK(m.integrable);
  CHECK_THROWS_AS(
      model_from_json(Json::parse(
          R"({"dim": 1, "kind": "iid_finite", "atoms": [[[0]]], "probs": [1.0], "integrable": false})")),
      ModelError);
  // Entrywise laws must declare it.
  CHECK_THROWS_AS(
      model_from_json(Json::parse(
          R"({"dim": 1, "kind": "entrywise_iid", "entries": [[{"kind": "constant", "value": 1}]]})")),
      ModelError);
}

TEST_CASE("entrywise descriptors parse and emit") {
  const MatrixModel in = example_integrability(ScalarDist::pareto(0.9), 4);
  const Json j = model_to_json(in);
  CHECK(j["entries"][0][0]["kind"] == "neg_shared");
  CHECK(j["shared"]["kind"] == "pareto");
  CHECK(j["integrable"] == false);
  const MatrixModel back = model_from_json(j);
  CHECK(back.shared == in.shared);
  CHECK(back.entries == in.entries);
}

TEST_CASE("exponent CSV table") {
  const MatrixModel zero = testutil::constant_zero_model();
  EstimateOptions o;
  o.horizon = 10;
  o.replicates = 2;
  const ComponentDecomposition d = full_decomposition(zero, o);
  std::ostringstream os;
  write_exponent_csv(os, d);
  CHECK(os.str() == "component,gamma_round,gamma_square,stderr,method\n"
                    "1,0,0,na,closed_form\n");
}

TEST_CASE("trajectory CSV replays through the recursion") {
  const MatrixModel ma = example_mairesse(0.5, 77);
  std::ostringstream os;
  write_trajectory_csv(os, ma, 100, 0);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "n,x_1,x_2,x_3");

  const auto seq = sample_sequence(ma, 100, 0);
  TropicalVector x = TropicalVector::zeros(3);
  for (long n = 0; n <= 100; ++n) {
    std::string line;
    REQUIRE(std::getline(is, line));
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    CHECK(std::stol(cell) == n);
    for (int i = 0; i < 3; ++i) {
      REQUIRE(std::getline(cells, cell, ','));
      if (x[i].is_bottom())
        CHECK(cell == "-inf");
      else
        CHECK(std::stod(cell) == x[i].value());
    }
    if (n < 100) x = mat_vec(seq[static_cast<size_t>(n)], x);
  }
}

TEST_CASE("doubles format shortest and round-trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_scalar(bot()) == "-inf");
  CHECK(format_scalar(TropicalScalar(-3.0)) == "-3");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("analysis report serializes with thresholds") {
  AnalyzeOptions opts;
  opts.estimate.horizon = 2000;
  opts.estimate.replicates = 4;
  opts.diag_horizon = 2000;
  opts.checkpoints = 20;
  opts.consistency_horizon = 2000;
  opts.chain_runs = 50;
  const AnalysisReport rep = analyze(example_mairesse(0.5, 3), opts);
  const Json j = report_to_json(rep);
  CHECK(j["verdict"]["verdict"] == "diverges");
  CHECK(j["thresholds"]["divergence_gap"] == "max(0.1*scale, 5/sqrt(n))");
  CHECK(j["thresholds"]["tie_slack"] == "max(1e-9, 3*(se_l+se_m))");
  CHECK(j["thresholds"]["sigma_rule"] == 3);
  CHECK(j["diagnostics"]["coordinates"][0].contains("threshold"));
  CHECK(j["decomposition"]["components"].size() == 2);
  CHECK(j["predicted_limit"]["values"][0] == Json(0.0));
  // The model echo itself parses back.
  CHECK_NOTHROW(model_from_json(j["model"]));
}
