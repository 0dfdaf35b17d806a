#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "maxplus/lyapunov.hpp"
#include "test_util.hpp"

using namespace maxplus;
using testutil::bot;
using testutil::Gen;

namespace {

EstimateOptions opts(long horizon, int replicates, int threads = 0) {
  EstimateOptions o;
  o.horizon = horizon;
  o.replicates = replicates;
  o.threads = threads;
  return o;
}

// All simple cycles of length <= 3; enough for the exact small-d cross-check.
TropicalScalar brute_cycle_mean(const TropicalMatrix& a) {
  const int d = a.dim();
  TropicalScalar best = bot();
  for (int i = 0; i < d; ++i) best = max(best, a.at(i, i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const TropicalScalar two = a.at(i, j) + a.at(j, i);
      if (two.is_finite()) best = max(best, TropicalScalar(two.value() / 2.0));
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        if (i == j || j == k || i == k) continue;
        const TropicalScalar three = a.at(i, j) + a.at(j, k) + a.at(k, i);
        if (three.is_finite()) best = max(best, TropicalScalar(three.value() / 3.0));
      }
  return best;
}

}  // namespace

TEST_CASE("top exponent closed forms") {
  const MatrixModel zeros = testutil::constant_zero_model();
  const ExponentEstimate e = estimate_top_exponent(zeros, opts(100, 4));
  CHECK(e.point == TropicalScalar(0.0));
  CHECK(e.method == ExponentEstimate::Method::kClosedForm);
  CHECK_FALSE(e.has_se());

  MatrixModel scalar;
  scalar.kind = ModelKind::kIidFinite;
  scalar.dim = 1;
  scalar.seed = 1;
  scalar.atoms = {TropicalMatrix(1, TropicalScalar(2.5))};
  scalar.probs = {1.0};
  CHECK(estimate_top_exponent(scalar).point == TropicalScalar(2.5));
}

TEST_CASE("top exponent of the i.i.d. counterexample concentrates at p") {
  const MatrixModel ma = example_mairesse(0.5, 2024);
  const ExponentEstimate e = estimate_top_exponent(ma, opts(10000, 32));
  REQUIRE(e.point.is_finite());
  REQUIRE(e.has_se());
  CHECK(e.se > 0.0);
  CHECK(std::abs(e.point.value() - 0.5) <= 3.0 * e.se + 1e-3);
}

TEST_CASE("bottom exponent") {
  CHECK(estimate_bottom_exponent(testutil::constant_zero_model()).point == TropicalScalar(0.0));

  // Both phases keep the minimum coordinate at exactly 0.
  const ExponentEstimate ex = estimate_bottom_exponent(example_exchanges(5), opts(4000, 16));
  CHECK(ex.point == TropicalScalar(0.0));
  CHECK(ex.se == 0.0);

  const ExponentEstimate in =
      estimate_bottom_exponent(example_integrability(ScalarDist::pareto(0.9), 7), opts(10000, 32));
  REQUIRE(in.point.is_finite());
  CHECK(std::abs(in.point.value() + 1.0) <= 0.02);
}

TEST_CASE("all-bottom collapse reports bottom distinctly") {
  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = 2;
  m.seed = 9;
  m.atoms = {TropicalMatrix::from_rows({{bot(), bot()}, {0.0, bot()}}),
             TropicalMatrix::from_rows({{bot(), bot()}, {1.0, bot()}})};
  m.probs = {0.5, 0.5};
  const ExponentEstimate e = estimate_top_exponent(m, opts(10, 8));
  CHECK(e.point.is_bottom());
  CHECK(e.bottom_replicates == 8);
  CHECK_FALSE(e.has_se());
}

TEST_CASE("component exponents") {
  const MatrixModel ma = example_mairesse(0.5, 99);
  const StructureInfo info = analyze_structure(ma);
  const ExponentEstimate g1 = component_exponent(ma, info, 0, opts(5000, 16));
  CHECK(g1.point == TropicalScalar(0.0));
  CHECK(g1.method == ExponentEstimate::Method::kClosedForm);
  const ExponentEstimate g2 = component_exponent(ma, info, 1, opts(5000, 16));
  REQUIRE(g2.point.is_finite());
  CHECK(g2.method == ExponentEstimate::Method::kMonteCarlo);
  CHECK(std::abs(g2.point.value() - 0.5) <= 3.0 * g2.se + 5e-3);

  // Trivial head component: no loop, exponent is bottom.
  MatrixModel chain;
  chain.kind = ModelKind::kIidFinite;
  chain.dim = 2;
  chain.seed = 1;
  chain.atoms = {TropicalMatrix::from_rows({{bot(), 0.0}, {bot(), 1.0}})};
  chain.probs = {1.0};
  const StructureInfo cinfo = analyze_structure(chain);
  CHECK(cinfo.trivial[0] != 0);
  CHECK(component_exponent(chain, cinfo, 0).point.is_bottom());
  CHECK(component_exponent(chain, cinfo, 1).point == TropicalScalar(1.0));
}

TEST_CASE("cycle means: Karp equals brute enumeration on d<=3") {
  Gen gen(515);
  for (int it = 0; it < 200; ++it) {
    const int d = gen.int_in(1, 3);
    const TropicalMatrix a = gen.matrix(d, 0.35);
    CHECK(max_cycle_mean(a) == brute_cycle_mean(a));
  }
}

TEST_CASE("constant models: estimates equal the max mean cycle at any horizon") {
  Gen gen(616);
  for (int it = 0; it < 50; ++it) {
    const int d = gen.int_in(1, 3);
    MatrixModel m;
    m.kind = ModelKind::kIidFinite;
    m.dim = d;
    m.seed = static_cast<uint64_t>(it);
    m.atoms = {gen.matrix(d, 0.25)};
    m.probs = {1.0};
    const TropicalScalar want = brute_cycle_mean(m.atoms[0]);
    CHECK(estimate_top_exponent(m, opts(d, 1)).point == want);
    CHECK(estimate_top_exponent(m, opts(50, 3)).point == want);
  }
}

TEST_CASE("per-node growth rates on a reducible constant matrix") {
  // 0 -> 1 -> 2 with loops of weight 2, bottom, -1; node 1 has no loop.
  const TropicalMatrix a =
      TropicalMatrix::from_rows({{2.0, 0.0, bot()}, {bot(), bot(), 0.0}, {bot(), bot(), -1.0}});
  const auto rates = node_growth_rates(a);
  CHECK(rates[0] == TropicalScalar(2.0));
  CHECK(rates[1] == TropicalScalar(-1.0));
  CHECK(rates[2] == TropicalScalar(-1.0));

  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = 3;
  m.seed = 0;
  m.atoms = {a};
  m.probs = {1.0};
  CHECK(estimate_top_exponent(m).point == TropicalScalar(2.0));
  CHECK(estimate_bottom_exponent(m).point == TropicalScalar(-1.0));
}

TEST_CASE("predicted limit vectors") {
  const ComponentDecomposition din = full_decomposition(example_integrability(), opts(2000, 8));
  const LimitPrediction lin = predicted_limit(din);
  CHECK(lin.values[0] == TropicalScalar(0.0));
  CHECK(lin.values[1] == TropicalScalar(0.0));
  CHECK(lin.values[2] == TropicalScalar(-1.0));
  CHECK(lin.component_of[0] == 0);
  CHECK(lin.source[2].method == ExponentEstimate::Method::kClosedForm);

  const ComponentDecomposition dma = full_decomposition(example_mairesse(0.5, 8), opts(5000, 16));
  const LimitPrediction lma = predicted_limit(dma);
  CHECK(lma.values[0] == TropicalScalar(0.0));
  CHECK(lma.values[1] == lma.values[2]);
  REQUIRE(lma.values[1].is_finite());
  CHECK(std::abs(lma.values[1].value() - 0.5) < 0.05);

  const ComponentDecomposition done =
      full_decomposition(testutil::constant_zero_model(), opts(100, 2));
  const LimitPrediction lone = predicted_limit(done);
  for (TropicalScalar v : lone.values) CHECK(v == TropicalScalar(0.0));
}

TEST_CASE("limit prediction is permutation equivariant") {
  const std::vector<int> perm = {2, 0, 1};
  for (const MatrixModel& m : {testutil::precedence_fixture(), example_mairesse(0.4, 5)}) {
    const LimitPrediction base = predicted_limit(full_decomposition(m, opts(3000, 8)));
    const LimitPrediction permuted =
        predicted_limit(full_decomposition(permute_model(m, perm), opts(3000, 8)));
    for (int i = 0; i < m.dim; ++i)
      CHECK(permuted.values[static_cast<size_t>(perm[static_cast<size_t>(i)])] ==
            base.values[static_cast<size_t>(i)]);
  }
}

TEST_CASE("exponent decomposition check") {
  MaxDecompositionReport r =
      check_max_decomposition(example_mairesse(0.5, 2025), opts(10000, 32));
  CHECK(r.within);

  MatrixModel diag;
  diag.kind = ModelKind::kIidFinite;
  diag.dim = 3;
  diag.seed = 2;
  diag.atoms = {TropicalMatrix::identity(3)};
  diag.probs = {1.0};
  r = check_max_decomposition(diag, opts(100, 2));
  CHECK(r.discrepancy == 0.0);
  CHECK(r.within);

  r = check_max_decomposition(testutil::d4_fixture(31), opts(2000, 8));
  CHECK(r.within);
}

TEST_CASE("per-realization triangle bound of partial products") {
  Gen gen(717);
  for (int it = 0; it < 40; ++it) {
    const int d = gen.int_in(2, 4);
    const auto seq = gen.sequence(d, 8, 0.3);
    TropicalMatrix first = seq[0];
    for (int k = 1; k < 4; ++k) first = mat_mul(seq[static_cast<size_t>(k)], first);
    TropicalMatrix second = seq[4];
    for (int k = 5; k < 8; ++k) second = mat_mul(seq[static_cast<size_t>(k)], second);
    const TropicalMatrix whole = mat_mul(second, first);
    CHECK(whole.max_entry() <= second.max_entry() + first.max_entry());
  }
}

TEST_CASE("bottom exponent never exceeds the top exponent") {
  for (const MatrixModel& m :
       {example_mairesse(0.5, 4), testutil::precedence_fixture(11), testutil::d4_fixture(12),
        example_exchanges(13)}) {
    const ExponentEstimate top = estimate_top_exponent(m, opts(4000, 16));
    const ExponentEstimate bottom = estimate_bottom_exponent(m, opts(4000, 16));
    if (top.point.is_bottom()) {
      CHECK(bottom.point.is_bottom());
    } else if (bottom.point.is_finite()) {
      CHECK(bottom.point.value() <=
            top.point.value() + 3.0 * (top.se_or_zero() + bottom.se_or_zero()) + 1e-12);
    }
  }
}

TEST_CASE("trajectory re-centering is exact on integer entries") {
  const MatrixModel m = testutil::d4_fixture(21);
  Realization s1(m, 0), s2(m, 0);
  TrajectoryRunner with(m.dim, 100);
  TropicalVector plain = TropicalVector::zeros(m.dim);
  for (int k = 0; k < 5000; ++k) {
    const TropicalMatrix a = s1.next();
    CHECK(s2.next() == a);
    with.step(a);
    plain = mat_vec(a, plain);
  }
  for (int i = 0; i < m.dim; ++i) CHECK(with.coord(i) == plain[i]);
}

TEST_CASE("estimator output is independent of the worker count") {
  const MatrixModel m = example_mairesse(0.35, 6);
  const ExponentEstimate a = estimate_top_exponent(m, opts(3000, 12, 1));
  const ExponentEstimate b = estimate_top_exponent(m, opts(3000, 12, 4));
  CHECK(a.point == b.point);
  CHECK(a.se == b.se);
}

TEST_CASE("estimate options are validated") {
  CHECK_THROWS_AS(estimate_top_exponent(example_mairesse(0.5), opts(0, 4)), ModelError);
  CHECK_THROWS_AS(estimate_top_exponent(example_mairesse(0.5), opts(10, 0)), ModelError);
}
