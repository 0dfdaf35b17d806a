#include <doctest.h>

#include <cmath>
#include <map>

#include "maxplus/model.hpp"
#include "test_util.hpp"

using namespace maxplus;
using testutil::bot;

TEST_CASE("builtin matrices are bit-exact") {
  const MatrixModel ex = example_exchanges();
  CHECK(ex.kind == ModelKind::kPeriodic);
  CHECK(ex.cycle[0] == TropicalMatrix::from_rows({{bot(), 0.0}, {0.0, bot()}}));
  CHECK(ex.cycle[1] == TropicalMatrix::from_rows({{bot(), 1.0}, {0.0, bot()}}));
  CHECK(ex.integrable);

  const MatrixModel ma = example_mairesse(0.3);
  CHECK(ma.probs == std::vector<double>{0.3, 0.7});
  CHECK(ma.atoms[0] ==
        TropicalMatrix::from_rows({{0.0, bot(), bot()}, {0.0, bot(), bot()}, {0.0, 1.0, 1.0}}));
  CHECK(ma.atoms[1] ==
        TropicalMatrix::from_rows({{0.0, bot(), bot()}, {0.0, bot(), 0.0}, {0.0, 0.0, bot()}}));

  const MatrixModel in = example_integrability();
  CHECK(in.entries[0][0] == EntryDist::neg_shared());
  CHECK(in.entries[0][1] == EntryDist::neg_shared());
  CHECK(in.entries[0][2] == EntryDist::constant(0.0));
  CHECK(in.entries[2][2] == EntryDist::constant(-1.0));
  CHECK_FALSE(in.integrable);
  CHECK(example_integrability(ScalarDist::pareto(2.0)).integrable);
}

TEST_CASE("builtin parameter validation") {
  CHECK_THROWS_AS(example_mairesse(0.0), ModelError);
  CHECK_THROWS_AS(example_mairesse(1.0), ModelError);
  CHECK_THROWS_AS(example_integrability(ScalarDist::uniform(0.0, 2.0)), ModelError);
  CHECK_THROWS_AS(builtin_example("nope"), ModelError);
  CHECK_NOTHROW(builtin_example("exchanges"));
}

TEST_CASE("model validation") {
  MatrixModel m = testutil::constant_zero_model();
  m.probs = {0.5};
  CHECK_THROWS_AS(m.validate(), ModelError);
  m.probs = {0.5, 0.5};
  CHECK_THROWS_AS(m.validate(), ModelError);
  m = testutil::constant_zero_model();
  m.node_labels = {0};
  CHECK_THROWS_AS(m.validate(), ModelError);
  m = testutil::constant_zero_model();
  m.dim = 70;
  CHECK_THROWS_AS(m.validate(), ModelError);
}

TEST_CASE("periodic sampling with a pinned phase alternates") {
  const MatrixModel ex = example_exchanges(9);
  Realization phase0(ex, 0, 0);
  CHECK(phase0.next() == ex.cycle[0]);
  CHECK(phase0.next() == ex.cycle[1]);
  CHECK(phase0.next() == ex.cycle[0]);
  Realization phase1(ex, 0, 1);
  CHECK(phase1.next() == ex.cycle[1]);
  CHECK(phase1.next() == ex.cycle[0]);
  CHECK_THROWS_AS(Realization(testutil::constant_zero_model(), 0, 0), ModelError);
}

TEST_CASE("single-atom models sample a constant sequence") {
  const MatrixModel m = testutil::constant_zero_model();
  for (const TropicalMatrix& a : sample_sequence(m, 10, 3)) CHECK(a == m.atoms[0]);
}

TEST_CASE("sampling is deterministic per (model, seed, replicate)") {
  const MatrixModel m = example_mairesse(0.4, 77);
  CHECK(sample_sequence(m, 200, 5) == sample_sequence(m, 200, 5));
  CHECK(sample_sequence(m, 200, 5) != sample_sequence(m, 200, 6));

  MatrixModel other = m;
  other.seed = 78;
  CHECK(sample_sequence(m, 200, 5) != sample_sequence(other, 200, 5));

  const MatrixModel in = example_integrability(ScalarDist::pareto(0.9), 11);
  CHECK(sample_sequence(in, 50, 2) == sample_sequence(in, 50, 2));
}

TEST_CASE("atom frequencies concentrate") {
  const MatrixModel m = example_mairesse(0.6, 123);
  Realization stream(m, 0);
  long count_b = 0;
  const long n = 100000;
  for (long k = 0; k < n; ++k) {
    stream.next();
    if (stream.last_choice() == 0) ++count_b;
  }
  CHECK(std::abs(static_cast<double>(count_b) / static_cast<double>(n) - 0.6) < 0.01);
}

TEST_CASE("periodic phase is uniform (stationarity sanity)") {
  const MatrixModel ex = example_exchanges(5);
  const int reps = 10000;
  for (int k = 0; k < 4; ++k) {
    int count0 = 0;
    for (int r = 0; r < reps; ++r) {
      Realization stream(ex, static_cast<uint64_t>(r));
      TropicalMatrix a = stream.next();
      for (int s = 0; s < k; ++s) a = stream.next();
      if (a == ex.cycle[0]) ++count0;
    }
    const double expected = reps / 2.0;
    const double chi2 = (count0 - expected) * (count0 - expected) / expected +
                        (reps - count0 - expected) * (reps - count0 - expected) / expected;
    CHECK(chi2 < 10.83);  // df=1 at the 0.001 level
  }
}

TEST_CASE("support matrix") {
  const MatrixModel ma = example_mairesse(0.5);
  const StructureMatrix s = support_matrix(ma);
  // arcs (1,1),(2,1),(3,1),(3,2),(3,3),(2,3) in 1-based labels
  StructureMatrix want(3);
  want.set(0, 0, true);
  want.set(1, 0, true);
  want.set(2, 0, true);
  want.set(2, 1, true);
  want.set(2, 2, true);
  want.set(1, 2, true);
  CHECK(s == want);

  const MatrixModel single = testutil::constant_zero_model();
  CHECK(support_matrix(single) == structure_of(single.atoms[0]));

  const StructureMatrix ex = support_matrix(example_exchanges());
  CHECK(ex.at(0, 1));
  CHECK(ex.at(1, 0));
  CHECK_FALSE(ex.at(0, 0));
  CHECK_FALSE(ex.at(1, 1));
}

TEST_CASE("sampled entries stay inside the support") {
  const MatrixModel ma = example_mairesse(0.5, 31);
  const StructureMatrix support = support_matrix(ma);
  StructureMatrix seen(3);
  for (const TropicalMatrix& a : sample_sequence(ma, 1000, 0)) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (a.at(i, j).is_finite()) {
          CHECK(support.at(i, j));
          seen.set(i, j, true);
        }
  }
  CHECK(seen == support);  // both atoms occur in 1000 draws
}

TEST_CASE("fixed structure check") {
  CHECK(fixed_structure_check(example_exchanges()));
  CHECK_FALSE(fixed_structure_check(example_mairesse(0.5)));
  CHECK(fixed_structure_check(testutil::constant_zero_model()));
  CHECK(fixed_structure_check(example_integrability()));

  MatrixModel m = example_integrability();
  m.entries[1][2].bottom_mass = 0.5;
  CHECK_FALSE(fixed_structure_check(m));
}

TEST_CASE("ergodicity certification") {
  CHECK(ergodicity_certified(example_mairesse(0.5)).certified);
  CHECK(ergodicity_certified(example_integrability()).certified);
  CHECK_FALSE(ergodicity_certified(example_exchanges()).certified);

  MatrixModel m;
  m.kind = ModelKind::kPeriodic;
  m.dim = 3;
  m.cycle.assign(5, TropicalMatrix::identity(3));
  CHECK(ergodicity_certified(m).certified);  // gcd(k,5)=1 for k<=3
  m.cycle.assign(1, TropicalMatrix::identity(3));
  CHECK(ergodicity_certified(m).certified);
  m.dim = 2;
  m.cycle.assign(2, TropicalMatrix::identity(2));
  CHECK_FALSE(ergodicity_certified(m).certified);
}

TEST_CASE("integrability helpers") {
  CHECK(entries_integrable(example_mairesse(0.5)));
  CHECK_FALSE(entries_integrable(example_integrability()));
  CHECK(entries_integrable(example_integrability(ScalarDist::pareto(1.5))));

  const MatrixModel in = example_integrability();
  const std::vector<int> c1 = {0};
  const std::vector<int> c23 = {1, 2};
  CHECK_FALSE(submodel_integrable(in, c1));
  CHECK(submodel_integrable(in, c23));
}

TEST_CASE("permuting a model permutes its samples") {
  const MatrixModel m = example_mairesse(0.5, 17);
  const std::vector<int> perm = {2, 0, 1};  // node i -> perm[i]
  const MatrixModel pm = permute_model(m, perm);
  const auto seq = sample_sequence(m, 50, 0);
  const auto pseq = sample_sequence(pm, 50, 0);
  for (size_t k = 0; k < seq.size(); ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(pseq[k].at(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]) ==
              seq[k].at(i, j));
}

TEST_CASE("entrywise models sample per their descriptors") {
  MatrixModel m;
  m.kind = ModelKind::kEntrywiseIid;
  m.dim = 2;
  m.seed = 19;
  m.entries = {{EntryDist::uniform(0.0, 1.0), EntryDist::gaussian(2.0, 0.5, 0.4)},
               {EntryDist::constant(3.0), EntryDist::bottom()}};
  m.validate();
  CHECK(sample_sequence(m, 100, 1) == sample_sequence(m, 100, 1));
  CHECK_FALSE(fixed_structure_check(m));  // the mixed entry has 0 < q < 1

  int bottom_entries = 0;
  for (const TropicalMatrix& a : sample_sequence(m, 1000, 0)) {
    REQUIRE(a.at(0, 0).is_finite());
    CHECK(a.at(0, 0).value() >= 0.0);
    CHECK(a.at(0, 0).value() < 1.0);
    CHECK(a.at(1, 0) == TropicalScalar(3.0));
    CHECK(a.at(1, 1).is_bottom());
    if (a.at(0, 1).is_bottom()) ++bottom_entries;
  }
  CHECK(std::abs(bottom_entries / 1000.0 - 0.4) < 0.05);

  const StructureMatrix s = support_matrix(m);
  CHECK(s.at(0, 0));
  CHECK(s.at(0, 1));
  CHECK(s.at(1, 0));
  CHECK_FALSE(s.at(1, 1));
}

TEST_CASE("scalar distributions") {
  SplitMix64 rng(1, 2);
  const ScalarDist pareto = ScalarDist::pareto(0.9);
  for (int i = 0; i < 100; ++i) CHECK(pareto.sample(rng) >= 1.0);
  CHECK_FALSE(pareto.mean_is_finite());
  CHECK(ScalarDist::pareto(2.0).mean() == doctest::Approx(2.0));
  CHECK(ScalarDist::uniform(1.0, 3.0).mean() == doctest::Approx(2.0));
  CHECK(ScalarDist::constant(4.0).mean() == 4.0);
}
