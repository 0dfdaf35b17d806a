#ifndef MAXPLUS_TEST_UTIL_HPP
#define MAXPLUS_TEST_UTIL_HPP

#include <vector>

#include "maxplus/model.hpp"
#include "maxplus/rng.hpp"
#include "maxplus/semiring.hpp"

namespace maxplus::testutil {

inline TropicalScalar bot() { return TropicalScalar::bottom(); }

// Deterministic generator for randomized checks; integer-valued entries keep
// every algebraic assertion exact.
class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed, 0) {}

  int int_in(int lo, int hi) {
    return lo + static_cast<int>(rng_.next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  double unit() { return rng_.next_unit(); }

  TropicalScalar scalar(double bottom_prob = 0.25, int lo = -5, int hi = 5) {
    if (rng_.next_unit() < bottom_prob) return TropicalScalar::bottom();
    return TropicalScalar(static_cast<double>(int_in(lo, hi)));
  }

  TropicalScalar finite_scalar(int lo = -5, int hi = 5) {
    return TropicalScalar(static_cast<double>(int_in(lo, hi)));
  }

  TropicalMatrix matrix(int d, double bottom_prob = 0.3) {
    TropicalMatrix a(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a.at(i, j) = scalar(bottom_prob);
    return a;
  }

  TropicalMatrix matrix_no_bottom_rows(int d, double bottom_prob = 0.3) {
    TropicalMatrix a = matrix(d, bottom_prob);
    for (int i = 0; i < d; ++i) {
      bool finite = false;
      for (int j = 0; j < d; ++j) finite |= a.at(i, j).is_finite();
      if (!finite) a.at(i, int_in(0, d - 1)) = finite_scalar();
    }
    return a;
  }

  TropicalVector finite_vector(int d, int lo = -5, int hi = 5) {
    TropicalVector v(d);
    for (int i = 0; i < d; ++i) v[i] = finite_scalar(lo, hi);
    return v;
  }

  std::vector<TropicalMatrix> sequence(int d, int n, double bottom_prob = 0.3) {
    std::vector<TropicalMatrix> seq;
    for (int k = 0; k < n; ++k) seq.push_back(matrix(d, bottom_prob));
    return seq;
  }

 private:
  SplitMix64 rng_;
};

// d=3 i.i.d. fixture with finite diagonals in every atom; all component
// exponents are closed-form singletons: (0.5, 0.5, -0.5), limit (0.5, 0.5, 0.5).
inline MatrixModel precedence_fixture(uint64_t seed = 42) {
  const TropicalScalar b = bot();
  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = 3;
  m.seed = seed;
  m.atoms = {TropicalMatrix::from_rows({{0.0, b, b}, {0.0, 1.0, b}, {b, 2.0, 0.0}}),
             TropicalMatrix::from_rows({{1.0, b, b}, {b, 0.0, b}, {0.0, b, -1.0}})};
  m.probs = {0.5, 0.5};
  m.name = "precedence_fixture";
  m.validate();
  return m;
}

// d=4 i.i.d. fixture with two nontrivial components {1,2} and {3,4}, the
// second feeding the first.
inline MatrixModel d4_fixture(uint64_t seed = 42) {
  const TropicalScalar b = bot();
  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = 4;
  m.seed = seed;
  m.atoms = {TropicalMatrix::from_rows({{1.0, 0.0, b, b},
                                        {2.0, b, b, b},
                                        {b, 0.0, 1.0, b},
                                        {b, b, 2.0, 0.0}}),
             TropicalMatrix::from_rows({{0.0, 2.0, b, b},
                                        {1.0, 1.0, b, b},
                                        {b, b, 0.0, 1.0},
                                        {b, b, 1.0, b}})};
  m.probs = {0.5, 0.5};
  m.name = "d4_fixture";
  m.validate();
  return m;
}

// Split along I = {1,2}, J = {3}: the B block mixes two structures, the exit
// column is finite only under the first atom.
inline MatrixModel chain2_fixture(double p = 0.7, uint64_t seed = 42) {
  const TropicalScalar b = bot();
  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = 3;
  m.seed = seed;
  m.atoms = {TropicalMatrix::from_rows({{b, 0.0, b}, {0.0, b, 0.0}, {b, b, 0.0}}),
             TropicalMatrix::from_rows({{0.0, b, b}, {b, 0.0, b}, {b, b, 1.0}})};
  m.probs = {p, 1.0 - p};
  m.name = "chain2_fixture";
  m.validate();
  return m;
}

// Same split shape but the D block is identically bottom.
inline MatrixModel d_bottom_fixture(uint64_t seed = 42) {
  const TropicalScalar b = bot();
  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = 3;
  m.seed = seed;
  m.atoms = {TropicalMatrix::from_rows({{b, 0.0, b}, {0.0, b, b}, {b, b, 0.0}}),
             TropicalMatrix::from_rows({{0.0, b, b}, {b, 0.0, b}, {b, b, 1.0}})};
  m.probs = {0.5, 0.5};
  m.name = "d_bottom_fixture";
  m.validate();
  return m;
}

inline MatrixModel constant_zero_model(int dim = 2, uint64_t seed = 1) {
  MatrixModel m;
  m.kind = ModelKind::kIidFinite;
  m.dim = dim;
  m.seed = seed;
  m.atoms = {TropicalMatrix(dim, TropicalScalar(0.0))};
  m.probs = {1.0};
  m.name = "constant_zero";
  m.validate();
  return m;
}

}  // namespace maxplus::testutil

#endif
