#include "maxplus/semiring.hpp"

#include <cmath>
#include <cstdio>

namespace maxplus {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw DimensionError("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                         std::to_string(dim));
}

}  // namespace

std::ostream& operator<<(std::ostream& os, TropicalScalar t) {
  if (t.is_bottom()) return os << "-inf";
  return os << t.value();
}

TropicalVector::TropicalVector(int dim, TropicalScalar fill) {
  check_dim(dim);
  e_.assign(static_cast<size_t>(dim), fill);
}

TropicalVector::TropicalVector(std::initializer_list<TropicalScalar> entries)
    : e_(entries.begin(), entries.end()) {
  check_dim(dim());
}

TropicalScalar TropicalVector::max_entry() const {
  TropicalScalar best = TropicalScalar::bottom();
  for (TropicalScalar t : e_) best = max(best, t);
  return best;
}

TropicalScalar TropicalVector::min_entry() const {
  TropicalScalar worst = e_.front();
  for (TropicalScalar t : e_) worst = min(worst, t);
  return worst;
}

bool TropicalVector::all_bottom() const { return max_entry().is_bottom(); }

std::ostream& operator<<(std::ostream& os, const TropicalVector& v) {
  os << "(";
  for (int i = 0; i < v.dim(); ++i) os << (i ? ", " : "") << v[i];
  return os << ")";
}

TropicalMatrix::TropicalMatrix(int dim, TropicalScalar fill) : dim_(dim) {
  check_dim(dim);
  a_.assign(static_cast<size_t>(dim) * dim, fill);
}

TropicalMatrix TropicalMatrix::identity(int dim) {
  TropicalMatrix e(dim);
  for (int i = 0; i < dim; ++i) e.at(i, i) = TropicalScalar(0.0);
  return e;
}

TropicalMatrix TropicalMatrix::from_rows(
    std::initializer_list<std::initializer_list<TropicalScalar>> rows) {
  const int d = static_cast<int>(rows.size());
  TropicalMatrix m(d);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d) throw DimensionError("matrix rows must be square");
    int j = 0;
    for (TropicalScalar t : row) m.at(i, j++) = t;
    ++i;
  }
  return m;
}

TropicalScalar TropicalMatrix::max_entry() const {
  TropicalScalar best = TropicalScalar::bottom();
  for (TropicalScalar t : a_) best = max(best, t);
  return best;
}

std::ostream& operator<<(std::ostream& os, const TropicalMatrix& m) {
  for (int i = 0; i < m.dim(); ++i) {
    os << (i ? "\n[" : "[");
    for (int j = 0; j < m.dim(); ++j) os << (j ? ", " : "") << m.at(i, j);
    os << "]";
  }
  return os;
}

StructureMatrix::StructureMatrix(int dim) : dim_(dim) {
  check_dim(dim);
  f_.assign(static_cast<size_t>(dim) * dim, 0);
}

StructureMatrix StructureMatrix::identity(int dim) {
  StructureMatrix e(dim);
  for (int i = 0; i < dim; ++i) e.set(i, i, true);
  return e;
}

void StructureMatrix::merge(const StructureMatrix& o) {
  if (o.dim_ != dim_) throw DimensionError("structure merge dimension mismatch");
  for (size_t k = 0; k < f_.size(); ++k) f_[k] |= o.f_[k];
}

TropicalMatrix StructureMatrix::to_tropical() const {
  TropicalMatrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (at(i, j)) m.at(i, j) = TropicalScalar(0.0);
  return m;
}

uint32_t StructureMatrix::pack() const {
  if (dim_ > 5) throw GuardError("pack() supports dim <= 5");
  uint32_t bits = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (at(i, j)) bits |= 1u << (i * dim_ + j);
  return bits;
}

TropicalVector mat_vec(const TropicalMatrix& a, const TropicalVector& x) {
  if (a.dim() != x.dim()) throw DimensionError("mat_vec dimension mismatch");
  TropicalVector r(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    TropicalScalar acc = TropicalScalar::bottom();
    for (int j = 0; j < a.dim(); ++j) acc = max(acc, a.at(i, j) + x[j]);
    r[i] = acc;
  }
  return r;
}

TropicalMatrix mat_mul(const TropicalMatrix& a, const TropicalMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("mat_mul dimension mismatch");
  TropicalMatrix r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      TropicalScalar acc = TropicalScalar::bottom();
      for (int k = 0; k < a.dim(); ++k) acc = max(acc, a.at(i, k) + b.at(k, j));
      r.at(i, j) = acc;
    }
  return r;
}

StructureMatrix mat_mul(const StructureMatrix& a, const StructureMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("structure mat_mul dimension mismatch");
  StructureMatrix r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k)
      if (a.at(i, k))
        for (int j = 0; j < a.dim(); ++j)
          if (b.at(k, j)) r.set(i, j, true);
  return r;
}

TropicalVector left_product(std::span<const TropicalMatrix> seq, const TropicalVector& x0) {
  TropicalVector x = x0;
  for (const TropicalMatrix& a : seq) x = mat_vec(a, x);
  return x;
}

TropicalVector right_product(std::span<const TropicalMatrix> seq, const TropicalVector& x0) {
  TropicalVector y = x0;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) y = mat_vec(*it, y);
  return y;
}

TropicalMatrix brute_force_power(std::span<const TropicalMatrix> seq) {
  const int n = static_cast<int>(seq.size());
  if (n == 0) {
    throw GuardError("brute_force_power needs at least one matrix");
  }
  const int d = seq[0].dim();
  for (const TropicalMatrix& a : seq)
    if (a.dim() != d) throw DimensionError("brute_force_power dimension mismatch");

  double paths = static_cast<double>(n);
  for (int l = 0; l < n; ++l) paths *= d;
  if (paths > 1e7) throw GuardError("brute_force_power enumeration guard exceeded");

  TropicalMatrix result(d);
  std::vector<int> node(static_cast<size_t>(n) + 1, 0);  // node[l] = i_l
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      node[0] = j;
      node[static_cast<size_t>(n)] = i;
      TropicalScalar best = TropicalScalar::bottom();
      // Odometer over interior nodes i_1 .. i_{n-1}.
      for (int l = 1; l < n; ++l) node[static_cast<size_t>(l)] = 0;
      while (true) {
        TropicalScalar w(0.0);
        for (int l = 0; l < n; ++l) {
          w += seq[static_cast<size_t>(l)].at(node[static_cast<size_t>(l) + 1],
                                              node[static_cast<size_t>(l)]);
          if (w.is_bottom()) break;
        }
        best = max(best, w);
        int l = 1;
        while (l < n && ++node[static_cast<size_t>(l)] == d) node[static_cast<size_t>(l++)] = 0;
        if (l == n) break;
      }
      result.at(i, j) = best;
    }
  }
  return result;
}

StructureMatrix structure_of(const TropicalMatrix& a) {
  StructureMatrix s(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s.set(i, j, a.at(i, j).is_finite());
  return s;
}

std::vector<int> bottom_lines(const TropicalMatrix& a) {
  std::vector<int> rows;
  for (int i = 0; i < a.dim(); ++i) {
    bool all_bottom = true;
    for (int j = 0; j < a.dim() && all_bottom; ++j) all_bottom = a.at(i, j).is_bottom();
    if (all_bottom) rows.push_back(i);
  }
  return rows;
}

bool has_bottom_line(const TropicalMatrix& a) { return !bottom_lines(a).empty(); }

TropicalMatrix restrict_matrix(const TropicalMatrix& a, std::span<const int> nodes) {
  const int d = static_cast<int>(nodes.size());
  TropicalMatrix r(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r.at(i, j) = a.at(nodes[static_cast<size_t>(i)], nodes[static_cast<size_t>(j)]);
  return r;
}

StructureMatrix restrict_structure(const StructureMatrix& s, std::span<const int> nodes) {
  const int d = static_cast<int>(nodes.size());
  StructureMatrix r(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      r.set(i, j, s.at(nodes[static_cast<size_t>(i)], nodes[static_cast<size_t>(j)]));
  return r;
}

}  // namespace maxplus
