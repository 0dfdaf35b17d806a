#ifndef MAXPLUS_SEMIRING_HPP
#define MAXPLUS_SEMIRING_HPP

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace maxplus {

// Dense storage keeps the product semantics simple; systems of interest are small.
inline constexpr int kMaxDim = 64;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Element of the max-plus semiring R u {bottom}. Addition is max, multiplication
// is +, bottom (= -infinity) is the additive identity and absorbs multiplication.
// Bottom is a tagged state, never a sentinel real, so structural tests are exact.
class TropicalScalar {
 public:
  constexpr TropicalScalar() : value_(0.0), finite_(false) {}
  constexpr TropicalScalar(double v) : value_(v), finite_(true) {}  // NOLINT: implicit by design

  static constexpr TropicalScalar bottom() { return TropicalScalar(); }

  constexpr bool is_bottom() const { return !finite_; }
  constexpr bool is_finite() const { return finite_; }

  // Valid only when finite.
  double value() const {
    if (!finite_) throw std::logic_error("value() on bottom tropical scalar");
    return value_;
  }

  // Multiplication of the semiring (numeric +, bottom absorbing).
  friend constexpr TropicalScalar operator+(TropicalScalar a, TropicalScalar b) {
    if (!a.finite_ || !b.finite_) return bottom();
    return TropicalScalar(a.value_ + b.value_);
  }

  TropicalScalar& operator+=(TropicalScalar o) { return *this = *this + o; }

  // Total order with bottom minimal; the semiring addition is max under it.
  friend constexpr bool operator==(TropicalScalar a, TropicalScalar b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend constexpr bool operator!=(TropicalScalar a, TropicalScalar b) { return !(a == b); }
  friend constexpr bool operator<(TropicalScalar a, TropicalScalar b) {
    if (!a.finite_) return b.finite_;
    if (!b.finite_) return false;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(TropicalScalar a, TropicalScalar b) { return a < b || a == b; }
  friend constexpr bool operator>(TropicalScalar a, TropicalScalar b) { return b < a; }
  friend constexpr bool operator>=(TropicalScalar a, TropicalScalar b) { return b <= a; }

 private:
  double value_;
  bool finite_;
};

// Addition of the semiring.
constexpr TropicalScalar max(TropicalScalar a, TropicalScalar b) { return a < b ? b : a; }

constexpr TropicalScalar min(TropicalScalar a, TropicalScalar b) { return b < a ? b : a; }

// (x + c) / n style scaling used by trajectory diagnostics; bottom stays bottom.
inline TropicalScalar scaled(TropicalScalar t, double factor) {
  return t.is_bottom() ? TropicalScalar::bottom() : TropicalScalar(t.value() * factor);
}

inline TropicalScalar shifted(TropicalScalar t, double delta) {
  return t.is_bottom() ? TropicalScalar::bottom() : TropicalScalar(t.value() + delta);
}

std::ostream& operator<<(std::ostream& os, TropicalScalar t);

class TropicalVector {
 public:
  explicit TropicalVector(int dim, TropicalScalar fill = TropicalScalar::bottom());
  TropicalVector(std::initializer_list<TropicalScalar> entries);

  static TropicalVector zeros(int dim) { return TropicalVector(dim, TropicalScalar(0.0)); }

  int dim() const { return static_cast<int>(e_.size()); }
  TropicalScalar& operator[](int i) { return e_[static_cast<size_t>(i)]; }
  TropicalScalar operator[](int i) const { return e_[static_cast<size_t>(i)]; }

  TropicalScalar max_entry() const;  // bottom iff all entries bottom
  TropicalScalar min_entry() const;  // bottom iff any entry bottom
  bool all_bottom() const;

  friend bool operator==(const TropicalVector& a, const TropicalVector& b) { return a.e_ == b.e_; }
  friend bool operator!=(const TropicalVector& a, const TropicalVector& b) { return !(a == b); }

 private:
  std::vector<TropicalScalar> e_;
};

std::ostream& operator<<(std::ostream& os, const TropicalVector& v);

// Square max-plus matrix. Entry (i,j) weighs the arc i->j of the incidence
// graph: x_i(n+1) = max_j (A_ij + x_j(n)).
class TropicalMatrix {
 public:
  explicit TropicalMatrix(int dim, TropicalScalar fill = TropicalScalar::bottom());

  static TropicalMatrix identity(int dim);
  static TropicalMatrix from_rows(std::initializer_list<std::initializer_list<TropicalScalar>> rows);

  int dim() const { return dim_; }
  TropicalScalar& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  TropicalScalar at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

  TropicalScalar max_entry() const;

  friend bool operator==(const TropicalMatrix& a, const TropicalMatrix& b) {
    return a.dim_ == b.dim_ && a.a_ == b.a_;
  }
  friend bool operator!=(const TropicalMatrix& a, const TropicalMatrix& b) { return !(a == b); }

 private:
  int dim_;
  std::vector<TropicalScalar> a_;
};

std::ostream& operator<<(std::ostream& os, const TropicalMatrix& m);

// {0, bottom} skeleton of a matrix; multiplicative over mat_mul.
class StructureMatrix {
 public:
  explicit StructureMatrix(int dim);
  static StructureMatrix identity(int dim);

  int dim() const { return dim_; }
  bool at(int i, int j) const { return f_[static_cast<size_t>(i) * dim_ + j] != 0; }
  void set(int i, int j, bool finite) { f_[static_cast<size_t>(i) * dim_ + j] = finite ? 1 : 0; }

  void merge(const StructureMatrix& o);  // entrywise union of finite supports
  TropicalMatrix to_tropical() const;

  // Bit packing for Markov-chain state spaces; requires dim <= 5.
  uint32_t pack() const;

  friend bool operator==(const StructureMatrix& a, const StructureMatrix& b) {
    return a.dim_ == b.dim_ && a.f_ == b.f_;
  }
  friend bool operator!=(const StructureMatrix& a, const StructureMatrix& b) { return !(a == b); }

 private:
  int dim_;
  std::vector<uint8_t> f_;
};

TropicalVector mat_vec(const TropicalMatrix& a, const TropicalVector& x);
TropicalMatrix mat_mul(const TropicalMatrix& a, const TropicalMatrix& b);
StructureMatrix mat_mul(const StructureMatrix& a, const StructureMatrix& b);

// x(n, x0) = A(n-1) ... A(0) x0 for seq = [A(0), ..., A(n-1)].
TropicalVector left_product(std::span<const TropicalMatrix> seq, const TropicalVector& x0);

// y(n, x0) = A(-1) ... A(-n) x0 for seq = [A(-1), ..., A(-n)].
TropicalVector right_product(std::span<const TropicalMatrix> seq, const TropicalVector& x0);

// Path-enumeration oracle for the product A(n-1) ... A(0): entry (i,j) is the
// max total weight over index paths i_0 = j, ..., i_n = i, with step l weighted
// by seq[l](i_{l+1}, i_l). Guarded to n * dim^n <= 1e7 enumerated paths.
TropicalMatrix brute_force_power(std::span<const TropicalMatrix> seq);

StructureMatrix structure_of(const TropicalMatrix& a);

// Row indices whose entries are all bottom.
std::vector<int> bottom_lines(const TropicalMatrix& a);
bool has_bottom_line(const TropicalMatrix& a);

// Restriction of a to the given (strictly increasing) node subset.
TropicalMatrix restrict_matrix(const TropicalMatrix& a, std::span<const int> nodes);
StructureMatrix restrict_structure(const StructureMatrix& s, std::span<const int> nodes);

}  // namespace maxplus

#endif
