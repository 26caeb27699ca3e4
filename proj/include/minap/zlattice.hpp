#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "minap/core_groups.hpp"
#include "minap/integer.hpp"

namespace minap {

using ZVec = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<ZVec>& rows, std::size_t cols);
  static IntMatrix from_columns(const std::vector<ZVec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ZVec row(std::size_t i) const;
  ZVec column(std::size_t j) const;
  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& other) const;
  ZVec operator*(const ZVec& v) const;
  bool operator==(const IntMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }
  bool is_diagonal() const;
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// Exact determinant of a square matrix (fraction-free elimination).
Integer determinant(const IntMatrix& a);

// U * A * V = S with U, V unimodular and s_0 | s_1 | ... on the diagonal.
struct SmithForm {
  IntMatrix u, s, v;
  IntMatrix u_inv, v_inv;
  std::size_t rank = 0;
  std::vector<Integer> diagonal() const;
};

SmithForm smith_normal_form(const IntMatrix& a);

// Row-style Hermite normal form of the row lattice; zero rows dropped.
IntMatrix hermite_normal_form(const IntMatrix& rows);

// Basis of {x in Z^c : A x = 0}.
std::vector<ZVec> integer_kernel(const IntMatrix& a);
std::optional<ZVec> solve_integer(const IntMatrix& a, const ZVec& b);

// Row i of A x = b is read modulo moduli[i]; modulus 0 means equality in Z.
std::optional<ZVec> solve_congruence(const IntMatrix& a, const ZVec& moduli, const ZVec& b);
// Generating set of the solution lattice of A x = 0 under the same convention.
std::vector<ZVec> congruence_kernel(const IntMatrix& a, const ZVec& moduli);

// Subgroups of the ambient sum of Z(m_i), Z for m_i = 0.
ZVec reduce(const ZVec& x, const ZVec& moduli);
bool is_zero(const ZVec& x);
// 0 stands for infinite order.
Integer element_order(const ZVec& x, const ZVec& moduli);

struct Membership {
  bool member = false;
  ZVec coefficients;
};

Membership subgroup_membership(const std::vector<ZVec>& gens, const ZVec& moduli, const ZVec& x);
std::vector<ZVec> subgroup_intersection(const std::vector<ZVec>& a, const std::vector<ZVec>& b,
                                        const ZVec& moduli);
bool is_independent(const std::vector<ZVec>& elems, const ZVec& moduli);
bool contains_all(const std::vector<ZVec>& gens, const std::vector<ZVec>& xs, const ZVec& moduli);
bool same_subgroup(const std::vector<ZVec>& a, const std::vector<ZVec>& b, const ZVec& moduli);
// Canonical form of <gens> + lattice of moduli: equal iff the subgroups are equal.
IntMatrix subgroup_hnf(const std::vector<ZVec>& gens, const ZVec& moduli);

// Finite ambients only.
Integer ambient_order(const ZVec& moduli);
Integer subgroup_order(const std::vector<ZVec>& gens, const ZVec& moduli);
// Invariant factors of the quotient ambient / <gens>, trivial factors dropped.
std::vector<Integer> quotient_invariants(const std::vector<ZVec>& gens, const ZVec& moduli);

struct CyclicBasis {
  std::vector<ZVec> gens;
  std::vector<Integer> orders;
};
// Independent generators of <gens> with orders s_0 | s_1 | ..., trivial ones dropped.
CyclicBasis subgroup_basis(const std::vector<ZVec>& gens, const ZVec& moduli);

// Element-level wrappers over the union of the supports. Prufer blocks are
// rejected with SUPPORT_MISMATCH.
Membership subgroup_membership(const BlockGroup& g, const std::vector<Element>& gens, const Element& x);
std::vector<Element> subgroup_intersection(const BlockGroup& g, const std::vector<Element>& a,
                                           const std::vector<Element>& b);
bool is_independent(const BlockGroup& g, const std::vector<Element>& elems);

}  // namespace minap
