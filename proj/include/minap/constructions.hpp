#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minap/core_groups.hpp"
#include "minap/tseq.hpp"

namespace minap {

// Triangular numbers and the tables derived from them. S_n = n(n+1)/2,
// t(n) = max{t : n >= S_t}, mu_n = S_{t(n)}.
std::size_t tri_S(std::size_t n);
std::size_t tri_t(std::size_t n);
std::size_t tri_mu(std::size_t n);
// n mod 1 is taken to be 0.
std::size_t mod_or_zero(std::size_t n, std::size_t d);

struct TableReport {
  std::size_t checked = 0;
  std::optional<std::size_t> table_failure;     // S_{t(n)} <= n < S_{t(n)+1} or n mod mu_n < mu_n broken
  std::optional<std::size_t> mod_below_n;       // first n > 3 with n mod mu_n >= n
  std::optional<std::size_t> n_below_s_prev;   // first n > 3 with n >= S_{n-1}
  bool ok() const { return !table_failure && !mod_below_n && !n_below_s_prev; }
};
// Checks the tables for 1 <= n <= n_max, and the two inequalities
// n mod mu_n < n and n < S_{n-1} separately for 3 < n <= n_max.
TableReport check_tables(std::size_t n_max);

// Group data for the triangular sequence: blocks <e_j> + H_j with finite
// e orders, H of finite exponent, H_j nonzero below M and zero from M on.
struct TriangularParams {
  enum class Case { FiniteM, InfiniteM };          // (i) and (ii)
  enum class Hypothesis { EqualOrders, Growing };  // a) and b)

  BlockGroup g;
  Case tcase = Case::InfiniteM;
  Hypothesis hyp = Hypothesis::EqualOrders;
  std::size_t c = 0;  // number of H basis elements when M is finite
  Integer exp_h = 1;

  // Throws INVALID_PARAMS when the group does not have the required shape or
  // neither hypothesis holds.
  static TriangularParams from_group(const BlockGroup& g);
  std::string case_name() const;
};

// Enumerated H basis element b_k and its position (block, 0-based slot).
std::pair<std::size_t, std::size_t> b_position(const TriangularParams& p, std::size_t k);
Element b_element(const TriangularParams& p, std::size_t k);
// Position of the even term d_{2i}: i-th element of e_0, ..., (u_0-1)e_0, e_1, ...
std::pair<std::size_t, Integer> even_position(const TriangularParams& p, std::size_t i);
// First even position i with d_{2i} in block j.
std::size_t even_block_start(const TriangularParams& p, std::size_t j);
// b index of the odd term d_{2n+1}.
std::size_t odd_b_index(const TriangularParams& p, std::size_t n);
// e support of d_{2n+1} as the inclusive block range [first, last]; empty for n = 0.
std::optional<std::pair<std::size_t, std::size_t>> odd_e_range(const TriangularParams& p, std::size_t n);

Element triangular_term(const TriangularParams& p, std::size_t n);
TSeq triangular_sequence(const TriangularParams& p);

// All n <= n_max whose odd term d_{2n+1} carries b_k and has every e index > bound.
std::vector<std::size_t> verify_recurrence(const TriangularParams& p, std::size_t k, std::size_t n_max,
                                           std::size_t bound);

// Smallest m' > 3 such that every even term d_{2n} with n > m' lies in a
// block beyond max(v, 3); the exclusion bound used for the triangular
// sequence is then 4 m' (k + 1).
std::size_t even_shift_bound(const TriangularParams& p, std::size_t v);

struct ResidueSeqRule {
  enum class Kind { List, Geom, Affine, Factorial };

  Kind kind = Kind::Geom;
  std::vector<Integer> list;  // List
  Integer q = 2;              // Geom: u_n = q^n
  Integer a = 1;              // Affine: u_{n+1} = a u_n + b, u_0 = u0
  Integer b = 0;
  Integer u0 = 1;

  static ResidueSeqRule make_list(std::vector<Integer> values);
  static ResidueSeqRule geom(const Integer& q);
  static ResidueSeqRule affine(const Integer& a, const Integer& b, const Integer& u0 = 1);
  static ResidueSeqRule factorial();

  // u_n exactly; List rules are zero past their end.
  Integer value(std::size_t n) const;
  std::string to_string() const;
};

// "geom(2)", "affine(3,1)", "affine(3,1,2)", "factorial", "list(1,2,3)".
ResidueSeqRule parse_residue_rule(const std::string& text);

// The rule as a sequence in Z.
TSeq rule_sequence(const ResidueSeqRule& rule);

struct CircleResult {
  bool in = false;
  std::size_t preperiod = 0;
  std::size_t period = 1;
  std::vector<Integer> cycle;  // residues u_n a mod b over one period
  std::vector<Integer> head;   // residues before the cycle
};

// Decides whether u_n x -> 0 in the circle for rational x = a/b, by
// following the residues u_n a mod b into their cycle.
CircleResult circle_membership(const ResidueSeqRule& u, const Rational& x);

struct TbTarget {
  Rational value;
  bool approximate = false;  // decimal approximation of an irrational
};
// "p/q" is exact; a decimal such as "0.618034" is an approximation.
TbTarget parse_tb_target(const std::string& text);

struct TbReport {
  bool approx_only = false;
  bool rational_target = false;  // <b_target> is then finite, so not dense
  std::string embedding;
  std::vector<std::string> notes;
};

struct TbDemo {
  TSeq seq;
  TbReport report;
};

// Embedding n -> n alpha of Z into the circle with alpha = sqrt(2) - 1.
// b_n is the integer in [0, q_K) with b_n alpha within eps / 2^n of the
// target, q_K the first convergent denominator of alpha with 2/q_K < eps/2^n.
// The result interleaves a_n (even indices) with b_n (odd indices).
TbDemo tb_interleave_demo(const ResidueSeqRule& a_rule, const TbTarget& target, const Rational& eps);

// The integer b_n of the demo together with the rational error bound used.
std::pair<Integer, Rational> tb_odd_term(const TbTarget& target, const Rational& eps, std::size_t n);

}  // namespace minap
