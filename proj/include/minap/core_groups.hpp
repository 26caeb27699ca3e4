#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minap/error.hpp"
#include "minap/integer.hpp"

namespace minap {

struct CyclicOrder {
  enum class Kind { Finite, Infinite, Prufer };

  Kind kind = Kind::Infinite;
  Integer value;  // n for Finite, p for Prufer, unused for Infinite

  static CyclicOrder finite(const Integer& n);
  static CyclicOrder infinite();
  static CyclicOrder prufer(const Integer& p);

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
  bool is_prufer() const { return kind == Kind::Prufer; }

  bool operator==(const CyclicOrder& other) const {
    return kind == other.kind && (kind == Kind::Infinite || value == other.value);
  }
  std::string to_string() const;
};

// One summand <e_j> + H_j. H_j is either the span of an explicit basis with
// the given orders, or (h_spans_e) the cyclic group <e_j> itself.
struct Block {
  CyclicOrder e_order;
  std::vector<Integer> h_orders;
  bool h_spans_e = false;

  std::size_t h_rank() const { return h_spans_e ? 1 : h_orders.size(); }
  bool h_trivial() const { return !h_spans_e && h_orders.empty(); }
  bool operator==(const Block& other) const {
    return e_order == other.e_order && h_orders == other.h_orders && h_spans_e == other.h_spans_e;
  }
};

struct TailRule {
  enum class Kind { None, Const, Geometric };

  Kind kind = Kind::None;
  Block block;                    // Const
  Integer p;                      // Geometric
  unsigned start_exp = 1;         // Geometric
  std::vector<Integer> h_orders;  // Geometric
  bool h_spans_e = false;         // Geometric

  static TailRule none();
  static TailRule constant(Block block);
  static TailRule geometric(const Integer& p, unsigned start_exp, std::vector<Integer> h_orders = {},
                            bool h_spans_e = false);

  bool operator==(const TailRule& other) const;
};

// A finite integer or infinity.
struct Order {
  std::optional<Integer> value;

  static Order infinite() { return Order{}; }
  static Order of(const Integer& n) { return Order{n}; }
  bool is_infinite() const { return !value.has_value(); }
  bool operator==(const Order& other) const { return value == other.value; }
  std::string to_string() const;
};

// Index bound M; nullopt stands for infinity.
using IndexBound = std::optional<std::size_t>;

class BlockGroup {
 public:
  BlockGroup() = default;

  const std::vector<Block>& head() const { return head_; }
  const TailRule& tail() const { return tail_; }
  IndexBound m() const { return m_; }

  bool has_block(std::size_t j) const;
  Block block_at(std::size_t j) const;
  bool finitely_generated() const { return tail_.kind == TailRule::Kind::None; }
  std::size_t head_size() const { return head_.size(); }

  bool operator==(const BlockGroup& other) const {
    return head_ == other.head_ && tail_ == other.tail_ && m_ == other.m_;
  }

 private:
  friend BlockGroup make_group(std::vector<Block>, TailRule, IndexBound);
  std::vector<Block> head_;
  TailRule tail_;
  IndexBound m_;
};

// Validates and builds a presentation. The first overload infers M as the
// least index from which every block has trivial H part.
BlockGroup make_group(std::vector<Block> head, TailRule tail);
BlockGroup make_group(std::vector<Block> head, TailRule tail, IndexBound m);

struct Term {
  Rational e;                // integer unless the block is Prufer
  std::vector<Integer> h;    // length = h_orders.size()
  bool operator==(const Term& other) const { return e == other.e && h == other.h; }
};

class Element {
 public:
  Element() = default;

  const std::map<std::size_t, Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::vector<std::size_t> support() const;
  std::optional<std::size_t> max_block() const;

  // Canonical serialization, used as a deduplication key.
  std::string key() const;

  bool operator==(const Element& other) const { return terms_ == other.terms_; }
  bool operator<(const Element& other) const { return key() < other.key(); }

 private:
  friend Element make_element(const BlockGroup&, std::map<std::size_t, Term>);
  std::map<std::size_t, Term> terms_;
};

// Reduces coefficients to canonical form and drops zero terms.
Element make_element(const BlockGroup& g, std::map<std::size_t, Term> terms);
Element canonicalize(const BlockGroup& g, const Element& x);

Element e_gen(const BlockGroup& g, std::size_t j, const Rational& coeff = 1);
// i is 0-based: h_gen(g, j, 0) is the first basis element of H_j.
Element h_gen(const BlockGroup& g, std::size_t j, std::size_t i, const Integer& coeff = 1);
// The k-th basis element of H in block-major order, with the block it lives in.
std::optional<std::pair<std::size_t, std::size_t>> h_basis_position(const BlockGroup& g, std::size_t k);
Element h_basis_element(const BlockGroup& g, std::size_t k);

Element add(const BlockGroup& g, const Element& x, const Element& y);
Element neg(const BlockGroup& g, const Element& x);
Element sub(const BlockGroup& g, const Element& x, const Element& y);
Element smul(const BlockGroup& g, const Integer& n, const Element& x);

Order order_of(const BlockGroup& g, const Element& x);
Order block_exponent(const Block& b);
Order exponent(const BlockGroup& g);
bool is_bounded(const BlockGroup& g);
// Exponent of H = sum of the H_j; 1 when H = 0.
Order exponent_h(const BlockGroup& g);

struct Cardinality {
  bool omega = false;
  Integer count;  // meaningful when !omega

  static Cardinality finite(const Integer& n) { return Cardinality{false, n}; }
  static Cardinality infinite() { return Cardinality{true, 0}; }
  bool operator==(const Cardinality& other) const {
    return omega == other.omega && (omega || count == other.count);
  }
  std::string to_string() const;
};

// Multiplicity of each primary cyclic summand Z(p^r), keyed by (p, r).
using PrimaryClasses = std::map<std::pair<Integer, unsigned>, Cardinality>;
PrimaryClasses primary_classes(const BlockGroup& g);

struct LeadingInvariant {
  unsigned exponent = 0;
  Cardinality multiplicity;
};
std::map<Integer, LeadingInvariant> ulm_kaplansky_leading(const BlockGroup& g);

std::string to_string(const Element& x);

// Flat coordinate view of finitely many blocks: slot 0 is the e part, slots
// 1..a_j the H basis. Prufer slots need a depth K and are read as Z(p^K).
class Coordinates {
 public:
  Coordinates(const BlockGroup& g, std::vector<std::size_t> blocks,
              std::map<std::size_t, unsigned> prufer_depth = {});

  std::size_t size() const { return moduli_.size(); }
  const std::vector<Integer>& moduli() const { return moduli_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& slots() const { return slots_; }
  std::optional<std::size_t> index_of(std::size_t block, std::size_t slot) const;
  std::string label(std::size_t i) const;

  std::vector<Integer> flatten(const Element& x) const;
  // Nonzero entries only, by increasing coordinate; not reduced.
  std::vector<std::pair<std::size_t, Integer>> flatten_sparse(const Element& x) const;
  Element unflatten(const std::vector<Integer>& v) const;

 private:
  BlockGroup g_;
  std::vector<Integer> moduli_;
  std::vector<std::pair<std::size_t, std::size_t>> slots_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index_;
  std::map<std::size_t, unsigned> prufer_depth_;
};

std::vector<std::size_t> union_support(const std::vector<Element>& xs);

}  // namespace minap
