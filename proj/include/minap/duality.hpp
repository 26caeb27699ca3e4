#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "minap/core_groups.hpp"
#include "minap/zlattice.hpp"

namespace minap {

// Exact rational in [0, 1), lowest terms.
class QmodZ {
 public:
  QmodZ() = default;
  explicit QmodZ(const Rational& v) : v_(frac(v)) {}
  QmodZ(const Integer& num, const Integer& den);

  const Rational& value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  Integer denominator() const { return v_.get_den(); }

  QmodZ operator+(const QmodZ& o) const { return QmodZ(v_ + o.v_); }
  QmodZ operator-(const QmodZ& o) const { return QmodZ(v_ - o.v_); }
  QmodZ operator-() const { return QmodZ(-v_); }
  QmodZ operator*(const Integer& n) const { return QmodZ(v_ * Rational(n)); }
  bool operator==(const QmodZ& o) const { return v_ == o.v_; }
  bool operator!=(const QmodZ& o) const { return v_ != o.v_; }
  bool operator<(const QmodZ& o) const { return v_ < o.v_; }
  std::string to_string() const { return v_.get_str(); }

 private:
  Rational v_;
};

struct CharCoord {
  QmodZ eps;                // value on e_j
  std::vector<QmodZ> etas;  // values on h^j_1..h^j_a
  bool operator==(const CharCoord& o) const { return eps == o.eps && etas == o.etas; }
};

class Character {
 public:
  Character() = default;
  const std::map<std::size_t, CharCoord>& coords() const { return coords_; }
  bool is_trivial() const { return coords_.empty(); }
  std::vector<std::size_t> support() const;
  std::string key() const;
  bool operator==(const Character& o) const { return coords_ == o.coords_; }

 private:
  friend Character make_character(const BlockGroup&, std::map<std::size_t, CharCoord>);
  std::map<std::size_t, CharCoord> coords_;
};

// Validates denominators against the block orders and drops trivial
// coordinates. Characters on Prufer coordinates must vanish there: only the
// rational finite-support fragment of the dual is represented.
Character make_character(const BlockGroup& g, std::map<std::size_t, CharCoord> coords);

QmodZ pair(const BlockGroup& g, const Character& chi, const Element& x);
Character char_add(const BlockGroup& g, const Character& a, const Character& b);
Character char_neg(const BlockGroup& g, const Character& a);
// lcm of the coordinate denominators.
Integer character_order(const Character& chi);

// The dual of a finite block is identified with the block itself:
// coordinates (a, b_1, ...) give eps = a/u_j and etas[i] = b_i/h_i.
ZVec block_moduli(const BlockGroup& g, std::size_t j);
Character block_character(const BlockGroup& g, std::size_t j, const ZVec& coords);
ZVec block_character_coords(const BlockGroup& g, std::size_t j, const Character& chi);
// Element of block j from its block coordinates, and back.
Element block_element(const BlockGroup& g, std::size_t j, const ZVec& coords);
ZVec block_element_coords(const BlockGroup& g, std::size_t j, const Element& x);

// Generators of H_j inside block j (the block's own H part).
std::vector<Element> h_part_generators(const BlockGroup& g, std::size_t j);

// Generators of the annihilator of <gens> inside the dual of block j.
std::vector<Character> annihilator_basis(const BlockGroup& g, std::size_t j, const std::vector<Element>& gens);
std::map<std::size_t, std::vector<Character>> annihilator_basis(
    const BlockGroup& g, const std::map<std::size_t, std::vector<Element>>& h_spec);

// Generators of {x in block j : pair(chi, x) = 0 for all chi in chars}.
std::vector<Element> annihilator_in_block(const BlockGroup& g, std::size_t j, const std::vector<Character>& chars);
// Blockwise joint annihilator; a block absent from the family is unconstrained
// and is not listed in the result.
std::map<std::size_t, std::vector<Element>> annihilator_in_G(
    const BlockGroup& g, const std::map<std::size_t, std::vector<Character>>& chars);

}  // namespace minap
