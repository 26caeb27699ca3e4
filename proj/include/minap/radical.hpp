#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minap/constructions.hpp"
#include "minap/duality.hpp"
#include "minap/zlattice.hpp"

namespace minap {

enum class SdKind { In, NotIn, Unknown };
const char* sd_kind_name(SdKind kind);

struct SdVerdict {
  SdKind kind = SdKind::Unknown;
  std::string certificate;
  std::optional<std::size_t> basis_index;  // NOT_IN: k with pair(b_k, chi) != 0
  std::vector<std::size_t> recurrence;     // NOT_IN: n with d_{2n+1} = b_k + (e part beyond chi)
  // Prefix evaluation of pair(d_n, chi) for n <= 2 window + 1.
  std::size_t prefix_len = 0;
  std::optional<std::size_t> last_nonzero;
};

// Whether pair(d_n, chi) -> 0 along the triangular sequence, for a character
// of finite support. window bounds the recurrence search (odd terms d_{2n+1}
// with n <= window).
SdVerdict sd_member(const TriangularParams& p, const Character& chi, std::size_t window);

enum class RadicalTag { EqualsH, Minap, Other };
const char* radical_tag_name(RadicalTag tag);

struct RadicalResult {
  std::map<std::size_t, std::vector<Element>> blocks;  // radical generators per block j <= B
  RadicalTag tag = RadicalTag::Other;
  std::string description;
  std::size_t characters_checked = 0;
  bool enumerated = true;  // block duals enumerated, not taken from the annihilator of H_j
};

// Radical of the topology given by the triangular sequence, truncated to
// blocks 0..bound: per block, the characters in s_d and their joint
// annihilator. Certified per block on the finite-support part of the dual.
RadicalResult radical_of(const TriangularParams& p, std::size_t bound, std::size_t window);

// Brute force on an explicit finite group Z(m_1) + ... + Z(m_r).
struct OracleInput {
  ZVec moduli;
  std::vector<ZVec> prefix;
  // Terms from this index on form the tail: every value there recurs. When
  // absent the prefix must show at least three periods of a periodic tail.
  std::optional<std::size_t> tail_start;
};

struct OracleResult {
  std::vector<ZVec> radical;      // all elements, sorted
  std::vector<ZVec> sd_chars;     // characters (coordinates c_i, value c_i / m_i) in s_d, sorted
  std::size_t tail_start = 0;
  std::optional<std::size_t> period;
};

OracleResult oracle_radical(const OracleInput& in);
OracleResult oracle_radical_serial(const OracleInput& in);

}  // namespace minap
