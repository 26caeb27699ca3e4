#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minap/core_groups.hpp"

namespace minap {

enum class RecipeKind { Explicit, Triangular, Interleave, IntegerRule };

const char* recipe_kind_name(RecipeKind kind);

// d_{n+period} = d_n for all n >= preperiod.
struct Periodicity {
  std::size_t preperiod = 0;
  std::size_t period = 1;
};

struct TailCertificate {
  bool sound = false;
  std::string kind;    // SUPPORT-ESCAPE, ZERO-TAIL, PERIODIC, ORDER-GROWTH or NONE
  std::string detail;
};

class SequenceRecipe {
 public:
  virtual ~SequenceRecipe() = default;

  virtual const BlockGroup& group() const = 0;
  virtual Element term(std::size_t n) const = 0;
  virtual RecipeKind kind() const = 0;
  virtual std::string describe() const = 0;

  // Index from which every term is zero, if known.
  virtual std::optional<std::size_t> zero_beyond() const { return std::nullopt; }
  virtual std::optional<Periodicity> periodicity() const { return std::nullopt; }
  // For integer sequences in Z: true when every r > n with d_r != 0 satisfies
  // |d_r| - k * max_{r' < r} |d_r'| > bound.
  virtual bool growth_dominates(std::size_t n, unsigned k, const Integer& bound) const {
    (void)n;
    (void)k;
    (void)bound;
    return false;
  }
  // Recipe-specific argument that terms past n cannot enter a representation
  // of g in A(k, m). The generic arguments are tried by TSeq::tail_certificate.
  virtual TailCertificate structural_tail_certificate(const Element& g, unsigned k, std::size_t m,
                                                      std::size_t n) const {
    (void)g;
    (void)k;
    (void)m;
    (void)n;
    return {};
  }
};

class TSeq {
 public:
  explicit TSeq(std::shared_ptr<const SequenceRecipe> recipe);

  const BlockGroup& group() const { return recipe_->group(); }
  Element term(std::size_t n) const { return recipe_->term(n); }
  RecipeKind kind() const { return recipe_->kind(); }
  std::string describe() const { return recipe_->describe(); }
  const SequenceRecipe& recipe() const { return *recipe_; }

  // Certifies that the prefix d_0..d_n decides membership of g in A(k, m).
  TailCertificate tail_certificate(const Element& g, unsigned k, std::size_t m, std::size_t n) const;

 private:
  std::shared_ptr<const SequenceRecipe> recipe_;
};

// Explicit finite list. Zero: terms past the list vanish. Periodic: the part
// of the list from period_start on repeats forever.
enum class ExplicitTail { Zero, Periodic };
TSeq explicit_sequence(const BlockGroup& g, std::vector<Element> terms, ExplicitTail tail = ExplicitTail::Zero,
                       std::size_t period_start = 0);
TSeq zero_sequence(const BlockGroup& g);
// term(n q + j) = seqs[j].term(n).
TSeq interleave(std::vector<TSeq> seqs);

// Budget for A(k,m) enumeration: 10^7 unless MINAP_BUDGET is set.
std::size_t default_budget();
// Number of signed sums enumerated before deduplication, for len indices.
Integer akm_raw_count(std::size_t len, unsigned k);

// A(k, m) restricted to indices m..n, sorted by canonical key. The parallel
// version returns the same set as the serial reference.
std::vector<Element> enumerate_Akm(const TSeq& seq, unsigned k, std::size_t m, std::size_t n,
                                   std::size_t budget = default_budget());
std::vector<Element> enumerate_Akm_serial(const TSeq& seq, unsigned k, std::size_t m, std::size_t n,
                                          std::size_t budget = default_budget());

struct Witness {
  std::vector<std::pair<std::size_t, Integer>> terms;  // (index, coefficient)
  std::string to_string() const;
};

struct PrefixMembership {
  bool member = false;
  bool budget_hit = false;
  Witness witness;
  std::size_t nodes = 0;
};

struct Verdict {
  enum class Kind { Excluded, MemberUpTo, Inconclusive };

  Kind kind = Kind::Inconclusive;
  std::size_t m = 0;  // witness m for Excluded, m_max for MemberUpTo
  std::size_t n_prefix = 0;
  TailCertificate certificate;
  std::vector<std::pair<std::size_t, Witness>> witnesses;  // (m, representation)
  std::string report;
};

const char* verdict_kind_name(Verdict::Kind kind);

// Flattened prefix d_0..d_n plus a bounded search for representations
// g = sum l_i d_{r_i} with distinct r_i >= m and sum |l_i| <= k+1.
// Immutable after construction; safe to query from several threads.
class CriterionChecker {
 public:
  CriterionChecker(TSeq seq, std::size_t n_prefix, std::size_t node_budget = default_budget());
  ~CriterionChecker();
  CriterionChecker(const CriterionChecker&) = delete;
  CriterionChecker& operator=(const CriterionChecker&) = delete;

  const TSeq& sequence() const { return seq_; }
  std::size_t prefix() const { return n_; }

  PrefixMembership prefix_member(const Element& g, unsigned k, std::size_t m) const;
  Verdict check(const Element& g, unsigned k, std::size_t m_max) const;

  struct Index;  // flattened prefix, defined in the implementation

 private:
  TSeq seq_;
  std::size_t n_;
  std::size_t node_budget_;
  std::unique_ptr<Index> index_;
};

Verdict check_criterion(const TSeq& seq, const Element& g, unsigned k, std::size_t m_max, std::size_t n);

}  // namespace minap
