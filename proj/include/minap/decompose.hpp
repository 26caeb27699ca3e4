#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minap/core_groups.hpp"
#include "minap/zlattice.hpp"

namespace minap {

inline constexpr std::size_t kDefaultWindow = 64;

// Finite ambient sum of Z(m_i) with a printable name per coordinate.
struct Ambient {
  ZVec moduli;
  std::vector<std::string> labels;

  static Ambient plain(const ZVec& moduli);  // labels x0, x1, ...
  static Ambient of(const Coordinates& c);
  std::string format(const ZVec& x) const;
};

struct Part {
  std::string name;
  std::vector<ZVec> gens;  // generators inside the ambient window
  std::string rule;        // tail description when the part is infinite, else empty
  // Cyclic primary summands Z(p^r) with multiplicities; OMEGA marks condition (Lambda) classes.
  PrimaryClasses classes;
};

struct Decomposition {
  enum class Relation { DirectSum, Sum };

  Ambient ambient;
  std::vector<Part> parts;
  Relation relation = Relation::DirectSum;
  std::vector<std::string> certificate;
  std::optional<std::size_t> window;  // set when an infinite claim was checked only on a window
  bool verified = false;              // every part meets the sum of the others trivially

  std::string label() const;  // EXACT or CERTIFIED_UP_TO(W)
  const Part* find(const std::string& name) const;
};

// Checks that each part meets the sum of the other parts trivially and
// records the outcome in the certificate.
bool certify_direct_sum(Decomposition& d);

// Finite classes form G_0, OMEGA classes form G_1. Generators are the
// primary cyclic generators of the blocks 0..max(window, head) - 1.
Decomposition split_lambda(const BlockGroup& g, std::size_t window = kDefaultWindow);

struct BasisChange {
  std::vector<ZVec> basis;
  std::vector<std::string> certificate;
};

// f_i^1 = f_i - f_{j(i)} for i in I', f_i^1 = f_i otherwise.
BasisChange basis_change(const ZVec& moduli, const std::vector<ZVec>& basis, const std::set<std::size_t>& j_set,
                         const std::map<std::size_t, std::size_t>& jmap);

// A generator of H inside Z(p^inf) + V: its projection to Z(p^inf), an
// element of Q/Z with p-power denominator, and its V part.
struct PruferGen {
  Rational pi1;
  ZVec v;
};

struct PruferSplitInput {
  Integer p;
  ZVec v_moduli;
  std::vector<PruferGen> gens;      // a basis of the finitely presented part of H
  std::vector<Integer> omega_orders;  // cyclic orders repeated omega times in the complement of Z(p^inf)
  std::string pi1_label = "z";
  std::vector<std::string> v_labels;  // defaults to v0, v1, ...
};

struct PruferSplit {
  Decomposition decomposition;  // parts "prufer+H0" and "H1"; the ambient is Z(p^K) + V
  std::vector<std::vector<std::size_t>> classes;  // generator indices per equivalence class
  std::vector<std::size_t> representatives;
  std::vector<std::size_t> absorbed;  // indices beta whose differences v_beta were moved into H''
  std::vector<ZVec> h0;               // generators of H_0 in the ambient
  std::vector<ZVec> h1;               // generators of the window part of H_1
};

PruferSplit prufer_split(const PruferSplitInput& in, std::size_t window = kDefaultWindow);

// G = <A> + H inside a finite p-primary ambient: A = g_0, g_1, ... is a
// truncation of an independent sequence, h_0, h_1, ... a basis of H.
struct PeelInput {
  Integer p;
  ZVec moduli;
  std::vector<ZVec> a;
  std::vector<ZVec> h;
  std::vector<std::string> labels;  // defaults to x0, x1, ...
};

struct PeelResult {
  enum class Hypothesis { Increasing, Constant };  // (a) and (b)

  std::string case_tag;  // "1", "2.1", "2.2(a)", "2.2(b)"
  Hypothesis hyp = Hypothesis::Constant;
  ZVec e0;
  std::vector<ZVec> h0;
  PeelInput remainder;
  std::size_t window = 0;
  std::optional<std::size_t> n0;      // Case 1 shift
  std::optional<std::size_t> kappa1;  // Case 2: H_0 = h_0 + ... + h_kappa1
  std::optional<std::size_t> k;       // Case 2.1 / 2.2 tail index
  std::optional<unsigned> m;          // Case 2.2 maximal order exponent
  std::optional<ZVec> h_choice;       // Case 2.2 element h
  std::vector<ZVec> y_prime;          // Case 2.2 y'_k
  std::vector<unsigned> t;            // Case 2.2 t_k
  std::vector<ZVec> g_prime;          // Case 2.2 g'_k
  Decomposition decomposition;        // summand and remainder
};

// One step of the summand construction. Every quantifier over k is
// checked on indices below the window.
PeelResult peel_summand(const PeelInput& in, std::size_t window = kDefaultWindow);

struct PeelChain {
  std::vector<PeelResult> steps;
  PeelInput remainder;
  std::string stop_reason;
};

// Repeats peel_summand until H is used up, at most max_steps times, or the
// window no longer supports a step.
PeelChain peel_all(const PeelInput& in, std::size_t window = kDefaultWindow, std::size_t max_steps = 64);

// p^l <A> = <A> cap p^l G for 1 <= l <= log_p exp G. Entry l - 1 holds the result for l.
struct PurityReport {
  std::vector<bool> levels;
  bool pure = true;
};
PurityReport purity_check(const Integer& p, const ZVec& moduli, const std::vector<ZVec>& a,
                          const std::vector<ZVec>& h);

// Subgroup H of a presentation: explicit generators, or the H part sum H_j
// of the presentation itself.
struct SubgroupSpec {
  bool h_part = false;
  std::vector<Element> gens;
};

struct CaseDispatch {
  std::string case_tag;  // "infinite-order", "prufer", "unbounded-torsion/free-prime",
                         // "unbounded-torsion/peel", "bounded"
  Decomposition g0;
  std::vector<std::pair<ZVec, std::vector<ZVec>>> blocks;  // (e_i, generators of H_i) in the window
  std::vector<std::string> certificate;
};

CaseDispatch dispatch_case(const BlockGroup& g, const SubgroupSpec& h, std::size_t window = kDefaultWindow);

// Z(b)^(omega) embeds in G: for each p^c exactly dividing b, infinitely
// many cyclic p-summands of order >= p^c.
bool contains_Z_expH_omega(const BlockGroup& g, const Integer& b);

struct AdmissibleReport {
  bool admissible = false;
  // When not admissible: the prime with finite leading invariant, the
  // multiplier m = exp G / p and the finite image mG.
  std::optional<Integer> p;
  std::optional<Integer> m;
  std::optional<Integer> image_order;
  std::string detail;
};

AdmissibleReport minap_admissible(const BlockGroup& g);

// Order of m G when finite, nullopt when infinite.
std::optional<Integer> multiple_image_order(const BlockGroup& g, const Integer& m);

}  // namespace minap
