#include "minap/tseq.hpp"

#include "minap/zlattice.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

namespace minap {

const char* recipe_kind_name(RecipeKind kind) {
  switch (kind) {
    case RecipeKind::Explicit: return "EXPLICIT";
    case RecipeKind::Triangular: return "TRIANGULAR";
    case RecipeKind::Interleave: return "INTERLEAVE";
    case RecipeKind::IntegerRule: return "INTEGER_RULE";
  }
  return "?";
}

const char* verdict_kind_name(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Excluded: return "EXCLUDED";
    case Verdict::Kind::MemberUpTo: return "MEMBER_UP_TO";
    case Verdict::Kind::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

TSeq::TSeq(std::shared_ptr<const SequenceRecipe> recipe) : recipe_(std::move(recipe)) {
  if (!recipe_) throw Error(ErrorCode::InvalidParams, "null sequence recipe");
}

namespace {

bool is_integers(const BlockGroup& g) {
  if (!g.finitely_generated() || g.head().size() != 1) return false;
  const Block& b = g.head()[0];
  return b.e_order.is_infinite() && b.h_trivial();
}

Integer abs_value(const Element& x) {
  auto it = x.terms().find(0);
  if (it == x.terms().end()) return 0;
  return abs(it->second.e.get_num());
}

}  // namespace

TailCertificate TSeq::tail_certificate(const Element& g, unsigned k, std::size_t m, std::size_t n) const {
  TailCertificate c = recipe_->structural_tail_certificate(g, k, m, n);
  if (c.sound) return c;
  if (auto z = recipe_->zero_beyond(); z && *z <= n + 1) {
    return {true, "ZERO-TAIL", "every term with index >= " + std::to_string(*z) + " is zero"};
  }
  if (auto p = recipe_->periodicity()) {
    const std::size_t start = std::max(m, p->preperiod);
    const std::size_t need = start + (k + 1) * p->period;
    if (n + 1 >= need) {
      return {true, "PERIODIC",
              "period " + std::to_string(p->period) + " from index " + std::to_string(p->preperiod) +
                  "; the window " + std::to_string(start) + ".." + std::to_string(n) + " holds " +
                  std::to_string(k + 1) + " indices of every residue class"};
    }
  }
  if (is_integers(group()) && recipe_->growth_dominates(n, k, abs_value(g))) {
    return {true, "ORDER-GROWTH",
            "for r > " + std::to_string(n) + ": |d_r| - " + std::to_string(k) + " * max_{r'<r} |d_r'| > |g| = " +
                abs_value(g).get_str()};
  }
  std::string why = c.detail.empty() ? "no tail argument applies at prefix " + std::to_string(n) : c.detail;
  return {false, "NONE", why};
}

// ---------------------------------------------------------------------------
// Recipes

namespace {

class ExplicitRecipe final : public SequenceRecipe {
 public:
  ExplicitRecipe(BlockGroup g, std::vector<Element> terms, ExplicitTail tail, std::size_t period_start)
      : g_(std::move(g)), terms_(std::move(terms)), tail_(tail), start_(period_start) {
    for (auto& t : terms_) t = canonicalize(g_, t);
    if (tail_ == ExplicitTail::Periodic && start_ >= terms_.size()) {
      throw Error(ErrorCode::InvalidParams, "periodic explicit sequence needs a nonempty repeating part");
    }
  }

  const BlockGroup& group() const override { return g_; }
  RecipeKind kind() const override { return RecipeKind::Explicit; }

  Element term(std::size_t n) const override {
    if (n < terms_.size()) return terms_[n];
    if (tail_ == ExplicitTail::Zero) return Element();
    const std::size_t p = terms_.size() - start_;
    return terms_[start_ + (n - start_) % p];
  }

  std::string describe() const override {
    std::string s = "explicit list of " + std::to_string(terms_.size()) + " terms, ";
    if (tail_ == ExplicitTail::Zero) return s + "zero tail";
    return s + "periodic from index " + std::to_string(start_);
  }

  std::optional<std::size_t> zero_beyond() const override {
    if (tail_ == ExplicitTail::Zero) return terms_.size();
    for (std::size_t i = start_; i < terms_.size(); ++i) {
      if (!terms_[i].is_zero()) return std::nullopt;
    }
    return start_;
  }

  std::optional<Periodicity> periodicity() const override {
    if (tail_ == ExplicitTail::Zero) return Periodicity{terms_.size(), 1};
    return Periodicity{start_, terms_.size() - start_};
  }

  bool growth_dominates(std::size_t n, unsigned, const Integer&) const override {
    if (tail_ != ExplicitTail::Zero) return false;
    return n + 1 >= terms_.size();
  }

 private:
  BlockGroup g_;
  std::vector<Element> terms_;
  ExplicitTail tail_;
  std::size_t start_;
};

class InterleaveRecipe final : public SequenceRecipe {
 public:
  explicit InterleaveRecipe(std::vector<TSeq> seqs) : seqs_(std::move(seqs)) {
    if (seqs_.empty()) throw Error(ErrorCode::InvalidParams, "interleave needs q >= 1 sequences");
    for (const auto& s : seqs_) {
      if (!(s.group() == seqs_[0].group())) {
        throw Error(ErrorCode::InvalidParams, "interleaved sequences must live in the same group");
      }
    }
  }

  const BlockGroup& group() const override { return seqs_[0].group(); }
  RecipeKind kind() const override { return RecipeKind::Interleave; }

  Element term(std::size_t n) const override {
    const std::size_t q = seqs_.size();
    return seqs_[n % q].term(n / q);
  }

  std::string describe() const override {
    std::string s = "interleave of " + std::to_string(seqs_.size()) + " sequences [";
    for (std::size_t j = 0; j < seqs_.size(); ++j) s += (j ? "; " : "") + seqs_[j].describe();
    return s + "]";
  }

  std::optional<std::size_t> zero_beyond() const override {
    std::size_t z = 0;
    for (const auto& s : seqs_) {
      auto zj = s.recipe().zero_beyond();
      if (!zj) return std::nullopt;
      z = std::max(z, *zj);
    }
    return z * seqs_.size();
  }

  std::optional<Periodicity> periodicity() const override {
    std::size_t pre = 0;
    std::size_t per = 1;
    for (const auto& s : seqs_) {
      auto p = s.recipe().periodicity();
      if (!p) return std::nullopt;
      pre = std::max(pre, p->preperiod);
      per = std::lcm(per, p->period);
    }
    return Periodicity{pre * seqs_.size(), per * seqs_.size()};
  }

  // Only one component may be nonzero; its growth carries over with the
  // index translation r = n q + j.
  bool growth_dominates(std::size_t n, unsigned k, const Integer& bound) const override {
    const std::size_t q = seqs_.size();
    std::optional<std::size_t> live;
    for (std::size_t j = 0; j < q; ++j) {
      auto z = seqs_[j].recipe().zero_beyond();
      if (z && *z == 0) continue;
      if (live) return false;
      live = j;
    }
    if (!live) return true;
    if (n < *live) return false;
    return seqs_[*live].recipe().growth_dominates((n - *live) / q, k, bound);
  }

 private:
  std::vector<TSeq> seqs_;
};

}  // namespace

TSeq explicit_sequence(const BlockGroup& g, std::vector<Element> terms, ExplicitTail tail, std::size_t period_start) {
  return TSeq(std::make_shared<ExplicitRecipe>(g, std::move(terms), tail, period_start));
}

TSeq zero_sequence(const BlockGroup& g) { return explicit_sequence(g, {}, ExplicitTail::Zero); }

TSeq interleave(std::vector<TSeq> seqs) { return TSeq(std::make_shared<InterleaveRecipe>(std::move(seqs))); }

// ---------------------------------------------------------------------------
// A(k, m) enumeration

std::size_t default_budget() {
  if (const char* env = std::getenv("MINAP_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10000000;
}

namespace {

Integer binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, r);
  return out;
}

std::map<std::size_t, unsigned> prufer_depths(const BlockGroup& g, const std::vector<Element>& xs) {
  std::map<std::size_t, unsigned> depth;
  for (const auto& x : xs) {
    for (const auto& [j, t] : x.terms()) {
      Block b = g.block_at(j);
      if (!b.e_order.is_prufer()) continue;
      const unsigned d = *log_exact(t.e.get_den(), b.e_order.value);
      depth[j] = std::max(depth[j], std::max(d, 1u));
    }
  }
  return depth;
}

struct FlatPrefix {
  std::vector<std::vector<Integer>> vecs;  // reduced flat terms m..n
  ZVec moduli;
};

using Key = std::vector<Integer>;

void akm_walk(const FlatPrefix& fp, std::size_t pos, unsigned weight_left, Key& acc, std::set<Key>& out) {
  out.insert(acc);
  if (weight_left == 0) return;
  const std::size_t dim = fp.moduli.size();
  for (std::size_t i = pos; i < fp.vecs.size(); ++i) {
    for (unsigned l = 1; l <= weight_left; ++l) {
      for (int sign : {1, -1}) {
        Key next(dim);
        for (std::size_t c = 0; c < dim; ++c) next[c] = mod_floor(acc[c] + sign * Integer(l) * fp.vecs[i][c], fp.moduli[c]);
        akm_walk(fp, i + 1, weight_left - l, next, out);
      }
    }
  }
}

struct AkmSetup {
  std::unique_ptr<Coordinates> coords;
  FlatPrefix fp;
};

AkmSetup akm_setup(const TSeq& seq, unsigned k, std::size_t m, std::size_t n, std::size_t budget) {
  AkmSetup s;
  const std::size_t len = m > n ? 0 : n - m + 1;
  const Integer raw = akm_raw_count(len, k);
  if (raw > Integer(static_cast<unsigned long>(budget))) {
    throw Error(ErrorCode::BudgetExceeded, "A(k,m) enumeration needs " + raw.get_str() + " sums, budget is " +
                                               std::to_string(budget));
  }
  std::vector<Element> terms;
  for (std::size_t r = m; r <= n && len > 0; ++r) terms.push_back(seq.term(r));
  const BlockGroup& g = seq.group();
  s.coords = std::make_unique<Coordinates>(g, union_support(terms), prufer_depths(g, terms));
  s.fp.moduli = s.coords->moduli();
  for (const auto& t : terms) s.fp.vecs.push_back(reduce(s.coords->flatten(t), s.fp.moduli));
  return s;
}

std::vector<Element> akm_finish(const Coordinates& coords, const std::set<Key>& keys) {
  std::vector<Element> out;
  out.reserve(keys.size());
  for (const auto& key : keys) out.push_back(coords.unflatten(key));
  std::sort(out.begin(), out.end(), [](const Element& a, const Element& b) { return a.key() < b.key(); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Integer akm_raw_count(std::size_t len, unsigned k) {
  Integer total = 0;
  for (std::size_t s = 0; s <= std::min<std::size_t>(len, k + 1); ++s) {
    Integer two_s;
    mpz_ui_pow_ui(two_s.get_mpz_t(), 2, s);
    total += binomial(len, s) * two_s * binomial(k + 1, s);
  }
  return total;
}

std::vector<Element> enumerate_Akm_serial(const TSeq& seq, unsigned k, std::size_t m, std::size_t n,
                                          std::size_t budget) {
  AkmSetup s = akm_setup(seq, k, m, n, budget);
  std::set<Key> keys;
  Key zero(s.fp.moduli.size(), 0);
  akm_walk(s.fp, 0, k + 1, zero, keys);
  return akm_finish(*s.coords, keys);
}

std::vector<Element> enumerate_Akm(const TSeq& seq, unsigned k, std::size_t m, std::size_t n, std::size_t budget) {
  AkmSetup s = akm_setup(seq, k, m, n, budget);
  const std::size_t dim = s.fp.moduli.size();
  const std::size_t len = s.fp.vecs.size();
  std::set<Key> keys;
  keys.insert(Key(dim, 0));
  // Parallel over the smallest index used; each task owns its partial set.
  std::vector<std::set<Key>> partial(len);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < len; ++i) {
    for (unsigned l = 1; l <= k + 1; ++l) {
      for (int sign : {1, -1}) {
        Key start(dim);
        for (std::size_t c = 0; c < dim; ++c) start[c] = mod_floor(sign * Integer(l) * s.fp.vecs[i][c], s.fp.moduli[c]);
        akm_walk(s.fp, i + 1, k + 1 - l, start, partial[i]);
      }
    }
  }
  for (auto& p : partial) keys.merge(p);
  return akm_finish(*s.coords, keys);
}

std::string Witness::to_string() const {
  if (terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) s += " + ";
    s += terms[i].second.get_str() + "*d[" + std::to_string(terms[i].first) + "]";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Prefix membership search

namespace {

using Coord = std::uint32_t;

template <class S>
struct Arith;

template <>
struct Arith<std::int64_t> {
  static std::int64_t reduce(std::int64_t a, std::int64_t m) {
    if (m == 0) return a;
    a %= m;
    return a < 0 ? a + m : a;
  }
  static std::int64_t from(const Integer& x) { return to_i64_checked(x); }
  static Integer to_integer(std::int64_t x) { return Integer(static_cast<long>(x)); }
};

template <>
struct Arith<Integer> {
  static Integer reduce(const Integer& a, const Integer& m) { return mod_floor(a, m); }
  static Integer from(const Integer& x) { return x; }
  static Integer to_integer(const Integer& x) { return x; }
};

template <class S>
using SparseVec = std::vector<std::pair<Coord, S>>;

}  // namespace

struct CriterionChecker::Index {
  std::unique_ptr<Coordinates> coords;
  std::map<std::size_t, unsigned> depth;
  ZVec moduli;
  std::vector<std::int64_t> moduli64;
  bool fits64 = true;
  Integer max_abs_free = 0;  // largest |value| on coordinates without modulus

  std::vector<SparseVec<Integer>> terms;
  std::vector<SparseVec<std::int64_t>> terms64;
  // Coordinate orders per term entry; 0 stands for infinite.
  std::vector<std::vector<Integer>> entry_orders;
  // Per term: distinct entry orders with multiplicities.
  std::vector<std::vector<std::pair<Integer, std::size_t>>> order_hist;
  std::vector<std::vector<std::uint32_t>> cover;  // coordinate -> term indices
  std::vector<std::size_t> overlap;               // max shared coordinates with another term
};

CriterionChecker::~CriterionChecker() = default;

CriterionChecker::CriterionChecker(TSeq seq, std::size_t n_prefix, std::size_t node_budget)
    : seq_(std::move(seq)), n_(n_prefix), node_budget_(node_budget), index_(std::make_unique<Index>()) {
  Index& ix = *index_;
  const BlockGroup& g = seq_.group();
  std::vector<Element> elems;
  elems.reserve(n_ + 1);
  for (std::size_t r = 0; r <= n_; ++r) elems.push_back(seq_.term(r));
  ix.depth = prufer_depths(g, elems);
  ix.coords = std::make_unique<Coordinates>(g, union_support(elems), ix.depth);
  ix.moduli = ix.coords->moduli();
  const Integer limit = Integer(1) << 30;
  for (const auto& m : ix.moduli) {
    if (m > limit) ix.fits64 = false;
    ix.moduli64.push_back(ix.fits64 ? to_i64_checked(m) : 0);
  }
  ix.cover.assign(ix.moduli.size(), {});
  ix.terms.resize(elems.size());
  ix.terms64.resize(elems.size());
  ix.entry_orders.resize(elems.size());
  ix.order_hist.resize(elems.size());
  for (std::size_t r = 0; r < elems.size(); ++r) {
    std::map<Integer, std::size_t> hist;
    for (auto& [c, raw] : ix.coords->flatten_sparse(elems[r])) {
      const Integer val = mod_floor(raw, ix.moduli[c]);
      if (val == 0) continue;
      ix.terms[r].emplace_back(static_cast<Coord>(c), val);
      ix.cover[c].push_back(static_cast<std::uint32_t>(r));
      Integer o = ix.moduli[c] == 0 ? Integer(0) : ix.moduli[c] / gcd(val, ix.moduli[c]);
      if (ix.moduli[c] == 0 && abs(val) > ix.max_abs_free) ix.max_abs_free = abs(val);
      ix.entry_orders[r].push_back(o);
      ++hist[o];
    }
    ix.order_hist[r].assign(hist.begin(), hist.end());
  }
  if (ix.max_abs_free > (Integer(1) << 40)) ix.fits64 = false;
  if (ix.fits64) {
    for (std::size_t r = 0; r < elems.size(); ++r) {
      for (const auto& [c, v] : ix.terms[r]) ix.terms64[r].emplace_back(c, to_i64_checked(v));
    }
  }
  ix.overlap.assign(elems.size(), 0);
  std::vector<std::size_t> count(elems.size(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < elems.size(); ++r) {
    touched.clear();
    for (const auto& [c, v] : ix.terms[r]) {
      for (std::uint32_t other : ix.cover[c]) {
        if (other == r) continue;
        if (count[other]++ == 0) touched.push_back(other);
      }
    }
    std::size_t best = 0;
    for (std::uint32_t other : touched) {
      best = std::max(best, count[other]);
      count[other] = 0;
    }
    ix.overlap[r] = best;
  }
}

namespace {

// l kills an entry of order o iff o | l; order 0 (infinite) never divides.
bool killed(const Integer& order, unsigned l) { return order != 0 && (Integer(l) % order) == 0; }

template <class S>
class Search {
 public:
  struct Cand {
    std::uint32_t r;
    unsigned weight;
    int coeff;
    SparseVec<S> vec;
  };

  Search(const std::vector<S>& moduli, std::vector<Cand> cands, std::size_t node_budget)
      : moduli_(moduli), cands_(std::move(cands)), budget_(node_budget) {
    for (std::size_t i = 0; i < cands_.size(); ++i) {
      for (const auto& [c, v] : cands_[i].vec) {
        auto& info = cover_[c];
        info.ids.push_back(static_cast<std::uint32_t>(i));
        info.width = std::max(info.width, cands_[i].vec.size());
      }
    }
  }

  bool run(const SparseVec<S>& target, unsigned weight) {
    chosen_.clear();
    return dfs(target, weight);
  }

  bool budget_hit() const { return budget_hit_; }
  std::size_t nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& chosen() const { return chosen_; }
  const Cand& cand(std::uint32_t i) const { return cands_[i]; }

 private:
  struct CoverInfo {
    std::vector<std::uint32_t> ids;
    std::size_t width = 0;
  };

  bool dfs(const SparseVec<S>& res, unsigned weight) {
    if (res.empty()) return true;
    if (weight == 0) return false;
    if (++nodes_ > budget_) {
      budget_hit_ = true;
      return false;
    }
    // Every residual coordinate needs a covering term; each term fixes at
    // most `width` of them.
    double need = 0;
    const CoverInfo* best = nullptr;
    for (const auto& [c, v] : res) {
      auto it = cover_.find(c);
      if (it == cover_.end()) return false;
      need += 1.0 / static_cast<double>(it->second.width);
      if (!best || it->second.ids.size() < best->ids.size()) best = &it->second;
    }
    if (std::ceil(need - 1e-9) > weight) return false;
    for (std::uint32_t id : best->ids) {
      const Cand& cd = cands_[id];
      if (cd.weight > weight || used_.count(cd.r)) continue;
      SparseVec<S> next = subtract(res, cd.vec);
      used_.insert(cd.r);
      chosen_.push_back(id);
      const bool ok = dfs(next, weight - cd.weight);
      if (ok) return true;
      chosen_.pop_back();
      used_.erase(cd.r);
      if (budget_hit_) return false;
    }
    return false;
  }

  SparseVec<S> subtract(const SparseVec<S>& a, const SparseVec<S>& b) const {
    SparseVec<S> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        S v = Arith<S>::reduce(S(-b[j].second), moduli_[b[j].first]);
        out.emplace_back(b[j].first, v);
        ++j;
      } else {
        S v = Arith<S>::reduce(S(a[i].second - b[j].second), moduli_[a[i].first]);
        if (v != 0) out.emplace_back(a[i].first, v);
        ++i;
        ++j;
      }
    }
    return out;
  }

  const std::vector<S>& moduli_;
  std::vector<Cand> cands_;
  std::unordered_map<Coord, CoverInfo> cover_;
  std::set<std::uint32_t> used_;
  std::vector<std::uint32_t> chosen_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool budget_hit_ = false;
};

template <class S>
PrefixMembership run_search(const CriterionChecker::Index& ix, const std::vector<SparseVec<S>>& terms,
                            const std::vector<S>& moduli, const SparseVec<Integer>& target_big, unsigned k,
                            std::size_t m, std::size_t node_budget) {
  using Cand = typename Search<S>::Cand;
  const unsigned w_total = k + 1;
  SparseVec<S> target;
  for (const auto& [c, v] : target_big) target.emplace_back(c, Arith<S>::from(v));

  // Entries of l * d_r on coordinates where g vanishes must be cancelled by
  // the other at most w_total - l terms, each sharing at most overlap[r]
  // coordinates with d_r. Terms failing this cannot occur in a representation.
  std::unordered_map<std::uint32_t, std::vector<std::pair<Integer, unsigned>>> inside;  // r -> orders on supp g
  for (const auto& [c, v] : target_big) {
    for (std::uint32_t r : ix.cover[c]) {
      if (r < m) continue;
      for (std::size_t e = 0; e < ix.terms[r].size(); ++e) {
        if (ix.terms[r][e].first == c) inside[r].emplace_back(ix.entry_orders[r][e], 1);
      }
    }
  }
  std::vector<Cand> cands;
  for (std::size_t r = m; r < terms.size(); ++r) {
    if (terms[r].empty()) continue;
    auto in_it = inside.find(static_cast<std::uint32_t>(r));
    for (unsigned l = 1; l <= w_total; ++l) {
      std::size_t nz = 0;
      for (const auto& [o, cnt] : ix.order_hist[r]) {
        if (!killed(o, l)) nz += cnt;
      }
      if (nz == 0) continue;
      std::size_t in_g = 0;
      if (in_it != inside.end()) {
        for (const auto& [o, one] : in_it->second) {
          if (!killed(o, l)) in_g += one;
        }
      }
      const std::size_t outside = nz - in_g;
      if (outside > ix.overlap[r] * (w_total - l)) continue;
      for (int sign : {1, -1}) {
        SparseVec<S> vec;
        for (const auto& [c, v] : terms[r]) {
          S x = Arith<S>::reduce(S(v * S(sign * static_cast<int>(l))), moduli[c]);
          if (x != 0) vec.emplace_back(c, x);
        }
        cands.push_back(Cand{static_cast<std::uint32_t>(r), l, sign * static_cast<int>(l), std::move(vec)});
      }
    }
  }
  Search<S> search(moduli, std::move(cands), node_budget);
  PrefixMembership out;
  out.member = search.run(target, w_total);
  out.budget_hit = search.budget_hit();
  out.nodes = search.nodes();
  if (out.member) {
    for (std::uint32_t id : search.chosen()) {
      const auto& cd = search.cand(id);
      out.witness.terms.emplace_back(cd.r, Integer(cd.coeff));
    }
    std::sort(out.witness.terms.begin(), out.witness.terms.end());
  }
  return out;
}

}  // namespace

PrefixMembership CriterionChecker::prefix_member(const Element& g, unsigned k, std::size_t m) const {
  const Index& ix = *index_;
  const BlockGroup& grp = seq_.group();
  PrefixMembership none;
  if (g.is_zero()) {
    none.member = true;
    return none;
  }
  // g must live in the coordinates spanned by the prefix.
  for (const auto& [j, t] : g.terms()) {
    if (!ix.coords->index_of(j, 0)) return none;
    Block b = grp.block_at(j);
    if (b.e_order.is_prufer()) {
      const unsigned d = *log_exact(t.e.get_den(), b.e_order.value);
      if (d > ix.depth.at(j)) return none;
    }
  }
  SparseVec<Integer> target;
  for (auto& [c, raw] : ix.coords->flatten_sparse(canonicalize(grp, g))) {
    Integer val = mod_floor(raw, ix.moduli[c]);
    if (val != 0) target.emplace_back(static_cast<Coord>(c), std::move(val));
  }
  Integer g_free = 0;
  for (const auto& [c, v] : target) {
    if (ix.moduli[c] == 0) g_free = std::max(g_free, Integer(abs(v)));
  }
  const Integer bound = ix.max_abs_free * (k + 1) + g_free;
  if (ix.fits64 && bound < (Integer(1) << 60)) {
    return run_search<std::int64_t>(ix, ix.terms64, ix.moduli64, target, k, m, node_budget_);
  }
  return run_search<Integer>(ix, ix.terms, ix.moduli, target, k, m, node_budget_);
}

Verdict CriterionChecker::check(const Element& g, unsigned k, std::size_t m_max) const {
  if (g.is_zero()) throw Error(ErrorCode::ZeroElement, "the criterion is stated for g != 0");
  Verdict v;
  v.n_prefix = n_;
  std::size_t m = 0;
  while (m <= m_max) {
    PrefixMembership pm = prefix_member(g, k, m);
    if (pm.budget_hit) {
      v.kind = Verdict::Kind::Inconclusive;
      v.m = m;
      v.report = "search budget of " + std::to_string(node_budget_) + " nodes exhausted at m = " + std::to_string(m);
      return v;
    }
    if (!pm.member) {
      v.certificate = seq_.tail_certificate(g, k, m, n_);
      v.m = m;
      if (v.certificate.sound) {
        v.kind = Verdict::Kind::Excluded;
        v.report = "g is not in A(" + std::to_string(k) + "," + std::to_string(m) + ") restricted to d_0..d_" +
                   std::to_string(n_) + "; tail certified by " + v.certificate.kind;
      } else {
        v.kind = Verdict::Kind::Inconclusive;
        v.report = "g is not in A(" + std::to_string(k) + "," + std::to_string(m) + ") within the prefix, but " +
                   v.certificate.detail;
      }
      return v;
    }
    // The witness uses indices >= its smallest one, so it covers every m up to it.
    const std::size_t lowest = pm.witness.terms.front().first;
    v.witnesses.emplace_back(m, pm.witness);
    m = lowest + 1;
  }
  v.kind = Verdict::Kind::MemberUpTo;
  v.m = m_max;
  v.report = "g is in A(" + std::to_string(k) + ",m) for every m <= " + std::to_string(m_max) + " within the prefix";
  return v;
}

Verdict check_criterion(const TSeq& seq, const Element& g, unsigned k, std::size_t m_max, std::size_t n) {
  if (g.is_zero()) throw Error(ErrorCode::ZeroElement, "the criterion is stated for g != 0");
  CriterionChecker checker(seq, n);
  return checker.check(g, k, m_max);
}

}  // namespace minap
