#include "minap/core_groups.hpp"

#include <algorithm>
#include <sstream>

namespace minap {

namespace {

void check_h_orders(const std::vector<Integer>& h_orders) {
  for (const auto& h : h_orders) {
    if (h < 2) throw Error(ErrorCode::InvalidSpec, "h order must be an integer >= 2, got " + h.get_str());
  }
}

void check_block(const Block& b) {
  if (b.e_order.is_finite() && b.e_order.value < 2) {
    throw Error(ErrorCode::InvalidSpec, "finite e order must be >= 2");
  }
  if (b.e_order.is_prufer() && !is_prime(b.e_order.value)) {
    throw Error(ErrorCode::InvalidSpec, "Prufer order needs a prime, got " + b.e_order.value.get_str());
  }
  check_h_orders(b.h_orders);
  if (b.h_spans_e) {
    if (!b.h_orders.empty()) throw Error(ErrorCode::InvalidSpec, "H = <e> excludes an explicit H basis");
    if (!b.e_order.is_finite()) throw Error(ErrorCode::InvalidSpec, "H = <e> needs a finite e order");
  }
}

bool tail_h_trivial(const TailRule& t) {
  switch (t.kind) {
    case TailRule::Kind::None: return true;
    case TailRule::Kind::Const: return t.block.h_trivial();
    case TailRule::Kind::Geometric: return t.h_orders.empty() && !t.h_spans_e;
  }
  return true;
}

IndexBound inferred_m(const std::vector<Block>& head, const TailRule& tail) {
  if (!tail_h_trivial(tail)) return std::nullopt;
  std::size_t m = head.size();
  while (m > 0 && head[m - 1].h_trivial()) --m;
  return m;
}

Integer cyclic_order_value(const Block& b) {
  // Only for finite e orders.
  return b.e_order.value;
}

}  // namespace

CyclicOrder CyclicOrder::finite(const Integer& n) { return CyclicOrder{Kind::Finite, n}; }
CyclicOrder CyclicOrder::infinite() { return CyclicOrder{Kind::Infinite, 0}; }
CyclicOrder CyclicOrder::prufer(const Integer& p) { return CyclicOrder{Kind::Prufer, p}; }

std::string CyclicOrder::to_string() const {
  switch (kind) {
    case Kind::Finite: return value.get_str();
    case Kind::Infinite: return "Z";
    case Kind::Prufer: return "Prufer(" + value.get_str() + ")";
  }
  return "?";
}

TailRule TailRule::none() { return TailRule{}; }

TailRule TailRule::constant(Block block) {
  TailRule t;
  t.kind = Kind::Const;
  t.block = std::move(block);
  return t;
}

TailRule TailRule::geometric(const Integer& p, unsigned start_exp, std::vector<Integer> h_orders,
                             bool h_spans_e) {
  TailRule t;
  t.kind = Kind::Geometric;
  t.p = p;
  t.start_exp = start_exp;
  t.h_orders = std::move(h_orders);
  t.h_spans_e = h_spans_e;
  return t;
}

bool TailRule::operator==(const TailRule& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::None: return true;
    case Kind::Const: return block == other.block;
    case Kind::Geometric:
      return p == other.p && start_exp == other.start_exp && h_orders == other.h_orders &&
             h_spans_e == other.h_spans_e;
  }
  return false;
}

std::string Order::to_string() const { return value ? value->get_str() : "INFINITE"; }

std::string Cardinality::to_string() const { return omega ? "OMEGA" : "FINITE(" + count.get_str() + ")"; }

bool BlockGroup::has_block(std::size_t j) const {
  return j < head_.size() || tail_.kind != TailRule::Kind::None;
}

Block BlockGroup::block_at(std::size_t j) const {
  if (j < head_.size()) return head_[j];
  switch (tail_.kind) {
    case TailRule::Kind::None:
      throw Error(ErrorCode::OutOfRange, "block " + std::to_string(j) + " does not exist");
    case TailRule::Kind::Const: return tail_.block;
    case TailRule::Kind::Geometric: {
      Block b;
      b.e_order = CyclicOrder::finite(ipow(tail_.p, tail_.start_exp + (j - head_.size())));
      b.h_orders = tail_.h_orders;
      b.h_spans_e = tail_.h_spans_e;
      return b;
    }
  }
  throw Error(ErrorCode::OutOfRange, "bad tail rule");
}

BlockGroup make_group(std::vector<Block> head, TailRule tail) {
  return make_group(head, tail, inferred_m(head, tail));
}

BlockGroup make_group(std::vector<Block> head, TailRule tail, IndexBound m) {
  for (const auto& b : head) check_block(b);
  if (tail.kind == TailRule::Kind::Const) check_block(tail.block);
  if (tail.kind == TailRule::Kind::Geometric) {
    if (!is_prime(tail.p)) throw Error(ErrorCode::InvalidSpec, "geometric tail needs a prime");
    if (tail.start_exp < 1) throw Error(ErrorCode::InvalidSpec, "geometric start_exp must be >= 1");
    check_h_orders(tail.h_orders);
    if (tail.h_spans_e && !tail.h_orders.empty()) {
      throw Error(ErrorCode::InvalidSpec, "H = <e> excludes an explicit H basis");
    }
  }
  if (m && !tail_h_trivial(tail)) {
    throw Error(ErrorCode::InvalidSpec, "M is finite but the tail blocks have nonzero H");
  }
  if (!m && tail.kind == TailRule::Kind::None) {
    throw Error(ErrorCode::InvalidSpec, "M is infinite but the group has finitely many blocks");
  }
  IndexBound expected = inferred_m(head, tail);
  if (m != expected) {
    throw Error(ErrorCode::InvalidSpec,
                "M inconsistent with the blocks: H_j vanishes exactly from index " +
                    (expected ? std::to_string(*expected) : std::string("INF")));
  }
  BlockGroup g;
  g.head_ = std::move(head);
  g.tail_ = std::move(tail);
  g.m_ = m;
  return g;
}

std::vector<std::size_t> Element::support() const {
  std::vector<std::size_t> s;
  s.reserve(terms_.size());
  for (const auto& [j, t] : terms_) s.push_back(j);
  return s;
}

std::optional<std::size_t> Element::max_block() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first;
}

std::string Element::key() const {
  std::string out;
  for (const auto& [j, t] : terms_) {
    out += std::to_string(j);
    out += ':';
    out += t.e.get_str();
    for (const auto& c : t.h) {
      out += ',';
      out += c.get_str();
    }
    out += ';';
  }
  return out;
}

Element make_element(const BlockGroup& g, std::map<std::size_t, Term> terms) {
  Element x;
  for (auto& [j, t] : terms) {
    Block b = g.block_at(j);
    t.e.canonicalize();
    switch (b.e_order.kind) {
      case CyclicOrder::Kind::Finite:
        if (t.e.get_den() != 1) throw Error(ErrorCode::InvalidSpec, "fractional coefficient on a finite block");
        t.e = Rational(mod_floor(t.e.get_num(), b.e_order.value));
        break;
      case CyclicOrder::Kind::Infinite:
        if (t.e.get_den() != 1) throw Error(ErrorCode::InvalidSpec, "fractional coefficient on a Z block");
        break;
      case CyclicOrder::Kind::Prufer:
        if (!log_exact(t.e.get_den(), b.e_order.value)) {
          throw Error(ErrorCode::InvalidSpec, "Prufer coefficient needs a power-of-p denominator");
        }
        t.e = frac(t.e);
        break;
    }
    const std::size_t a = b.h_spans_e ? 0 : b.h_orders.size();
    if (t.h.empty()) t.h.assign(a, Integer(0));
    if (t.h.size() != a) {
      throw Error(ErrorCode::InvalidSpec, "block " + std::to_string(j) + " has " + std::to_string(a) +
                                              " H coordinates, got " + std::to_string(t.h.size()));
    }
    bool zero = t.e == 0;
    for (std::size_t i = 0; i < a; ++i) {
      t.h[i] = mod_floor(t.h[i], b.h_orders[i]);
      if (t.h[i] != 0) zero = false;
    }
    if (!zero) x.terms_.emplace(j, std::move(t));
  }
  return x;
}

Element canonicalize(const BlockGroup& g, const Element& x) { return make_element(g, x.terms()); }

Element e_gen(const BlockGroup& g, std::size_t j, const Rational& coeff) {
  return make_element(g, {{j, Term{coeff, {}}}});
}

Element h_gen(const BlockGroup& g, std::size_t j, std::size_t i, const Integer& coeff) {
  Block b = g.block_at(j);
  if (b.h_spans_e) {
    if (i != 0) throw Error(ErrorCode::OutOfRange, "H_j = <e_j> has a single basis element");
    return e_gen(g, j, Rational(coeff));
  }
  if (i >= b.h_orders.size()) {
    throw Error(ErrorCode::OutOfRange, "block " + std::to_string(j) + " has no h basis element " +
                                           std::to_string(i + 1));
  }
  std::vector<Integer> h(b.h_orders.size(), 0);
  h[i] = coeff;
  return make_element(g, {{j, Term{0, h}}});
}

std::optional<std::pair<std::size_t, std::size_t>> h_basis_position(const BlockGroup& g, std::size_t k) {
  std::size_t j = 0;
  while (true) {
    if (g.m() && j >= *g.m()) return std::nullopt;
    if (!g.has_block(j)) return std::nullopt;
    const std::size_t a = g.block_at(j).h_rank();
    if (k < a) return std::make_pair(j, k);
    k -= a;
    ++j;
  }
}

Element h_basis_element(const BlockGroup& g, std::size_t k) {
  auto pos = h_basis_position(g, k);
  if (!pos) throw Error(ErrorCode::OutOfRange, "H basis index " + std::to_string(k) + " not realized");
  return h_gen(g, pos->first, pos->second);
}

Element add(const BlockGroup& g, const Element& x, const Element& y) {
  std::map<std::size_t, Term> terms = x.terms();
  for (const auto& [j, t] : y.terms()) {
    auto it = terms.find(j);
    if (it == terms.end()) {
      terms.emplace(j, t);
      continue;
    }
    it->second.e += t.e;
    for (std::size_t i = 0; i < t.h.size(); ++i) it->second.h[i] += t.h[i];
  }
  return make_element(g, std::move(terms));
}

Element neg(const BlockGroup& g, const Element& x) { return smul(g, -1, x); }

Element sub(const BlockGroup& g, const Element& x, const Element& y) { return add(g, x, neg(g, y)); }

Element smul(const BlockGroup& g, const Integer& n, const Element& x) {
  std::map<std::size_t, Term> terms = x.terms();
  for (auto& [j, t] : terms) {
    t.e *= n;
    for (auto& c : t.h) c *= n;
  }
  return make_element(g, std::move(terms));
}

Order order_of(const BlockGroup& g, const Element& x) {
  Integer o = 1;
  for (const auto& [j, t] : x.terms()) {
    Block b = g.block_at(j);
    switch (b.e_order.kind) {
      case CyclicOrder::Kind::Finite:
        o = lcm(o, b.e_order.value / gcd(t.e.get_num(), b.e_order.value));
        break;
      case CyclicOrder::Kind::Infinite:
        if (t.e != 0) return Order::infinite();
        break;
      case CyclicOrder::Kind::Prufer:
        o = lcm(o, t.e.get_den());
        break;
    }
    for (std::size_t i = 0; i < t.h.size(); ++i) {
      o = lcm(o, b.h_orders[i] / gcd(t.h[i], b.h_orders[i]));
    }
  }
  return Order::of(o);
}

Order block_exponent(const Block& b) {
  if (!b.e_order.is_finite()) return Order::infinite();
  Integer o = b.e_order.value;
  for (const auto& h : b.h_orders) o = lcm(o, h);
  return Order::of(o);
}

Order exponent(const BlockGroup& g) {
  Integer o = 1;
  for (const auto& b : g.head()) {
    Order e = block_exponent(b);
    if (e.is_infinite()) return e;
    o = lcm(o, *e.value);
  }
  switch (g.tail().kind) {
    case TailRule::Kind::None: break;
    case TailRule::Kind::Const: {
      Order e = block_exponent(g.tail().block);
      if (e.is_infinite()) return e;
      o = lcm(o, *e.value);
      break;
    }
    case TailRule::Kind::Geometric: return Order::infinite();
  }
  return Order::of(o);
}

bool is_bounded(const BlockGroup& g) { return !exponent(g).is_infinite(); }

Order exponent_h(const BlockGroup& g) {
  Integer o = 1;
  auto absorb = [&](const Block& b) {
    for (const auto& h : b.h_orders) o = lcm(o, h);
    if (b.h_spans_e) o = lcm(o, cyclic_order_value(b));
  };
  for (const auto& b : g.head()) absorb(b);
  switch (g.tail().kind) {
    case TailRule::Kind::None: break;
    case TailRule::Kind::Const: absorb(g.tail().block); break;
    case TailRule::Kind::Geometric:
      if (g.tail().h_spans_e) return Order::infinite();
      for (const auto& h : g.tail().h_orders) o = lcm(o, h);
      break;
  }
  return Order::of(o);
}

PrimaryClasses primary_classes(const BlockGroup& g) {
  if (!is_bounded(g)) throw Error(ErrorCode::Unbounded, "group has infinite exponent");
  PrimaryClasses classes;
  auto add_cyclic = [&](const Integer& n, bool omega) {
    for (const auto& [p, e] : factorize(n)) {
      auto& c = classes[{p, e}];
      if (omega) c = Cardinality::infinite();
      else if (!c.omega) c.count += 1;
    }
  };
  auto add_block = [&](const Block& b, bool omega) {
    add_cyclic(b.e_order.value, omega);
    for (const auto& h : b.h_orders) add_cyclic(h, omega);
  };
  for (const auto& b : g.head()) add_block(b, false);
  if (g.tail().kind == TailRule::Kind::Const) add_block(g.tail().block, true);
  return classes;
}

std::map<Integer, LeadingInvariant> ulm_kaplansky_leading(const BlockGroup& g) {
  std::map<Integer, LeadingInvariant> out;
  for (const auto& [key, card] : primary_classes(g)) {
    auto& inv = out[key.first];
    if (key.second >= inv.exponent) {
      inv.exponent = key.second;
      inv.multiplicity = card;
    }
  }
  return out;
}

std::string to_string(const Element& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const std::string& coeff, const std::string& sym) {
    if (!first) os << " + ";
    first = false;
    if (coeff != "1") os << coeff << "*";
    os << sym;
  };
  for (const auto& [j, t] : x.terms()) {
    if (t.e != 0) emit(t.e.get_str(), "e[" + std::to_string(j) + "]");
    for (std::size_t i = 0; i < t.h.size(); ++i) {
      if (t.h[i] != 0) emit(t.h[i].get_str(), "h[" + std::to_string(j) + "," + std::to_string(i + 1) + "]");
    }
  }
  return os.str();
}

Coordinates::Coordinates(const BlockGroup& g, std::vector<std::size_t> blocks,
                         std::map<std::size_t, unsigned> prufer_depth)
    : g_(g), prufer_depth_(std::move(prufer_depth)) {
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  for (std::size_t j : blocks) {
    Block b = g.block_at(j);
    Integer m;
    switch (b.e_order.kind) {
      case CyclicOrder::Kind::Finite: m = b.e_order.value; break;
      case CyclicOrder::Kind::Infinite: m = 0; break;
      case CyclicOrder::Kind::Prufer: {
        auto it = prufer_depth_.find(j);
        if (it == prufer_depth_.end()) {
          throw Error(ErrorCode::SupportMismatch, "Prufer block " + std::to_string(j) + " needs a depth");
        }
        m = ipow(b.e_order.value, it->second);
        break;
      }
    }
    index_[{j, 0}] = moduli_.size();
    slots_.emplace_back(j, 0);
    moduli_.push_back(m);
    if (!b.h_spans_e) {
      for (std::size_t i = 0; i < b.h_orders.size(); ++i) {
        index_[{j, i + 1}] = moduli_.size();
        slots_.emplace_back(j, i + 1);
        moduli_.push_back(b.h_orders[i]);
      }
    }
  }
}

std::optional<std::size_t> Coordinates::index_of(std::size_t block, std::size_t slot) const {
  auto it = index_.find({block, slot});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Coordinates::label(std::size_t i) const {
  const auto& [j, s] = slots_.at(i);
  if (s == 0) return "e[" + std::to_string(j) + "]";
  return "h[" + std::to_string(j) + "," + std::to_string(s) + "]";
}

std::vector<Integer> Coordinates::flatten(const Element& x) const {
  std::vector<Integer> v(moduli_.size(), 0);
  for (auto& [i, val] : flatten_sparse(x)) v[i] = std::move(val);
  return v;
}

std::vector<std::pair<std::size_t, Integer>> Coordinates::flatten_sparse(const Element& x) const {
  std::vector<std::pair<std::size_t, Integer>> v;
  for (const auto& [j, t] : x.terms()) {
    auto e_idx = index_of(j, 0);
    if (!e_idx) throw Error(ErrorCode::SupportMismatch, "block " + std::to_string(j) + " outside the coordinates");
    Block b = g_.block_at(j);
    if (t.e == 0) {
    } else if (b.e_order.is_prufer()) {
      const unsigned depth = prufer_depth_.at(j);
      const unsigned k = *log_exact(t.e.get_den(), b.e_order.value);
      if (k > depth) throw Error(ErrorCode::SupportMismatch, "Prufer coefficient deeper than the coordinates");
      v.emplace_back(*e_idx, t.e.get_num() * ipow(b.e_order.value, depth - k));
    } else {
      v.emplace_back(*e_idx, t.e.get_num());
    }
    for (std::size_t i = 0; i < t.h.size(); ++i) {
      if (t.h[i] != 0) v.emplace_back(*e_idx + 1 + i, t.h[i]);
    }
  }
  return v;
}

Element Coordinates::unflatten(const std::vector<Integer>& v) const {
  if (v.size() != moduli_.size()) throw Error(ErrorCode::SupportMismatch, "vector length differs from coordinates");
  std::map<std::size_t, Term> terms;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    const auto& [j, s] = slots_[i];
    Block b = g_.block_at(j);
    auto& t = terms[j];
    if (t.h.empty()) t.h.assign(b.h_spans_e ? 0 : b.h_orders.size(), Integer(0));
    if (s == 0) {
      if (b.e_order.is_prufer()) {
        t.e = Rational(v[i], moduli_[i]);
        t.e.canonicalize();
      } else {
        t.e = Rational(v[i]);
      }
    } else {
      t.h[s - 1] = v[i];
    }
  }
  return make_element(g_, std::move(terms));
}

std::vector<std::size_t> union_support(const std::vector<Element>& xs) {
  std::vector<std::size_t> s;
  for (const auto& x : xs) {
    for (const auto& [j, t] : x.terms()) s.push_back(j);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace minap
