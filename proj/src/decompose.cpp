#include "minap/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace minap {

Ambient Ambient::plain(const ZVec& moduli) {
  Ambient a;
  a.moduli = moduli;
  for (std::size_t i = 0; i < moduli.size(); ++i) a.labels.push_back("x" + std::to_string(i));
  return a;
}

Ambient Ambient::of(const Coordinates& c) {
  Ambient a;
  a.moduli = c.moduli();
  for (std::size_t i = 0; i < c.size(); ++i) a.labels.push_back(c.label(i));
  return a;
}

std::string Ambient::format(const ZVec& x) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Integer v = mod_floor(x[i], moduli[i]);
    if (v == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (v != 1) os << v.get_str() << "*";
    os << labels[i];
  }
  return first ? "0" : os.str();
}

std::string Decomposition::label() const {
  return window ? "CERTIFIED_UP_TO(" + std::to_string(*window) + ")" : "EXACT";
}

const Part* Decomposition::find(const std::string& name) const {
  for (const auto& p : parts) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

ZVec zeros(std::size_t n) { return ZVec(n, Integer(0)); }

ZVec unit(std::size_t n, std::size_t i, const Integer& c = 1) {
  ZVec v = zeros(n);
  v[i] = c;
  return v;
}

ZVec scaled(const Integer& c, const ZVec& x, const ZVec& moduli) {
  ZVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i];
  return reduce(out, moduli);
}

ZVec plus(const ZVec& x, const ZVec& y, const ZVec& moduli) {
  ZVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return reduce(out, moduli);
}

ZVec minus(const ZVec& x, const ZVec& y, const ZVec& moduli) {
  ZVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return reduce(out, moduli);
}

std::vector<ZVec> concat(std::vector<ZVec> a, const std::vector<ZVec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<ZVec> slice(const std::vector<ZVec>& v, std::size_t from, std::size_t to = std::string::npos) {
  to = std::min(to, v.size());
  if (from >= to) return {};
  return std::vector<ZVec>(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to));
}

bool meets_trivially(const std::vector<ZVec>& a, const std::vector<ZVec>& b, const ZVec& moduli) {
  return subgroup_intersection(a, b, moduli).empty();
}

bool finite_ambient(const ZVec& moduli) {
  return std::none_of(moduli.begin(), moduli.end(), [](const Integer& m) { return m == 0; });
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  if (m == 1) return 0;
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::InvalidParams, a.get_str() + " is not invertible mod " + m.get_str());
  }
  return r;
}

struct PrimaryComponent {
  Integer p;
  unsigned a = 0;
  ZVec x;
};

// x = sum of its primary components; x must have finite order.
std::vector<PrimaryComponent> primary_components(const ZVec& x, const ZVec& moduli) {
  const Integer n = element_order(x, moduli);
  if (n == 0) throw Error(ErrorCode::ExpInfinite, "element of infinite order");
  std::vector<PrimaryComponent> out;
  for (const auto& [p, a] : factorize(n)) {
    const Integer pa = ipow(p, a);
    const Integer rest = n / pa;
    out.push_back({p, a, scaled(rest * inverse_mod(rest, pa), x, moduli)});
  }
  return out;
}

std::string classes_to_string(const PrimaryClasses& c) {
  if (c.empty()) return "trivial";
  std::string s;
  for (const auto& [key, card] : c) {
    if (!s.empty()) s += " + ";
    s += "Z(" + key.first.get_str() + "^" + std::to_string(key.second) + ")^" + card.to_string();
  }
  return s;
}

void add_class(PrimaryClasses& c, const Integer& p, unsigned a, bool omega) {
  auto& card = c[{p, a}];
  if (omega) card = Cardinality::infinite();
  else if (!card.omega) card.count += 1;
}

std::string orders_to_string(const std::vector<ZVec>& xs, const ZVec& moduli) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ",") + element_order(x, moduli).get_str();
  return "[" + s + "]";
}

}  // namespace

bool certify_direct_sum(Decomposition& d) {
  const ZVec& mod = d.ambient.moduli;
  if (d.relation != Decomposition::Relation::DirectSum) {
    d.verified = false;
    d.certificate.push_back("parts form a sum; directness not claimed");
    return false;
  }
  std::vector<ZVec> all;
  for (const auto& p : d.parts) all = concat(all, p.gens);
  if (finite_ambient(mod)) {
    Integer product = 1;
    for (const auto& p : d.parts) product *= p.gens.empty() ? Integer(1) : subgroup_order(p.gens, mod);
    const Integer total = all.empty() ? Integer(1) : subgroup_order(all, mod);
    d.verified = total == product;
    d.certificate.push_back(std::string(d.verified ? "direct" : "NOT direct") + ": |sum of parts| = " +
                            total.get_str() + ", product of part orders = " + product.get_str());
    return d.verified;
  }
  d.verified = true;
  for (std::size_t i = 0; i < d.parts.size(); ++i) {
    std::vector<ZVec> others;
    for (std::size_t j = 0; j < d.parts.size(); ++j) {
      if (j != i) others = concat(others, d.parts[j].gens);
    }
    const bool ok = d.parts[i].gens.empty() || others.empty() || meets_trivially(d.parts[i].gens, others, mod);
    d.verified = d.verified && ok;
    d.certificate.push_back("part " + d.parts[i].name + (ok ? " meets" : " does NOT meet") +
                            " the sum of the other parts trivially");
  }
  return d.verified;
}

// ---------------------------------------------------------------------------

Decomposition split_lambda(const BlockGroup& g, std::size_t window) {
  if (!is_bounded(g)) throw Error(ErrorCode::Unbounded, "split needs a bounded group");
  if (g.finitely_generated()) throw Error(ErrorCode::FiniteGroup, "finite input: the splitting needs an infinite group");
  const PrimaryClasses classes = primary_classes(g);
  const std::size_t nb = std::max(window, g.head_size() + 1);
  std::vector<std::size_t> blocks(nb);
  std::iota(blocks.begin(), blocks.end(), 0);
  Coordinates c(g, blocks);

  Decomposition d;
  d.ambient = Ambient::of(c);
  d.window = nb;
  Part g0{"G0", {}, "", {}};
  Part g1{"G1", {}, "", {}};
  for (const auto& [key, card] : classes) (card.omega ? g1 : g0).classes[key] = card;
  const ZVec& mod = d.ambient.moduli;
  for (std::size_t i = 0; i < mod.size(); ++i) {
    if (mod[i] == 1) continue;
    for (const auto& [p, a] : factorize(mod[i])) {
      ZVec x = unit(mod.size(), i, mod[i] / ipow(p, a));
      (classes.at({p, a}).omega ? g1 : g0).gens.push_back(std::move(x));
    }
  }
  g1.rule = g1.classes.empty() ? "" : classes_to_string(g1.classes);
  d.certificate.push_back("classes with finitely many members: " + classes_to_string(g0.classes));
  d.certificate.push_back("classes with OMEGA members: " + classes_to_string(g1.classes));
  d.parts = {g0, g1};
  certify_direct_sum(d);
  std::vector<ZVec> units;
  for (std::size_t i = 0; i < mod.size(); ++i) units.push_back(unit(mod.size(), i));
  const bool spans = same_subgroup(concat(d.parts[0].gens, d.parts[1].gens), units, mod);
  d.certificate.push_back(std::string("G0 + G1 ") + (spans ? "equals" : "does NOT equal") + " blocks 0.." +
                          std::to_string(nb - 1));
  d.verified = d.verified && spans;
  return d;
}

// ---------------------------------------------------------------------------

BasisChange basis_change(const ZVec& moduli, const std::vector<ZVec>& basis, const std::set<std::size_t>& j_set,
                         const std::map<std::size_t, std::size_t>& jmap) {
  const std::size_t n = basis.size();
  for (std::size_t j : j_set) {
    if (j >= n) throw Error(ErrorCode::InvalidParams, "index " + std::to_string(j) + " in J out of range");
  }
  std::vector<Integer> orders;
  for (const auto& f : basis) {
    orders.push_back(element_order(f, moduli));
    if (orders.back() == 1) throw Error(ErrorCode::InvalidParams, "basis contains 0");
  }
  for (const auto& [i, j] : jmap) {
    if (i >= n || j >= n) throw Error(ErrorCode::InvalidParams, "index out of range in j map");
    if (j_set.count(i)) throw Error(ErrorCode::InvalidParams, "I' must avoid J, index " + std::to_string(i));
    if (!j_set.count(j)) throw Error(ErrorCode::InvalidParams, "j(" + std::to_string(i) + ") is not in J");
    if (orders[i] != orders[j]) {
      throw Error(ErrorCode::OrderMismatch, "o(f_" + std::to_string(i) + ") = " + orders[i].get_str() + " but o(f_" +
                                                std::to_string(j) + ") = " + orders[j].get_str());
    }
  }
  if (!is_independent(basis, moduli)) throw Error(ErrorCode::InvalidParams, "input is not independent");

  BasisChange out;
  out.basis = basis;
  for (const auto& [i, j] : jmap) out.basis[i] = minus(basis[i], basis[j], moduli);
  const bool nonzero =
      std::none_of(out.basis.begin(), out.basis.end(), [&](const ZVec& f) { return is_zero(reduce(f, moduli)); });
  const bool indep = nonzero && is_independent(out.basis, moduli);
  const bool same = same_subgroup(out.basis, basis, moduli);
  if (!indep || !same) {
    throw Error(ErrorCode::NotABasis, std::string(indep ? "" : "new set is dependent; ") +
                                          (same ? "" : "new set generates a different subgroup"));
  }
  out.certificate.push_back("replaced " + std::to_string(jmap.size()) + " basis elements by differences");
  out.certificate.push_back("new set independent and generates the same subgroup");
  return out;
}

// ---------------------------------------------------------------------------

PruferSplit prufer_split(const PruferSplitInput& in, std::size_t window) {
  const Integer& p = in.p;
  if (!is_prime(p)) throw Error(ErrorCode::InvalidParams, "p must be prime");
  if (!in.v_labels.empty() && in.v_labels.size() != in.v_moduli.size()) {
    throw Error(ErrorCode::InvalidParams, "label count differs from V");
  }
  unsigned depth = 1;
  std::vector<unsigned> dens;
  for (const auto& gen : in.gens) {
    if (gen.v.size() != in.v_moduli.size()) throw Error(ErrorCode::SupportMismatch, "generator of wrong length");
    auto k = log_exact(frac(gen.pi1).get_den(), p);
    if (!k) throw Error(ErrorCode::InvalidParams, "pi_1 value " + to_string(gen.pi1) + " is not in Z(p^inf)");
    dens.push_back(*k);
    depth = std::max(depth, *k);
  }
  ZVec mod{ipow(p, depth)};
  mod.insert(mod.end(), in.v_moduli.begin(), in.v_moduli.end());
  Ambient amb;
  amb.moduli = mod;
  amb.labels.push_back(in.pi1_label);
  for (std::size_t i = 0; i < in.v_moduli.size(); ++i) {
    amb.labels.push_back(in.v_labels.empty() ? "v" + std::to_string(i) : in.v_labels[i]);
  }

  std::vector<ZVec> e;
  for (std::size_t i = 0; i < in.gens.size(); ++i) {
    const Rational q = frac(in.gens[i].pi1);
    ZVec x{Integer(q.get_num() * ipow(p, depth - dens[i]))};
    x.insert(x.end(), in.gens[i].v.begin(), in.gens[i].v.end());
    x = reduce(x, mod);
    const Integer o = element_order(x, mod);
    if (o == 0) throw Error(ErrorCode::ExpInfinite, "generator " + std::to_string(i) + " has infinite order");
    if (o == 1) throw Error(ErrorCode::InvalidParams, "generator " + std::to_string(i) + " is 0");
    e.push_back(std::move(x));
  }
  if (!is_independent(e, mod)) throw Error(ErrorCode::InvalidParams, "generators of H are not independent");

  PruferSplit out;
  Decomposition& d = out.decomposition;
  d.ambient = amb;

  // p-primary parts go through the classing, the rest is finite and stays in H_0.
  std::vector<ZVec> ep;
  std::vector<ZVec> y;
  for (const auto& x : e) {
    for (auto& c : primary_components(x, mod)) (c.p == p ? ep : y).push_back(std::move(c.x));
  }
  d.certificate.push_back("p-primary split: " + std::to_string(ep.size()) + " p-generators, " +
                          std::to_string(y.size()) + " p'-generators");

  const ZVec pi_mod{mod[0]};
  auto pi_order = [&](const ZVec& x) { return element_order(ZVec{x[0]}, pi_mod); };
  std::vector<std::pair<Integer, Integer>> keys;
  for (std::size_t i = 0; i < ep.size(); ++i) {
    std::pair<Integer, Integer> key{element_order(ep[i], mod), pi_order(ep[i])};
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      out.classes.push_back({i});
    } else {
      out.classes[static_cast<std::size_t>(it - keys.begin())].push_back(i);
    }
  }

  // Rescale within a class so that pi_1 values agree, then subtract the representative.
  std::vector<ZVec> hp;  // H' = representatives
  std::vector<ZVec> vp;  // V' = differences
  std::vector<std::size_t> vp_index;
  std::size_t rescaled = 0;
  for (const auto& cls : out.classes) {
    const std::size_t r = cls.front();
    out.representatives.push_back(r);
    hp.push_back(ep[r]);
    const Integer ps = pi_order(ep[r]);
    for (std::size_t t = 1; t < cls.size(); ++t) {
      const std::size_t b = cls[t];
      if (ps > 1) {
        const Integer shift = mod[0] / ps;
        const Integer cr = ep[r][0] / shift;
        const Integer cb = ep[b][0] / shift;
        const Integer u = mod_floor(cr * inverse_mod(cb, ps), ps);
        if (u != 1) {
          ep[b] = scaled(u, ep[b], mod);
          ++rescaled;
        }
      }
      ZVec v = minus(ep[b], ep[r], mod);
      if (v[0] != 0) throw std::logic_error("difference left Z(p^inf) projection nonzero");
      vp.push_back(std::move(v));
      vp_index.push_back(b);
    }
  }
  d.certificate.push_back(std::to_string(out.classes.size()) + " classes by (order, pi_1); " +
                          std::to_string(rescaled) + " generators rescaled by units to equalize pi_1");

  std::vector<ZVec> pv_hp;
  for (auto x : hp) {
    x[0] = 0;
    pv_hp.push_back(std::move(x));
  }
  std::set<std::size_t> absorbed;
  const auto inter = subgroup_intersection(pv_hp, vp, mod);
  for (const auto& x : inter) {
    const Membership mem = subgroup_membership(vp, mod, x);
    for (std::size_t i = 0; i < vp.size(); ++i) {
      if (mod_floor(mem.coefficients[i], element_order(vp[i], mod)) != 0) absorbed.insert(i);
    }
  }
  if (absorbed.size() > window) {
    throw Error(ErrorCode::WindowInsufficient, "absorbing set has " + std::to_string(absorbed.size()) +
                                                   " elements, window " + std::to_string(window));
  }
  d.certificate.push_back(inter.empty() ? "pi_V(H') meets V' trivially: R = 0"
                                        : "pi_V(H') meets V'; minimal absorbing set of size " +
                                              std::to_string(absorbed.size()));

  std::vector<ZVec> h2 = hp;  // H'' = H' + R
  std::vector<ZVec> v2;       // V''
  for (std::size_t i = 0; i < vp.size(); ++i) {
    if (absorbed.count(i)) {
      h2.push_back(vp[i]);
      out.absorbed.push_back(vp_index[i]);
    } else {
      v2.push_back(vp[i]);
    }
  }
  out.h0 = concat(h2, y);
  out.h1 = v2;

  Part first{"prufer+H0", concat({unit(mod.size(), 0)}, out.h0), "Z(" + p.get_str() + "^inf) + H_0", {}};
  Part second{"H1", out.h1, "", {}};
  for (const auto& x : out.h0) {
    for (const auto& c : primary_components(x, mod)) add_class(first.classes, c.p, c.a, false);
  }
  for (const auto& x : out.h1) {
    for (const auto& c : primary_components(x, mod)) add_class(second.classes, c.p, c.a, false);
  }
  for (const auto& n : in.omega_orders) {
    if (n < 1) throw Error(ErrorCode::ExpInfinite, "omega class of infinite order");
    for (const auto& [q, a] : factorize(n)) add_class(second.classes, q, a, true);
  }
  if (!in.omega_orders.empty()) {
    second.rule = "condition (Lambda): " + classes_to_string(second.classes);
    d.window = window;
  }
  d.parts = {first, second};
  certify_direct_sum(d);
  const bool same = same_subgroup(concat(out.h0, out.h1), e, mod);
  const bool disjoint = out.h0.empty() || out.h1.empty() || meets_trivially(out.h0, out.h1, mod);
  d.certificate.push_back(std::string("H = H_0 + H_1 ") + (same && disjoint ? "holds, direct" : "FAILS"));
  d.verified = d.verified && same && disjoint;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

unsigned p_log(const Integer& n, const Integer& p) {
  auto e = log_exact(n, p);
  if (!e) throw Error(ErrorCode::InvalidParams, n.get_str() + " is not a power of " + p.get_str());
  return *e;
}

struct CosetHit {
  ZVec y;
  ZVec coeffs;  // over the g's
};

// y in <gs> with h - y in <xs> and o(y) = p^m (m >= 1).
std::optional<CosetHit> coset_element_of_order(const std::vector<ZVec>& gs, const std::vector<ZVec>& xs,
                                               const ZVec& h, const Integer& p, unsigned m, const ZVec& mod) {
  if (gs.empty() || m == 0) return std::nullopt;
  const std::size_t d = mod.size();
  const std::size_t cols = gs.size() + xs.size();
  const Integer pm = ipow(p, m);
  IntMatrix a(2 * d, cols);
  ZVec mods(2 * d);
  ZVec rhs(2 * d, Integer(0));
  for (std::size_t r = 0; r < d; ++r) {
    mods[r] = mod[r];
    mods[d + r] = mod[r];
    rhs[r] = h[r];
    for (std::size_t c = 0; c < gs.size(); ++c) {
      a.at(r, c) = gs[c][r];
      a.at(d + r, c) = pm * gs[c][r];
    }
    for (std::size_t c = 0; c < xs.size(); ++c) a.at(r, gs.size() + c) = xs[c][r];
  }
  auto sol = solve_congruence(a, mods, rhs);
  if (!sol) return std::nullopt;
  auto y_of = [&](const ZVec& coeffs) {
    CosetHit hit{zeros(d), ZVec(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(gs.size()))};
    for (std::size_t c = 0; c < gs.size(); ++c) hit.y = plus(hit.y, scaled(hit.coeffs[c], gs[c], mod), mod);
    return hit;
  };
  const Integer pm1 = ipow(p, m - 1);
  CosetHit base = y_of(*sol);
  if (!is_zero(scaled(pm1, base.y, mod))) return base;
  for (const auto& k : congruence_kernel(a, mods)) {
    CosetHit t = y_of(k);
    if (!is_zero(scaled(pm1, t.y, mod))) {
      for (std::size_t c = 0; c < gs.size(); ++c) base.coeffs[c] += t.coeffs[c];
      base.y = plus(base.y, t.y, mod);
      return base;
    }
  }
  return std::nullopt;
}

std::vector<ZVec> enumerate_span(const std::vector<ZVec>& gens, const ZVec& mod, std::size_t cap) {
  std::set<ZVec> seen{zeros(mod.size())};
  for (const auto& g : gens) {
    const Integer o = element_order(g, mod);
    if (o == 0) throw Error(ErrorCode::ExpInfinite, "generator of infinite order");
    std::vector<ZVec> current(seen.begin(), seen.end());
    for (const auto& x : current) {
      ZVec y = x;
      for (Integer c = 1; c < o; ++c) {
        y = plus(y, g, mod);
        seen.insert(y);
      }
      if (seen.size() > cap) {
        throw Error(ErrorCode::BudgetExceeded, "subgroup has more than " + std::to_string(cap) + " elements");
      }
    }
  }
  seen.erase(zeros(mod.size()));
  return std::vector<ZVec>(seen.begin(), seen.end());
}

std::string idx_range(const char* name, std::size_t from, std::size_t to) {
  return std::string("<") + name + "_" + std::to_string(from) + ", ..., " + name + "_" + std::to_string(to) + ">";
}

}  // namespace

PeelResult peel_summand(const PeelInput& in, std::size_t window) {
  const Integer& p = in.p;
  const ZVec& mod = in.moduli;
  if (!is_prime(p)) throw Error(ErrorCode::InvalidParams, "p must be prime");
  if (!in.labels.empty() && in.labels.size() != mod.size()) {
    throw Error(ErrorCode::InvalidParams, "label count differs from the ambient");
  }
  for (const auto& m : mod) {
    if (m < 1 || !log_exact(m, p)) throw Error(ErrorCode::InvalidParams, "ambient is not a p-group for p = " + p.get_str());
  }
  if (in.a.empty()) throw Error(ErrorCode::InvalidParams, "the sequence A is empty");
  if (window == 0) throw Error(ErrorCode::InvalidParams, "window must be positive");
  std::vector<Integer> oa;
  for (const auto& g : in.a) {
    oa.push_back(element_order(g, mod));
    if (oa.back() == 1) throw Error(ErrorCode::InvalidParams, "A contains 0");
  }
  Integer exp_h = 1;
  for (const auto& h : in.h) {
    Integer o = element_order(h, mod);
    if (o == 1) throw Error(ErrorCode::InvalidParams, "H basis contains 0");
    exp_h = std::max(exp_h, o);
  }
  if (!is_independent(in.a, mod)) throw Error(ErrorCode::InvalidParams, "A is not independent");
  if (!in.h.empty() && !is_independent(in.h, mod)) throw Error(ErrorCode::InvalidParams, "h_i are not independent");

  const bool constant =
      std::all_of(oa.begin(), oa.end(), [&](const Integer& o) { return o == oa[0]; }) && (in.h.empty() || oa[0] == exp_h);
  bool increasing = oa[0] >= exp_h;
  for (std::size_t i = 1; i < oa.size(); ++i) increasing = increasing && oa[i - 1] < oa[i];
  if (!constant && !increasing) {
    std::string s;
    for (const auto& o : oa) s += (s.empty() ? "" : ",") + o.get_str();
    throw Error(ErrorCode::HypothesisFail, "orders [" + s + "] are neither constant = exp H = " + exp_h.get_str() +
                                               " nor strictly increasing from exp H");
  }

  PeelResult r;
  r.hyp = constant ? PeelResult::Hypothesis::Constant : PeelResult::Hypothesis::Increasing;
  const std::size_t len = in.a.size();
  const std::size_t w = std::min(window, len);
  const std::size_t half = w / 2;
  r.window = w;
  r.remainder.p = p;
  r.remainder.moduli = mod;
  r.remainder.labels = in.labels;
  Decomposition& d = r.decomposition;
  d.ambient = in.labels.empty() ? Ambient::plain(mod) : Ambient{mod, in.labels};
  d.window = w;
  d.certificate.push_back(std::string("hypothesis ") + (constant ? "(b): o(g_i) = exp H = " + exp_h.get_str()
                                                                 : "(a): exp H <= o(g_0) < o(g_1) < ..."));

  // Case 1: H meets a tail of A trivially.
  std::optional<std::size_t> n0;
  for (std::size_t n = 0; n <= half && n < len; ++n) {
    if (in.h.empty() || meets_trivially(in.h, slice(in.a, n), mod)) {
      n0 = n;
      break;
    }
  }
  if (n0) {
    r.case_tag = "1";
    r.n0 = n0;
    r.e0 = in.a[*n0];
    if (!in.h.empty()) r.h0 = {in.h[0]};
    r.remainder.a = slice(in.a, *n0 + 1);
    r.remainder.h = slice(in.h, 1);
    d.certificate.push_back("case 1: H meets " + idx_range("g", *n0, len - 1) + " trivially, n0 = " +
                            std::to_string(*n0) + " <= W/2 = " + std::to_string(half));
  } else {
    r.e0 = in.a[0];
    const std::vector<ZVec> s_e0{r.e0};
    const auto i0 = subgroup_intersection(in.h, s_e0, mod);
    std::size_t kappa = 0;
    while (kappa + 1 < in.h.size() && !same_subgroup(subgroup_intersection(slice(in.h, 0, kappa + 1), s_e0, mod), i0, mod)) {
      ++kappa;
    }
    r.kappa1 = kappa;
    r.h0 = slice(in.h, 0, kappa + 1);
    const std::vector<ZVec> x1 = slice(in.h, kappa + 1);
    const std::vector<ZVec> s = concat(r.h0, s_e0);
    d.certificate.push_back("case 2: H meets " + idx_range("g", half, len - 1) + " nontrivially; kappa_1 = " +
                            std::to_string(kappa));

    std::optional<std::size_t> k21;
    for (std::size_t k = 0; k <= half; ++k) {
      if (meets_trivially(concat(slice(in.a, k + 1), x1), s, mod)) {
        k21 = k;
        break;
      }
    }
    if (k21) {
      r.case_tag = "2.1";
      r.k = k21;
      r.remainder.a = slice(in.a, *k21 + 1);
      r.remainder.h = x1;
      d.certificate.push_back("case 2.1: (Y_k + X_1) meets H_0 + <e_0> trivially for k = " + std::to_string(*k21));
    } else {
      // Case 2.2: maximal m with witnesses for ceil(W/2) values of k. Y_k
      // decreases in k, so a witness at k = ceil(W/2) - 1 covers all smaller k.
      const auto elems = enumerate_span(s, mod, std::size_t{1} << 16);
      const std::size_t kstar = (w + 1) / 2 - 1;
      const std::vector<ZVec> ystar = slice(in.a, kstar + 1);
      const unsigned mmax = p_log(*std::max_element(oa.begin(), oa.end()), p);
      for (unsigned m = mmax; m >= 1 && !r.m; --m) {
        for (const auto& h : elems) {
          if (coset_element_of_order(ystar, x1, h, p, m, mod)) {
            r.m = m;
            r.h_choice = h;
            break;
          }
        }
      }
      if (!r.m) {
        throw Error(ErrorCode::WindowInsufficient,
                    "case 2.2: no m >= 1 and nonzero h in H_0 + <e_0> with witnesses y_k for the first ceil(W/2) = " +
                        std::to_string(kstar + 1) + " values of k");
      }
      const unsigned m = *r.m;
      const ZVec& h = *r.h_choice;
      d.certificate.push_back("case 2.2: maximal m = " + std::to_string(m) + ", h = " + d.ambient.format(h) +
                              " (least in lexicographic order), witnesses for k < " + std::to_string(kstar + 1));

      // Witnesses on consecutive disjoint index blocks.
      std::size_t start = 1;
      while (start < len) {
        std::optional<CosetHit> hit;
        std::size_t end = start + 1;
        for (; end <= len && !hit; ++end) hit = coset_element_of_order(slice(in.a, start, end), x1, h, p, m, mod);
        if (!hit) break;
        --end;
        unsigned t = ~0u;
        ZVec red(hit->coeffs.size());
        for (std::size_t c = 0; c < red.size(); ++c) {
          red[c] = mod_floor(hit->coeffs[c], oa[start + c]);
          if (red[c] != 0) t = std::min(t, valuation(red[c], p));
        }
        const Integer pt = ipow(p, t);
        ZVec yp = zeros(mod.size());
        for (std::size_t c = 0; c < red.size(); ++c) yp = plus(yp, scaled(red[c] / pt, in.a[start + c], mod), mod);
        if (element_order(yp, mod) != ipow(p, t + m) || scaled(pt, yp, mod) != hit->y) {
          throw std::logic_error("y'_k does not have order p^(t_k + m)");
        }
        r.y_prime.push_back(std::move(yp));
        r.t.push_back(t);
        start = end;
      }
      if (r.y_prime.size() < 2) {
        throw Error(ErrorCode::WindowInsufficient,
                    "case 2.2: fewer than two witnesses y_k on disjoint index blocks inside the window");
      }
      for (std::size_t k = 0; 2 * k + 1 < r.y_prime.size(); ++k) {
        const unsigned t0 = r.t[2 * k];
        const unsigned t1 = r.t[2 * k + 1];
        ZVec gp;
        if (increasing && !constant) {
          if (t0 >= t1) throw std::logic_error("t_k not increasing under (a)");
          gp = minus(scaled(ipow(p, t1 - t0), r.y_prime[2 * k + 1], mod), r.y_prime[2 * k], mod);
        } else {
          if (t0 != t1) throw std::logic_error("t_k not constant under (b)");
          gp = minus(r.y_prime[2 * k + 1], r.y_prime[2 * k], mod);
        }
        if (element_order(gp, mod) != ipow(p, t0 + m)) throw std::logic_error("o(g'_k) != p^(t_2k + m)");
        if (!subgroup_membership(x1, mod, scaled(ipow(p, t0), gp, mod)).member) {
          throw std::logic_error("p^t_2k g'_k not in X_1");
        }
        r.g_prime.push_back(std::move(gp));
      }
      d.certificate.push_back("built " + std::to_string(r.g_prime.size()) +
                              " elements g'_k; o(g'_k) = p^(t_2k + m) and p^(t_2k) g'_k in X_1 checked; orders " +
                              orders_to_string(r.g_prime, mod));

      std::optional<std::size_t> k2;
      for (std::size_t k = 0; k <= r.g_prime.size() / 2 && k < r.g_prime.size(); ++k) {
        if (meets_trivially(concat(slice(r.g_prime, k), x1), s, mod)) {
          k2 = k;
          break;
        }
      }
      if (!k2) {
        throw Error(ErrorCode::WindowInsufficient,
                    "case 2.2: no k <= " + std::to_string(r.g_prime.size() / 2) +
                        " with (Y'_k + X_1) meeting H_0 + <e_0> trivially");
      }
      r.case_tag = increasing && !constant ? "2.2(a)" : "2.2(b)";
      r.k = k2;
      r.remainder.a = slice(r.g_prime, *k2);
      r.remainder.h = x1;
      d.certificate.push_back("(Y'_k + X_1) meets H_0 + <e_0> trivially for k = " + std::to_string(*k2));
    }
  }

  Part summand{"summand", concat(r.h0, {r.e0}), "", {}};
  Part rest{"remainder", concat(r.remainder.a, r.remainder.h), "", {}};
  d.parts = {summand, rest};
  certify_direct_sum(d);
  const bool h_split = same_subgroup(concat(r.h0, r.remainder.h), in.h, mod);
  d.certificate.push_back(std::string("H = H_0 + H^1 ") + (h_split ? "holds" : "FAILS"));
  d.verified = d.verified && h_split;
  return r;
}

PeelChain peel_all(const PeelInput& in, std::size_t window, std::size_t max_steps) {
  PeelChain chain;
  chain.remainder = in;
  while (true) {
    if (chain.remainder.h.empty()) {
      chain.stop_reason = "H used up; the remaining g_i are summands with H_i = 0";
      break;
    }
    if (chain.remainder.a.empty()) {
      chain.stop_reason = "window exhausted: no g_i left";
      break;
    }
    if (chain.steps.size() >= max_steps) {
      chain.stop_reason = "step limit " + std::to_string(max_steps) + " reached";
      break;
    }
    try {
      PeelResult r = peel_summand(chain.remainder, window);
      chain.remainder = r.remainder;
      chain.steps.push_back(std::move(r));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowInsufficient) throw;
      chain.stop_reason = e.detail();
      break;
    }
  }
  return chain;
}

PurityReport purity_check(const Integer& p, const ZVec& moduli, const std::vector<ZVec>& a,
                          const std::vector<ZVec>& h) {
  Integer e = 1;
  for (const auto& m : moduli) {
    if (m == 0) throw Error(ErrorCode::ExpInfinite, "ambient of infinite exponent");
    e = std::max(e, Integer(ipow(p, valuation(m, p))));
  }
  const unsigned top = p_log(e, p);
  const std::vector<ZVec> g = concat(a, h);
  PurityReport out;
  for (unsigned l = 1; l <= top; ++l) {
    const Integer pl = ipow(p, l);
    std::vector<ZVec> al;
    std::vector<ZVec> gl;
    for (const auto& x : a) al.push_back(scaled(pl, x, moduli));
    for (const auto& x : g) gl.push_back(scaled(pl, x, moduli));
    const auto inter = a.empty() ? std::vector<ZVec>{} : subgroup_intersection(a, gl, moduli);
    const bool ok = inter.empty() || contains_all(al, inter, moduli);
    out.levels.push_back(ok);
    out.pure = out.pure && ok;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Finite-modulus coordinates of an ambient, for torsion computations.
struct TorsionView {
  std::vector<std::size_t> slots;
  ZVec moduli;

  explicit TorsionView(const ZVec& full) {
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (full[i] != 0) {
        slots.push_back(i);
        moduli.push_back(full[i]);
      }
    }
  }
  ZVec down(const ZVec& x) const {
    ZVec out;
    for (std::size_t s : slots) out.push_back(x[s]);
    return out;
  }
  ZVec up(const ZVec& y, std::size_t n) const {
    ZVec out = zeros(n);
    for (std::size_t i = 0; i < slots.size(); ++i) out[slots[i]] = y[i];
    return out;
  }
};

// p-primary part of a finite ambient: Z(p^a m') -> Z(p^a) by reduction, and
// back by the idempotent m' (m'^{-1} mod p^a).
struct PrimaryView {
  Integer p;
  std::vector<std::size_t> slots;
  ZVec moduli;
  std::vector<Integer> lift;
  ZVec full;
  std::vector<std::string> labels;

  PrimaryView(const Integer& prime, const Ambient& amb) : p(prime), full(amb.moduli) {
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (full[i] == 0) throw Error(ErrorCode::ExpInfinite, "coordinate of infinite order");
      const unsigned a = valuation(full[i], p);
      if (a == 0) continue;
      const Integer pa = ipow(p, a);
      const Integer rest = full[i] / pa;
      slots.push_back(i);
      moduli.push_back(pa);
      lift.push_back(rest * inverse_mod(rest, pa));
      labels.push_back(amb.labels[i]);
    }
  }
  ZVec down(const ZVec& x) const {
    ZVec out;
    for (std::size_t i = 0; i < slots.size(); ++i) out.push_back(mod_floor(x[slots[i]], moduli[i]));
    return out;
  }
  ZVec up(const ZVec& y) const {
    ZVec out = zeros(full.size());
    for (std::size_t i = 0; i < slots.size(); ++i) out[slots[i]] = mod_floor(y[i] * lift[i], full[slots[i]]);
    return out;
  }
  std::optional<std::size_t> index_of(std::size_t full_slot) const {
    auto it = std::find(slots.begin(), slots.end(), full_slot);
    if (it == slots.end()) return std::nullopt;
    return static_cast<std::size_t>(it - slots.begin());
  }
};

struct HData {
  std::vector<ZVec> gens;            // window generators
  bool is_basis = false;             // gens already independent cyclic generators
  std::vector<Integer> omega_orders; // tail cyclics, each repeated omega times
};

std::vector<ZVec> h_basis(const HData& h, const ZVec& mod) {
  if (h.is_basis) return h.gens;
  TorsionView tv(mod);
  std::vector<ZVec> small;
  for (const auto& x : h.gens) small.push_back(tv.down(x));
  std::vector<ZVec> out;
  for (const auto& b : subgroup_basis(small, tv.moduli).gens) out.push_back(tv.up(b, mod.size()));
  return out;
}

Integer exp_of(const HData& h, const ZVec& mod) {
  Integer e = 1;
  for (const auto& x : h.gens) e = lcm(e, element_order(x, mod));
  for (const auto& n : h.omega_orders) e = lcm(e, n);
  return e;
}

struct LambdaSplit {
  Part h0;
  Part x;
};

// Primary cyclic generators of H sorted into the finite classes (H_0) and the
// OMEGA classes (X).
LambdaSplit lambda_split(const std::vector<ZVec>& basis, const std::vector<Integer>& omega_orders, const ZVec& mod,
                         const std::optional<Integer>& only_not_p = std::nullopt) {
  LambdaSplit s{{"H0", {}, "", {}}, {"X", {}, "", {}}};
  std::set<std::pair<Integer, unsigned>> omega;
  for (const auto& n : omega_orders) {
    for (const auto& [q, a] : factorize(n)) {
      if (only_not_p && q == *only_not_p) continue;
      omega.insert({q, a});
      add_class(s.x.classes, q, a, true);
    }
  }
  for (const auto& b : basis) {
    for (auto& c : primary_components(b, mod)) {
      if (only_not_p && c.p == *only_not_p) continue;
      if (omega.count({c.p, c.a})) {
        s.x.gens.push_back(std::move(c.x));
      } else {
        add_class(s.h0.classes, c.p, c.a, false);
        s.h0.gens.push_back(std::move(c.x));
      }
    }
  }
  if (!s.x.classes.empty()) s.x.rule = "condition (Lambda): " + classes_to_string(s.x.classes);
  return s;
}

std::optional<std::size_t> first_block(const BlockGroup& g, CyclicOrder::Kind kind) {
  for (std::size_t j = 0; j < g.head_size(); ++j) {
    if (g.head()[j].e_order.kind == kind) return j;
  }
  if (g.tail().kind == TailRule::Kind::Const && g.tail().block.e_order.kind == kind) return g.head_size();
  return std::nullopt;
}

}  // namespace

CaseDispatch dispatch_case(const BlockGroup& g, const SubgroupSpec& hs, std::size_t window) {
  CaseDispatch out;
  const auto inf_block = first_block(g, CyclicOrder::Kind::Infinite);
  const auto pru_block = first_block(g, CyclicOrder::Kind::Prufer);

  // Window of blocks.
  std::size_t nb = g.finitely_generated() ? g.head_size() : std::max(window, g.head_size() + 1);
  for (const auto& x : hs.gens) {
    if (auto mb = x.max_block()) nb = std::max(nb, *mb + 1);
  }
  if (!g.finitely_generated() && g.tail().kind == TailRule::Kind::Geometric) {
    // Room for tail blocks whose e order reaches exp H.
    Order eh = exponent_h(g);
    Integer bound = 1;
    for (const auto& x : hs.gens) {
      Order o = order_of(g, x);
      if (o.is_infinite()) throw Error(ErrorCode::ExpInfinite, "H has an element of infinite order");
      bound = lcm(bound, *o.value);
    }
    if (hs.h_part && !eh.is_infinite()) bound = lcm(bound, *eh.value);
    unsigned need = 0;
    while (ipow(g.tail().p, g.tail().start_exp + need) < bound) ++need;
    nb = std::max(nb, g.head_size() + need + 2);
  }
  std::map<std::size_t, unsigned> depth;
  for (std::size_t j = 0; j < nb; ++j) {
    const Block b = g.block_at(j);
    if (!b.e_order.is_prufer()) continue;
    unsigned k = 1;
    for (const auto& x : hs.gens) {
      auto it = x.terms().find(j);
      if (it == x.terms().end()) continue;
      k = std::max(k, *log_exact(it->second.e.get_den(), b.e_order.value));
    }
    depth[j] = k;
  }
  std::vector<std::size_t> blocks(nb);
  std::iota(blocks.begin(), blocks.end(), 0);
  Coordinates coords(g, blocks, depth);
  const Ambient amb = Ambient::of(coords);
  const ZVec& mod = amb.moduli;
  const std::size_t dim = mod.size();

  // H in the window.
  HData h;
  if (hs.h_part) {
    h.is_basis = true;
    for (std::size_t j = 0; j < nb; ++j) {
      const Block b = g.block_at(j);
      if (b.h_spans_e) {
        if (!b.e_order.is_finite()) throw Error(ErrorCode::ExpInfinite, "H_" + std::to_string(j) + " = <e_j> is infinite");
        if (b.e_order.value > 1) h.gens.push_back(unit(dim, *coords.index_of(j, 0)));
      } else {
        for (std::size_t i = 0; i < b.h_orders.size(); ++i) {
          if (b.h_orders[i] > 1) h.gens.push_back(unit(dim, *coords.index_of(j, i + 1)));
        }
      }
    }
    switch (g.tail().kind) {
      case TailRule::Kind::None: break;
      case TailRule::Kind::Const: {
        const Block& b = g.tail().block;
        if (b.h_spans_e) {
          if (!b.e_order.is_finite()) throw Error(ErrorCode::ExpInfinite, "tail H = <e> is infinite");
          h.omega_orders.push_back(b.e_order.value);
        } else {
          h.omega_orders = b.h_orders;
        }
        break;
      }
      case TailRule::Kind::Geometric:
        if (g.tail().h_spans_e) throw Error(ErrorCode::ExpInfinite, "tail H = <e> has unbounded orders");
        h.omega_orders = g.tail().h_orders;
        break;
    }
    h.omega_orders.erase(std::remove(h.omega_orders.begin(), h.omega_orders.end(), Integer(1)), h.omega_orders.end());
  } else {
    for (const auto& x : hs.gens) {
      ZVec v = reduce(coords.flatten(x), mod);
      if (element_order(v, mod) == 0) throw Error(ErrorCode::ExpInfinite, "H has an element of infinite order");
      if (!is_zero(v)) h.gens.push_back(std::move(v));
    }
  }
  if (h.gens.empty() && h.omega_orders.empty()) throw Error(ErrorCode::InvalidParams, "H is trivial");
  const Integer eh = exp_of(h, mod);
  Decomposition& d = out.g0;
  d.ambient = amb;
  if (!g.finitely_generated()) d.window = nb;
  out.certificate.push_back("window: blocks 0.." + std::to_string(nb - 1) + ", exp H = " + eh.get_str());

  if (inf_block) {
    out.case_tag = "infinite-order";
    const ZVec z = unit(dim, *coords.index_of(*inf_block, 0));
    LambdaSplit ls = lambda_split(h_basis(h, mod), h.omega_orders, mod);
    out.certificate.push_back("G has e[" + std::to_string(*inf_block) +
                              "] of infinite order; G_0 = <g> + H is direct since H is torsion");
    out.certificate.push_back(std::string("X ") + (ls.x.classes.empty() ? "= 0 (H finite)" : "!= 0 (H infinite)"));
    d.parts = {Part{"Z", {z}, "", {}}, ls.h0, ls.x};
    out.blocks.push_back({z, ls.h0.gens});
    certify_direct_sum(d);
    return out;
  }

  if (pru_block) {
    out.case_tag = "prufer";
    const std::size_t zslot = *coords.index_of(*pru_block, 0);
    const Integer p = g.block_at(*pru_block).e_order.value;
    PruferSplitInput in;
    in.p = p;
    in.pi1_label = amb.labels[zslot];
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == zslot) continue;
      in.v_moduli.push_back(mod[i]);
      in.v_labels.push_back(amb.labels[i]);
    }
    for (const auto& x : h_basis(h, mod)) {
      PruferGen gen;
      gen.pi1 = Rational(x[zslot], mod[zslot]);
      gen.pi1.canonicalize();
      for (std::size_t i = 0; i < dim; ++i) {
        if (i != zslot) gen.v.push_back(x[i]);
      }
      in.gens.push_back(std::move(gen));
    }
    in.omega_orders = h.omega_orders;
    PruferSplit ps = prufer_split(in, window);
    out.certificate.push_back("G has a Prufer block e[" + std::to_string(*pru_block) + "], p = " + p.get_str());
    out.g0 = ps.decomposition;
    if (!g.finitely_generated()) out.g0.window = nb;
    out.blocks.push_back({unit(out.g0.ambient.moduli.size(), 0), ps.h0});
    return out;
  }

  if (!is_bounded(g)) {
    const Integer q = g.tail().p;
    const std::vector<ZVec> basis = h_basis(h, mod);
    // Tail e generators with order >= exp H, in increasing order.
    std::vector<ZVec> es;
    for (std::size_t j = g.head_size(); j < nb; ++j) {
      if (g.block_at(j).e_order.value >= eh) es.push_back(unit(dim, *coords.index_of(j, 0)));
    }
    if (es.size() < 2) throw Error(ErrorCode::WindowInsufficient, "fewer than two tail blocks of order >= exp H");
    if (eh % q != 0) {
      out.case_tag = "unbounded-torsion/free-prime";
      LambdaSplit ls = lambda_split(basis, h.omega_orders, mod);
      out.certificate.push_back("exp G_1 infinite through the prime " + q.get_str() + ", which does not divide exp H");
      Part first{"H0+<e0>", concat(ls.h0.gens, {es[0]}), "", ls.h0.classes};
      Part rest{"E", slice(es, 1), "e_i with increasing orders " + q.get_str() + "^s, H_i = 0 for i >= 1", {}};
      d.parts = {first, rest, ls.x};
      out.blocks.push_back({es[0], ls.h0.gens});
      for (std::size_t i = 1; i < es.size(); ++i) out.blocks.push_back({es[i], {}});
      certify_direct_sum(d);
      return out;
    }
    out.case_tag = "unbounded-torsion/peel";
    out.certificate.push_back("exp G_1 finite; unbounded prime " + q.get_str() + " divides exp H");
    LambdaSplit other = lambda_split(basis, h.omega_orders, mod, q);
    const PrimaryView pv(q, amb);
    PeelInput pin;
    pin.p = q;
    pin.moduli = pv.moduli;
    pin.labels = pv.labels;
    for (const auto& e : es) pin.a.push_back(pv.down(e));
    for (const auto& b : basis) {
      ZVec y = pv.down(b);
      if (!is_zero(y)) pin.h.push_back(std::move(y));
    }
    PeelChain chain = peel_all(pin, window);
    for (std::size_t s = 0; s < chain.steps.size(); ++s) {
      const PeelResult& st = chain.steps[s];
      std::vector<ZVec> hs_up;
      for (const auto& x : st.h0) hs_up.push_back(pv.up(x));
      if (s == 0) hs_up = concat(hs_up, other.h0.gens);
      out.blocks.push_back({pv.up(st.e0), hs_up});
      out.certificate.push_back("step " + std::to_string(s) + ": case " + st.case_tag + ", " + st.decomposition.label());
    }
    out.certificate.push_back("stop: " + chain.stop_reason);
    std::vector<ZVec> leftover;
    if (chain.remainder.h.empty()) {
      for (const auto& x : chain.remainder.a) out.blocks.push_back({pv.up(x), {}});
    } else {
      for (const auto& x : concat(chain.remainder.a, chain.remainder.h)) leftover.push_back(pv.up(x));
    }
    if (chain.steps.empty() && !other.h0.gens.empty()) {
      leftover = concat(leftover, other.h0.gens);
    }
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
      d.parts.push_back(Part{"block" + std::to_string(i), concat(out.blocks[i].second, {out.blocks[i].first}), "", {}});
    }
    if (!leftover.empty()) d.parts.push_back(Part{"remainder", leftover, "unpeeled part of the window", {}});
    d.parts.push_back(other.x);
    certify_direct_sum(d);
    return out;
  }

  out.case_tag = "bounded";
  if (!contains_Z_expH_omega(g, eh)) {
    throw Error(ErrorCode::CriterionFail, "G contains no subgroup Z(" + eh.get_str() + ")^(omega)");
  }
  const std::vector<ZVec> basis = h_basis(h, mod);
  struct PerPrime {
    PrimaryView view;
    std::vector<ZVec> es;                  // e_k for this prime, in the view
    std::vector<std::vector<ZVec>> hs;     // H_k for this prime, in the view
    std::vector<ZVec> leftover;
  };
  std::vector<PerPrime> primes;
  for (const auto& [p, c] : factorize(eh)) {
    PerPrime pp{PrimaryView(p, amb), {}, {}, {}};
    PeelInput pin;
    pin.p = p;
    pin.moduli = pp.view.moduli;
    pin.labels = pp.view.labels;
    for (std::size_t i = 0; i < pin.moduli.size(); ++i) {
      const unsigned a = valuation(pin.moduli[i], p);
      if (a >= c) pin.a.push_back(unit(pin.moduli.size(), i, ipow(p, a - c)));
    }
    for (const auto& b : basis) {
      ZVec y = pp.view.down(b);
      if (!is_zero(y)) pin.h.push_back(std::move(y));
    }
    if (pin.a.empty()) throw Error(ErrorCode::WindowInsufficient, "no summand of order >= " + p.get_str() + "^" +
                                                                      std::to_string(c) + " in the window");
    PeelChain chain = peel_all(pin, window);
    for (const auto& st : chain.steps) {
      pp.es.push_back(st.e0);
      pp.hs.push_back(st.h0);
      out.certificate.push_back("p = " + p.get_str() + ": case " + st.case_tag + ", " + st.decomposition.label());
    }
    out.certificate.push_back("p = " + p.get_str() + " stop: " + chain.stop_reason);
    if (chain.remainder.h.empty()) {
      for (const auto& x : chain.remainder.a) {
        pp.es.push_back(x);
        pp.hs.push_back({});
      }
    } else {
      pp.leftover = concat(chain.remainder.a, chain.remainder.h);
    }
    primes.push_back(std::move(pp));
  }
  std::size_t kmax = primes.front().es.size();
  for (const auto& pp : primes) kmax = std::min(kmax, pp.es.size());
  std::vector<ZVec> leftover;
  for (std::size_t k = 0; k < kmax; ++k) {
    ZVec e = zeros(dim);
    std::vector<ZVec> hk;
    for (const auto& pp : primes) {
      e = plus(e, pp.view.up(pp.es[k]), mod);
      for (const auto& x : pp.hs[k]) hk.push_back(pp.view.up(x));
    }
    out.blocks.push_back({e, hk});
  }
  for (const auto& pp : primes) {
    for (std::size_t k = kmax; k < pp.es.size(); ++k) {
      leftover.push_back(pp.view.up(pp.es[k]));
      for (const auto& x : pp.hs[k]) leftover.push_back(pp.view.up(x));
    }
    for (const auto& x : pp.leftover) leftover.push_back(pp.view.up(x));
  }
  out.certificate.push_back("e_k = sum over primes of the peeled e_k^p, o(e_k) = exp H; X = 0 since H is countable");
  for (std::size_t i = 0; i < out.blocks.size(); ++i) {
    d.parts.push_back(Part{"block" + std::to_string(i), concat(out.blocks[i].second, {out.blocks[i].first}), "", {}});
  }
  if (!leftover.empty()) d.parts.push_back(Part{"remainder", leftover, "unpeeled part of the window", {}});
  certify_direct_sum(d);
  return out;
}

// ---------------------------------------------------------------------------

bool contains_Z_expH_omega(const BlockGroup& g, const Integer& b) {
  if (!is_bounded(g)) throw Error(ErrorCode::Unbounded, "containment test needs a bounded group");
  if (b < 1) throw Error(ErrorCode::InvalidParams, "target order must be positive");
  const PrimaryClasses classes = primary_classes(g);
  for (const auto& [p, c] : factorize(b)) {
    bool omega = false;
    for (const auto& [key, card] : classes) {
      if (key.first == p && key.second >= c && card.omega) omega = true;
    }
    if (!omega) return false;
  }
  return true;
}

std::optional<Integer> multiple_image_order(const BlockGroup& g, const Integer& m) {
  if (!is_bounded(g)) throw Error(ErrorCode::Unbounded, "image order needs a bounded group");
  Integer total = 1;
  auto block_image = [&](const Block& b) {
    Integer o = b.e_order.value / gcd(b.e_order.value, m);
    for (const auto& n : b.h_orders) o *= n / gcd(n, m);
    return o;
  };
  for (const auto& b : g.head()) total *= block_image(b);
  if (g.tail().kind == TailRule::Kind::Const && block_image(g.tail().block) > 1) return std::nullopt;
  return total;
}

AdmissibleReport minap_admissible(const BlockGroup& g) {
  if (!is_bounded(g)) throw Error(ErrorCode::Unbounded, "admissibility test needs a bounded group");
  if (g.finitely_generated()) throw Error(ErrorCode::FiniteGroup, "group is finite");
  AdmissibleReport r;
  const Integer e = *exponent(g).value;
  for (const auto& [p, inv] : ulm_kaplansky_leading(g)) {
    if (inv.multiplicity.omega) continue;
    r.p = p;
    r.m = e / p;
    r.image_order = multiple_image_order(g, *r.m);
    r.detail = "leading invariant of Z(" + p.get_str() + "^" + std::to_string(inv.exponent) + ") is " +
               inv.multiplicity.to_string() + "; m = " + e.get_str() + "/" + p.get_str() + " = " + r.m->get_str() +
               " maps G onto a finite group of order " + (r.image_order ? r.image_order->get_str() : "INFINITE");
    return r;
  }
  r.admissible = true;
  r.detail = "every leading invariant is OMEGA";
  return r;
}

}  // namespace minap
