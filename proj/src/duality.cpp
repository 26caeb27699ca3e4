#include "minap/duality.hpp"

#include <algorithm>

namespace minap {

QmodZ::QmodZ(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  v_ = frac(q);
}

std::vector<std::size_t> Character::support() const {
  std::vector<std::size_t> s;
  for (const auto& [j, c] : coords_) s.push_back(j);
  return s;
}

std::string Character::key() const {
  std::string out;
  for (const auto& [j, c] : coords_) {
    out += std::to_string(j) + ":" + c.eps.to_string();
    for (const auto& e : c.etas) out += "," + e.to_string();
    out += ";";
  }
  return out;
}

Character make_character(const BlockGroup& g, std::map<std::size_t, CharCoord> coords) {
  Character chi;
  for (auto& [j, c] : coords) {
    Block b = g.block_at(j);
    const std::size_t a = b.h_spans_e ? 0 : b.h_orders.size();
    if (c.etas.empty()) c.etas.assign(a, QmodZ());
    if (c.etas.size() != a) {
      throw Error(ErrorCode::InvalidSpec, "character on block " + std::to_string(j) + " needs " +
                                              std::to_string(a) + " H values");
    }
    switch (b.e_order.kind) {
      case CyclicOrder::Kind::Finite:
        if (b.e_order.value % c.eps.denominator() != 0) {
          throw Error(ErrorCode::InvalidSpec, "eps denominator must divide the e order on block " + std::to_string(j));
        }
        break;
      case CyclicOrder::Kind::Infinite: break;
      case CyclicOrder::Kind::Prufer:
        if (!c.eps.is_zero()) {
          throw Error(ErrorCode::Unsupported, "characters on Prufer coordinates are not represented");
        }
        break;
    }
    bool trivial = c.eps.is_zero();
    for (std::size_t i = 0; i < a; ++i) {
      if (b.h_orders[i] % c.etas[i].denominator() != 0) {
        throw Error(ErrorCode::InvalidSpec, "eta denominator must divide the h order on block " + std::to_string(j));
      }
      if (!c.etas[i].is_zero()) trivial = false;
    }
    if (!trivial) chi.coords_.emplace(j, std::move(c));
  }
  return chi;
}

QmodZ pair(const BlockGroup& g, const Character& chi, const Element& x) {
  (void)g;
  Rational acc = 0;
  const auto& xs = x.terms();
  for (const auto& [j, c] : chi.coords()) {
    auto it = xs.find(j);
    if (it == xs.end()) continue;
    acc += c.eps.value() * it->second.e;
    for (std::size_t i = 0; i < c.etas.size(); ++i) acc += c.etas[i].value() * Rational(it->second.h[i]);
  }
  return QmodZ(acc);
}

Character char_add(const BlockGroup& g, const Character& a, const Character& b) {
  std::map<std::size_t, CharCoord> coords = a.coords();
  for (const auto& [j, c] : b.coords()) {
    auto it = coords.find(j);
    if (it == coords.end()) {
      coords.emplace(j, c);
      continue;
    }
    it->second.eps = it->second.eps + c.eps;
    for (std::size_t i = 0; i < c.etas.size(); ++i) it->second.etas[i] = it->second.etas[i] + c.etas[i];
  }
  return make_character(g, std::move(coords));
}

Character char_neg(const BlockGroup& g, const Character& a) {
  std::map<std::size_t, CharCoord> coords = a.coords();
  for (auto& [j, c] : coords) {
    c.eps = -c.eps;
    for (auto& e : c.etas) e = -e;
  }
  return make_character(g, std::move(coords));
}

Integer character_order(const Character& chi) {
  Integer o = 1;
  for (const auto& [j, c] : chi.coords()) {
    o = lcm(o, c.eps.denominator());
    for (const auto& e : c.etas) o = lcm(o, e.denominator());
  }
  return o;
}

ZVec block_moduli(const BlockGroup& g, std::size_t j) {
  Block b = g.block_at(j);
  if (!b.e_order.is_finite()) throw Error(ErrorCode::Unsupported, "block " + std::to_string(j) + " is not finite");
  ZVec m{b.e_order.value};
  if (!b.h_spans_e) m.insert(m.end(), b.h_orders.begin(), b.h_orders.end());
  return m;
}

Character block_character(const BlockGroup& g, std::size_t j, const ZVec& coords) {
  ZVec m = block_moduli(g, j);
  if (coords.size() != m.size()) throw Error(ErrorCode::SupportMismatch, "block character length mismatch");
  CharCoord c{QmodZ(coords[0], m[0]), {}};
  for (std::size_t i = 1; i < m.size(); ++i) c.etas.emplace_back(coords[i], m[i]);
  return make_character(g, {{j, c}});
}

ZVec block_character_coords(const BlockGroup& g, std::size_t j, const Character& chi) {
  ZVec m = block_moduli(g, j);
  ZVec out(m.size(), 0);
  auto it = chi.coords().find(j);
  if (it == chi.coords().end()) return out;
  auto scaled = [](const QmodZ& q, const Integer& mod) {
    Rational r = q.value() * Rational(mod);
    return Integer(r.get_num() / r.get_den());
  };
  out[0] = scaled(it->second.eps, m[0]);
  for (std::size_t i = 1; i < m.size(); ++i) out[i] = scaled(it->second.etas[i - 1], m[i]);
  return out;
}

Element block_element(const BlockGroup& g, std::size_t j, const ZVec& coords) {
  ZVec m = block_moduli(g, j);
  if (coords.size() != m.size()) throw Error(ErrorCode::SupportMismatch, "block element length mismatch");
  Term t{Rational(coords[0]), ZVec(coords.begin() + 1, coords.end())};
  return make_element(g, {{j, t}});
}

ZVec block_element_coords(const BlockGroup& g, std::size_t j, const Element& x) {
  ZVec m = block_moduli(g, j);
  ZVec out(m.size(), 0);
  auto it = x.terms().find(j);
  if (it == x.terms().end()) return out;
  out[0] = it->second.e.get_num();
  for (std::size_t i = 1; i < m.size(); ++i) out[i] = it->second.h[i - 1];
  return out;
}

std::vector<Element> h_part_generators(const BlockGroup& g, std::size_t j) {
  Block b = g.block_at(j);
  std::vector<Element> out;
  for (std::size_t i = 0; i < b.h_rank(); ++i) out.push_back(h_gen(g, j, i));
  return out;
}

namespace {

std::vector<ZVec> dedupe_nonzero(std::vector<ZVec> vs, const ZVec& moduli) {
  std::vector<ZVec> out;
  for (auto& v : vs) {
    ZVec r = reduce(v, moduli);
    if (!is_zero(r) && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Character> annihilator_basis(const BlockGroup& g, std::size_t j, const std::vector<Element>& gens) {
  const ZVec m = block_moduli(g, j);
  std::vector<ZVec> sols;
  if (gens.empty()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      ZVec unit(m.size(), 0);
      unit[i] = 1;
      sols.push_back(unit);
    }
  } else {
    Integer l = 1;
    for (const auto& x : m) l = lcm(l, x);
    IntMatrix a(gens.size(), m.size());
    for (std::size_t r = 0; r < gens.size(); ++r) {
      for (const auto& [blk, t] : gens[r].terms()) {
        if (blk != j) throw Error(ErrorCode::SupportMismatch, "generator outside block " + std::to_string(j));
      }
      ZVec x = block_element_coords(g, j, gens[r]);
      for (std::size_t i = 0; i < m.size(); ++i) a.at(r, i) = x[i] * (l / m[i]);
    }
    sols = congruence_kernel(a, ZVec(gens.size(), l));
  }
  std::vector<Character> out;
  for (const auto& v : dedupe_nonzero(sols, m)) out.push_back(block_character(g, j, v));
  return out;
}

std::map<std::size_t, std::vector<Character>> annihilator_basis(
    const BlockGroup& g, const std::map<std::size_t, std::vector<Element>>& h_spec) {
  std::map<std::size_t, std::vector<Character>> out;
  for (const auto& [j, gens] : h_spec) out[j] = annihilator_basis(g, j, gens);
  return out;
}

std::vector<Element> annihilator_in_block(const BlockGroup& g, std::size_t j, const std::vector<Character>& chars) {
  const ZVec m = block_moduli(g, j);
  std::vector<ZVec> sols;
  std::vector<const CharCoord*> rows;
  for (const auto& chi : chars) {
    auto it = chi.coords().find(j);
    if (it != chi.coords().end()) rows.push_back(&it->second);
  }
  if (rows.empty()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      ZVec unit(m.size(), 0);
      unit[i] = 1;
      sols.push_back(unit);
    }
  } else {
    Integer d = 1;
    for (const auto* c : rows) {
      d = lcm(d, c->eps.denominator());
      for (const auto& e : c->etas) d = lcm(d, e.denominator());
    }
    IntMatrix a(rows.size(), m.size());
    auto scaled = [&](const QmodZ& q) {
      Rational r = q.value() * Rational(d);
      return Integer(r.get_num() / r.get_den());
    };
    for (std::size_t r = 0; r < rows.size(); ++r) {
      a.at(r, 0) = scaled(rows[r]->eps);
      for (std::size_t i = 1; i < m.size(); ++i) a.at(r, i) = scaled(rows[r]->etas[i - 1]);
    }
    sols = congruence_kernel(a, ZVec(rows.size(), d));
  }
  std::vector<Element> out;
  for (const auto& v : dedupe_nonzero(sols, m)) out.push_back(block_element(g, j, v));
  return out;
}

std::map<std::size_t, std::vector<Element>> annihilator_in_G(
    const BlockGroup& g, const std::map<std::size_t, std::vector<Character>>& chars) {
  std::map<std::size_t, std::vector<Element>> out;
  for (const auto& [j, cs] : chars) out[j] = annihilator_in_block(g, j, cs);
  return out;
}

}  // namespace minap
