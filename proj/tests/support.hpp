#pragma once

// Brute-force oracles and small builders shared by the test binaries. Nothing
// here calls into the normal-form code it is used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "minap/core_groups.hpp"
#include "minap/tseq.hpp"
#include "minap/zlattice.hpp"

namespace testsupport {

using minap::Block;
using minap::BlockGroup;
using minap::CyclicOrder;
using minap::Element;
using minap::Integer;
using minap::Rational;
using minap::TailRule;
using minap::ZVec;

inline Block blk(long e, std::vector<long> h = {}) {
  Block b;
  b.e_order = CyclicOrder::finite(e);
  for (long x : h) b.h_orders.emplace_back(x);
  return b;
}

inline Block blk_z(std::vector<long> h = {}) {
  Block b;
  b.e_order = CyclicOrder::infinite();
  for (long x : h) b.h_orders.emplace_back(x);
  return b;
}

inline Block blk_prufer(long p, std::vector<long> h = {}) {
  Block b;
  b.e_order = CyclicOrder::prufer(p);
  for (long x : h) b.h_orders.emplace_back(x);
  return b;
}

inline Block blk_spans(long e) {
  Block b = blk(e);
  b.h_spans_e = true;
  return b;
}

// (Z(4) + Z(2))^(omega) with H_j the Z(2) part.
inline BlockGroup z4z2() { return minap::make_group({}, TailRule::constant(blk(4, {2}))); }

inline std::vector<std::int64_t> to_small(const ZVec& v) {
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

inline ZVec from_small(const std::vector<std::int64_t>& v) {
  ZVec out;
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

inline ZVec reduce_small(ZVec v, const ZVec& moduli) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (moduli[i] != 0) {
      v[i] %= moduli[i];
      if (v[i] < 0) v[i] += moduli[i];
    }
  }
  return v;
}

// All elements of <gens> in a finite ambient, by closure under adding generators.
inline std::set<std::vector<std::int64_t>> span(const std::vector<ZVec>& gens, const ZVec& moduli) {
  std::set<std::vector<std::int64_t>> seen;
  std::vector<ZVec> frontier{ZVec(moduli.size(), 0)};
  seen.insert(to_small(frontier[0]));
  while (!frontier.empty()) {
    std::vector<ZVec> next;
    for (const auto& x : frontier) {
      for (const auto& gen : gens) {
        ZVec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + gen[i];
        y = reduce_small(y, moduli);
        if (seen.insert(to_small(y)).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

inline bool span_equal(const std::vector<ZVec>& a, const std::vector<ZVec>& b, const ZVec& moduli) {
  return span(a, moduli) == span(b, moduli);
}

// Every element of the finite ambient.
inline std::vector<ZVec> all_elements(const ZVec& moduli) {
  std::vector<ZVec> out{ZVec()};
  for (const auto& m : moduli) {
    std::vector<ZVec> next;
    for (const auto& x : out) {
      for (long c = 0; c < m.get_si(); ++c) {
        ZVec y = x;
        y.emplace_back(c);
        next.push_back(y);
      }
    }
    out = std::move(next);
  }
  return out;
}

// Order of x by repeated addition.
inline long brute_order(const ZVec& x, const ZVec& moduli) {
  ZVec y = reduce_small(x, moduli);
  const ZVec zero(x.size(), 0);
  long n = 1;
  ZVec acc = y;
  while (acc != zero) {
    ++n;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += y[i];
    acc = reduce_small(acc, moduli);
  }
  return n;
}

// Naive independence: no nontrivial relation sum c_i x_i = 0 with some c_i x_i != 0.
inline bool brute_independent(const std::vector<ZVec>& xs, const ZVec& moduli) {
  std::vector<long> orders;
  for (const auto& x : xs) orders.push_back(brute_order(x, moduli));
  std::vector<long> c(xs.size(), 0);
  const ZVec zero(moduli.size(), 0);
  while (true) {
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == orders[i]) c[i++] = 0;
    if (i == c.size()) return true;
    ZVec sum(moduli.size(), 0);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += c[j] * xs[j][t];
    }
    if (reduce_small(sum, moduli) == zero) return false;
  }
}

// A(k, m) over the prefix m..n by direct recursion over index sets and
// coefficients, keyed by the canonical element string.
inline std::set<std::string> brute_akm(const minap::TSeq& seq, unsigned k, std::size_t m, std::size_t n) {
  const BlockGroup& g = seq.group();
  std::vector<Element> terms;
  for (std::size_t r = m; r <= n; ++r) terms.push_back(seq.term(r));
  std::set<std::string> out{Element().key()};
  std::function<void(std::size_t, long, const Element&)> rec = [&](std::size_t from, long left, const Element& acc) {
    for (std::size_t r = from; r < terms.size(); ++r) {
      for (long c = 1; c <= left; ++c) {
        for (int sign : {1, -1}) {
          const Element next = minap::add(g, acc, minap::smul(g, Integer(sign * c), terms[r]));
          out.insert(next.key());
          rec(r + 1, left - c, next);
        }
      }
    }
  };
  rec(0, static_cast<long>(k) + 1, Element());
  return out;
}

inline std::set<std::string> keys(const std::vector<Element>& xs) {
  std::set<std::string> out;
  for (const auto& x : xs) out.insert(x.key());
  return out;
}

}  // namespace testsupport
