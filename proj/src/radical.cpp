#include "minap/radical.hpp"

#include <algorithm>
#include <cstdint>

namespace minap {

const char* sd_kind_name(SdKind kind) {
  switch (kind) {
    case SdKind::In: return "IN";
    case SdKind::NotIn: return "NOT_IN";
    case SdKind::Unknown: return "UNKNOWN";
  }
  return "?";
}

const char* radical_tag_name(RadicalTag tag) {
  switch (tag) {
    case RadicalTag::EqualsH: return "EQUALS_H";
    case RadicalTag::Minap: return "MINAP";
    case RadicalTag::Other: return "OTHER";
  }
  return "?";
}

namespace {

// Index k of b_k = h^j_{i+1} in the block-major enumeration.
std::optional<std::size_t> b_index_of(const TriangularParams& p, std::size_t j, std::size_t i) {
  if (p.g.m() && j >= *p.g.m()) return std::nullopt;
  std::size_t k = 0;
  for (std::size_t b = 0; b < j; ++b) k += p.g.block_at(b).h_rank();
  return k + i;
}

// Pairing values of a finite-order character lie in (1/exp)Z/Z of its
// support; convergence to 0 is then eventual vanishing.
void assert_bounded_denominators(const BlockGroup& g, const Character& chi) {
  for (const auto& [j, c] : chi.coords()) {
    Order e = block_exponent(g.block_at(j));
    if (e.is_infinite()) throw Error(ErrorCode::Unsupported, "character on a block of infinite exponent");
    Integer d = c.eps.denominator();
    for (const auto& eta : c.etas) d = lcm(d, eta.denominator());
    if (*e.value % d != 0) {
      throw Error(ErrorCode::InvalidSpec, "character denominator does not divide exp of block " + std::to_string(j));
    }
  }
}

}  // namespace

SdVerdict sd_member(const TriangularParams& p, const Character& chi, std::size_t window) {
  SdVerdict v;
  assert_bounded_denominators(p.g, chi);
  const auto support = chi.support();
  const std::size_t bound = support.empty() ? 0 : support.back();

  // Empirical evaluation along the prefix.
  v.prefix_len = 2 * window + 2;
  for (std::size_t n = 0; n < v.prefix_len; ++n) {
    if (!pair(p.g, chi, triangular_term(p, n)).is_zero()) v.last_nonzero = n;
  }

  if (chi.is_trivial()) {
    v.kind = SdKind::In;
    v.certificate = "trivial character";
    return v;
  }
  std::vector<std::size_t> missing;
  for (std::size_t j : support) {
    const std::size_t a = p.g.block_at(j).h_rank();
    for (std::size_t i = 0; i < a; ++i) {
      auto k = b_index_of(p, j, i);
      if (!k) continue;
      if (pair(p.g, chi, h_gen(p.g, j, i)).is_zero()) continue;
      auto rec = verify_recurrence(p, *k, window, bound);
      if (rec.empty()) {
        missing.push_back(*k);
        continue;
      }
      v.kind = SdKind::NotIn;
      v.basis_index = *k;
      v.recurrence = rec;
      v.certificate = "pair(b_" + std::to_string(*k) + ", chi) = " + pair(p.g, chi, h_gen(p.g, j, i)).to_string() +
                      " != 0 and d_{2n+1} = b_" + std::to_string(*k) + " + (e part beyond block " +
                      std::to_string(bound) + ") for " + std::to_string(rec.size()) + " values n <= " +
                      std::to_string(window) + ", the last n = " + std::to_string(rec.back());
      return v;
    }
  }
  if (!missing.empty()) {
    v.kind = SdKind::Unknown;
    v.certificate = "b_" + std::to_string(missing.front()) + " pairs nontrivially but no odd term within n <= " +
                    std::to_string(window) + " carries it beyond block " + std::to_string(bound);
    return v;
  }
  v.kind = SdKind::In;
  v.certificate = "chi kills every b_k in its support blocks " + std::to_string(support.front()) + ".." +
                  std::to_string(bound) +
                  "; even terms and the e parts of odd terms eventually leave those blocks";
  return v;
}

namespace {

std::vector<ZVec> block_coords(const BlockGroup& g, std::size_t j, const std::vector<Element>& xs) {
  std::vector<ZVec> out;
  for (const auto& x : xs) out.push_back(block_element_coords(g, j, x));
  return out;
}

}  // namespace

RadicalResult radical_of(const TriangularParams& p, std::size_t bound, std::size_t window) {
  RadicalResult res;
  const BlockGroup& g = p.g;
  bool all_h = true;
  bool all_g = true;
  std::vector<std::string> unknown;
  for (std::size_t j = 0; j <= bound; ++j) {
    const ZVec m = block_moduli(g, j);
    Integer size = 1;
    for (const auto& x : m) size *= x;
    std::vector<Character> in_chars;
    if (size <= 4096) {
      const std::size_t total = to_i64_checked(size);
      for (std::size_t code = 0; code < total; ++code) {
        ZVec c(m.size());
        std::size_t rest = code;
        for (std::size_t i = 0; i < m.size(); ++i) {
          const std::size_t mi = to_i64_checked(m[i]);
          c[i] = static_cast<unsigned long>(rest % mi);
          rest /= mi;
        }
        Character chi = block_character(g, j, c);
        SdVerdict v = sd_member(p, chi, window);
        ++res.characters_checked;
        if (v.kind == SdKind::In) in_chars.push_back(chi);
        if (v.kind == SdKind::Unknown) unknown.push_back("block " + std::to_string(j) + ": " + v.certificate);
      }
    } else {
      res.enumerated = false;
      in_chars = annihilator_basis(g, j, h_part_generators(g, j));
    }
    std::vector<Element> rad = annihilator_in_block(g, j, in_chars);
    res.blocks[j] = rad;
    const auto rad_c = block_coords(g, j, rad);
    const auto h_c = block_coords(g, j, h_part_generators(g, j));
    std::vector<ZVec> full;
    for (std::size_t i = 0; i < m.size(); ++i) {
      ZVec unit(m.size(), 0);
      unit[i] = 1;
      full.push_back(unit);
    }
    all_h = all_h && same_subgroup(rad_c, h_c, m);
    all_g = all_g && same_subgroup(rad_c, full, m);
  }
  if (!unknown.empty()) {
    res.tag = RadicalTag::Other;
    res.description = "undecided characters, " + unknown.front();
  } else if (all_g) {
    res.tag = RadicalTag::Minap;
    res.description = "radical is all of blocks 0.." + std::to_string(bound);
  } else if (all_h) {
    res.tag = RadicalTag::EqualsH;
    res.description = "radical equals H_0 + ... + H_" + std::to_string(bound) + " (per-block certified)";
  } else {
    res.tag = RadicalTag::Other;
    res.description = "radical differs from H on some block <= " + std::to_string(bound);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace {

struct FiniteGroupView {
  std::vector<std::int64_t> mod;
  std::vector<std::int64_t> weight;  // L / m_i
  std::int64_t lcm = 1;
  std::size_t size = 1;

  explicit FiniteGroupView(const ZVec& moduli) {
    Integer l = 1;
    Integer s = 1;
    for (const auto& m : moduli) {
      if (m < 1) throw Error(ErrorCode::InvalidParams, "oracle needs finite cyclic factors");
      l = minap::lcm(l, m);
      s *= m;
    }
    if (s > 10000) throw Error(ErrorCode::InvalidParams, "oracle group has " + s.get_str() + " > 10^4 elements");
    lcm = to_i64_checked(l);
    size = to_i64_checked(s);
    for (const auto& m : moduli) {
      mod.push_back(to_i64_checked(m));
      weight.push_back(lcm / mod.back());
    }
  }

  std::vector<std::int64_t> decode(std::size_t code) const {
    std::vector<std::int64_t> c(mod.size());
    for (std::size_t i = 0; i < mod.size(); ++i) {
      c[i] = static_cast<std::int64_t>(code % mod[i]);
      code /= mod[i];
    }
    return c;
  }

  std::int64_t pairing(const std::vector<std::int64_t>& chi, const std::vector<std::int64_t>& x) const {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < mod.size(); ++i) acc = (acc + chi[i] * x[i] % lcm * weight[i]) % lcm;
    return acc;
  }
};

ZVec to_zvec(const std::vector<std::int64_t>& v) {
  ZVec out;
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

OracleResult oracle_kernel(const OracleInput& in, bool parallel) {
  FiniteGroupView view(in.moduli);
  std::vector<ZVec> prefix;
  for (const auto& x : in.prefix) {
    if (x.size() != in.moduli.size()) throw Error(ErrorCode::SupportMismatch, "prefix term of wrong length");
    prefix.push_back(reduce(x, in.moduli));
  }
  OracleResult out;
  if (in.tail_start) {
    out.tail_start = *in.tail_start;
    if (out.tail_start >= prefix.size()) throw Error(ErrorCode::InvalidParams, "tail_start beyond the prefix");
  } else {
    const std::size_t len = prefix.size();
    bool found = false;
    for (std::size_t per = 1; 3 * per <= len && !found; ++per) {
      for (std::size_t t = 0; t + 3 * per <= len && !found; ++t) {
        bool ok = true;
        for (std::size_t i = t; i + per < len && ok; ++i) ok = prefix[i] == prefix[i + per];
        if (ok) {
          out.tail_start = t;
          out.period = per;
          found = true;
        }
      }
    }
    if (!found) {
      throw Error(ErrorCode::NotEventuallyPeriodic, "prefix of " + std::to_string(len) +
                                                        " terms shows no period repeated three times");
    }
  }
  std::vector<ZVec> tail(prefix.begin() + out.tail_start,
                         out.period ? prefix.begin() + out.tail_start + *out.period : prefix.end());
  std::sort(tail.begin(), tail.end());
  tail.erase(std::unique(tail.begin(), tail.end()), tail.end());
  std::vector<std::vector<std::int64_t>> tail64;
  for (const auto& x : tail) {
    std::vector<std::int64_t> v;
    for (const auto& c : x) v.push_back(to_i64_checked(c));
    tail64.push_back(std::move(v));
  }

  const std::size_t n = view.size;
  std::vector<char> in_sd(n, 0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t code = 0; code < n; ++code) {
    const auto chi = view.decode(code);
    bool ok = true;
    for (const auto& x : tail64) {
      if (view.pairing(chi, x) != 0) {
        ok = false;
        break;
      }
    }
    in_sd[code] = ok;
  }
  std::vector<std::vector<std::int64_t>> chars;
  for (std::size_t code = 0; code < n; ++code) {
    if (in_sd[code]) chars.push_back(view.decode(code));
  }
  std::vector<char> in_rad(n, 0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t code = 0; code < n; ++code) {
    const auto x = view.decode(code);
    bool ok = true;
    for (const auto& chi : chars) {
      if (view.pairing(chi, x) != 0) {
        ok = false;
        break;
      }
    }
    in_rad[code] = ok;
  }
  for (std::size_t code = 0; code < n; ++code) {
    if (in_rad[code]) out.radical.push_back(to_zvec(view.decode(code)));
  }
  for (const auto& chi : chars) out.sd_chars.push_back(to_zvec(chi));
  std::sort(out.radical.begin(), out.radical.end());
  std::sort(out.sd_chars.begin(), out.sd_chars.end());
  return out;
}

}  // namespace

OracleResult oracle_radical(const OracleInput& in) { return oracle_kernel(in, true); }
OracleResult oracle_radical_serial(const OracleInput& in) { return oracle_kernel(in, false); }

}  // namespace minap
