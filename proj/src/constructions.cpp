#include "minap/constructions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace minap {

std::size_t tri_S(std::size_t n) { return n * (n + 1) / 2; }

std::size_t tri_t(std::size_t n) {
  // Start from the floating estimate and correct it exactly.
  std::size_t t = static_cast<std::size_t>((std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0);
  while (tri_S(t) > n) --t;
  while (tri_S(t + 1) <= n) ++t;
  return t;
}

std::size_t tri_mu(std::size_t n) { return tri_S(tri_t(n)); }

std::size_t mod_or_zero(std::size_t n, std::size_t d) { return d <= 1 ? 0 : n % d; }

TableReport check_tables(std::size_t n_max) {
  TableReport r;
  for (std::size_t n = 1; n <= n_max; ++n) {
    ++r.checked;
    const std::size_t t = tri_t(n);
    const std::size_t mu = tri_S(t);
    if (!r.table_failure && !(mu <= n && n < tri_S(t + 1) && mod_or_zero(n, mu) < mu)) r.table_failure = n;
    if (n <= 3) continue;
    if (!r.mod_below_n && !(mod_or_zero(n, mu) < n)) r.mod_below_n = n;
    if (!r.n_below_s_prev && !(n < tri_S(n - 1))) r.n_below_s_prev = n;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Triangular sequence

namespace {

Integer e_order_value(const BlockGroup& g, std::size_t j) {
  Block b = g.block_at(j);
  if (!b.e_order.is_finite()) {
    throw Error(ErrorCode::InvalidParams, "e_" + std::to_string(j) + " must have finite order");
  }
  return b.e_order.value;
}

}  // namespace

TriangularParams TriangularParams::from_group(const BlockGroup& g) {
  TriangularParams p;
  p.g = g;
  if (g.finitely_generated()) throw Error(ErrorCode::InvalidParams, "the sequence needs infinitely many blocks");
  for (std::size_t j = 0; j <= g.head().size(); ++j) e_order_value(g, j);
  Order eh = exponent_h(g);
  if (eh.is_infinite()) throw Error(ErrorCode::InvalidParams, "H must have finite exponent");
  p.exp_h = *eh.value;
  if (g.m()) {
    p.tcase = Case::FiniteM;
    for (std::size_t j = 0; j < *g.m(); ++j) p.c += g.block_at(j).h_rank();
    if (p.c == 0) throw Error(ErrorCode::InvalidParams, "H is trivial, b_0 does not exist");
  } else {
    p.tcase = Case::InfiniteM;
  }
  for (std::size_t j = 0; j < g.m().value_or(g.head().size() + 1); ++j) {
    if (g.block_at(j).h_trivial()) {
      throw Error(ErrorCode::InvalidParams, "H_" + std::to_string(j) + " must be nonzero below M");
    }
  }
  const TailRule& tail = g.tail();
  if (tail.kind == TailRule::Kind::Const) {
    const Integer u = e_order_value(g, g.head().size());
    bool equal = true;
    for (std::size_t j = 0; j < g.head().size(); ++j) equal = equal && e_order_value(g, j) == u;
    if (equal && u % p.exp_h == 0) {
      p.hyp = Hypothesis::EqualOrders;
      return p;
    }
    throw Error(ErrorCode::InvalidParams, "orders must all equal some u divisible by exp H");
  }
  // Geometric tail: orders grow without bound.
  bool dominated = true;
  for (std::size_t j = 0; j <= g.head().size(); ++j) dominated = dominated && p.exp_h <= e_order_value(g, j);
  if (!dominated) throw Error(ErrorCode::InvalidParams, "exp H must not exceed any e order");
  p.hyp = Hypothesis::Growing;
  return p;
}

std::string TriangularParams::case_name() const {
  std::string s = tcase == Case::FiniteM ? "(i) M = " + std::to_string(*g.m()) + ", c = " + std::to_string(c)
                                         : std::string("(ii) M infinite");
  s += hyp == Hypothesis::EqualOrders ? ", hypothesis a)" : ", hypothesis b)";
  return s;
}

std::pair<std::size_t, std::size_t> b_position(const TriangularParams& p, std::size_t k) {
  auto pos = h_basis_position(p.g, k);
  if (!pos) throw Error(ErrorCode::OutOfRange, "b_" + std::to_string(k) + " does not exist");
  return *pos;
}

Element b_element(const TriangularParams& p, std::size_t k) {
  auto [j, i] = b_position(p, k);
  return h_gen(p.g, j, i);
}

std::pair<std::size_t, Integer> even_position(const TriangularParams& p, std::size_t i) {
  const auto& head = p.g.head();
  Integer left = static_cast<unsigned long>(i);
  std::size_t j = 0;
  for (; j < head.size(); ++j) {
    const Integer cnt = head[j].e_order.value - 1;
    if (left < cnt) return {j, left + 1};
    left -= cnt;
  }
  if (p.g.tail().kind == TailRule::Kind::Const) {
    const Integer cnt = p.g.tail().block.e_order.value - 1;
    const Integer q = left / cnt;
    return {j + to_i64_checked(q), left % cnt + 1};
  }
  while (true) {
    const Integer cnt = e_order_value(p.g, j) - 1;
    if (left < cnt) return {j, left + 1};
    left -= cnt;
    ++j;
  }
}

std::size_t even_block_start(const TriangularParams& p, std::size_t j) {
  Integer total = 0;
  const Integer cap = Integer(1) << 62;
  for (std::size_t b = 0; b < j; ++b) {
    if (b >= p.g.head().size() && p.g.tail().kind == TailRule::Kind::Const) {
      total += (e_order_value(p.g, b) - 1) * static_cast<unsigned long>(j - b);
      break;
    }
    total += e_order_value(p.g, b) - 1;
    if (total > cap) break;
  }
  if (total > cap) throw Error(ErrorCode::OutOfRange, "even position of block " + std::to_string(j) + " too large");
  return static_cast<std::size_t>(to_i64_checked(total));
}

std::size_t odd_b_index(const TriangularParams& p, std::size_t n) {
  if (n <= 1) return 0;
  if (p.tcase == TriangularParams::Case::FiniteM) return mod_or_zero(n, p.c);
  if (n == 2) return 1;
  return mod_or_zero(n, tri_mu(n));
}

std::optional<std::pair<std::size_t, std::size_t>> odd_e_range(const TriangularParams&, std::size_t n) {
  if (n == 0) return std::nullopt;
  return std::make_pair(tri_S(n - 1) + 1, tri_S(n));
}

Element triangular_term(const TriangularParams& p, std::size_t n) {
  if (n % 2 == 0) {
    auto [j, lambda] = even_position(p, n / 2);
    return e_gen(p.g, j, Rational(lambda));
  }
  const std::size_t half = (n - 1) / 2;
  Element x = b_element(p, odd_b_index(p, half));
  if (auto range = odd_e_range(p, half)) {
    std::map<std::size_t, Term> terms;
    for (std::size_t j = range->first; j <= range->second; ++j) {
      Block b = p.g.block_at(j);
      terms.emplace(j, Term{1, std::vector<Integer>(b.h_spans_e ? 0 : b.h_orders.size(), 0)});
    }
    x = add(p.g, x, make_element(p.g, std::move(terms)));
  }
  return x;
}

std::vector<std::size_t> verify_recurrence(const TriangularParams& p, std::size_t k, std::size_t n_max,
                                           std::size_t bound) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto range = odd_e_range(p, n);
    if (!range || range->first <= bound) continue;
    if (odd_b_index(p, n) == k) out.push_back(n);
  }
  return out;
}

std::size_t even_shift_bound(const TriangularParams& p, std::size_t v) {
  const std::size_t start = even_block_start(p, std::max<std::size_t>(v, 3) + 1);
  return std::max<std::size_t>(4, start == 0 ? 0 : start - 1);
}

namespace {

class TriangularRecipe final : public SequenceRecipe {
 public:
  explicit TriangularRecipe(TriangularParams p) : p_(std::move(p)) {}

  const BlockGroup& group() const override { return p_.g; }
  Element term(std::size_t n) const override { return triangular_term(p_, n); }
  RecipeKind kind() const override { return RecipeKind::Triangular; }
  std::string describe() const override { return "triangular sequence, case " + p_.case_name(); }

  // Odd terms far out carry many fresh e coordinates that at most k other
  // terms cannot cancel; even terms past the prefix sit in blocks no usable
  // odd term reaches, so per block they sum to zero and can be dropped.
  TailCertificate structural_tail_certificate(const Element& g, unsigned k, std::size_t m,
                                              std::size_t n) const override {
    const unsigned w = k + 1;
    const std::size_t v = g.max_block().value_or(0);
    const bool g_zero = g.is_zero();

    std::size_t j_star = 0;  // from j_star on every e order exceeds w
    if (p_.hyp == TriangularParams::Hypothesis::Growing) {
      std::size_t j = 0;
      while (j < p_.g.head().size() || e_order_value(p_.g, j) <= w) {
        if (e_order_value(p_.g, j) <= w) j_star = j + 1;
        ++j;
      }
    }
    // From `calm` on, odd terms have all e coordinates free of g and
    // surviving every multiplier l <= w, and more than k of them.
    std::size_t calm = std::max<std::size_t>(k + 1, 1);
    while (tri_S(calm - 1) + 1 <= (g_zero ? 0 : v) || tri_S(calm - 1) + 1 < j_star) ++calm;

    auto g_e_zero = [&](std::size_t j) {
      auto it = g.terms().find(j);
      return it == g.terms().end() || it->second.e == 0;
    };
    // Some l makes l * d_{2h+1} nonzero with at most w - l escaping coordinates.
    auto usable = [&](std::size_t h) {
      const Element d = triangular_term(p_, 2 * h + 1);
      auto range = odd_e_range(p_, h);
      for (unsigned l = 1; l <= w; ++l) {
        if (smul(p_.g, l, d).is_zero()) continue;
        std::size_t escape = 0;
        if (range) {
          for (std::size_t j = range->first; j <= range->second; ++j) {
            if (g_e_zero(j) && Integer(l) % e_order_value(p_.g, j) != 0) ++escape;
          }
        }
        if (escape <= w - l) return true;
      }
      return false;
    };

    const std::size_t first_tail = (n + 1) / 2;  // least h with 2h+1 > n
    for (std::size_t h = first_tail; h < calm; ++h) {
      if (usable(h)) {
        return {false, "SUPPORT-ESCAPE",
                "odd term d_" + std::to_string(2 * h + 1) + " beyond the prefix can be cancelled by " +
                    std::to_string(k) + " other terms"};
      }
    }
    std::size_t reach = 0;
    std::string used;
    const std::size_t h_lo = m / 2;
    for (std::size_t h = h_lo; 2 * h + 1 <= n && h < calm; ++h) {
      if (2 * h + 1 < m || !usable(h)) continue;
      if (auto range = odd_e_range(p_, h)) reach = std::max(reach, range->second);
      reach = std::max(reach, b_position(p_, odd_b_index(p_, h)).first);
      used += (used.empty() ? "" : ",") + std::to_string(2 * h + 1);
    }
    const std::size_t j_n = even_position(p_, n / 2 + 1).first;
    if (!g_zero && v >= j_n) {
      return {false, "SUPPORT-ESCAPE", "g reaches block " + std::to_string(v) + ", not below the first block " +
                                           std::to_string(j_n) + " with even terms past the prefix"};
    }
    if (!used.empty() && reach >= j_n) {
      return {false, "SUPPORT-ESCAPE", "usable odd terms reach block " + std::to_string(reach) +
                                           ", not below block " + std::to_string(j_n)};
    }
    std::string detail = "odd terms d_{2h+1} with h >= " + std::to_string(calm) + " carry h > k fresh e coordinates";
    if (first_tail < calm) {
      detail += "; checked odd terms d_" + std::to_string(2 * first_tail + 1) + "..d_" + std::to_string(2 * calm - 1) +
                " directly";
    }
    if (used.empty()) {
      detail += "; no usable odd term lies in the prefix";
    } else {
      detail += "; usable prefix odd terms {" + used + "} stay below block " + std::to_string(j_n) +
                ", where even terms past d_" + std::to_string(n) + " begin";
    }
    return {true, "SUPPORT-ESCAPE", detail};
  }

 private:
  TriangularParams p_;
};

}  // namespace

TSeq triangular_sequence(const TriangularParams& p) { return TSeq(std::make_shared<TriangularRecipe>(p)); }

// ---------------------------------------------------------------------------
// Integer rules

ResidueSeqRule ResidueSeqRule::make_list(std::vector<Integer> values) {
  ResidueSeqRule r;
  r.kind = Kind::List;
  r.list = std::move(values);
  return r;
}

ResidueSeqRule ResidueSeqRule::geom(const Integer& q) {
  ResidueSeqRule r;
  r.kind = Kind::Geom;
  r.q = q;
  return r;
}

ResidueSeqRule ResidueSeqRule::affine(const Integer& a, const Integer& b, const Integer& u0) {
  ResidueSeqRule r;
  r.kind = Kind::Affine;
  r.a = a;
  r.b = b;
  r.u0 = u0;
  return r;
}

ResidueSeqRule ResidueSeqRule::factorial() {
  ResidueSeqRule r;
  r.kind = Kind::Factorial;
  return r;
}

Integer ResidueSeqRule::value(std::size_t n) const {
  switch (kind) {
    case Kind::List: return n < list.size() ? list[n] : Integer(0);
    case Kind::Geom: {
      Integer out;
      mpz_pow_ui(out.get_mpz_t(), q.get_mpz_t(), n);
      return out;
    }
    case Kind::Affine: {
      if (a == 1) return u0 + Integer(static_cast<unsigned long>(n)) * b;
      // u_n = a^n u_0 + b (a^n - 1) / (a - 1), the division is exact.
      Integer an;
      mpz_pow_ui(an.get_mpz_t(), a.get_mpz_t(), n);
      Integer geo = an - 1;
      mpz_divexact(geo.get_mpz_t(), geo.get_mpz_t(), Integer(a - 1).get_mpz_t());
      return an * u0 + b * geo;
    }
    case Kind::Factorial: {
      Integer out;
      mpz_fac_ui(out.get_mpz_t(), n);
      return out;
    }
  }
  return 0;
}

std::string ResidueSeqRule::to_string() const {
  switch (kind) {
    case Kind::List: {
      std::string s = "list(";
      for (std::size_t i = 0; i < list.size(); ++i) s += (i ? "," : "") + list[i].get_str();
      return s + ")";
    }
    case Kind::Geom: return "geom(" + q.get_str() + ")";
    case Kind::Affine:
      return "affine(" + a.get_str() + "," + b.get_str() + (u0 == 1 ? "" : "," + u0.get_str()) + ")";
    case Kind::Factorial: return "factorial";
  }
  return "?";
}

ResidueSeqRule parse_residue_rule(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (s == "factorial" || s == "factorial()") return ResidueSeqRule::factorial();
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw Error(ErrorCode::ParseError, "rule must look like name(args): " + text);
  }
  const std::string name = s.substr(0, open);
  std::vector<Integer> args;
  const std::string body = s.substr(open + 1, s.size() - open - 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto comma = body.find(',', pos);
    const std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    Integer v;
    if (tok.empty() || v.set_str(tok, 10) != 0) throw Error(ErrorCode::ParseError, "bad integer '" + tok + "' in rule");
    args.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (name == "geom" && args.size() == 1) return ResidueSeqRule::geom(args[0]);
  if (name == "affine" && (args.size() == 2 || args.size() == 3)) {
    return ResidueSeqRule::affine(args[0], args[1], args.size() == 3 ? args[2] : Integer(1));
  }
  if (name == "list") return ResidueSeqRule::make_list(args);
  throw Error(ErrorCode::ParseError, "unknown rule or wrong argument count: " + text);
}

namespace {

BlockGroup integers() {
  Block z;
  z.e_order = CyclicOrder::infinite();
  return make_group({z}, TailRule::none());
}

class RuleRecipe final : public SequenceRecipe {
 public:
  explicit RuleRecipe(ResidueSeqRule rule) : g_(integers()), rule_(std::move(rule)) {}

  const BlockGroup& group() const override { return g_; }
  Element term(std::size_t n) const override { return e_gen(g_, 0, Rational(rule_.value(n))); }
  RecipeKind kind() const override { return RecipeKind::IntegerRule; }
  std::string describe() const override { return "integer rule " + rule_.to_string(); }

  std::optional<std::size_t> zero_beyond() const override {
    using K = ResidueSeqRule::Kind;
    if (rule_.kind == K::List) return rule_.list.size();
    if (rule_.kind == K::Geom && rule_.q == 0) return 1;
    if (rule_.kind == K::Affine && rule_.a == 0 && rule_.b == 0) return 1;
    return std::nullopt;
  }

  std::optional<Periodicity> periodicity() const override {
    using K = ResidueSeqRule::Kind;
    switch (rule_.kind) {
      case K::List: return Periodicity{rule_.list.size(), 1};
      case K::Geom:
        if (rule_.q == 1 || rule_.q == 0) return Periodicity{rule_.q == 0 ? 1u : 0u, 1};
        if (rule_.q == -1) return Periodicity{0, 2};
        return std::nullopt;
      case K::Affine:
        if (rule_.a == 0) return Periodicity{1, 1};
        if (rule_.a == 1 && rule_.b == 0) return Periodicity{0, 1};
        if (rule_.a == -1) return Periodicity{0, 2};
        return std::nullopt;
      case K::Factorial: return std::nullopt;
    }
    return std::nullopt;
  }

  bool growth_dominates(std::size_t n, unsigned k, const Integer& bound) const override {
    using K = ResidueSeqRule::Kind;
    const Integer kk = k;
    switch (rule_.kind) {
      case K::List: return n + 1 >= rule_.list.size();
      case K::Geom: {
        const Integer q = abs(rule_.q);
        if (q < 2 || q <= kk) return false;
        Integer qn;
        mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
        return qn * (q - kk) > bound;
      }
      case K::Affine: {
        if (rule_.a < 2 || rule_.a <= kk) return false;
        Integer u = rule_.u0;
        Integer running = abs(u);
        for (std::size_t i = 0; i < n; ++i) {
          u = rule_.a * u + rule_.b;
          running = std::max(running, Integer(abs(u)));
        }
        const Integer next = rule_.a * u + rule_.b;
        return u > 0 && u == running && next > u && (rule_.a - kk) * u + rule_.b > bound;
      }
      case K::Factorial: {
        if (n + 1 <= k) return false;
        Integer f;
        mpz_fac_ui(f.get_mpz_t(), n);
        return f * Integer(static_cast<unsigned long>(n + 1 - k)) > bound;
      }
    }
    return false;
  }

 private:
  BlockGroup g_;
  ResidueSeqRule rule_;
};

}  // namespace

TSeq rule_sequence(const ResidueSeqRule& rule) { return TSeq(std::make_shared<RuleRecipe>(rule)); }

// ---------------------------------------------------------------------------
// Circle membership

namespace {

// Smallest period d of the eventually periodic sequence r (period p from t,
// given through `at`) and the smallest preperiod for it.
template <class At>
std::pair<std::size_t, std::size_t> minimize_cycle(std::size_t t, std::size_t p, At at) {
  std::size_t d = p;
  for (std::size_t cand = 1; cand < p; ++cand) {
    if (p % cand != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < p && ok; ++i) ok = at(t + i) == at(t + (i + cand) % p);
    if (ok) {
      d = cand;
      break;
    }
  }
  while (t > 0 && at(t - 1) == at(t - 1 + d)) --t;
  return {t, d};
}

CircleResult finish(const std::vector<Integer>& residues, std::size_t t, std::size_t p) {
  auto at = [&](std::size_t i) -> const Integer& {
    if (i < residues.size()) return residues[i];
    return residues[t + (i - t) % p];
  };
  auto [t2, d] = minimize_cycle(t, p, at);
  CircleResult r;
  r.preperiod = t2;
  r.period = d;
  for (std::size_t i = 0; i < t2; ++i) r.head.push_back(at(i));
  r.in = true;
  for (std::size_t i = 0; i < d; ++i) {
    r.cycle.push_back(at(t2 + i));
    if (r.cycle.back() != 0) r.in = false;
  }
  return r;
}

}  // namespace

CircleResult circle_membership(const ResidueSeqRule& u, const Rational& x_in) {
  const Rational x = frac(x_in);
  const Integer a = x.get_num();
  const Integer b = x.get_den();
  if (a == 0) {
    CircleResult r;
    r.in = true;
    r.cycle = {0};
    return r;
  }
  using K = ResidueSeqRule::Kind;
  std::vector<Integer> residues;
  if (u.kind == K::List) {
    for (const auto& v : u.list) residues.push_back(mod_floor(v * a, b));
    const std::size_t len = residues.size();
    for (std::size_t p = 1; 2 * p <= len; ++p) {
      for (std::size_t t = 0; t + 2 * p <= len; ++t) {
        bool ok = true;
        for (std::size_t i = t; i + p < len && ok; ++i) ok = residues[i] == residues[i + p];
        if (ok) return finish(residues, t, p);
      }
    }
    throw Error(ErrorCode::NoCycleDetected, "list of " + std::to_string(len) + " terms shows no repeated period");
  }
  // Follow the finite state orbit until it revisits a state.
  std::map<std::pair<Integer, Integer>, std::size_t> seen;
  Integer s = mod_floor(u.kind == K::Affine ? u.u0 : Integer(1), b);
  Integer idx = 0;  // n mod b, used by the factorial state
  for (std::size_t n = 0;; ++n) {
    auto key = std::make_pair(s, u.kind == K::Factorial ? idx : Integer(0));
    auto [it, fresh] = seen.emplace(key, n);
    if (!fresh) return finish(residues, it->second, n - it->second);
    residues.push_back(mod_floor(s * a, b));
    switch (u.kind) {
      case K::Geom: s = mod_floor(s * u.q, b); break;
      case K::Affine: s = mod_floor(u.a * s + u.b, b); break;
      case K::Factorial:
        idx = mod_floor(idx + 1, b);
        s = mod_floor(s * (idx == 0 ? b : idx), b);
        break;
      case K::List: break;
    }
  }
}

// ---------------------------------------------------------------------------
// Approximate TB demo

TbTarget parse_tb_target(const std::string& text) {
  TbTarget t;
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    t.value = frac(parse_rational(text));
    return t;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const std::size_t places = text.size() - dot - 1;
  Integer num;
  if (digits.empty() || num.set_str(digits, 10) != 0) throw Error(ErrorCode::ParseError, "bad decimal " + text);
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
  t.value = frac(Rational(num, den));
  t.approximate = true;
  return t;
}

std::pair<Integer, Rational> tb_odd_term(const TbTarget& target, const Rational& eps, std::size_t n) {
  const Rational beta = frac(target.value);
  Integer two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, n);
  const Rational thresh = eps / Rational(two_n);
  // Convergents of sqrt(2) - 1 = [0; 2, 2, 2, ...].
  Integer p_prev = 1, q_prev = 0, p = 0, q = 1;
  while (!(Rational(2, q) < thresh) || p == 0) {
    Integer p_next = 2 * p + p_prev;
    Integer q_next = 2 * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  // j/q is the grid point nearest beta; b p = j (mod q).
  Rational scaled = beta * Rational(q);
  Integer j = (scaled.get_num() * 2 + scaled.get_den()) / (2 * scaled.get_den());
  j = mod_floor(j, q);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  Integer b = mod_floor(j * inv, q);
  return {b, Rational(2, q)};
}

namespace {

class TbRecipe final : public SequenceRecipe {
 public:
  TbRecipe(TbTarget target, Rational eps) : g_(integers()), target_(std::move(target)), eps_(std::move(eps)) {}

  const BlockGroup& group() const override { return g_; }
  Element term(std::size_t n) const override {
    return e_gen(g_, 0, Rational(tb_odd_term(target_, eps_, n).first));
  }
  RecipeKind kind() const override { return RecipeKind::IntegerRule; }
  std::string describe() const override {
    return "approximations b_n alpha -> " + target_.value.get_str() + " within " + eps_.get_str() + "/2^n";
  }

 private:
  BlockGroup g_;
  TbTarget target_;
  Rational eps_;
};

}  // namespace

TbDemo tb_interleave_demo(const ResidueSeqRule& a_rule, const TbTarget& target, const Rational& eps) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidParams, "eps must be positive");
  if (frac(target.value) == 0) throw Error(ErrorCode::DegenerateTarget, "<0> is not dense in the circle");
  TbReport report;
  report.approx_only = target.approximate;
  report.rational_target = !target.approximate;
  report.embedding = "n -> n * alpha, alpha = sqrt(2) - 1, via exact convergents";
  if (target.approximate) {
    report.notes.push_back("APPROX_ONLY: the target is a decimal stand-in for an irrational; density of <b> and "
                           "any MinAP conclusion are not certified");
  } else {
    report.notes.push_back("rational target generates a finite subgroup of the circle, which is not dense");
  }
  report.notes.push_back("|b_n alpha - target| < 2/q_K < eps/2^n mod 1 for each odd term");
  auto b_seq = TSeq(std::make_shared<TbRecipe>(target, eps));
  return TbDemo{interleave({rule_sequence(a_rule), b_seq}), report};
}

}  // namespace minap
