#include <doctest.h>

#include "minap/constructions.hpp"
#include "support.hpp"

using namespace minap;
using namespace testsupport;

namespace {

Element sum_e(const BlockGroup& g, std::size_t first, std::size_t last) {
  Element x;
  for (std::size_t j = first; j <= last; ++j) x = add(g, x, e_gen(g, j));
  return x;
}

// Residues u_n a mod b for n < len, computed directly from the rule values.
std::vector<Integer> simulate(const ResidueSeqRule& u, const Rational& x, std::size_t len) {
  std::vector<Integer> out;
  for (std::size_t n = 0; n < len; ++n) out.push_back(mod_floor(u.value(n) * x.get_num(), x.get_den()));
  return out;
}

}  // namespace

TEST_CASE("triangular prefix for (Z(4)+Z(2))^omega") {
  const auto p = TriangularParams::from_group(z4z2());
  const BlockGroup& g = p.g;
  const Element b0 = h_gen(g, 0, 0), b1 = h_gen(g, 1, 0), b2 = h_gen(g, 2, 0);
  CHECK(b_element(p, 0) == b0);
  CHECK(b_element(p, 1) == b1);
  CHECK(triangular_term(p, 1) == b0);
  CHECK(triangular_term(p, 3) == add(g, b0, e_gen(g, 1)));
  CHECK(triangular_term(p, 5) == add(g, b1, sum_e(g, 2, 3)));
  CHECK(triangular_term(p, 0) == e_gen(g, 0));
  CHECK(triangular_term(p, 2) == e_gen(g, 0, 2));
  CHECK(triangular_term(p, 4) == e_gen(g, 0, 3));
  CHECK(triangular_term(p, 6) == e_gen(g, 1));
  // n = 5: t(5) = 2, mu_5 = 3, 5 mod 3 = 2.
  CHECK(tri_t(5) == 2);
  CHECK(tri_mu(5) == 3);
  CHECK(triangular_term(p, 11) == add(g, b2, sum_e(g, 11, 15)));
}

TEST_CASE("triangular case (i) with finite M") {
  const BlockGroup g = make_group({blk(4, {2}), blk(4, {2})}, TailRule::constant(blk(4)));
  const auto p = TriangularParams::from_group(g);
  CHECK(p.tcase == TriangularParams::Case::FiniteM);
  CHECK(p.c == 2);
  for (std::size_t n = 2; n < 40; ++n) CHECK(odd_b_index(p, n) == n % 2);
}

TEST_CASE("triangular parameters reject groups without the hypotheses") {
  const BlockGroup bad = make_group({blk(4, {2}), blk(8, {2})}, TailRule::constant(blk(4, {2})));
  bool threw = false;
  try {
    TriangularParams::from_group(bad);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::InvalidParams;
  }
  CHECK(threw);
  const auto geo = TriangularParams::from_group(make_group({}, TailRule::geometric(2, 1, {2})));
  CHECK(geo.hyp == TriangularParams::Hypothesis::Growing);
}

TEST_CASE("S, t and mu tables") {
  CHECK(tri_S(3) == 6);
  const TableReport r = check_tables(2000);
  CHECK(r.ok());
  for (std::size_t n = 1; n <= 2000; ++n) {
    CHECK(tri_mu(n) <= n);
    CHECK(tri_S(tri_t(n)) <= n);
    CHECK(n < tri_S(tri_t(n) + 1));
  }
}

TEST_CASE("odd e supports are consecutive disjoint ranges") {
  const auto p = TriangularParams::from_group(z4z2());
  std::size_t next = 1;
  for (std::size_t n = 1; n < 60; ++n) {
    const auto r = odd_e_range(p, n);
    REQUIRE(r.has_value());
    CHECK(r->first == next);
    CHECK(r->second >= r->first);
    next = r->second + 1;
  }
  CHECK_FALSE(odd_e_range(p, 0).has_value());
}

TEST_CASE("odd terms minus their b part have order u under hypothesis a") {
  const auto p = TriangularParams::from_group(z4z2());
  for (std::size_t n = 3; n < 40; ++n) {
    const Element d = triangular_term(p, 2 * n + 1);
    const Element rest = sub(p.g, d, b_element(p, odd_b_index(p, n)));
    CHECK(order_of(p.g, rest) == Order::of(4));
  }
}

TEST_CASE("verify_recurrence") {
  const BlockGroup g = make_group({blk(4, {2}), blk(4, {2})}, TailRule::constant(blk(4)));
  const auto p = TriangularParams::from_group(g);
  const auto hits = verify_recurrence(p, 1, 20, 0);
  CHECK_FALSE(hits.empty());
  for (auto n : hits) CHECK(odd_b_index(p, n) == 1);
  // Direct scan: odd n in [2, 20].
  std::vector<std::size_t> expected;
  for (std::size_t n = 2; n <= 20; ++n) {
    if (n % 2 == 1) expected.push_back(n);
  }
  CHECK(hits == expected);
  CHECK(verify_recurrence(p, 7, 20, 0).empty());
  CHECK(verify_recurrence(p, 1, 20, tri_S(20)).empty());
}

TEST_CASE("circle membership examples") {
  const auto geom2 = ResidueSeqRule::geom(2);
  const CircleResult a = circle_membership(geom2, Rational(5, 8));
  CHECK(a.in);
  CHECK(a.preperiod == 3);
  const CircleResult b = circle_membership(geom2, Rational(1, 3));
  CHECK_FALSE(b.in);
  CHECK(b.period == 2);
  CHECK(b.cycle == std::vector<Integer>{1, 2});
  CHECK(circle_membership(ResidueSeqRule::factorial(), Rational(0)).in);
  CHECK(circle_membership(ResidueSeqRule::factorial(), Rational(7, 9)).in);
}

TEST_CASE("property: affine values follow the recurrence") {
  for (long a : {-3L, -1L, 0L, 1L, 2L, 5L}) {
    for (long b : {-2L, 0L, 7L}) {
      const auto rule = ResidueSeqRule::affine(a, b, 3);
      Integer u = 3;
      for (std::size_t n = 0; n < 40; ++n, u = a * u + b) CHECK(rule.value(n) == u);
    }
  }
}

TEST_CASE("residue rule parsing") {
  CHECK(parse_residue_rule("geom(3)").q == 3);
  CHECK(parse_residue_rule("affine(3, 1)").kind == ResidueSeqRule::Kind::Affine);
  CHECK(parse_residue_rule("list(1,2,3)").list.size() == 3);
  CHECK(parse_residue_rule("factorial").kind == ResidueSeqRule::Kind::Factorial);
  bool threw = false;
  try {
    parse_residue_rule("fib(1)");
  } catch (const Error&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("property: circle membership matches simulation") {
  std::mt19937_64 rng(51);
  const std::vector<ResidueSeqRule> rules{ResidueSeqRule::geom(2), ResidueSeqRule::geom(6), ResidueSeqRule::geom(3),
                                         ResidueSeqRule::affine(2, 1), ResidueSeqRule::affine(1, 5, 0),
                                         ResidueSeqRule::factorial()};
  for (int iter = 0; iter < 400; ++iter) {
    const auto& u = rules[rng() % rules.size()];
    const long b = 1 + static_cast<long>(rng() % 200);
    Rational x(static_cast<long>(rng() % b), b);
    x.canonicalize();
    const CircleResult c = circle_membership(u, x);
    const std::size_t len = 10 * (c.preperiod + c.period);
    const auto sim = simulate(u, x, len);
    for (std::size_t n = c.preperiod; n < len; ++n) CHECK(sim[n] == c.cycle[(n - c.preperiod) % c.period]);
    bool zero_tail = true;
    for (std::size_t n = c.preperiod; n < len; ++n) zero_tail = zero_tail && sim[n] == 0;
    CHECK(c.in == zero_tail);
  }
}

TEST_CASE("property: circle IN set is a subgroup") {
  std::mt19937_64 rng(52);
  const auto u = ResidueSeqRule::geom(6);
  for (int iter = 0; iter < 300; ++iter) {
    Rational x(static_cast<long>(rng() % 97), 1 + static_cast<long>(rng() % 96));
    Rational y(static_cast<long>(rng() % 97), 1 + static_cast<long>(rng() % 96));
    x = frac(x);
    y = frac(y);
    const bool xin = circle_membership(u, x).in, yin = circle_membership(u, y).in;
    if (xin && yin) CHECK(circle_membership(u, frac(x + y)).in);
    CHECK(circle_membership(u, frac(-x)).in == xin);
  }
}

TEST_CASE("TB interleave demo") {
  const TbDemo demo = tb_interleave_demo(ResidueSeqRule::factorial(), parse_tb_target("0.618034"), Rational(1, 1000000));
  CHECK(demo.report.approx_only);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(demo.seq.term(2 * n) == e_gen(demo.seq.group(), 0, Rational(ResidueSeqRule::factorial().value(n))));
  }
  bool threw = false;
  try {
    tb_interleave_demo(ResidueSeqRule::factorial(), parse_tb_target("0"), Rational(1, 100));
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::DegenerateTarget;
  }
  CHECK(threw);
  const TbDemo zeros = tb_interleave_demo(ResidueSeqRule::geom(0), parse_tb_target("1/3"), Rational(1, 100));
  for (std::size_t n = 1; n < 6; ++n) CHECK(zeros.seq.term(2 * n).is_zero());
}
