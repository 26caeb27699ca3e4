#include <doctest.h>

#include "minap/core_groups.hpp"
#include "support.hpp"

using namespace minap;
using namespace testsupport;

namespace {

Element e(const BlockGroup& g, std::size_t j, long c = 1) { return e_gen(g, j, Rational(c)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidSpec;
}

Element random_element(const BlockGroup& g, std::mt19937_64& rng, std::size_t blocks) {
  std::map<std::size_t, Term> terms;
  std::uniform_int_distribution<long> coeff(-20, 20);
  for (std::size_t j = 0; j < blocks; ++j) {
    if (rng() % 2) continue;
    const Block b = g.block_at(j);
    Term t;
    if (b.e_order.is_prufer()) {
      t.e = Rational(coeff(rng), 8);
      t.e.canonicalize();
    } else {
      t.e = coeff(rng);
    }
    for (std::size_t i = 0; i < b.h_orders.size(); ++i) t.h.emplace_back(coeff(rng));
    terms[j] = t;
  }
  return make_element(g, terms);
}

}  // namespace

TEST_CASE("make_group examples") {
  const BlockGroup a = make_group({blk(4, {2})}, TailRule::constant(blk(4, {2})));
  CHECK(a.block_at(7) == blk(4, {2}));
  CHECK_FALSE(a.m().has_value());

  const BlockGroup z = make_group({blk_z()}, TailRule::none());
  CHECK(z.finitely_generated());
  CHECK(z.block_at(0).e_order.is_infinite());

  const BlockGroup geo = make_group({}, TailRule::geometric(2, 1), 0);
  CHECK(geo.block_at(0) == blk(2));
  CHECK(geo.block_at(3) == blk(16));
}

TEST_CASE("make_group rejects inconsistent presentations") {
  CHECK(code_of([] { make_group({blk(4, {2})}, TailRule::constant(blk(4, {2})), 1); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_group({blk(1)}, TailRule::none()); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_group({blk(4, {1})}, TailRule::none()); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_group({Block{CyclicOrder::prufer(4), {}, false}}, TailRule::none()); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_group({}, TailRule::geometric(2, 0)); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("block_at outside a finitely generated group") {
  const BlockGroup z = make_group({blk_z()}, TailRule::none());
  CHECK(code_of([&] { z.block_at(1); }) == ErrorCode::OutOfRange);
  CHECK(z4z2().block_at(100) == blk(4, {2}));
}

TEST_CASE("element arithmetic examples") {
  const BlockGroup z4 = make_group({blk(4)}, TailRule::none());
  CHECK(add(z4, e(z4, 0, 3), e(z4, 0, 2)) == e(z4, 0, 1));
  CHECK(smul(z4, 0, e(z4, 0, 3)).is_zero());

  const BlockGroup pr = make_group({blk_prufer(2)}, TailRule::none());
  const Element half = e_gen(pr, 0, Rational(1, 2));
  const Element three_quarters = e_gen(pr, 0, Rational(3, 4));
  CHECK(add(pr, half, three_quarters) == e_gen(pr, 0, Rational(1, 4)));
  CHECK(order_of(pr, e_gen(pr, 0, Rational(3, 8))) == Order::of(8));
}

TEST_CASE("order_of examples and brute force") {
  const BlockGroup z4 = make_group({blk(4)}, TailRule::none());
  CHECK(order_of(z4, e(z4, 0, 2)) == Order::of(2));
  CHECK(order_of(z4, Element()) == Order::of(1));

  const BlockGroup g = make_group({blk(4, {2})}, TailRule::none());
  const Element x = add(g, e(g, 0), h_gen(g, 0, 0));
  // Brute force: least n with n x = 0.
  long n = 1;
  while (!smul(g, n, x).is_zero()) ++n;
  CHECK(n == 4);
  CHECK(order_of(g, x) == Order::of(4));

  const BlockGroup z = make_group({blk_z()}, TailRule::none());
  CHECK(order_of(z, e(z, 0)).is_infinite());
}

TEST_CASE("exponent and boundedness") {
  CHECK(exponent(z4z2()) == Order::of(4));
  CHECK(is_bounded(z4z2()));
  const BlockGroup geo = make_group({}, TailRule::geometric(2, 1));
  CHECK(exponent(geo).is_infinite());
  CHECK_FALSE(is_bounded(geo));
  const BlockGroup z = make_group({blk_z()}, TailRule::none());
  CHECK(exponent(z).is_infinite());
  CHECK(exponent_h(z4z2()) == Order::of(2));
}

TEST_CASE("leading Ulm-Kaplansky invariants") {
  const BlockGroup a = make_group({blk(4), blk(4), blk(4)}, TailRule::constant(blk(2)));
  auto la = ulm_kaplansky_leading(a);
  REQUIRE(la.size() == 1);
  CHECK(la[2].exponent == 2);
  CHECK(la[2].multiplicity == Cardinality::finite(3));

  auto lb = ulm_kaplansky_leading(make_group({}, TailRule::constant(blk(4))));
  CHECK(lb[2].exponent == 2);
  CHECK(lb[2].multiplicity.omega);

  auto lc = ulm_kaplansky_leading(make_group({}, TailRule::constant(blk(6))));
  REQUIRE(lc.size() == 2);
  CHECK(lc[2].exponent == 1);
  CHECK(lc[2].multiplicity.omega);
  CHECK(lc[3].exponent == 1);
  CHECK(lc[3].multiplicity.omega);

  CHECK(code_of([] { ulm_kaplansky_leading(make_group({}, TailRule::geometric(2, 1))); }) == ErrorCode::Unbounded);
}

TEST_CASE("primary classes split composite orders") {
  const BlockGroup g = make_group({blk(12, {6})}, TailRule::none());
  const PrimaryClasses c = primary_classes(g);
  CHECK(c.at({Integer(2), 2u}) == Cardinality::finite(1));
  CHECK(c.at({Integer(2), 1u}) == Cardinality::finite(1));
  CHECK(c.at({Integer(3), 1u}) == Cardinality::finite(2));
}

TEST_CASE("property: group axioms on random elements") {
  std::mt19937_64 rng(11);
  const BlockGroup g = make_group({blk(4, {2}), blk_z({3}), blk_prufer(2), blk(9), blk(6, {2, 3}), blk(5)},
                                  TailRule::constant(blk(8, {4})));
  for (int iter = 0; iter < 300; ++iter) {
    const Element x = random_element(g, rng, 8);
    const Element y = random_element(g, rng, 8);
    const Element z = random_element(g, rng, 8);
    CHECK(add(g, add(g, x, y), z) == add(g, x, add(g, y, z)));
    CHECK(add(g, x, y) == add(g, y, x));
    CHECK(add(g, x, Element()) == x);
    CHECK(add(g, x, neg(g, x)).is_zero());
    CHECK(canonicalize(g, canonicalize(g, x)) == canonicalize(g, x));
    CHECK(canonicalize(g, x) == x);
  }
}

TEST_CASE("property: order_of divides exponent") {
  std::mt19937_64 rng(12);
  const BlockGroup g = make_group({blk(4, {2}), blk(6, {3}), blk(9)}, TailRule::constant(blk(12, {2})));
  const Integer exp = *exponent(g).value;
  for (int iter = 0; iter < 200; ++iter) {
    const Element x = random_element(g, rng, 6);
    const Order o = order_of(g, x);
    REQUIRE_FALSE(o.is_infinite());
    CHECK(exp % *o.value == 0);
    CHECK(smul(g, *o.value, x).is_zero());
  }
}

TEST_CASE("property: leading invariants ignore the order of head blocks") {
  std::mt19937_64 rng(13);
  const std::vector<long> orders{2, 3, 4, 6, 8, 9, 12};
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<Block> head;
    for (int i = 0; i < 6; ++i) head.push_back(blk(orders[rng() % orders.size()]));
    const Block tail = blk(orders[rng() % orders.size()]);
    const auto base = ulm_kaplansky_leading(make_group(head, TailRule::constant(tail)));
    std::shuffle(head.begin(), head.end(), rng);
    const auto shuffled = ulm_kaplansky_leading(make_group(head, TailRule::constant(tail)));
    REQUIRE(base.size() == shuffled.size());
    for (const auto& [p, inv] : base) {
      CHECK(shuffled.at(p).exponent == inv.exponent);
      CHECK(shuffled.at(p).multiplicity == inv.multiplicity);
    }
  }
}

TEST_CASE("coordinates round trip") {
  const BlockGroup g = make_group({blk(4, {2}), blk_prufer(3), blk_spans(5)}, TailRule::none());
  const Coordinates c(g, {0, 1, 2}, {{1, 2}});
  CHECK(c.size() == 4);
  CHECK(c.label(0) == "e[0]");
  CHECK(c.label(1) == "h[0,1]");
  const Element x = add(g, add(g, e(g, 0, 3), h_gen(g, 0, 0)), e_gen(g, 1, Rational(2, 9)));
  CHECK(c.unflatten(c.flatten(x)) == x);
}
