#include <doctest.h>

#include "minap/constructions.hpp"
#include "minap/tseq.hpp"
#include "support.hpp"

using namespace minap;
using namespace testsupport;

namespace {

TSeq basis_sequence(std::size_t n) {
  const BlockGroup g = make_group({}, TailRule::constant(blk(2)));
  std::vector<Element> terms;
  for (std::size_t j = 0; j < n; ++j) terms.push_back(e_gen(g, j));
  return explicit_sequence(g, terms);
}

// A small family of sequences to draw random (seq, k, m, N) instances from.
std::vector<TSeq> sequence_family() {
  std::vector<TSeq> out;
  out.push_back(basis_sequence(12));
  out.push_back(triangular_sequence(TriangularParams::from_group(z4z2())));
  out.push_back(rule_sequence(ResidueSeqRule::geom(2)));
  out.push_back(rule_sequence(ResidueSeqRule::affine(1, 3, 0)));
  const BlockGroup z6 = make_group({blk(6), blk(4, {2})}, TailRule::none());
  out.push_back(explicit_sequence(z6, {e_gen(z6, 0), add(z6, e_gen(z6, 0, 2), h_gen(z6, 1, 0)), e_gen(z6, 1)},
                                  ExplicitTail::Periodic, 1));
  out.push_back(interleave({zero_sequence(z4z2()), triangular_sequence(TriangularParams::from_group(z4z2()))}));
  return out;
}

}  // namespace

TEST_CASE("A(k,m) examples") {
  const TSeq seq = basis_sequence(6);
  const BlockGroup& g = seq.group();
  const auto a0 = keys(enumerate_Akm(seq, 0, 2, 4));
  std::set<std::string> expected{Element().key()};
  for (std::size_t r = 2; r <= 4; ++r) expected.insert(e_gen(g, r).key());
  CHECK(a0 == expected);

  const auto a1 = keys(enumerate_Akm(seq, 1, 0, 1));
  CHECK(a1 == keys({Element(), e_gen(g, 0), e_gen(g, 1), add(g, e_gen(g, 0), e_gen(g, 1))}));

  CHECK(keys(enumerate_Akm(seq, 3, 5, 4)) == keys({Element()}));
}

TEST_CASE("A(k,m) budget") {
  const TSeq seq = rule_sequence(ResidueSeqRule::geom(3));
  bool threw = false;
  try {
    enumerate_Akm(seq, 4, 0, 40, 1000);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::BudgetExceeded;
  }
  CHECK(threw);
}

TEST_CASE("A(k,m) agrees with direct enumeration") {
  std::mt19937_64 rng(41);
  const auto family = sequence_family();
  for (int iter = 0; iter < 60; ++iter) {
    const TSeq& seq = family[rng() % family.size()];
    const unsigned k = rng() % 3;
    const std::size_t n = 2 + rng() % 7;
    const std::size_t m = rng() % (n + 1);
    CHECK(keys(enumerate_Akm(seq, k, m, n)) == brute_akm(seq, k, m, n));
    CHECK(keys(enumerate_Akm_serial(seq, k, m, n)) == keys(enumerate_Akm(seq, k, m, n)));
  }
}

TEST_CASE("check_criterion examples") {
  const TSeq powers = rule_sequence(ResidueSeqRule::geom(2));
  const BlockGroup& z = powers.group();
  const Verdict v = check_criterion(powers, e_gen(z, 0), 0, 4, 32);
  CHECK(v.kind == Verdict::Kind::Excluded);
  CHECK(v.m == 1);
  CHECK(v.certificate.sound);

  const BlockGroup g = z4z2();
  const Verdict zero = check_criterion(zero_sequence(g), e_gen(g, 3), 0, 4, 16);
  CHECK(zero.kind == Verdict::Kind::Excluded);
  CHECK(zero.m == 0);

  bool threw = false;
  try {
    check_criterion(powers, Element(), 0, 4, 16);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::ZeroElement;
  }
  CHECK(threw);
}

TEST_CASE("triangular sequence excludes h^0_1 at k = 0 within the proof bound") {
  const auto p = TriangularParams::from_group(z4z2());
  const TSeq seq = triangular_sequence(p);
  const Verdict v = check_criterion(seq, h_gen(p.g, 0, 0), 0, 64, 256);
  CHECK(v.kind == Verdict::Kind::Excluded);
  CHECK(v.certificate.sound);
  // The proof excludes g from A(k, 2 m_0) with m_0 = 4 m'(k+1), where m' > 3
  // is such that every d_{2n} with n > m' lives in a block > max(supp g, 3).
  std::size_t m_prime = 3;
  for (std::size_t n = 0; n < 100; ++n) {
    if (even_position(p, n).first <= 3) m_prime = std::max(m_prime, n);
  }
  CHECK(m_prime == 11);
  CHECK(v.m <= 2 * 4 * m_prime * 1);
}

TEST_CASE("interleave indexing") {
  const BlockGroup g = z4z2();
  const TSeq b = triangular_sequence(TriangularParams::from_group(g));
  const TSeq two = interleave({zero_sequence(g), b});
  for (std::size_t n = 0; n < 50; ++n) {
    CHECK(two.term(2 * n).is_zero());
    CHECK(two.term(2 * n + 1) == b.term(n));
  }
  const TSeq one = interleave({b});
  for (std::size_t n = 0; n < 30; ++n) CHECK(one.term(n) == b.term(n));

  const BlockGroup z = make_group({blk(5), blk(5), blk(5)}, TailRule::none());
  const Element x = e_gen(z, 0), y = e_gen(z, 1), w = e_gen(z, 2);
  const TSeq three = interleave({explicit_sequence(z, {x}, ExplicitTail::Periodic, 0),
                                 explicit_sequence(z, {y}, ExplicitTail::Periodic, 0),
                                 explicit_sequence(z, {w}, ExplicitTail::Periodic, 0)});
  for (std::size_t n = 0; n < 30; ++n) CHECK(three.term(n) == std::vector<Element>{x, y, w}[n % 3]);
}

TEST_CASE("property: A(k,m) lattice laws") {
  std::mt19937_64 rng(42);
  const auto family = sequence_family();
  for (int iter = 0; iter < 120; ++iter) {
    const TSeq& seq = family[rng() % family.size()];
    const unsigned k = rng() % 3;
    const std::size_t n = 3 + rng() % 8;
    const std::size_t m = rng() % n;
    const auto base = keys(enumerate_Akm(seq, k, m, n));
    const auto later = keys(enumerate_Akm(seq, k, m + 1, n));
    const auto bigger_k = keys(enumerate_Akm(seq, k + 1, m, n));
    const auto longer = keys(enumerate_Akm(seq, k, m, n + 1));
    CHECK(std::includes(base.begin(), base.end(), later.begin(), later.end()));
    CHECK(std::includes(bigger_k.begin(), bigger_k.end(), base.begin(), base.end()));
    CHECK(std::includes(longer.begin(), longer.end(), base.begin(), base.end()));
    CHECK(base.count(Element().key()) == 1);
    for (const auto& x : enumerate_Akm(seq, k, m, n)) CHECK(base.count(neg(seq.group(), x).key()) == 1);
  }
}

TEST_CASE("property: sound exclusions survive longer prefixes") {
  const auto p = TriangularParams::from_group(z4z2());
  const TSeq seq = triangular_sequence(p);
  const std::vector<Element> gs{h_gen(p.g, 0, 0), e_gen(p.g, 1), add(p.g, e_gen(p.g, 0), h_gen(p.g, 2, 0))};
  for (const auto& g : gs) {
    const Verdict a = check_criterion(seq, g, 1, 64, 128);
    if (a.kind != Verdict::Kind::Excluded || !a.certificate.sound) continue;
    const Verdict b = check_criterion(seq, g, 1, 64, 256);
    CHECK(b.kind == Verdict::Kind::Excluded);
  }
}
