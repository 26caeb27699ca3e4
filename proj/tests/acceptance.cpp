// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Every criterion is exact; the runtime budget is part of the criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "minap/constructions.hpp"
#include "minap/decompose.hpp"
#include "minap/radical.hpp"
#include "peel_instances.hpp"
#include "support.hpp"

using namespace minap;
using namespace testsupport;

namespace {

// Collects failures for one criterion; the first few are printed.
struct Check {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::ostringstream notes;

  void operator()(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 5) notes << "    failed: " << what << "\n";
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<void(Check&)> body;
};

Element sum_e(const BlockGroup& g, std::size_t first, std::size_t last) {
  Element x;
  for (std::size_t j = first; j <= last; ++j) x = add(g, x, e_gen(g, j));
  return x;
}

// 1. d_1, d_3, d_5 and the even prefix of the triangular sequence.
void prefix_reproduction(Check& check) {
  const auto p = TriangularParams::from_group(z4z2());
  const BlockGroup& g = p.g;
  const Element b0 = h_gen(g, 0, 0), b1 = h_gen(g, 1, 0);
  check(triangular_term(p, 1) == b0, "d_1 = b_0");
  check(triangular_term(p, 3) == add(g, b0, e_gen(g, 1)), "d_3 = b_0 + e_1");
  check(triangular_term(p, 5) == add(g, b1, sum_e(g, 2, 3)), "d_5 = b_1 + e_2 + e_3");
  // e_0, 2e_0, 3e_0, e_1, 2e_1, ... on the even indices.
  for (std::size_t i = 0; i < 60; ++i) {
    const std::size_t block = i / 3;
    const long coeff = static_cast<long>(i % 3) + 1;
    check(triangular_term(p, 2 * i) == e_gen(g, block, coeff), "even term d_" + std::to_string(2 * i));
  }
}

// 2. S/t/mu tables and both component inequalities for n > 3.
void tables(Check& check) {
  const TableReport r = check_tables(100000);
  check(r.checked == 100000, "checked count");
  check(!r.table_failure, "S_{t(n)} <= n < S_{t(n)+1} and n mod mu_n < mu_n");
  check(!r.mod_below_n, "n mod mu_n < n for n > 3");
  check(!r.n_below_s_prev, "n < S_{n-1} for n > 3");
}

// 3. Every nonzero g supported on blocks 0..3 is excluded for k <= 3.
void criterion_soundness(Check& check) {
  const auto p = TriangularParams::from_group(z4z2());
  const CriterionChecker checker(triangular_sequence(p), 512);
  // m' > 3 with every d_{2n}, n > m', in a block > 3; the proof excludes g
  // from A(k, 2 m_0) with m_0 = 4 m'(k+1).
  std::size_t m_prime = 3;
  for (std::size_t n = 0; n < 100; ++n) {
    if (even_position(p, n).first <= 3) m_prime = std::max(m_prime, n);
  }
  const ZVec moduli = block_moduli(p.g, 0);
  const auto block_elems = all_elements(moduli);
  for (unsigned k = 0; k <= 3; ++k) {
    const std::size_t bound = 2 * 4 * m_prime * (k + 1);
    for (std::size_t code = 1; code < 4096; ++code) {
      Element g;
      std::size_t c = code;
      for (std::size_t j = 0; j < 4; ++j, c /= 8) g = add(p.g, g, block_element(p.g, j, block_elems[c % 8]));
      const Verdict v = checker.check(g, k, bound);
      const bool ok = v.kind == Verdict::Kind::Excluded && v.certificate.sound && v.m <= bound;
      check(ok, "g = " + to_string(g) + ", k = " + std::to_string(k) + ": " + verdict_kind_name(v.kind) +
                    " m=" + std::to_string(v.m) + " tail=" + v.certificate.kind);
    }
  }
}

std::vector<TSeq> sequence_family() {
  std::vector<TSeq> out;
  const BlockGroup z2 = make_group({}, TailRule::constant(blk(2)));
  std::vector<Element> basis;
  for (std::size_t j = 0; j < 14; ++j) basis.push_back(e_gen(z2, j));
  out.push_back(explicit_sequence(z2, basis));
  out.push_back(triangular_sequence(TriangularParams::from_group(z4z2())));
  out.push_back(triangular_sequence(TriangularParams::from_group(make_group({}, TailRule::geometric(2, 1, {2})))));
  out.push_back(rule_sequence(ResidueSeqRule::geom(2)));
  out.push_back(rule_sequence(ResidueSeqRule::affine(1, 3, 0)));
  const BlockGroup z6 = make_group({blk(6), blk(4, {2})}, TailRule::none());
  out.push_back(explicit_sequence(z6, {e_gen(z6, 0), add(z6, e_gen(z6, 0, 2), h_gen(z6, 1, 0)), e_gen(z6, 1)},
                                  ExplicitTail::Periodic, 1));
  out.push_back(interleave({zero_sequence(z4z2()), triangular_sequence(TriangularParams::from_group(z4z2()))}));
  return out;
}

// 4. Lattice laws of A(k, m) on random instances.
void akm_properties(Check& check) {
  std::mt19937_64 rng(2024);
  const auto family = sequence_family();
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t which = rng() % family.size();
    const TSeq& seq = family[which];
    const unsigned k = rng() % 3;
    const std::size_t n = 3 + rng() % 8;
    const std::size_t m = rng() % n;
    const std::string tag = "seq " + std::to_string(which) + " k=" + std::to_string(k) + " m=" +
                            std::to_string(m) + " N=" + std::to_string(n);
    const auto base_list = enumerate_Akm(seq, k, m, n);
    const auto base = keys(base_list);
    const auto later = keys(enumerate_Akm(seq, k, m + 1, n));
    const auto bigger_k = keys(enumerate_Akm(seq, k + 1, m, n));
    const auto longer = keys(enumerate_Akm(seq, k, m, n + 1));
    check(std::includes(base.begin(), base.end(), later.begin(), later.end()), "anti-monotone in m, " + tag);
    check(std::includes(bigger_k.begin(), bigger_k.end(), base.begin(), base.end()), "monotone in k, " + tag);
    check(std::includes(longer.begin(), longer.end(), base.begin(), base.end()), "monotone in N, " + tag);
    check(base.count(Element().key()) == 1, "0 member, " + tag);
    bool symmetric = true;
    for (const auto& x : base_list) symmetric = symmetric && base.count(neg(seq.group(), x).key()) == 1;
    check(symmetric, "symmetric, " + tag);
    if (iter % 5 == 0) check(base == brute_akm(seq, k, m, n), "direct enumeration, " + tag);
  }
}

// 5. Radical of (Z(4)+Z(2))^omega equals H, and agrees with the oracle.
void radical_reproduction(Check& check) {
  const auto p = TriangularParams::from_group(z4z2());
  for (std::size_t b = 0; b <= 8; ++b) {
    const RadicalResult r = radical_of(p, b, 200);
    check(r.tag == RadicalTag::EqualsH, "EQUALS_H at B = " + std::to_string(b));
    for (const auto& [j, gens] : r.blocks) {
      std::vector<ZVec> coords;
      for (const auto& x : gens) coords.push_back(block_element_coords(p.g, j, x));
      check(span_equal(coords, {from_small({0, 1})}, block_moduli(p.g, j)), "block " + std::to_string(j) + " = H_j");
    }
  }
  for (std::size_t b = 0; b <= 3; ++b) {
    std::vector<std::size_t> blocks;
    for (std::size_t j = 0; j <= b; ++j) blocks.push_back(j);
    const Coordinates c(p.g, blocks);
    OracleInput in;
    in.moduli = c.moduli();
    for (std::size_t n = 0; n < 400; ++n) {
      std::map<std::size_t, Term> kept;
      const Element term = triangular_term(p, n);
      for (const auto& [j, t] : term.terms()) {
        if (j <= b) kept[j] = t;
      }
      in.prefix.push_back(c.flatten(make_element(p.g, kept)));
    }
    in.tail_start = 200;
    const OracleResult oracle = oracle_radical(in);
    check(oracle.sd_chars.size() == static_cast<std::size_t>(1) << (2 * (b + 1)),
          "oracle s_d has 4^(B+1) characters at B = " + std::to_string(b));
    const RadicalResult r = radical_of(p, b, 200);
    std::vector<ZVec> flat;
    for (const auto& [j, gens] : r.blocks) {
      for (const auto& x : gens) flat.push_back(c.flatten(x));
    }
    const auto mine = span(flat, in.moduli);
    std::set<std::vector<std::int64_t>> theirs;
    for (const auto& x : oracle.radical) theirs.insert(to_small(x));
    check(mine == theirs, "radical_of = oracle on the quotient at B = " + std::to_string(b));
  }
}

// 6. Z(2)^(omega) with H_i = <e_i> is MinAP.
void minap_reproduction(Check& check) {
  const auto p = TriangularParams::from_group(make_group({}, TailRule::constant(blk_spans(2))));
  for (std::size_t b = 0; b <= 8; ++b) {
    check(radical_of(p, b, 200).tag == RadicalTag::Minap, "MINAP at B = " + std::to_string(b));
  }
}

// 7. Bounded-case classification on a hand-derived table.
void bounded_classification(Check& check) {
  struct Row {
    std::string name;
    BlockGroup g;
    bool admissible;
    long p, m, image;  // witness when not admissible
    long b;
    bool contains;
  };
  auto head_n = [](long e, std::size_t n) { return std::vector<Block>(n, blk(e)); };
  const std::vector<Row> rows{
      {"Z(4)^w", make_group({}, TailRule::constant(blk(4))), true, 0, 0, 0, 2, true},
      {"Z(2)^w + Z(4)^3", make_group(head_n(4, 3), TailRule::constant(blk(2))), false, 2, 2, 8, 4, false},
      {"Z(6)^w", make_group({}, TailRule::constant(blk(6))), true, 0, 0, 0, 6, true},
      {"Z(2)^w", make_group({}, TailRule::constant(blk(2))), true, 0, 0, 0, 2, true},
      {"Z(12)^w", make_group({}, TailRule::constant(blk(12))), true, 0, 0, 0, 12, true},
      {"Z(2)^w + Z(4)", make_group(head_n(4, 1), TailRule::constant(blk(2))), false, 2, 2, 2, 2, true},
      {"Z(3)^w + Z(9)^2", make_group(head_n(9, 2), TailRule::constant(blk(3))), false, 3, 3, 9, 9, false},
      {"Z(6)^w + Z(4)", make_group(head_n(4, 1), TailRule::constant(blk(6))), false, 2, 6, 2, 6, true},
      {"Z(4)^w + Z(2)^5", make_group(head_n(2, 5), TailRule::constant(blk(4))), true, 0, 0, 0, 4, true},
      {"Z(12)^w + Z(8)", make_group(head_n(8, 1), TailRule::constant(blk(12))), false, 2, 12, 2, 8, false},
      {"(Z(4)+Z(2))^w", z4z2(), true, 0, 0, 0, 4, true},
      {"Z(15)^w + Z(25)", make_group(head_n(25, 1), TailRule::constant(blk(15))), false, 5, 15, 5, 25, false},
  };
  for (const auto& row : rows) {
    const AdmissibleReport a = minap_admissible(row.g);
    check(a.admissible == row.admissible, row.name + " admissible");
    check(contains_Z_expH_omega(row.g, row.b) == row.contains, row.name + " contains Z(b)^w");
    check(a.admissible == contains_Z_expH_omega(row.g, *exponent(row.g).value), row.name + " H = G instance");
    if (row.admissible) continue;
    check(a.p == std::optional<Integer>(row.p), row.name + " witness prime");
    check(a.m == std::optional<Integer>(row.m), row.name + " witness m");
    check(a.image_order == std::optional<Integer>(row.image), row.name + " image order");
    // mG from the presentation: the head blocks contribute m e_j, the tail is killed.
    const Integer m = *a.m;
    Integer image = 1;
    for (std::size_t j = 0; j < row.g.head_size(); ++j) {
      image *= *order_of(row.g, smul(row.g, m, e_gen(row.g, j))).value;
    }
    const Block tail = row.g.tail().block;
    check(smul(row.g, m, e_gen(row.g, row.g.head_size() + 3)).is_zero(), row.name + " m kills the tail");
    check(tail.h_orders.empty(), row.name + " tail has no H part");
    check(image == *a.image_order, row.name + " image order from the presentation");
  }
}

// 8. basis_change, split_lambda and peel_summand.
void structural(Check& check) {
  std::mt19937_64 rng(88);
  static const std::vector<long> cyc{2, 3, 4, 8, 9, 16, 27};
  for (int iter = 0; iter < 200; ++iter) {
    ZVec m;
    for (std::size_t i = 0; i < 2 + rng() % 3; ++i) m.emplace_back(cyc[rng() % cyc.size()]);
    std::vector<ZVec> gens;
    for (int i = 0; i < 4; ++i) {
      ZVec v;
      for (const auto& x : m) v.emplace_back(static_cast<long>(rng() % x.get_ui()));
      gens.push_back(v);
    }
    const CyclicBasis basis = subgroup_basis(gens, m);
    std::set<std::size_t> j_set;
    std::map<std::size_t, std::size_t> jmap;
    for (std::size_t i = 0; i < basis.gens.size(); ++i) {
      if (rng() % 2) j_set.insert(i);
    }
    for (std::size_t i = 0; i < basis.gens.size(); ++i) {
      if (j_set.count(i)) continue;
      for (auto j : j_set) {
        if (basis.orders[j] == basis.orders[i]) {
          jmap[i] = j;
          break;
        }
      }
    }
    const BasisChange out = basis_change(m, basis.gens, j_set, jmap);
    const bool same = contains_all(out.basis, basis.gens, m) && contains_all(basis.gens, out.basis, m);
    check(same && is_independent(out.basis, m), "basis_change instance " + std::to_string(iter));
  }

  static const std::vector<long> orders{2, 3, 4, 6, 8, 9, 12};
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<Block> head;
    for (std::size_t i = 0; i < rng() % 5; ++i) head.push_back(blk(orders[rng() % orders.size()]));
    const BlockGroup g = make_group(head, TailRule::constant(blk(orders[rng() % orders.size()])));
    const Decomposition d = split_lambda(g, 10);
    PrimaryClasses merged;
    for (const auto& part : d.parts) merged.insert(part.classes.begin(), part.classes.end());
    check(merged == primary_classes(g) && d.verified, "split_lambda instance " + std::to_string(iter));
  }

  for (const auto& pc : peel_cases()) {
    const PeelResult r = peel_summand(pc.input, 64);
    bool trivial = true;
    const auto& parts = r.decomposition.parts;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (std::size_t j = i + 1; j < parts.size(); ++j) {
        trivial = trivial && subgroup_intersection(parts[i].gens, parts[j].gens, pc.input.moduli).empty();
      }
    }
    check(r.decomposition.relation == Decomposition::Relation::DirectSum && r.decomposition.verified && trivial,
          "peel " + pc.name + " (case " + r.case_tag + ")");
  }
}

// 9. Lattice routines against enumeration on groups of order <= 512.
void lattice_oracle(Check& check) {
  std::mt19937_64 rng(99);
  static const std::vector<long> cyc{2, 3, 4, 5, 6, 8, 9, 12, 16};
  for (int iter = 0; iter < 320; ++iter) {
    ZVec m;
    long total = 1;
    for (std::size_t i = 0; i < 1 + rng() % 4; ++i) {
      const long c = cyc[rng() % cyc.size()];
      if (total * c > 512) break;
      total *= c;
      m.emplace_back(c);
    }
    if (m.empty()) m.emplace_back(2), total = 2;
    auto rand_vec = [&] {
      ZVec v;
      for (const auto& x : m) v.emplace_back(static_cast<long>(rng() % x.get_ui()));
      return v;
    };
    std::vector<ZVec> a, b;
    for (std::size_t i = 0; i < 1 + rng() % 3; ++i) a.push_back(rand_vec());
    for (std::size_t i = 0; i < 1 + rng() % 2; ++i) b.push_back(rand_vec());
    const std::string tag = "instance " + std::to_string(iter);
    const auto sa = span(a, m), sb = span(b, m);
    const auto elems = all_elements(m);

    // Smith invariants of the quotient: count x with n x in <a> for each n.
    const auto inv = quotient_invariants(a, m);
    bool snf_ok = true;
    for (long n = 1; n <= 16; ++n) {
      std::size_t killed = 0;
      for (const auto& x : elems) {
        ZVec y = x;
        for (auto& c : y) c *= n;
        if (sa.count(to_small(reduce_small(y, m)))) ++killed;
      }
      Integer expect = 1;
      for (const auto& s : inv) expect *= gcd(s, Integer(n));
      snf_ok = snf_ok && expect * static_cast<long>(sa.size()) == static_cast<long>(killed);
    }
    check(snf_ok, "quotient invariants, " + tag);

    // Hermite form is a complete invariant of the subgroup.
    std::vector<ZVec> a2 = a;
    if (a2.size() >= 2) {
      for (std::size_t t = 0; t < m.size(); ++t) a2[1][t] += 3 * a2[0][t];
    }
    std::reverse(a2.begin(), a2.end());
    check(subgroup_hnf(a, m) == subgroup_hnf(a2, m), "hnf of a regenerated subgroup, " + tag);
    check((subgroup_hnf(a, m) == subgroup_hnf(b, m)) == (sa == sb), "hnf decides equality, " + tag);

    bool member_ok = true;
    for (const auto& x : elems) {
      if (subgroup_membership(a, m, x).member != (sa.count(to_small(x)) == 1)) member_ok = false;
    }
    check(member_ok, "membership, " + tag);

    std::set<std::vector<std::int64_t>> both;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(both, both.begin()));
    check(span(subgroup_intersection(a, b, m), m) == both, "intersection, " + tag);
    check(is_independent(a, m) == brute_independent(a, m), "independence, " + tag);
  }
}

// 10. Circle membership.
void circle(Check& check) {
  const auto geom2 = ResidueSeqRule::geom(2);
  check(circle_membership(geom2, Rational(5, 8)).in, "geom(2), 5/8 is IN");
  const CircleResult third = circle_membership(geom2, Rational(1, 3));
  check(!third.in && third.period == 2, "geom(2), 1/3 is NOT_IN with period 2");

  std::mt19937_64 rng(1010);
  const std::vector<ResidueSeqRule> rules{geom2, ResidueSeqRule::geom(6), ResidueSeqRule::geom(10),
                                         ResidueSeqRule::affine(2, 1), ResidueSeqRule::affine(3, 2, 5),
                                         ResidueSeqRule::factorial()};
  for (int iter = 0; iter < 1000; ++iter) {
    const auto& u = rules[rng() % rules.size()];
    const long b = 1 + static_cast<long>(rng() % 500);
    Rational x(static_cast<long>(rng() % b), b);
    x.canonicalize();
    const CircleResult c = circle_membership(u, x);
    const std::size_t len = 10 * (c.preperiod + c.period);
    bool agree = true, zero_tail = true;
    for (std::size_t n = 0; n < len; ++n) {
      const Integer r = mod_floor(u.value(n) * x.get_num(), x.get_den());
      if (n >= c.preperiod) {
        agree = agree && r == c.cycle[(n - c.preperiod) % c.period];
        zero_tail = zero_tail && r == 0;
      } else {
        agree = agree && r == c.head[n];
      }
    }
    check(agree && c.in == zero_tail, u.to_string() + " at " + x.get_str());
  }
  for (int iter = 0; iter < 300; ++iter) {
    const auto& u = rules[rng() % rules.size()];
    const Rational x = frac(Rational(static_cast<long>(rng() % 200), 1 + static_cast<long>(rng() % 199)));
    const Rational y = frac(Rational(static_cast<long>(rng() % 200), 1 + static_cast<long>(rng() % 199)));
    if (circle_membership(u, x).in && circle_membership(u, y).in) {
      check(circle_membership(u, frac(x + y)).in, "closure under addition at " + x.get_str() + ", " + y.get_str());
    }
    check(circle_membership(u, frac(-x)).in == circle_membership(u, x).in, "closure under negation");
  }
}

// 11. term(nq + j) = a^j_n.
void interleaving(Check& check) {
  const BlockGroup z = make_group({blk_z()}, TailRule::none());
  std::vector<TSeq> pool;
  for (long q : {2L, 3L, 5L, 7L, 11L}) pool.push_back(rule_sequence(ResidueSeqRule::affine(1, q, q)));
  for (std::size_t q : {1u, 2u, 3u, 5u}) {
    std::vector<TSeq> parts(pool.begin(), pool.begin() + q);
    const TSeq seq = interleave(parts);
    bool ok = true;
    for (std::size_t n = 0; n <= 10000; ++n) {
      for (std::size_t j = 0; j < q; ++j) ok = ok && seq.term(n * q + j) == parts[j].term(n);
    }
    check(ok, "q = " + std::to_string(q));
  }
  (void)z;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "triangular prefix d_1, d_3, d_5 and even terms", 1, prefix_reproduction},
      {2, "S/t/mu tables for n <= 10^5", 5, tables},
      {3, "criterion soundness on blocks 0..3, k <= 3, N = 512", 120, criterion_soundness},
      {4, "A(k,m) lattice laws on 500 instances", 60, akm_properties},
      {5, "radical equals H, oracle agreement", 120, radical_reproduction},
      {6, "MinAP for Z(2)^(omega) with H_i = <e_i>", 60, minap_reproduction},
      {7, "bounded-case classification table", 10, bounded_classification},
      {8, "basis change, lambda split, summand peeling", 120, structural},
      {9, "lattice routines vs enumeration", 120, lattice_oracle},
      {10, "circle membership", 30, circle},
      {11, "interleaving law", 5, interleaving},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(check);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = error.empty() && check.failures == 0 && in_time;
    if (!pass) ++failed;
    std::printf("[%s] %2d %-52s %zu checks, %zu failed, %.2fs / %.0fs\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), check.checks, check.failures, secs, c.budget_seconds);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    if (!in_time) std::printf("    over the runtime budget\n");
    std::cout << check.notes.str() << std::flush;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
