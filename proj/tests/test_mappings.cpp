#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace ultrasim;

namespace {

FiniteMapping ex34() {
  return FiniteMapping::from_labels({"x1", "x2", "x3", "x4"}, {{"z", "h", "p", "p"},
                                                               {"h", "z", "h", "p"},
                                                               {"p", "h", "z", "p"},
                                                               {"p", "p", "p", "z"}});
}

// Pseudolinear quadruple with sides s, t and diagonals s + t.
FiniteMapping plq(int s, int t) {
  const std::string S = std::to_string(s), T = std::to_string(t), L = std::to_string(s + t);
  return FiniteMapping::from_labels({"x1", "x2", "x3", "x4"},
                                    {{"0", S, L, T}, {S, "0", T, L}, {L, T, "0", S}, {T, L, S, "0"}});
}

std::size_t idx(const FiniteMapping& m, const std::string& v) { return *m.value_index(v); }

bool all_coherence_forms_agree(const FiniteMapping& m, std::size_t a0, bool symmetric) {
  const bool direct = is_coherent_direct(m, a0);
  bool ok = direct == is_coherent_composition(m, a0, CompositionVariant::TwoSided) &&
            direct == is_coherent_refinement(m, a0);
  if (symmetric)
    ok = ok && direct == is_coherent_composition(m, a0, CompositionVariant::Left) &&
         direct == is_coherent_composition(m, a0, CompositionVariant::Right) &&
         direct == is_coherent_composition(m, a0, CompositionVariant::Either);
  return ok;
}

}  // namespace

TEST(Validate, RejectsMalformed) {
  EXPECT_THROW(FiniteMapping::validate({}, {}, {}), InputError);
  EXPECT_THROW(FiniteMapping::validate({"a", "a"}, {"v"}, {{0, 0}, {0, 0}}), InputError);
  EXPECT_THROW(FiniteMapping::validate({"a"}, {"v", "v"}, {{0}}), InputError);
  EXPECT_THROW(FiniteMapping::validate({"a"}, {"v"}, {{1}}), InputError);
  EXPECT_THROW(FiniteMapping::validate({"a", "b"}, {"v"}, {{0, 0}, {0}}), InputError);
  EXPECT_THROW(FiniteMapping::validate({"a"}, {"v", "w"}, {{0}}), InputError);
  EXPECT_THROW(FiniteMapping::from_labels({"a"}, {{"v"}}, std::vector<std::string>{"w"}), InputError);
}

TEST(Validate, ValuesInferredInFirstOccurrenceOrder) {
  const FiniteMapping m = ex34();
  EXPECT_EQ(m.values(), (std::vector<std::string>{"z", "h", "p"}));
  EXPECT_EQ(m.label_at(0, 1), "h");
}

TEST(Symmetry, Cases) {
  EXPECT_TRUE(is_symmetric(ex34()));
  const FiniteMapping m = FiniteMapping::from_labels({"a", "b"}, {{"0", "a"}, {"b", "0"}});
  EXPECT_EQ(find_asymmetry(m), (Asymmetry{0, 1}));
  oracle::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const FiniteMapping r = oracle::random_mapping(rng, oracle::pick(rng, 1, 4), 2);
    bool fibers_symmetric = true;
    for (std::size_t b = 0; b < r.value_count(); ++b) fibers_symmetric &= classify(fiber(r, b)).symmetric;
    ASSERT_EQ(fibers_symmetric, is_symmetric(r));
  }
}

TEST(Diagonal, Cases) {
  EXPECT_EQ(std::get<std::size_t>(diagonal_value(FiniteMapping::from_labels({"a"}, {{"q"}}))), 0u);
  const FiniteMapping c = FiniteMapping::from_labels({"a", "b"}, {{"c", "c"}, {"c", "c"}});
  EXPECT_EQ(std::get<std::size_t>(diagonal_value(c)), 0u);
  const FiniteMapping m = FiniteMapping::from_labels(
      {"a", "b", "c"}, {{"a", "x", "x"}, {"x", "a", "x"}, {"x", "x", "b"}});
  EXPECT_EQ(std::get<NonConstantDiagonal>(diagonal_value(m)), (NonConstantDiagonal{0, 2}));
}

TEST(Fiber, PartitionHasOneBlockPerValue) {
  const FiniteMapping m = ex34();
  const PairPartition p = fiber_partition(m);
  EXPECT_EQ(p.block_count(), 3u);
  EXPECT_EQ(fiber(m, idx(m, "h")), Relation::from_pairs(4, std::vector<Pair>{{0, 1}, {1, 0}, {1, 2}, {2, 1}}));
}

TEST(Coherence, DiagonalFiberIsCoherent) {
  EXPECT_TRUE(is_coherent_direct(ex34(), 0));
  EXPECT_TRUE(is_coherent_direct(plq(1, 2), 0));
}

TEST(Coherence, DirectViolation) {
  // fiber(a0) = diagonal plus {0,1}, but m(0,2) != m(1,2).
  const FiniteMapping m = FiniteMapping::from_labels(
      {"a", "b", "c"}, {{"0", "0", "u"}, {"0", "0", "v"}, {"u", "v", "0"}});
  const auto cert = find_coherence_violation(m, 0);
  ASSERT_TRUE(cert);
  const auto& q = std::get<NonCoherentQuadruple>(*cert);
  EXPECT_EQ((std::array<std::size_t, 4>{q.x1, q.x2, q.x3, q.x4}), (std::array<std::size_t, 4>{0, 1, 2, 2}));
  EXPECT_TRUE(verify_certificate(*cert, m));
}

TEST(Coherence, NonTransitiveFiberGivesQuadruple) {
  const FiniteMapping m = FiniteMapping::from_labels(
      {"a", "b", "c"}, {{"0", "0", "1"}, {"0", "0", "0"}, {"1", "0", "0"}});
  const auto cert = find_coherence_violation(m, 0);
  ASSERT_TRUE(cert);
  EXPECT_TRUE(std::holds_alternative<NonCoherentQuadruple>(*cert));
  EXPECT_TRUE(verify_certificate(*cert, m));
  EXPECT_FALSE(is_coherent_refinement(m, 0));
}

TEST(Coherence, ValueOutOfRangeThrows) { EXPECT_THROW(find_coherence_violation(ex34(), 7), InputError); }

TEST(Coherence, FormsAgreeExhaustivelySymmetric) {
  // All symmetric 3-point mappings over at most 3 labels, every a0.
  for (std::size_t code = 0; code < 729; ++code) {
    std::size_t c = code;
    std::vector<std::vector<std::string>> t(3, std::vector<std::string>(3));
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = x; y < 3; ++y) {
        t[x][y] = t[y][x] = std::to_string(c % 3);
        c /= 3;
      }
    const FiniteMapping m = FiniteMapping::from_labels(oracle::point_names(3), t);
    for (std::size_t a0 = 0; a0 < m.value_count(); ++a0) ASSERT_TRUE(all_coherence_forms_agree(m, a0, true));
  }
}

TEST(Coherence, TwoSidedAndRefinementAgreeOnArbitraryMappings) {
  oracle::Rng rng(22);
  for (int i = 0; i < 1000; ++i) {
    const FiniteMapping m = oracle::random_mapping(rng, oracle::pick(rng, 1, 5), oracle::pick(rng, 1, 3));
    for (std::size_t a0 = 0; a0 < m.value_count(); ++a0) ASSERT_TRUE(all_coherence_forms_agree(m, a0, false));
  }
}

TEST(Coherence, InvariantUnderRelabeling) {
  oracle::Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const FiniteMapping m = oracle::random_symmetric(rng, oracle::pick(rng, 1, 6), oracle::pick(rng, 1, 3));
    const FiniteMapping s = oracle::scramble(rng, m);
    const auto g = oracle::brute_force_similarity(m, s);
    ASSERT_TRUE(g);
    // Find the value of s corresponding to each value of m through g.
    for (std::size_t a0 = 0; a0 < m.value_count(); ++a0) {
      std::optional<std::size_t> image;
      for (std::size_t x = 0; x < m.size() && !image; ++x)
        for (std::size_t y = 0; y < m.size() && !image; ++y)
          if (m.at((*g)[x], (*g)[y]) == a0) image = s.at(x, y);
      ASSERT_EQ(is_coherent_direct(m, a0), is_coherent_direct(s, *image));
    }
  }
}

TEST(Scalene, Cases) {
  EXPECT_FALSE(scalene_triple(ex34()));
  EXPECT_FALSE(scalene_triple(plq(1, 1)));
  EXPECT_EQ(scalene_triple(plq(1, 2)), (ScaleneTriple{0, 1, 2}));
  EXPECT_EQ(scalene_triple(plq(3, 1)), (ScaleneTriple{0, 1, 2}));
  const FiniteMapping constant = FiniteMapping::from_labels(oracle::point_names(4), {{"0", "c", "c", "c"},
                                                                                      {"c", "0", "c", "c"},
                                                                                      {"c", "c", "0", "c"},
                                                                                      {"c", "c", "c", "0"}});
  EXPECT_FALSE(scalene_triple(constant));
  const auto all = all_scalene_triples(plq(1, 2));
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all.front(), *scalene_triple(plq(1, 2)));
  for (const auto& t : all) EXPECT_TRUE(verify_certificate(Certificate{t}, plq(1, 2)));
}

TEST(URelation, SinglePoint) {
  const FiniteMapping m = FiniteMapping::from_labels({"a"}, {{"0"}});
  EXPECT_EQ(u_relation(m), Relation::identity(1));
}

TEST(URelation, FourPointCycleContainsBothDirections) {
  const FiniteMapping m = ex34();
  const Relation u = u_relation(m);
  const std::size_t h = idx(m, "h"), p = idx(m, "p");
  EXPECT_TRUE(u.contains(h, p));
  EXPECT_TRUE(u.contains(p, h));
  EXPECT_EQ(find_u_witness(m, p, h), (Triple{0, 1, 2}));
  // <h, p> comes from (x1, x4, x2).
  const Triple w{0, 3, 1};
  EXPECT_EQ(m.at(w[0], w[2]), h);
  EXPECT_EQ(m.at(w[0], w[1]), p);
  EXPECT_EQ(m.at(w[1], w[2]), p);
  EXPECT_FALSE(classify(transitive_closure(u)).antisymmetric);
}

TEST(URelation, EquilateralQuadrupleByBruteForce) {
  const FiniteMapping m = plq(1, 1);  // values 0, 1 and 2 = L
  Relation expected(m.value_count());
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        if (m.at(a, b) == m.at(b, c)) expected.insert(m.at(a, c), m.at(a, b));
  EXPECT_EQ(u_relation(m), expected);
  const std::size_t z = idx(m, "0"), s = idx(m, "1"), L = idx(m, "2");
  EXPECT_TRUE(expected.contains(z, s) && expected.contains(z, L) && expected.contains(L, s));
  EXPECT_FALSE(expected.contains(s, L));
}

TEST(URelation, DiagonalValueBelowEverything) {
  oracle::Rng rng(24);
  for (int i = 0; i < 300; ++i) {
    const FiniteMapping m = oracle::random_symmetric(rng, oracle::pick(rng, 1, 6), oracle::pick(rng, 1, 4));
    const Relation u = u_relation(m);
    const std::size_t a0 = std::get<std::size_t>(diagonal_value(m));
    for (std::size_t v = 0; v < m.value_count(); ++v) ASSERT_TRUE(u.contains(a0, v));
  }
}

TEST(URelation, AsymmetricThrows) {
  EXPECT_THROW(u_relation(FiniteMapping::from_labels({"a", "b"}, {{"0", "a"}, {"b", "0"}})), InputError);
}

TEST(ShortestCycle, FourPointCycle) {
  const FiniteMapping m = ex34();
  const auto cycle = shortest_cycle(u_relation(m));
  ASSERT_TRUE(cycle);
  EXPECT_EQ(cycle->size(), 2u);
  const UCycle c = make_u_cycle(m, *cycle);
  EXPECT_TRUE(verify_certificate(Certificate{c}, m));
}

TEST(ShortestCycle, NoneIffClosureAntisymmetric) {
  oracle::Rng rng(25);
  for (int i = 0; i < 500; ++i) {
    const Relation r = oracle::random_relation(rng, oracle::pick(rng, 1, 6), 0.25);
    const auto cycle = shortest_cycle(r);
    ASSERT_EQ(!cycle.has_value(), classify(transitive_closure(r) | Relation::identity(r.size())).antisymmetric);
    if (cycle) {
      for (std::size_t i2 = 0; i2 < cycle->size(); ++i2) ASSERT_TRUE(r.contains((*cycle)[i2], (*cycle)[(i2 + 1) % cycle->size()]));
    }
  }
}

TEST(Certificates, EveryProducedCertificateVerifies) {
  oracle::Rng rng(26);
  for (int i = 0; i < 500; ++i) {
    const FiniteMapping m = i % 3 == 0 ? oracle::random_mapping(rng, oracle::pick(rng, 1, 5), 3)
                                       : oracle::random_symmetric(rng, oracle::pick(rng, 1, 6), 4);
    for (const auto& r : {realize_pseudoultrametric(m), realize_ultrametric(m)})
      if (auto c = std::get_if<Certificate>(&r)) { ASSERT_TRUE(verify_certificate(*c, m)) << certificate_tag(*c); }
  }
}

TEST(Certificates, ForgedCertificatesAreRejected) {
  const FiniteMapping m = ex34();
  EXPECT_FALSE(verify_certificate(Asymmetry{0, 1}, m));
  EXPECT_FALSE(verify_certificate(ScaleneTriple{0, 1, 2}, m));
  EXPECT_FALSE(verify_certificate(FiberNotDiagonal{0, 1}, m));
  EXPECT_FALSE(verify_certificate(UCycle{{1, 2}, {{0, 1, 2}, {0, 1, 2}}}, m));
  EXPECT_FALSE(verify_certificate(ScaleneTriple{0, 1, 9}, m));
}
