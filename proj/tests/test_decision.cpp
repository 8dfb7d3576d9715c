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

FiniteMapping plq(int s, int t) {
  const std::string S = std::to_string(s), T = std::to_string(t), L = std::to_string(s + t);
  return FiniteMapping::from_labels({"x1", "x2", "x3", "x4"},
                                    {{"0", S, L, T}, {S, "0", T, L}, {L, T, "0", S}, {T, L, S, "0"}});
}

FinitePoset ex326_poset() {
  return FinitePoset::from_pairs({"q0", "a", "b", "c"}, {{"q0", "a"}, {"q0", "b"}, {"q0", "c"}});
}

FiniteMapping ex326_mapping() {
  return FiniteMapping::from_labels({"x1", "x2", "x3"}, {{"q0", "a", "c"}, {"a", "q0", "b"}, {"c", "b", "q0"}});
}

}  // namespace

TEST(Realize, ConstantOffDiagonal) {
  const FiniteMapping m = FiniteMapping::from_labels({"a", "b", "c"}, {{"z", "c", "c"}, {"c", "z", "c"}, {"c", "c", "z"}});
  const auto r = std::get<Realization>(realize_pseudoultrametric(m));
  EXPECT_EQ(r.assignment, (std::vector<Rational>{0, 1}));
  EXPECT_FALSE(realization_problem(r, m));
  EXPECT_TRUE(std::holds_alternative<Realization>(realize_ultrametric(m)));
}

TEST(Realize, FourPointCycleGivesUCycle) {
  const FiniteMapping m = ex34();
  const auto cert = std::get<Certificate>(realize_pseudoultrametric(m));
  const UCycle& c = std::get<UCycle>(cert);
  std::vector<std::size_t> values = c.values;
  std::sort(values.begin(), values.end());
  EXPECT_EQ(values, (std::vector<std::size_t>{*m.value_index("h"), *m.value_index("p")}));
  EXPECT_TRUE(verify_certificate(cert, m));
}

TEST(Realize, EquilateralQuadrupleRanks) {
  const FiniteMapping m = plq(1, 1);
  const auto r = std::get<Realization>(realize_ultrametric(m));
  EXPECT_EQ(r.assignment[*m.value_index("0")], 0);
  EXPECT_EQ(r.assignment[*m.value_index("2")], 1);
  EXPECT_EQ(r.assignment[*m.value_index("1")], 2);
  EXPECT_EQ(r.matrix[0][2], 1);
  EXPECT_EQ(r.matrix[1][3], 1);
  EXPECT_EQ(r.matrix[0][1], 2);
  EXPECT_EQ(count_strong_triangle_violations(r.matrix), 0u);
  EXPECT_FALSE(realization_problem(r, m));
}

TEST(Realize, EquilateralQuadrupleOrderIsForced) {
  // Of the two orders of {s, 2s} above zero, only 2s < s gives an ultrametric.
  const FiniteMapping m = plq(1, 1);
  std::size_t good = 0;
  for (int swap = 0; swap < 2; ++swap) {
    RationalMatrix d(4, std::vector<Rational>(4));
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y) {
        const std::string& l = m.label_at(x, y);
        d[x][y] = l == "0" ? 0 : ((l == "1") != (swap == 1) ? 1 : 2);
      }
    if (count_strong_triangle_violations(d) == 0) {
      ++good;
      EXPECT_EQ(d[0][2], 1);  // diagonal pair sits lower
    }
  }
  EXPECT_EQ(good, 1u);
}

TEST(Realize, ScaleneQuadruple) {
  EXPECT_EQ(std::get<ScaleneTriple>(std::get<Certificate>(realize_ultrametric(plq(1, 2)))), (ScaleneTriple{0, 1, 2}));
  EXPECT_EQ(std::get<ScaleneTriple>(std::get<Certificate>(realize_pseudoultrametric(plq(2, 5)))),
            (ScaleneTriple{0, 1, 2}));
}

TEST(Realize, SinglePoint) {
  const FiniteMapping m = FiniteMapping::from_labels({"p"}, {{"0"}});
  const auto r = std::get<Realization>(realize_ultrametric(m));
  EXPECT_EQ(r.matrix, (RationalMatrix{{Rational(0)}}));
}

TEST(Realize, FiberNotDiagonal) {
  const FiniteMapping m = FiniteMapping::from_labels({"a", "b"}, {{"0", "0"}, {"0", "0"}});
  EXPECT_EQ(std::get<FiberNotDiagonal>(std::get<Certificate>(realize_ultrametric(m))), (FiberNotDiagonal{0, 1}));
  EXPECT_TRUE(std::holds_alternative<Realization>(realize_pseudoultrametric(m)));
}

TEST(Realize, CertificatePriority) {
  // Asymmetric and scalene at once: asymmetry wins.
  const FiniteMapping asym = FiniteMapping::from_labels(
      {"a", "b", "c"}, {{"0", "1", "2"}, {"1", "0", "3"}, {"2", "4", "0"}});
  EXPECT_TRUE(std::holds_alternative<Asymmetry>(std::get<Certificate>(realize_pseudoultrametric(asym))));
  // Non-constant diagonal beats scalene.
  const FiniteMapping diag = FiniteMapping::from_labels(
      {"a", "b", "c"}, {{"0", "1", "2"}, {"1", "0", "3"}, {"2", "3", "9"}});
  EXPECT_TRUE(std::holds_alternative<NonConstantDiagonal>(std::get<Certificate>(realize_pseudoultrametric(diag))));
  // Incoherent and scalene: coherence wins; for ultra it also precedes the fiber check.
  const FiniteMapping inc = FiniteMapping::from_labels(
      {"a", "b", "c", "d"}, {{"0", "0", "1", "5"}, {"0", "0", "2", "5"}, {"1", "2", "0", "3"}, {"5", "5", "3", "0"}});
  EXPECT_TRUE(std::holds_alternative<NonCoherentQuadruple>(std::get<Certificate>(realize_ultrametric(inc))));
}

TEST(Realize, RandomSoundnessAndOracleAgreement) {
  oracle::Rng rng(41);
  for (int i = 0; i < 600; ++i) {
    const std::size_t n = oracle::pick(rng, 1, 6);
    const FiniteMapping m = i % 2 ? oracle::random_symmetric(rng, n, oracle::pick(rng, 1, 4))
                                  : oracle::relabel_randomly(rng, oracle::random_pseudoultrametric(rng, n, 3));
    for (bool ultra : {false, true}) {
      const auto r = ultra ? realize_ultrametric(m) : realize_pseudoultrametric(m);
      const bool yes = std::holds_alternative<Realization>(r);
      ASSERT_EQ(yes, oracle::brute_force_realizable(m, ultra));
      if (yes) { ASSERT_FALSE(realization_problem(std::get<Realization>(r), m)); }
    }
  }
}

TEST(RealizationProblem, DetectsBrokenRealizations) {
  const FiniteMapping m = plq(1, 1);
  auto r = std::get<Realization>(realize_pseudoultrametric(m));
  auto bad = r;
  bad.matrix[0][1] = 5;
  EXPECT_TRUE(realization_problem(bad, m));
  bad = r;
  bad.assignment[1] = bad.assignment[2];
  EXPECT_TRUE(realization_problem(bad, m));
  // Swapping the two positive ranks breaks the strong triangle inequality.
  bad = r;
  std::swap(bad.assignment[1], bad.assignment[2]);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) bad.matrix[x][y] = bad.assignment[m.at(x, y)];
  EXPECT_EQ(realization_problem(bad, m), std::optional<std::string>("strong triangle inequality fails"));
}

TEST(QValidators, AtomPosetDistance) {
  const FinitePoset q = ex326_poset();
  const FiniteMapping m = ex326_mapping();
  const ValueMap e = embed_by_label(m, q);
  EXPECT_TRUE(is_ultrametric_distance(m, q, e));
  const auto v = q_ultrametric_violation(m, q, e);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->clause, QViolation::Clause::NoIsoscelesOrder);
  EXPECT_EQ(v->points, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_FALSE(is_q_pseudoultrametric(m, q, e));
}

TEST(QValidators, ChainValuedUltrametricAgreesWithBruteForce) {
  oracle::Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const auto d = oracle::random_ultrametric(rng, oracle::pick(rng, 1, 7), 3);
    const Realization r = realization_from_matrix(oracle::point_names(d.size()), d, RealizedKind::Ultrametric);
    const FiniteMapping m = r.as_mapping();
    const FinitePoset chain = FinitePoset::chain(m.values());
    const ValueMap e = embed_by_label(m, chain);
    // Brute force over all triples and all thresholds in the chain.
    bool distance_ok = true;
    for (std::size_t x = 0; x < m.size(); ++x)
      for (std::size_t y = 0; y < m.size(); ++y)
        for (std::size_t z = 0; z < m.size(); ++z)
          for (const auto& g : r.distances())
            if (d[x][y] <= g && d[y][z] <= g && !(d[x][z] <= g)) distance_ok = false;
    ASSERT_TRUE(distance_ok);
    ASSERT_TRUE(is_ultrametric_distance(m, chain, e));
    ASSERT_TRUE(is_q_ultrametric(m, chain, e));
  }
}

TEST(QValidators, QUltrametricImpliesDistanceAndCoherence) {
  oracle::Rng rng(43);
  for (int i = 0; i < 300; ++i) {
    const FinitePoset q = oracle::random_poset_with_bottom(rng, oracle::pick(rng, 2, 5), false);
    const bool ultra = i % 2 == 0;
    const FiniteMapping m = oracle::random_q_pseudoultrametric(rng, q, oracle::pick(rng, 1, 6), ultra);
    const ValueMap e = embed_by_label(m, q);
    ASSERT_TRUE(is_q_pseudoultrametric(m, q, e));
    ASSERT_TRUE(is_coherent_direct(m, *m.value_index(q.label(0))));
    if (ultra) {
      ASSERT_TRUE(is_q_ultrametric(m, q, e));
      ASSERT_TRUE(is_ultrametric_distance(m, q, e));
    }
  }
}

TEST(QValidators, Preconditions) {
  const FinitePoset no_bottom = FinitePoset::validate({"a", "b"}, Relation::identity(2));
  const FiniteMapping m = FiniteMapping::from_labels({"x"}, {{"a"}});
  EXPECT_THROW(is_q_pseudoultrametric(m, no_bottom, {0}), InputError);
  EXPECT_THROW(is_q_pseudoultrametric(m, ex326_poset(), {7}), InputError);
  EXPECT_THROW(embed_by_label(FiniteMapping::from_labels({"x"}, {{"zz"}}), ex326_poset()), InputError);
}

TEST(QValidators, DiagonalAndAsymmetryClauses) {
  const FinitePoset q = ex326_poset();
  const FiniteMapping asym = FiniteMapping::from_labels({"x", "y"}, {{"q0", "a"}, {"b", "q0"}});
  EXPECT_EQ(q_pseudoultrametric_violation(asym, q, embed_by_label(asym, q))->clause, QViolation::Clause::Asymmetry);
  const FiniteMapping diag = FiniteMapping::from_labels({"x", "y"}, {{"a", "b"}, {"b", "a"}});
  EXPECT_EQ(ultrametric_distance_violation(diag, q, embed_by_label(diag, q))->clause,
            QViolation::Clause::DiagonalNotBottom);
  const FiniteMapping zero = FiniteMapping::from_labels({"x", "y"}, {{"q0", "q0"}, {"q0", "q0"}});
  EXPECT_TRUE(is_q_pseudoultrametric(zero, q, embed_by_label(zero, q)));
  EXPECT_EQ(q_ultrametric_violation(zero, q, embed_by_label(zero, q))->clause, QViolation::Clause::BottomOffDiagonal);
}

TEST(Isotone, ComposeRejectsBadMaps) {
  const FinitePoset q = FinitePoset::chain({"0", "1", "2"});
  const FinitePoset l = FinitePoset::chain({"a", "b"});
  const FiniteMapping m = FiniteMapping::from_labels({"x", "y"}, {{"0", "2"}, {"2", "0"}});
  EXPECT_THROW(compose_isotone({1, 1, 1}, m, q, l), InputError);  // bottom not preserved
  EXPECT_THROW(compose_isotone({0, 1, 0}, m, q, l), InputError);  // not isotone
  const FiniteMapping out = compose_isotone({0, 0, 1}, m, q, l);
  EXPECT_EQ(out.label_at(0, 1), "b");
}

TEST(Isotone, KernelConditionAndCounterexample) {
  const FinitePoset q = FinitePoset::chain({"0", "1", "2"});
  const FinitePoset l = FinitePoset::chain({"a", "b"});
  const auto fail = preservation_failure({0, 0, 1}, q, l, true);
  ASSERT_TRUE(fail);
  EXPECT_EQ(fail->reason, PreservationFailure::Reason::NontrivialKernel);
  EXPECT_EQ(fail->a, 1u);
  EXPECT_FALSE(check_ultrametric_preserving({0, 0, 1}, q, l));
  const FiniteMapping two = two_point_ultrametric(q, 1);
  EXPECT_TRUE(is_q_ultrametric(two, q, embed_by_label(two, q)));
  const FiniteMapping image = compose_isotone({0, 0, 1}, two, q, l);
  EXPECT_FALSE(is_q_ultrametric(image, l, embed_by_label(image, l)));
  EXPECT_TRUE(check_ultrametric_preserving({0, 1, 1}, q, l));
  EXPECT_THROW(two_point_ultrametric(q, 0), InputError);
}

TEST(CanonicalChain, SmallCases) {
  const auto one = canonical_chain_ultrametric({"0"});
  EXPECT_EQ(one.mapping.index_table(), (std::vector<std::vector<std::size_t>>{{0}}));
  const auto three = canonical_chain_ultrametric({"0", "1", "2"});
  EXPECT_EQ(three.mapping.label_at(1, 2), "2");
  EXPECT_EQ(three.mapping.label_at(0, 1), "1");
  EXPECT_EQ(three.mapping.label_at(0, 2), "2");
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(three.mapping.label_at(i, i), "0");
  EXPECT_THROW(canonical_chain_ultrametric({}), InputError);
}

TEST(CanonicalChain, MinimalOrderIsTheChain) {
  std::vector<std::string> chain;
  for (int i = 0; i < 8; ++i) chain.push_back(std::to_string(i));
  const auto c = canonical_chain_ultrametric(chain);
  EXPECT_EQ(std::get<FinitePoset>(minimal_order(c.mapping)), c.order);
  EXPECT_EQ(c.mapping.value_count(), chain.size());
  EXPECT_TRUE(is_q_ultrametric(c.mapping, c.order, embed_by_label(c.mapping, c.order)));
}

TEST(Balls, TwoPointSpace) {
  const Realization r = realization_from_matrix({"x", "y"}, {{0, 1}, {1, 0}}, RealizedKind::Ultrametric);
  const auto balls = closed_balls(r);
  ASSERT_EQ(balls.size(), 3u);
  EXPECT_EQ(balls[0], (Ball{{0}, Rational(0)}));
  EXPECT_EQ(balls[1], (Ball{{0, 1}, Rational(1)}));
  EXPECT_EQ(balls[2], (Ball{{1}, Rational(0)}));
  // The ball relation has <1, 1>; the triple relation does not, since no
  // triangle has two sides of length 1 here.
  const Relation via_balls = u_via_balls(r);
  const Relation u = u_relation(r.as_mapping());
  EXPECT_TRUE(via_balls.contains(1, 1));
  EXPECT_FALSE(u.contains(1, 1));
}

// The triple relation and the ball relation agree off the diagonal, and the
// triple relation's diagonal is contained in the ball relation's.
TEST(Balls, AgreeOffDiagonalOnRandomUltrametrics) {
  oracle::Rng rng(44);
  for (int i = 0; i < 300; ++i) {
    const auto d = oracle::random_ultrametric(rng, oracle::pick(rng, 1, 12), oracle::pick(rng, 1, 6));
    const Realization r = realization_from_matrix(oracle::point_names(d.size()), d, RealizedKind::Ultrametric);
    const Relation u = u_relation(r.as_mapping());
    const Relation b = u_via_balls(r);
    ASSERT_TRUE(u.is_subset_of(b));
    for (const auto& [x, y] : b.pairs())
      if (x != y) { ASSERT_TRUE(u.contains(x, y)); }
  }
}

TEST(Analyze, StagesStopAtFirstFailureUnlessFull) {
  const FiniteMapping m = plq(1, 2);
  const AnalysisReport quick = analyze(m);
  EXPECT_TRUE(quick.scalene_checked);
  EXPECT_TRUE(quick.scalene);
  EXPECT_FALSE(quick.u);
  EXPECT_FALSE(quick.pseudo_yes());
  const AnalysisReport full = analyze(m, AnalysisOptions{true});
  EXPECT_TRUE(full.u);
  EXPECT_TRUE(full.minimal);
  EXPECT_FALSE(full.all_scalene.empty());

  const AnalysisReport ok = analyze(plq(1, 1));
  EXPECT_TRUE(ok.pseudo_yes());
  EXPECT_TRUE(ok.ultra_yes());
  EXPECT_TRUE(std::holds_alternative<FinitePoset>(*ok.minimal));
}
