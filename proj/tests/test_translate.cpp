#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "omqkit/translate.hpp"
#include "oracles.hpp"

using namespace omqkit;

namespace {

std::string read_data(const std::string& name) {
    std::ifstream in(std::string(OMQKIT_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Schema kBinary{{"A", 1}, {"R", 2}};

OmqQuery random_aq(oracle::Rng& rng, bool with_univ) {
    OmqQuery q;
    q.data_schema = Schema{{"A", 1}, {"B", 1}, {"R", 2}};
    std::vector<std::string> roles = {"R"};
    if (with_univ) roles.push_back(kUniversalRole);
    q.ontology = oracle::random_ontology(rng, {"A", "B"}, roles, 2, 2);
    q.kind = OmqQuery::Kind::AQ;
    q.concept_name = "A";
    return q;
}

}  // namespace

TEST(OmqToMddlog, SubsumptionIsApplied) {
    OmqQuery q = parse_omq("schema A/1 B/1\naxiom B sub A\nquery aq A\n");
    Program p = aq_omq_to_mddlog(q);
    EXPECT_EQ(eval_bruteforce(p, parse_instance("B(b).")), (AnswerSet{{"b"}}));
    Classification c = classify(p);
    EXPECT_TRUE(c.monadic);
    EXPECT_TRUE(c.connected);
    EXPECT_TRUE(c.simple);
}

TEST(OmqToMddlog, EmptyOntology) {
    OmqQuery q = parse_omq("schema A/1 R/2\nquery aq A\n");
    EXPECT_EQ(eval_bruteforce(aq_omq_to_mddlog(q), parse_instance("A(a). R(a,b).")), (AnswerSet{{"a"}}));
}

TEST(OmqToMddlog, ExampleOne) {
    OmqQuery q = parse_omq(read_data("example1.omq"));
    Instance d = parse_instance(read_data("example1.facts"));
    EXPECT_EQ(eval_bruteforce(aq_omq_to_mddlog(q), d), (AnswerSet{{"pat1"}, {"pat2"}}));
}

TEST(OmqToMddlog, Heredity) {
    OmqQuery q = parse_omq(read_data("hered.omq"));
    Instance d = parse_instance(read_data("family.facts"));
    EXPECT_EQ(eval_bruteforce(aq_omq_to_mddlog(q), d), (AnswerSet{{"a"}, {"b"}}));
}

TEST(OmqToMddlog, RejectsUcq) {
    OmqQuery q = parse_omq("schema A/1 R/2\nquery ucq (X) :- R(X,Y), A(Y)\n");
    EXPECT_THROW(aq_omq_to_mddlog(q), UnsupportedError);
}

TEST(OmqToMddlog, AgreesWithTemplates) {
    oracle::Rng rng(43);
    const Schema s{{"A", 1}, {"B", 1}, {"R", 2}};
    const auto small = oracle::instance_classes(s, 2);
    for (int i = 0; i < 40; ++i) {
        OmqQuery q = random_aq(rng, i % 4 == 3);
        Program p = aq_omq_to_mddlog(q);
        CocspEvaluator templates(aq_omq_to_templates(q));
        for (const auto& d : small) ASSERT_EQ(eval_bruteforce(p, d), templates.eval(d)) << render_omq(q) << render_instance(d);
        for (int j = 0; j < 4; ++j) {
            Instance d = oracle::random_instance(s, 4, 0.3, rng);
            ASSERT_EQ(eval_bruteforce(p, d), templates.eval(d)) << render_omq(q) << render_instance(d);
        }
    }
}

TEST(OmqToMddlog, ModelsGiveUpperBound) {
    // Any model of O containing D that avoids A at e shows e is not a certain answer.
    oracle::Rng rng(47);
    const Schema s{{"A", 1}, {"B", 1}, {"R", 2}};
    for (int i = 0; i < 60; ++i) {
        OmqQuery q = random_aq(rng, false);
        Program p = aq_omq_to_mddlog(q);
        Instance d = oracle::random_instance(s, 3, 0.3, rng);
        auto answers = eval_bruteforce(p, d);
        RelStructure b;
        b.facts = d;
        for (const auto& c : oracle::constants(3)) b.domain.insert(c);
        if (!oracle::naive_model(b, q.ontology)) continue;
        for (const auto& e : d.active_domain())
            if (!d.contains(Fact{"A", {e}})) EXPECT_FALSE(answers.count({e})) << render_omq(q) << render_instance(d);
    }
}

TEST(MddlogToOmq, ExistsRuleBecomesInclusion) {
    OmqQuery q = mddlog_to_aq_omq(parse_program("goal(X) :- R(X,Y)."), MddlogVariant::UnaryConnectedSimple);
    ASSERT_EQ(q.ontology.inclusions.size(), 1u);
    EXPECT_TRUE(same_concept(q.ontology.inclusions[0].lhs, parse_concept("exists R . top")));
    EXPECT_TRUE(same_concept(q.ontology.inclusions[0].rhs, Concept::atomic("goal")));
    EXPECT_EQ(q.kind, OmqQuery::Kind::AQ);
    EXPECT_EQ(q.concept_name, "goal");
}

TEST(MddlogToOmq, DisjunctiveRule) {
    Program p = parse_program("P1(X) ; P2(Y) :- R(X,Y), A(X), B(Y).\ngoal(X) :- P1(X).");
    OmqQuery q = mddlog_to_aq_omq(p, MddlogVariant::UnaryConnectedSimple);
    ASSERT_EQ(q.ontology.inclusions.size(), 2u);
    EXPECT_TRUE(same_concept(q.ontology.inclusions[0].lhs, parse_concept("(A and exists R . (B and not P2))")))
        << render_inclusion(q.ontology.inclusions[0]);
    EXPECT_TRUE(same_concept(q.ontology.inclusions[0].rhs, Concept::atomic("P1")));
}

TEST(MddlogToOmq, DisconnectedRuleUsesUniversalRole) {
    Program p = parse_program("edb A/1 R/2.\ngoal(X) :- adom(X), A(Y).");
    EXPECT_THROW(mddlog_to_aq_omq(p, MddlogVariant::UnaryConnectedSimple), ValidationError);
    OmqQuery q = mddlog_to_aq_omq(p, MddlogVariant::UnarySimple);
    EXPECT_EQ(q.ontology.dialect, Dialect::ALCU);
    bool found = false;
    for (const auto& inc : q.ontology.inclusions)
        found = found || same_concept(inc.lhs, parse_concept("exists univ . A"));
    EXPECT_TRUE(found) << render_ontology(q.ontology);
}

TEST(MddlogToOmq, VariantIsChecked) {
    EXPECT_THROW(mddlog_to_aq_omq(parse_program("goal(X) :- R(X,X)."), MddlogVariant::UnaryConnectedSimple),
                 ValidationError);
    EXPECT_THROW(mddlog_to_aq_omq(parse_program("goal :- A(X)."), MddlogVariant::UnaryConnectedSimple),
                 ValidationError);
    EXPECT_EQ(detect_variant(parse_program("goal :- A(X).")), MddlogVariant::BooleanConnectedSimple);
    EXPECT_EQ(detect_variant(parse_program("P(X,Y) :- R(X,Y).\ngoal(X) :- A(X).")), std::nullopt);
}

TEST(MddlogToOmq, RoundTripPreservesAnswers) {
    oracle::Rng rng(53);
    const auto small = oracle::instance_classes(kBinary, 3);
    int checked = 0;
    for (int i = 0; i < 30; ++i) {
        oracle::ProgramShape shape;
        shape.connected_simple = true;
        shape.unary_goal = i % 2 == 0;
        Program p = oracle::random_mddlog(rng, shape);
        auto variant = detect_variant(p);
        ASSERT_TRUE(variant) << render_program(p);
        OmqQuery q = mddlog_to_aq_omq(p, *variant);
        EXPECT_EQ(q.data_schema, p.edb);
        Program back = aq_omq_to_mddlog(q);
        for (const auto& d : small) {
            ASSERT_EQ(eval_bruteforce(back, d), eval_bruteforce(p, d)) << render_program(p) << render_instance(d);
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(MddlogToUcq, SingleGoalRule) {
    OmqQuery q = mddlog_to_ucq_omq(parse_program("goal(X) :- A(X)."));
    EXPECT_EQ(q.kind, OmqQuery::Kind::UCQ);
    EXPECT_TRUE(q.ontology.inclusions.empty());
    EXPECT_EQ(q.ucq.disjuncts.size(), 1u);
    EXPECT_EQ(adversarial_complement_eval(q, parse_instance("A(a).")), (AnswerSet{{"a"}}));
}

TEST(MddlogToUcq, ComplementDisjunct) {
    Program p = parse_program("edb A/1.\nP(X) :- A(X).\ngoal(X) :- P(X).");
    OmqQuery q = mddlog_to_ucq_omq(p);
    bool has_complement = false;
    for (const auto& cq : q.ucq.disjuncts)
        for (const auto& a : cq.atoms) has_complement = has_complement || a.predicate == "Abar_P";
    EXPECT_TRUE(has_complement) << render_ucq(q.ucq);
    Instance d = parse_instance("A(a).");
    EXPECT_EQ(adversarial_complement_eval(q, d), (AnswerSet{{"a"}}));
    EXPECT_EQ(adversarial_complement_eval(q, d), eval_bruteforce(p, d));
}

TEST(MddlogToUcq, ConstraintContributesBody) {
    Program p = parse_program("edb A/1 R/2.\nbot :- R(X,X).\ngoal :- A(X).");
    OmqQuery q = mddlog_to_ucq_omq(p);
    bool found = false;
    for (const auto& cq : q.ucq.disjuncts)
        found = found || (cq.atoms.size() == 1 && cq.atoms[0].predicate == "R" && cq.atoms[0].args[0] == cq.atoms[0].args[1]);
    EXPECT_TRUE(found) << render_ucq(q.ucq);
    EXPECT_TRUE(adversarial_complement_eval(q, Instance{}).empty());
    EXPECT_EQ(adversarial_complement_eval(q, parse_instance("R(a,a).")), (AnswerSet{{}}));
}

TEST(MddlogToUcq, AgreesWithProgram) {
    oracle::Rng rng(59);
    const auto small = oracle::instance_classes(kBinary, 2);
    for (int i = 0; i < 30; ++i) {
        oracle::ProgramShape shape;
        shape.unary_goal = i % 2 == 0;
        Program p = oracle::random_mddlog(rng, shape);
        OmqQuery q = mddlog_to_ucq_omq(p);
        EXPECT_EQ(q.data_schema, p.edb);
        for (const auto& d : small)
            ASSERT_EQ(adversarial_complement_eval(q, d), eval_bruteforce(p, d)) << render_program(p) << render_instance(d);
    }
}

TEST(Commsnp, GoalRuleBecomesConstraint) {
    MsnpFormula f = mddlog_to_commsnp(parse_program("goal(X) :- A(X)."));
    ASSERT_EQ(f.free_vars.size(), 1u);
    ASSERT_EQ(f.matrix.size(), 1u);
    EXPECT_TRUE(f.matrix[0].head.empty());
    EXPECT_EQ(f.matrix[0].body, (std::vector<Atom>{make_atom("A", {f.free_vars[0]})}));
}

TEST(Commsnp, RepeatedGoalVariables) {
    Program p = parse_program("goal(X,X) :- R(X,X).");
    MsnpFormula f = mddlog_to_commsnp(p);
    ASSERT_EQ(f.free_vars.size(), 2u);
    bool has_equality = false;
    for (const auto& a : f.matrix.at(0).body) has_equality = has_equality || a.is_equality();
    EXPECT_TRUE(has_equality) << render_msnp(f);
    for (const auto& d : oracle::instance_classes(Schema{{"R", 2}}, 2))
        EXPECT_EQ(eval_msnp(f, d), eval_bruteforce(p, d)) << render_instance(d);
}

TEST(Commsnp, DisjunctiveRuleCarriedOver) {
    MsnpFormula f = mddlog_to_commsnp(parse_program("edb A/1.\nP(X) ; Q(X) :- A(X).\ngoal(X) :- P(X)."));
    Implication expected{{make_atom("A", {"X"})}, {make_atom("P", {"X"}), make_atom("Q", {"X"})}};
    bool found = false;
    for (const auto& imp : f.matrix) found = found || imp == expected;
    EXPECT_TRUE(found) << render_msnp(f);
}

TEST(Commsnp, ConstraintToGoalRule) {
    MsnpFormula f = parse_msnp("msnp mmsnp\nschema A/1\nfreevar y1\nimp A(y1) -> false\n");
    Program p = commsnp_to_mddlog(f);
    ASSERT_EQ(p.goal_arity, 1u);
    std::vector<const Rule*> goals;
    for (const auto& r : p.rules)
        if (p.is_goal_rule(r)) goals.push_back(&r);
    ASSERT_EQ(goals.size(), 1u);
    std::set<std::string> body;
    for (const auto& a : goals[0]->body) body.insert(a.predicate);
    EXPECT_EQ(body, (std::set<std::string>{"A", kAdom}));
}

TEST(Commsnp, TwoColorability) {
    MsnpFormula f = parse_msnp(
        "msnp mmsnp\nsovar X monadic\nimp E(x,y), X(x), X(y) -> false\nimp E(x,y) -> X(x) ; X(y)\n");
    Program p = commsnp_to_mddlog(f);
    std::size_t non_goal = 0;
    for (const auto& r : p.rules)
        if (!p.is_goal_rule(r) && !(r.head.size() == 1 && r.head[0].predicate == kAdom)) ++non_goal;
    EXPECT_EQ(non_goal, 1u);
    for (const auto& d : oracle::instance_classes(Schema{{"E", 2}}, 3)) {
        auto expected = oracle::naive_msnp(f, d);
        ASSERT_TRUE(expected);
        ASSERT_EQ(eval_bruteforce(p, d), *expected) << render_instance(d);
    }
}

TEST(Commsnp, RoundTripPreservesAnswers) {
    oracle::Rng rng(61);
    for (int i = 0; i < 100; ++i) {
        oracle::ProgramShape shape;
        shape.unary_goal = i % 3 != 0;
        Program p = oracle::random_mddlog(rng, shape);
        MsnpFormula f = mddlog_to_commsnp(p);
        Program back = commsnp_to_mddlog(f);
        Instance d = oracle::random_instance(kBinary, 1 + static_cast<std::size_t>(i % 3), 0.4, rng);
        auto expected = eval_bruteforce(p, d);
        ASSERT_EQ(eval_msnp(f, d), expected) << render_program(p) << render_instance(d);
        ASSERT_EQ(eval_bruteforce(back, d), expected) << render_program(p) << render_instance(d);
    }
}

TEST(Gmsnp, FrontierGuardedRoundTrip) {
    Program p = parse_program(
        "edb R/2 A/1.\n"
        "P(X,Y) ; P(Y,X) :- R(X,Y).\n"
        "bot :- P(X,Y), P(Y,X), A(X).\n"
        "goal(X) :- P(X,Y), A(Y).");
    ASSERT_TRUE(classify(p).frontier_guarded);
    MsnpFormula f = fgddlog_to_gmsnp(p);
    EXPECT_EQ(f.dialect, MsnpDialect::GMSNP);
    EXPECT_TRUE(check_guarded(f));
    Program back = gmsnp_to_fgddlog(f);
    for (const auto& d : oracle::instance_classes(kBinary, 3)) {
        auto expected = oracle::naive_ddlog(p, d);
        ASSERT_TRUE(expected);
        ASSERT_EQ(eval_msnp(f, d), *expected) << render_instance(d);
        ASSERT_EQ(eval_bruteforce(back, d), *expected) << render_instance(d);
    }
}

TEST(Gmsnp, RandomFormulasAgree) {
    oracle::Rng rng(67);
    for (int i = 0; i < 40; ++i) {
        MsnpFormula f = oracle::random_gmsnp(rng);
        Program p = gmsnp_to_fgddlog(f);
        EXPECT_TRUE(classify(p).frontier_guarded) << render_program(p);
        for (int j = 0; j < 3; ++j) {
            Instance d = oracle::random_instance(kBinary, 1 + static_cast<std::size_t>(j), 0.4, rng);
            auto expected = oracle::naive_msnp(f, d);
            if (!expected) continue;
            ASSERT_EQ(eval_bruteforce(p, d), *expected) << render_msnp(f) << render_instance(d);
        }
    }
}

TEST(Gmsnp, MmsnpAsGmsnpMatchesCommsnp) {
    MsnpFormula f = parse_msnp(
        "msnp mmsnp\nschema A/1 R/2\nsovar X monadic\nimp R(x,y), X(x) -> X(y)\nimp A(x) -> X(x)\nimp R(x,y), X(x), X(y) -> false\n");
    MsnpFormula g = normalize_msnp(f);
    g.dialect = MsnpDialect::GMSNP;
    Program via_g = gmsnp_to_fgddlog(g);
    Program via_m = commsnp_to_mddlog(f);
    for (const auto& d : oracle::instance_classes(kBinary, 3))
        ASSERT_EQ(eval_bruteforce(via_g, d), eval_bruteforce(via_m, d)) << render_instance(d);
}

TEST(Gmsnp, EmptyMatrix) {
    MsnpFormula f = parse_msnp("msnp gmsnp\nschema A/1 R/2\n");
    Program p = gmsnp_to_fgddlog(f);
    Instance d = parse_instance("A(a). R(a,b).");
    EXPECT_TRUE(eval_msnp(f, d).empty());
    EXPECT_TRUE(eval_bruteforce(p, d).empty());
}

TEST(Mmsnp2, FactVariablesSplit) {
    MsnpFormula f = parse_msnp(
        "msnp mmsnp2\nschema A/1 R/2\nsovar X factset\n"
        "imp R(x,y) -> X(R(x,y)) ; X(x)\nimp R(x,y), X(R(x,y)), R(y,x), X(R(y,x)) -> false\nimp A(x), X(x) -> false\n");
    MsnpFormula g = mmsnp2_to_gmsnp(f);
    EXPECT_EQ(g.dialect, MsnpDialect::GMSNP);
    bool binary = false;
    for (const auto& v : g.so_vars) binary = binary || (v.kind == SoKind::Relation && v.arity == 2);
    EXPECT_TRUE(binary);
    for (const auto& d : oracle::instance_classes(kBinary, 3)) {
        auto expected = oracle::naive_msnp(f, d);
        ASSERT_TRUE(expected);
        ASSERT_EQ(eval_msnp(g, d), *expected) << render_instance(d);
    }
}

TEST(Mmsnp2, MonadicGmsnpToMmsnp2) {
    MsnpFormula f = parse_msnp(
        "msnp gmsnp\nschema A/1 R/2\nsovar X monadic\nimp R(x,y) -> X(x) ; X(y)\nimp R(x,y), X(x), X(y) -> false\n");
    MsnpFormula g = gmsnp_to_mmsnp2(f);
    EXPECT_EQ(g.dialect, MsnpDialect::MMSNP2);
    for (const auto& d : oracle::instance_classes(kBinary, 3))
        ASSERT_EQ(eval_msnp(g, d), eval_msnp(f, d)) << render_instance(d);
}

TEST(Mmsnp2, EmptyMatrix) {
    MsnpFormula f = parse_msnp("msnp gmsnp\nschema A/1 R/2\n");
    MsnpFormula g = gmsnp_to_mmsnp2(f);
    EXPECT_TRUE(eval_msnp(g, parse_instance("A(a). R(a,b).")).empty());
}

TEST(Mmsnp2, RandomRoundTrips) {
    oracle::Rng rng(71);
    for (int i = 0; i < 30; ++i) {
        MsnpFormula f = i % 2 ? oracle::random_gmsnp(rng) : oracle::random_mmsnp2(rng);
        MsnpFormula g = i % 2 ? gmsnp_to_mmsnp2(f) : mmsnp2_to_gmsnp(f);
        for (int j = 0; j < 3; ++j) {
            Instance d = oracle::random_instance(kBinary, 1 + static_cast<std::size_t>(j), 0.4, rng);
            auto expected = oracle::naive_msnp(f, d);
            if (!expected) continue;
            ASSERT_EQ(eval_msnp(g, d), *expected) << render_msnp(f) << render_instance(d);
        }
    }
}
