#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"

using namespace omqkit;

namespace {

std::set<std::string> rendered_rules(const Program& p) {
    std::set<std::string> out;
    for (const auto& r : p.rules) out.insert(render_rule(r));
    return out;
}

Instance hom_image(const Instance& d, const std::map<std::string, std::string>& h) {
    Instance out(d.schema());
    for (const auto& f : d.facts()) {
        Fact g{f.relation, {}};
        for (const auto& a : f.args) g.args.push_back(h.at(a));
        out.add(g);
    }
    return out;
}

}  // namespace

TEST(Program, ParsesGoalRule) {
    Program p = parse_program("goal(X) :- A(X).");
    EXPECT_EQ(p.rules.size(), 1u);
    EXPECT_EQ(p.goal_arity, 1u);
    EXPECT_TRUE(p.is_goal_rule(p.rules[0]));
}

TEST(Program, ParsesConstraint) {
    Program p = parse_program("bot :- R(X,X).\ngoal :- A(X).");
    ASSERT_EQ(p.rules.size(), 2u);
    EXPECT_TRUE(p.rules[0].head.empty());
    EXPECT_EQ(p.goal_arity, 0u);
}

TEST(Program, MaterializesActiveDomain) {
    Program p = parse_program("edb A/1 R/2.\ngoal(X) :- adom(X), A(Y).");
    EXPECT_EQ(p.rules.size(), 4u);
    std::multiset<std::pair<std::string, std::size_t>> adom_rules;
    for (const auto& r : p.rules) {
        if (r.head.size() != 1 || r.head[0].predicate != kAdom) continue;
        ASSERT_EQ(r.body.size(), 1u);
        const auto& args = r.body[0].args;
        auto pos = std::find(args.begin(), args.end(), r.head[0].args[0]) - args.begin();
        adom_rules.insert({r.body[0].predicate, static_cast<std::size_t>(pos)});
    }
    EXPECT_EQ(adom_rules, (std::multiset<std::pair<std::string, std::size_t>>{{"A", 0}, {"R", 0}, {"R", 1}}));

    Program probe = parse_program("edb A/1 R/2.\ngoal(X) :- adom(X).");
    Instance d = parse_instance("schema A/1 R/2\nA(a). R(b,c).");
    EXPECT_EQ(eval_bruteforce(probe, d), (AnswerSet{{"a"}, {"b"}, {"c"}}));
}

TEST(Program, RejectsBadRules) {
    EXPECT_THROW(parse_program("goal(X) :- A(Y)."), Error);
    EXPECT_THROW(parse_program("goal(X) :- A(X).\nP(X) :- goal(X)."), Error);
    EXPECT_THROW(parse_program("goal(X) :- A(X"), ParseError);
}

TEST(Program, RenderRoundTrip) {
    Program p = parse_program("edb A/1 R/2.\nP(X) ; Q(Y) :- R(X,Y), A(X).\nbot :- P(X), Q(X).\ngoal(X) :- P(X).");
    Program back = parse_program(render_program(p));
    EXPECT_EQ(rendered_rules(back), rendered_rules(p));
    EXPECT_EQ(back.goal_arity, p.goal_arity);
}

TEST(Classify, TypeGuessingShape) {
    Program p = parse_program(
        "edb A/1 R/2.\n"
        "P1(X) ; P2(X) :- adom(X).\n"
        "bot :- P1(X), P2(X).\n"
        "bot :- P1(X), R(X,Y), P2(Y).\n"
        "goal(X) :- P1(X).");
    Classification c = classify(p);
    EXPECT_TRUE(c.monadic);
    EXPECT_TRUE(c.simple);
    EXPECT_TRUE(c.connected);
}

TEST(Classify, DisconnectedRule) {
    Program p = parse_program("edb A/1 R/2.\ngoal(X) :- adom(X), A(Y).");
    EXPECT_FALSE(classify(p).connected);
}

TEST(Classify, FrontierGuardedNotMonadic) {
    Program p = parse_program("P(X,Y) ; Q(X) :- R(X,Y,Z), S(X,Y).\ngoal(X) :- Q(X).");
    Classification c = classify(p);
    EXPECT_TRUE(c.frontier_guarded);
    EXPECT_FALSE(c.monadic);
}

TEST(Classify, SimpleNeedsDistinctVariables) {
    EXPECT_FALSE(classify(parse_program("goal(X) :- R(X,X).")).simple);
    EXPECT_FALSE(classify(parse_program("goal(X) :- R(X,Y), A(Y).")).simple);
    EXPECT_TRUE(classify(parse_program("goal(X) :- R(X,Y).")).simple);
}

TEST(Eval, SingleRule) {
    Program p = parse_program("edb A/1 B/1.\ngoal(X) :- A(X).");
    EXPECT_EQ(eval_bruteforce(p, parse_instance("A(a). B(b).")), (AnswerSet{{"a"}}));
}

TEST(Eval, DisjunctionCoveredByBothBranches) {
    Program p = parse_program("edb A/1.\nP(X) ; Q(X) :- A(X).\ngoal(X) :- P(X).\ngoal(X) :- Q(X).");
    Instance d = parse_instance("A(a).");
    auto oracle_answers = oracle::naive_ddlog(p, d);
    ASSERT_TRUE(oracle_answers);
    EXPECT_EQ(*oracle_answers, (AnswerSet{{"a"}}));
    EXPECT_EQ(eval_bruteforce(p, d), *oracle_answers);
}

TEST(Eval, UnderivedIdbGivesNothing) {
    Program p = parse_program("edb A/1. idb P/1.\ngoal(X) :- P(X).");
    Instance d = parse_instance("A(a).");
    EXPECT_EQ(*oracle::naive_ddlog(p, d), AnswerSet{});
    EXPECT_TRUE(eval_bruteforce(p, d).empty());
}

TEST(Eval, InconsistentInstanceGivesAllTuples) {
    Program p = parse_program("edb A/1 R/2.\nbot :- A(X).\ngoal(X) :- R(X,Y).");
    EXPECT_EQ(eval_bruteforce(p, parse_instance("A(a). R(b,c).")), (AnswerSet{{"a"}, {"b"}, {"c"}}));
}

TEST(Eval, EmptyInstance) {
    Program p = parse_program("edb A/1.\ngoal :- A(X).");
    EXPECT_TRUE(eval_bruteforce(p, Instance{}).empty());
}

TEST(Eval, RejectsForeignRelations) {
    Program p = parse_program("edb A/1.\ngoal(X) :- A(X).");
    EXPECT_THROW(eval_bruteforce(p, parse_instance("B(a).")), ValidationError);
    EXPECT_THROW(eval_bruteforce(p, parse_instance("A(a,b).")), ValidationError);
}

TEST(Eval, BudgetIsEnforced) {
    Program p = parse_program(
        "edb A/1 R/2.\n"
        "P(X) ; Q(X) :- adom(X).\n"
        "bot :- Q(X), R(X,Y), Q(Y).\n"
        "goal :- P(X), R(X,Y), P(Y).");
    Instance d = parse_instance("R(a,b). R(b,c). R(c,d). R(d,e). R(e,a). A(a).");
    Limits tight;
    tight.max_models = 1;
    EXPECT_THROW(eval_bruteforce(p, d, tight), LimitError);
    auto expected = oracle::naive_ddlog(p, d);
    ASSERT_TRUE(expected);
    EXPECT_EQ(*expected, (AnswerSet{{}}));
    EXPECT_EQ(eval_bruteforce(p, d), *expected);
}

TEST(Eval, AgreesWithModelEnumeration) {
    oracle::Rng rng(21);
    const Schema s{{"A", 1}, {"R", 2}};
    int compared = 0;
    for (int i = 0; i < 120; ++i) {
        oracle::ProgramShape shape;
        shape.unary_goal = i % 3 != 0;
        shape.rules = 2 + static_cast<std::size_t>(i % 3);
        Program p = oracle::random_mddlog(rng, shape);
        for (int j = 0; j < 6; ++j) {
            Instance d = oracle::random_instance(s, 1 + static_cast<std::size_t>(j % 3), 0.4, rng);
            auto expected = oracle::naive_ddlog(p, d);
            if (!expected) continue;
            ++compared;
            ASSERT_EQ(eval_bruteforce(p, d), *expected) << render_program(p) << render_instance(d);
        }
    }
    EXPECT_GT(compared, 500);
}

TEST(Eval, HomomorphismsPreserveAnswers) {
    oracle::Rng rng(23);
    const Schema s{{"A", 1}, {"R", 2}};
    for (int i = 0; i < 100; ++i) {
        Program p = oracle::random_mddlog(rng, {});
        Instance d1 = oracle::random_instance(s, 4, 0.3, rng);
        std::map<std::string, std::string> h;
        for (const auto& c : oracle::constants(4))
            h[c] = "c" + std::to_string(1 + std::uniform_int_distribution<int>(0, 2)(rng));
        Instance d2 = hom_image(d1, h);
        auto a2 = eval_bruteforce(p, d2);
        for (const auto& t : eval_bruteforce(p, d1)) {
            Tuple img;
            for (const auto& x : t) img.push_back(h.at(x));
            EXPECT_TRUE(a2.count(img)) << render_program(p) << render_instance(d1);
        }
    }
}

TEST(Eval, MonotoneInDataAndRules) {
    oracle::Rng rng(29);
    const Schema s{{"A", 1}, {"R", 2}};
    for (int i = 0; i < 80; ++i) {
        Program p = oracle::random_mddlog(rng, {});
        Instance d = oracle::random_instance(s, 3, 0.3, rng);
        Instance more = d;
        more.add("A", {"c1"});
        auto base = eval_bruteforce(p, d);
        auto grown = eval_bruteforce(p, more);
        for (const auto& t : base) EXPECT_TRUE(grown.count(t));

        // dropping a non-goal rule cannot add answers
        auto rules = p.rules;
        auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) {
            return !p.is_goal_rule(r) && !(r.head.size() == 1 && r.head[0].predicate == kAdom);
        });
        if (it == rules.end()) continue;
        rules.erase(it);
        Program fewer = make_program(rules, p.edb, p.idb);
        for (const auto& t : eval_bruteforce(fewer, d)) EXPECT_TRUE(base.count(t));
    }
}
