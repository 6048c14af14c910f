#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace omqkit;

TEST(Instance, ParsesFactsAndActiveDomain) {
    Instance d = parse_instance("A(a). R(a,b).");
    EXPECT_EQ(d.facts().size(), 2u);
    EXPECT_TRUE(d.contains(Fact{"A", {"a"}}));
    EXPECT_TRUE(d.contains(Fact{"R", {"a", "b"}}));
    EXPECT_EQ(d.active_domain(), (std::set<std::string>{"a", "b"}));
}

TEST(Instance, EmptyText) {
    Instance d = parse_instance("");
    EXPECT_TRUE(d.empty());
    EXPECT_TRUE(d.active_domain().empty());
}

TEST(Instance, DuplicatesCollapse) {
    Instance d = parse_instance("R(a,b). R(a,b).");
    EXPECT_EQ(d.facts().size(), 1u);
}

TEST(Instance, SchemaHeaderAndComments) {
    Instance d = parse_instance("schema A/1 R/2 B/1\n# note\nA(a).  # trailing\nR(a,b). R(b,a).\n");
    EXPECT_EQ(d.schema().arity("B"), 1u);
    EXPECT_EQ(d.facts().size(), 3u);
}

TEST(Instance, ArityConflictRejected) {
    EXPECT_THROW(parse_instance("R(a,b). R(a)."), Error);
    EXPECT_THROW(parse_instance("schema R/2\nR(a)."), Error);
}

TEST(Instance, SyntaxErrorCarriesPosition) {
    try {
        parse_instance("A(a).\nR(a,b");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_GT(e.column(), 0);
    }
}

TEST(Instance, RenderRoundTrip) {
    Instance d = parse_instance("schema A/1 R/2\nA(a). R(a,b). R(b,b).");
    Instance back = parse_instance(render_instance(d));
    EXPECT_EQ(back.facts(), d.facts());
    EXPECT_EQ(back.schema(), d.schema());
}

TEST(Instance, RelStructureFromInstance) {
    RelStructure b = RelStructure::from_instance(parse_instance("R(a,b)."));
    EXPECT_EQ(b.domain, (std::set<std::string>{"a", "b"}));
    EXPECT_THROW(RelStructure::from_instance(Instance{}), ValidationError);
}

TEST(Ucq, ExampleTwoUnion) {
    Instance d = parse_instance("diagnosis(pat2, may7diag2). Listeriosis(may7diag2).");
    Ucq q = parse_ucq("(X) :- LymeDisease(X) | (X) :- Listeriosis(X)");
    EXPECT_EQ(eval_ucq(q, d), (AnswerSet{{"may7diag2"}}));
}

TEST(Ucq, EmptyInstance) {
    EXPECT_TRUE(eval_ucq(parse_ucq("(X) :- A(X)"), Instance{}).empty());
}

TEST(Ucq, TwoCycle) {
    Instance d = parse_instance("R(a,b). R(b,a).");
    Ucq q = parse_ucq("(X) :- R(X,Y), R(Y,X)");
    AnswerSet expected = oracle::naive_ucq(q, d);
    EXPECT_EQ(expected, (AnswerSet{{"a"}, {"b"}}));
    EXPECT_EQ(eval_ucq(q, d), expected);
}

TEST(Ucq, EqualityAndBoolean) {
    Instance d = parse_instance("R(a,a). R(a,b).");
    EXPECT_EQ(eval_ucq(parse_ucq("(X,Y) :- R(X,Y), X = Y"), d), (AnswerSet{{"a", "a"}}));
    EXPECT_EQ(eval_ucq(parse_ucq("() :- R(X,X)"), d), (AnswerSet{{}}));
    EXPECT_TRUE(eval_ucq(parse_ucq("() :- R(X,Y), R(Y,Z), R(Z,X), A(X)"), d).empty());
}

TEST(Ucq, MissingRelationIsEmpty) {
    Instance d = parse_instance("R(a,b).");
    EXPECT_TRUE(eval_ucq(parse_ucq("(X) :- B(X)"), d).empty());
}

TEST(Ucq, ArityMismatchRejected) {
    Instance d = parse_instance("R(a,b).");
    EXPECT_THROW(eval_ucq(parse_ucq("(X) :- R(X)"), d), Error);
}

TEST(Ucq, InconsistentDisjunctArityRejected) {
    EXPECT_THROW(parse_ucq("(X) :- A(X) | (X,Y) :- R(X,Y)"), Error);
}

TEST(Ucq, RenderRoundTrip) {
    Ucq q = parse_ucq("(X) :- A(X), R(X,Y) | (X) :- B(X), X = X");
    Ucq back = parse_ucq(render_ucq(q));
    EXPECT_EQ(render_ucq(back), render_ucq(q));
}

TEST(Ucq, AgreesWithAssignmentEnumeration) {
    oracle::Rng rng(7);
    const Schema s{{"A", 1}, {"R", 2}};
    const std::vector<std::string> queries = {
        "(X) :- A(X)",
        "(X) :- R(X,Y), A(Y)",
        "(X,Y) :- R(X,Z), R(Z,Y)",
        "(X) :- R(X,Y), R(Y,X) | (X) :- A(X), R(X,X)",
        "() :- R(X,Y), R(Y,Z), R(Z,X)",
        "(X,Y) :- R(X,Y), X = Y | (X,Y) :- A(X), A(Y)",
    };
    for (const auto& text : queries) {
        Ucq q = parse_ucq(text);
        for (int i = 0; i < 60; ++i) {
            std::size_t n = 1 + static_cast<std::size_t>(i % 4);
            Instance d = oracle::random_instance(s, n, 0.35, rng);
            ASSERT_EQ(eval_ucq(q, d), oracle::naive_ucq(q, d)) << text << "\n" << render_instance(d);
        }
    }
}

TEST(Ucq, MonotoneAndHomomorphismPreserving) {
    oracle::Rng rng(11);
    const Schema s{{"A", 1}, {"R", 2}};
    Ucq q = parse_ucq("(X) :- R(X,Y), A(Y) | (X) :- R(X,Y), R(Y,X)");
    for (int i = 0; i < 100; ++i) {
        Instance d1 = oracle::random_instance(s, 4, 0.3, rng);
        Instance bigger = d1;
        bigger.add("R", {"c1", "c2"});
        auto a1 = eval_ucq(q, d1);
        auto a2 = eval_ucq(q, bigger);
        for (const auto& t : a1) EXPECT_TRUE(a2.count(t));

        std::map<std::string, std::string> h;
        for (const auto& c : oracle::constants(4))
            h[c] = "c" + std::to_string(1 + std::uniform_int_distribution<int>(0, 1)(rng));
        Instance image(s);
        for (const auto& f : d1.facts()) {
            Fact g{f.relation, {}};
            for (const auto& a : f.args) g.args.push_back(h[a]);
            image.add(g);
        }
        auto ai = eval_ucq(q, image);
        for (const auto& t : a1) EXPECT_TRUE(ai.count(Tuple{h[t[0]]}));
    }
}

TEST(Answers, RenderedInLexicographicOrder) {
    AnswerSet a{{"b", "a"}, {"a", "c"}};
    EXPECT_EQ(render_answers(a), "a,c\nb,a\n");
}

TEST(Names, FreshNameAvoidsTaken) {
    std::set<std::string> taken{"A", "A1"};
    std::string n = fresh_name("A", taken);
    EXPECT_FALSE(taken.count(n));
    EXPECT_EQ(fresh_name("B", taken), "B");
}
