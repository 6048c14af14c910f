#pragma once

#include <set>
#include <string>
#include <vector>

#include "omqkit/core.hpp"

namespace omqkit {

inline const std::string kGoal = "goal";
inline const std::string kAdom = "adom";

struct Rule {
    std::vector<Atom> head;  // empty = bot
    std::vector<Atom> body;
    bool operator==(const Rule&) const = default;
};

struct Program {
    std::vector<Rule> rules;
    std::size_t goal_arity = 0;
    Schema idb;  // includes goal, and adom when used
    Schema edb;
    std::vector<std::string> comments;

    bool is_goal_rule(const Rule& r) const { return r.head.size() == 1 && r.head[0].predicate == kGoal; }
};

// Builds a program from rules: declared schemas are merged with what the rules
// use, adom rules are materialized, and the invariants are checked.
Program make_program(std::vector<Rule> rules, Schema edb = {}, Schema idb = {});

// Optional declarations `edb A/1 R/2.` and `idb goal/1 P/1.` precede the rules.
Program parse_program(const std::string& text);
std::string render_rule(const Rule& r);
std::string render_program(const Program& p);

struct Classification {
    bool monadic = false;
    bool simple = false;
    bool connected = false;
    bool frontier_guarded = false;
    bool guarded = false;
};

Classification classify(const Program& p);

AnswerSet eval_bruteforce(const Program& p, const Instance& d, const Limits& limits = {});

}  // namespace omqkit
