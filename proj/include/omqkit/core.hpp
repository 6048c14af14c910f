#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace omqkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text; message already carries "line:col".
class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& msg);
    int line() const { return line_; }
    int column() const { return col_; }

private:
    int line_;
    int col_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class LimitError : public Error {
public:
    using Error::Error;
};

struct Limits {
    std::uint64_t max_models = std::uint64_t(1) << 22;
    std::size_t max_product = 4096;
    std::size_t max_rules = 200000;
};

struct Relation {
    std::string name;
    std::size_t arity = 0;
    bool operator==(const Relation&) const = default;
};

class Schema {
public:
    Schema() = default;
    Schema(std::initializer_list<Relation> rels);

    void add(const std::string& name, std::size_t arity);
    void merge(const Schema& other);
    std::optional<std::size_t> arity(const std::string& name) const;
    bool contains(const std::string& name) const { return arity(name).has_value(); }
    const std::vector<Relation>& relations() const { return rels_; }
    std::size_t max_arity() const;
    bool empty() const { return rels_.empty(); }
    std::string render() const;

    bool operator==(const Schema& o) const;

private:
    std::vector<Relation> rels_;
};

using Tuple = std::vector<std::string>;
using AnswerSet = std::set<Tuple>;

struct Fact {
    std::string relation;
    Tuple args;
    auto operator<=>(const Fact&) const = default;
};

std::string render_fact(const Fact& f);

class Instance {
public:
    Instance() = default;
    explicit Instance(Schema schema) : schema_(std::move(schema)) {}

    // Adds the relation to the schema when unknown; rejects an arity clash.
    void add(const Fact& f);
    void add(const std::string& rel, Tuple args) { add(Fact{rel, std::move(args)}); }
    bool contains(const Fact& f) const { return facts_.count(f) > 0; }

    const Schema& schema() const { return schema_; }
    Schema& schema() { return schema_; }
    const std::set<Fact>& facts() const { return facts_; }
    std::set<std::string> active_domain() const;
    bool empty() const { return facts_.empty(); }

private:
    Schema schema_;
    std::set<Fact> facts_;
};

struct RelStructure {
    std::set<std::string> domain;
    Instance facts;

    // Domain becomes adom(D); throws ValidationError if that is empty.
    static RelStructure from_instance(const Instance& d);
    void validate() const;
};

// Relational atom P(x1..xn); predicate "=" marks an equality x=y; a non-empty
// fact_relation encodes the fact-ranging form X(R(x1..xn)).
struct Atom {
    std::string predicate;
    std::vector<std::string> args;
    std::string fact_relation;

    bool is_equality() const { return predicate == "="; }
    bool is_fact_atom() const { return !fact_relation.empty(); }
    auto operator<=>(const Atom&) const = default;
};

Atom make_atom(std::string pred, std::vector<std::string> args);
Atom make_equality(std::string a, std::string b);
std::string render_atom(const Atom& a);

struct Cq {
    std::vector<std::string> answer_vars;
    std::vector<Atom> atoms;
    std::vector<std::string> exist_vars() const;
};

struct Ucq {
    std::vector<Cq> disjuncts;
    std::size_t arity() const { return disjuncts.empty() ? 0 : disjuncts.front().answer_vars.size(); }
    void validate() const;
};

Instance parse_instance(const std::string& text);
std::string render_instance(const Instance& d, bool with_schema = true);

// "(X) :- A(X), R(X,Y) | (X) :- B(X)"
Ucq parse_ucq(const std::string& text);
std::string render_ucq(const Ucq& q);

AnswerSet eval_ucq(const Ucq& q, const Instance& d);

std::string render_answers(const AnswerSet& answers);

// Integer view of an instance used by the search engines.
class IndexedInstance {
public:
    struct Rel {
        std::size_t arity = 0;
        std::vector<std::vector<int>> tuples;
        std::set<std::vector<int>> members;
    };

    explicit IndexedInstance(const Instance& d);

    const std::vector<std::string>& elements() const { return elements_; }
    int index(const std::string& e) const;
    const Rel* rel(const std::string& name) const;
    std::size_t size() const { return elements_.size(); }

private:
    std::vector<std::string> elements_;
    std::map<std::string, int> index_;
    std::map<std::string, Rel> rels_;
};

// Enumerates all assignments of `vars` satisfying the relational and equality
// atoms over the instance; variables absent from relational atoms range over
// adom. Returning false from the callback stops the enumeration.
void for_each_match(const IndexedInstance& inst, const std::vector<Atom>& atoms,
                    const std::vector<std::string>& vars, std::vector<int> preset,
                    const std::function<bool(const std::vector<int>&)>& emit);

std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace omqkit
