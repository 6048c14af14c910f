#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omqkit/core.hpp"

namespace omqkit {

inline const std::string kUniversalRole = "univ";

enum class ConceptKind { Top, Bot, Name, Not, And, Or, Exists, Forall };

struct Concept;
using ConceptPtr = std::shared_ptr<const Concept>;

struct Concept {
    ConceptKind kind = ConceptKind::Top;
    std::string name;  // concept name, or the role of Exists/Forall
    ConceptPtr left;   // Not operand, And/Or left, Exists/Forall filler
    ConceptPtr right;

    static ConceptPtr top();
    static ConceptPtr bot();
    static ConceptPtr atomic(const std::string& n);
    static ConceptPtr negation(ConceptPtr c);
    static ConceptPtr conj(ConceptPtr a, ConceptPtr b);
    static ConceptPtr disj(ConceptPtr a, ConceptPtr b);
    static ConceptPtr exists(const std::string& role, ConceptPtr c);
    static ConceptPtr forall(const std::string& role, ConceptPtr c);

    // Folds a list with conj/disj; empty lists give top/bot.
    static ConceptPtr conj_all(const std::vector<ConceptPtr>& cs);
    static ConceptPtr disj_all(const std::vector<ConceptPtr>& cs);
};

std::string to_string(const ConceptPtr& c);
bool same_concept(const ConceptPtr& a, const ConceptPtr& b);

enum class Dialect { ALC, ALCU };

struct Inclusion {
    ConceptPtr lhs;
    ConceptPtr rhs;
};

struct Ontology {
    std::vector<Inclusion> inclusions;
    Dialect dialect = Dialect::ALC;

    std::set<std::string> concept_names() const;
    std::set<std::string> role_names() const;  // without univ
    bool uses_universal_role() const;
};

std::set<std::string> concept_names(const ConceptPtr& c);
std::set<std::string> role_names(const ConceptPtr& c);

ConceptPtr parse_concept(const std::string& text);
// A pinned dialect of ALC rejects `univ`.
Ontology parse_ontology(const std::string& text, std::optional<Dialect> pinned = std::nullopt);
std::string render_inclusion(const Inclusion& inc);
std::string render_ontology(const Ontology& o);

struct OmqQuery {
    enum class Kind { AQ, BAQ, ConQ, UCQ };

    Schema data_schema;
    Ontology ontology;
    Kind kind = Kind::AQ;
    std::string concept_name;  // AQ, BAQ
    ConceptPtr query_concept;        // ConQ
    Ucq ucq;                   // UCQ
    std::vector<std::string> comments;

    std::size_t arity() const;
    void validate() const;
};

OmqQuery parse_omq(const std::string& text);
std::string render_omq(const OmqQuery& q);

using TypeBits = std::vector<bool>;

struct TypeSet {
    std::vector<ConceptPtr> closure;
    std::vector<TypeBits> types;
};

std::vector<ConceptPtr> normalize_closure(const Ontology& o, const std::vector<ConceptPtr>& extra = {});

TypeSet eliminate_types(const Ontology& o, const std::vector<ConceptPtr>& extra = {});

bool r_coherent(const TypeBits& t1, const TypeBits& t2, const std::string& role,
                const std::vector<ConceptPtr>& closure);

bool check_model(const RelStructure& b, const Ontology& o);
bool holds_at(const RelStructure& b, const ConceptPtr& c, const std::string& element);

// The closure is shared by every returned set; `extra` is added to it after A.
std::vector<TypeSet> countermodel_type_sets(const Ontology& o, const std::string& a,
                                            const std::vector<ConceptPtr>& extra = {});

OmqQuery conq_to_aq(const OmqQuery& q);

std::string describe_type(const TypeBits& t, const std::vector<ConceptPtr>& closure);

}  // namespace omqkit
