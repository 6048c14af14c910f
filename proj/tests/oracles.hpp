#pragma once

// Naive reference implementations and random generators shared by the tests.
// Nothing here calls into the library's search engines.

#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "omqkit/core.hpp"
#include "omqkit/csp.hpp"
#include "omqkit/ddlog.hpp"
#include "omqkit/dl.hpp"
#include "omqkit/msnp.hpp"

namespace oracle {

using namespace omqkit;
using Rng = std::mt19937;

std::vector<std::string> constants(std::size_t n);

// All instances over constants c1..cn (every subset of the possible facts).
void for_each_instance(const Schema& s, std::size_t n, const std::function<void(const Instance&)>& fn);

// One instance per isomorphism class among instances over at most n constants.
std::vector<Instance> instance_classes(const Schema& s, std::size_t n);

Instance random_instance(const Schema& s, std::size_t n, double density, Rng& rng);

// Every variable ranges over adom; answers are read off satisfying assignments.
AnswerSet naive_ucq(const Ucq& q, const Instance& d);

// Direct recursive reading of the concept semantics (univ relates all pairs).
bool naive_holds(const RelStructure& b, const ConceptPtr& c, const std::string& e);
bool naive_model(const RelStructure& b, const Ontology& o);

// Tries every map from the source domain into the target domain.
bool naive_hom(const Template& src, const Template& tgt);
AnswerSet naive_cocsp(const TemplateFamily& f, const Instance& d);

// Fixpoint of P(x) <- HD(x); P(x) <- parent(x,y), P(y).
std::set<std::string> heredity_closure(const Instance& d);

// Enumerates second-order interpretations; nullopt when there are too many.
std::optional<AnswerSet> naive_msnp(const MsnpFormula& f, const Instance& d, std::size_t max_bits = 18);

// Brute-force certain answers of a DDlog program: every subset of the ground
// IDB atoms that is a model is inspected.
std::optional<AnswerSet> naive_ddlog(const Program& p, const Instance& d, std::size_t max_bits = 18);

ConceptPtr random_concept(Rng& rng, const std::vector<std::string>& names, const std::vector<std::string>& roles,
                          int depth);
Ontology random_ontology(Rng& rng, const std::vector<std::string>& names, const std::vector<std::string>& roles,
                         std::size_t axioms, int depth);

struct ProgramShape {
    std::size_t idbs = 2;
    std::size_t rules = 3;
    bool unary_goal = true;
    bool connected_simple = false;  // one EDB atom per rule with distinct variables
};

// Monadic program over EDB A/1, R/2 with IDBs P, Q.
Program random_mddlog(Rng& rng, const ProgramShape& shape);

// Guarded sentence over A/1, R/2 with SO variables X (binary) and Y (monadic).
MsnpFormula random_gmsnp(Rng& rng);

// Sentence over A/1, R/2 with FactSet variable X and monadic Y.
MsnpFormula random_mmsnp2(Rng& rng);

TemplateFamily random_family(Rng& rng, std::size_t constants, std::size_t max_templates, std::size_t max_elems);

}  // namespace oracle
