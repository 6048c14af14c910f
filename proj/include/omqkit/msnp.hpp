#pragma once

#include <map>
#include <string>
#include <vector>

#include "omqkit/core.hpp"

namespace omqkit {

enum class MsnpDialect { MMSNP, GMSNP, MMSNP2 };
enum class SoKind { Monadic, Relation, FactSet };

struct SoVar {
    std::string name;
    SoKind kind = SoKind::Monadic;
    std::size_t arity = 1;
};

struct Implication {
    std::vector<Atom> body;
    std::vector<Atom> head;  // empty = false
    bool operator==(const Implication&) const = default;
};

struct MsnpFormula {
    MsnpDialect dialect = MsnpDialect::MMSNP;
    Schema schema;  // input relations
    std::vector<SoVar> so_vars;
    std::vector<std::string> free_vars;
    std::vector<Implication> matrix;
    std::vector<std::string> comments;

    const SoVar* so_var(const std::string& name) const;
    bool is_so(const std::string& name) const { return so_var(name) != nullptr; }
};

MsnpFormula parse_msnp(const std::string& text);
std::string render_implication(const Implication& imp);
std::string render_msnp(const MsnpFormula& f);

// Completes the input schema from the atoms and checks the dialect invariants.
void validate_msnp(MsnpFormula& f);

MsnpFormula normalize_msnp(const MsnpFormula& f);

AnswerSet eval_msnp(const MsnpFormula& f, const Instance& d, const Limits& limits = {});

bool check_guarded(const MsnpFormula& f);

struct ColoredStructure {
    RelStructure base;
    std::map<std::string, std::string> colors;
};

struct PatternSet {
    std::vector<std::string> colors;
    Schema schema;
    std::vector<ColoredStructure> patterns;
};

PatternSet parse_patterns(const std::string& text);

bool forb_membership(const PatternSet& patterns, const Instance& d, const Limits& limits = {});

}  // namespace omqkit
