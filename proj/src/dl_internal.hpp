#pragma once

#include <map>
#include <string>
#include <vector>

#include "omqkit/dl.hpp"

namespace omqkit::detail {

// Closure bookkeeping shared by the type-based constructions.
class TypeSystem {
public:
    TypeSystem(const Ontology& o, const std::vector<ConceptPtr>& extra);

    const std::vector<ConceptPtr>& closure() const { return closure_; }
    int find(const ConceptPtr& c) const;
    int find_name(const std::string& name) const;
    // Data roles with an existential restriction in the closure.
    std::vector<std::string> roles() const;
    bool has_universal() const { return !universal_.empty(); }

    // Propositionally coherent types respecting every inclusion, and the
    // universal-role closure condition D in t => exists univ.D in t.
    std::vector<TypeBits> coherent_types(std::uint64_t limit) const;

    bool r_coherent(const TypeBits& a, const TypeBits& b, const std::string& role) const;

    // Greatest subset in which every data-role existential has a witness.
    std::vector<TypeBits> eliminate(std::vector<TypeBits> start) const;

    struct Profile {
        TypeBits key;
        std::vector<TypeBits> types;
    };
    // Groups `start` by universal profile, eliminates inside each group and
    // keeps the groups whose universal existentials are all witnessed.
    std::vector<Profile> profiles(const std::vector<TypeBits>& start) const;
    TypeBits profile_of(const TypeBits& t) const;

private:
    struct Node {
        ConceptKind kind;
        int left = -1;
        int right = -1;
        std::string role;
    };

    std::vector<ConceptPtr> closure_;
    std::map<std::string, int> index_;
    std::vector<Node> nodes_;
    std::vector<std::pair<int, int>> inclusions_;
    std::vector<int> atoms_;
    std::vector<int> universal_;                                // exists univ.D indices
    std::map<std::string, std::vector<std::pair<int, int>>> existentials_;  // role -> (exists idx, filler idx)
};

ConceptPtr normalize_concept(const ConceptPtr& c);

}  // namespace omqkit::detail
