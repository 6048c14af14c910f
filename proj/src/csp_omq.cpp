#include <algorithm>

#include "dl_internal.hpp"
#include "omqkit/csp.hpp"

namespace omqkit {

namespace {

const std::string kPointName = "x";

// Canonical structure over the types of `types`: unary schema names not in
// the closure hold everywhere, roles follow R-coherence.
Template canonical_structure(const detail::TypeSystem& ts, const std::vector<TypeBits>& types, const Schema& s) {
    Template t;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < types.size(); ++i) {
        names.push_back("t" + std::to_string(i + 1));
        t.structure.domain.insert(names.back());
    }
    for (const auto& r : s.relations()) t.structure.facts.schema().add(r.name, r.arity);
    for (const auto& r : s.relations()) {
        if (r.arity == 1) {
            int idx = ts.find_name(r.name);
            for (std::size_t i = 0; i < types.size(); ++i)
                if (idx < 0 || types[i][idx]) t.structure.facts.add(r.name, {names[i]});
        } else if (r.arity == 2) {
            for (std::size_t i = 0; i < types.size(); ++i)
                for (std::size_t j = 0; j < types.size(); ++j)
                    if (ts.r_coherent(types[i], types[j], r.name)) t.structure.facts.add(r.name, {names[i], names[j]});
        } else {
            throw UnsupportedError("relation " + r.name + " is neither unary nor binary");
        }
    }
    return t;
}

}  // namespace

TemplateFamily aq_omq_to_templates(const OmqQuery& input, const Limits& limits) {
    OmqQuery q = input.kind == OmqQuery::Kind::ConQ ? conq_to_aq(input) : input;
    if (q.kind != OmqQuery::Kind::AQ && q.kind != OmqQuery::Kind::BAQ)
        throw UnsupportedError("templates can only be built for atomic or Boolean atomic queries");
    q.validate();
    TemplateFamily fam;
    fam.schema = q.data_schema;
    fam.comments.push_back("omq-to-templates");
    detail::TypeSystem ts(q.ontology, {Concept::atomic(q.concept_name)});
    const int a = ts.find_name(q.concept_name);
    std::vector<TypeBits> all = ts.coherent_types(limits.max_models);

    if (q.kind == OmqQuery::Kind::AQ) {
        fam.constant_names = {kPointName};
        for (const auto& set : countermodel_type_sets(q.ontology, q.concept_name)) {
            Template base = canonical_structure(ts, set.types, fam.schema);
            for (std::size_t i = 0; i < set.types.size(); ++i) {
                if (set.types[i][a]) continue;
                Template t = base;
                t.constants.push_back({kPointName, "t" + std::to_string(i + 1)});
                fam.templates.push_back(std::move(t));
            }
        }
        return fam;
    }
    std::vector<TypeBits> a_free;
    for (auto& t : all)
        if (!t[a]) a_free.push_back(t);
    for (const auto& p : ts.profiles(a_free)) fam.templates.push_back(canonical_structure(ts, p.types, fam.schema));
    return fam;
}

namespace {

ConceptPtr implication(const Inclusion& inc) { return Concept::disj(Concept::negation(inc.lhs), inc.rhs); }

}  // namespace

OmqQuery templates_to_omq(const TemplateFamily& f) {
    if (f.constant_names.size() > 1) throw UnsupportedError("only families with at most one constant can be turned into an OMQ");
    if (f.schema.max_arity() > 2) throw ValidationError("template schema must be binary");
    const bool pointed = f.constant_names.size() == 1;

    std::set<std::string> taken{kUniversalRole};
    for (const auto& r : f.schema.relations()) taken.insert(r.name);
    std::vector<std::vector<std::pair<std::string, std::string>>> labels;  // per template: element -> concept
    for (std::size_t i = 0; i < f.templates.size(); ++i) {
        labels.emplace_back();
        for (const auto& e : f.templates[i].structure.domain) {
            std::string n = fresh_name("T" + std::to_string(i + 1) + "_" + e, taken);
            taken.insert(n);
            labels.back().push_back({e, n});
        }
    }
    std::string goal = fresh_name("A", taken);

    OmqQuery q;
    q.data_schema = f.schema;
    q.kind = pointed ? OmqQuery::Kind::AQ : OmqQuery::Kind::BAQ;
    q.concept_name = goal;
    q.comments.push_back("templates-to-omq");
    const ConceptPtr violation = pointed ? Concept::bot() : Concept::atomic(goal);

    if (f.templates.empty()) {
        q.ontology.inclusions.push_back({Concept::top(), Concept::atomic(goal)});
        return q;
    }

    std::vector<std::vector<Inclusion>> blocks;
    for (std::size_t i = 0; i < f.templates.size(); ++i) {
        const Template& t = f.templates[i];
        const auto& lab = labels[i];
        std::vector<Inclusion> ax;
        for (std::size_t x = 0; x < lab.size(); ++x)
            for (std::size_t y = x + 1; y < lab.size(); ++y)
                ax.push_back({Concept::atomic(lab[x].second), Concept::negation(Concept::atomic(lab[y].second))});
        for (const auto& r : f.schema.relations()) {
            if (r.arity == 2) {
                for (const auto& [d1, c1] : lab)
                    for (const auto& [d2, c2] : lab)
                        if (!t.structure.facts.contains(Fact{r.name, {d1, d2}}))
                            ax.push_back({Concept::conj(Concept::atomic(c1), Concept::exists(r.name, Concept::atomic(c2))),
                                          violation});
            } else if (r.arity == 1) {
                for (const auto& [d, c] : lab)
                    if (!t.structure.facts.contains(Fact{r.name, {d}}))
                        ax.push_back({Concept::conj(Concept::atomic(c), Concept::atomic(r.name)), violation});
            } else if (r.arity == 0) {
                throw ValidationError("nullary relations cannot be expressed in ALC");
            }
        }
        std::vector<ConceptPtr> cover;
        for (const auto& [_, c] : lab) cover.push_back(Concept::atomic(c));
        ax.push_back({Concept::top(), Concept::disj_all(cover)});
        if (pointed) {
            std::string b = t.constants.front().second;
            for (const auto& [d, c] : lab)
                if (d == b) ax.push_back({Concept::negation(Concept::atomic(c)), Concept::atomic(goal)});
        }
        blocks.push_back(std::move(ax));
    }
    if (blocks.size() == 1) {
        q.ontology.inclusions = blocks.front();
        return q;
    }
    std::vector<ConceptPtr> choices;
    for (const auto& ax : blocks) {
        std::vector<ConceptPtr> parts;
        for (const auto& inc : ax) parts.push_back(implication(inc));
        choices.push_back(Concept::forall(kUniversalRole, Concept::conj_all(parts)));
    }
    q.ontology.inclusions.push_back({Concept::top(), Concept::disj_all(choices)});
    q.ontology.dialect = Dialect::ALCU;
    return q;
}

}  // namespace omqkit
