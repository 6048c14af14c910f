#include <algorithm>

#include "dl_internal.hpp"
#include "omqkit/translate.hpp"

namespace omqkit {

namespace {

std::string type_pred(std::size_t i) { return "P_t" + std::to_string(i + 1); }

}  // namespace

Program aq_omq_to_mddlog(const OmqQuery& input, const Limits& limits) {
    OmqQuery q = input.kind == OmqQuery::Kind::ConQ ? conq_to_aq(input) : input;
    if (q.kind != OmqQuery::Kind::AQ && q.kind != OmqQuery::Kind::BAQ)
        throw UnsupportedError("only atomic, Boolean atomic and concept queries compile to MDDlog");
    q.validate();
    detail::TypeSystem ts(q.ontology, {Concept::atomic(q.concept_name)});
    const int a = ts.find_name(q.concept_name);
    std::vector<TypeBits> coherent = ts.coherent_types(limits.max_models);

    std::vector<TypeBits> types;
    for (auto& p : ts.profiles(coherent))
        for (auto& t : p.types) types.push_back(std::move(t));

    const Schema& s = q.data_schema;
    std::vector<Rule> rules;
    auto push = [&](Rule r) {
        if (rules.size() >= limits.max_rules) throw LimitError("compiled program exceeds the rule bound");
        rules.push_back(std::move(r));
    };
    const Atom adom_x = make_atom(kAdom, {"X"});
    auto px = [&](std::size_t i) { return make_atom(type_pred(i), {"X"}); };
    auto py = [&](std::size_t i) { return make_atom(type_pred(i), {"Y"}); };

    Rule guess;
    guess.body = {adom_x};
    for (std::size_t i = 0; i < types.size(); ++i) guess.head.push_back(px(i));
    push(guess);
    for (std::size_t i = 0; i < types.size(); ++i)
        for (std::size_t j = i + 1; j < types.size(); ++j) push(Rule{{}, {px(i), px(j)}});
    for (const auto& r : s.relations()) {
        if (r.arity == 1) {
            int idx = ts.find_name(r.name);
            if (idx < 0) continue;
            for (std::size_t i = 0; i < types.size(); ++i)
                if (!types[i][idx]) push(Rule{{}, {px(i), make_atom(r.name, {"X"})}});
        } else if (r.arity == 2) {
            for (std::size_t i = 0; i < types.size(); ++i)
                for (std::size_t j = 0; j < types.size(); ++j)
                    if (!ts.r_coherent(types[i], types[j], r.name))
                        push(Rule{{}, {px(i), make_atom(r.name, {"X", "Y"}), py(j)}});
        }
    }
    if (ts.has_universal())
        for (std::size_t i = 0; i < types.size(); ++i)
            for (std::size_t j = i + 1; j < types.size(); ++j)
                if (ts.profile_of(types[i]) != ts.profile_of(types[j])) push(Rule{{}, {px(i), py(j)}});

    if (q.kind == OmqQuery::Kind::AQ) {
        for (std::size_t i = 0; i < types.size(); ++i)
            if (types[i][a]) push(Rule{{make_atom(kGoal, {"X"})}, {px(i)}});
    } else {
        std::vector<TypeBits> a_free;
        for (const auto& t : coherent)
            if (!t[a]) a_free.push_back(t);
        std::set<TypeBits> survivors;
        for (const auto& p : ts.profiles(a_free)) survivors.insert(p.types.begin(), p.types.end());
        for (std::size_t i = 0; i < types.size(); ++i)
            if (!survivors.count(types[i])) push(Rule{{make_atom(kGoal, {})}, {px(i)}});
    }

    Schema idb;
    idb.add(kGoal, q.kind == OmqQuery::Kind::AQ ? 1 : 0);
    for (std::size_t i = 0; i < types.size(); ++i) idb.add(type_pred(i), 1);
    Program p = make_program(std::move(rules), s, idb);
    p.comments.push_back("omq-to-mddlog");
    for (std::size_t i = 0; i < types.size(); ++i)
        p.comments.push_back(type_pred(i) + " = " + describe_type(types[i], ts.closure()));
    return p;
}

namespace {

// Simple up to unary EDB atoms, which the rewriting places as concept names.
bool one_binary_atom_per_rule(const Program& p) {
    for (const auto& r : p.rules) {
        std::size_t binary = 0;
        for (const auto& a : r.body) {
            if (!p.edb.contains(a.predicate) || a.args.size() < 2) continue;
            if (++binary > 1 || a.args[0] == a.args[1]) return false;
        }
    }
    return true;
}

}  // namespace

std::optional<MddlogVariant> detect_variant(const Program& p) {
    Classification c = classify(p);
    if (!c.monadic || !one_binary_atom_per_rule(p) || p.edb.max_arity() > 2) return std::nullopt;
    if (p.goal_arity == 1) return c.connected ? MddlogVariant::UnaryConnectedSimple : MddlogVariant::UnarySimple;
    if (p.goal_arity == 0) return c.connected ? MddlogVariant::BooleanConnectedSimple : MddlogVariant::BooleanSimple;
    return std::nullopt;
}

namespace {

ConceptPtr rule_to_concept_side(const std::vector<ConceptPtr>& parts) { return Concept::conj_all(parts); }

Inclusion rule_to_inclusion(const Program& p, const Rule& r) {
    const Atom* binary = nullptr;
    for (const auto& a : r.body)
        if (p.edb.contains(a.predicate) && a.args.size() == 2) binary = &a;
    std::string root;
    if (binary)
        root = binary->args[0];
    else if (!r.head.empty() && !r.head[0].args.empty())
        root = r.head[0].args[0];
    else
        for (const auto& a : r.body)
            if (!a.args.empty()) {
                root = a.args[0];
                break;
            }
    std::string succ = binary ? binary->args[1] : "";

    std::vector<std::string> order;
    std::map<std::string, std::vector<ConceptPtr>> at;
    auto note = [&](const std::string& v) {
        if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    };
    note(root);
    for (const auto& a : r.body) {
        for (const auto& v : a.args) note(v);
        if (a.args.size() != 1 || a.predicate == kAdom) continue;
        at[a.args[0]].push_back(Concept::atomic(a.predicate));
    }
    std::vector<ConceptPtr> rhs;
    for (const auto& h : r.head) {
        if (h.args.empty() || h.args[0] == root) {
            rhs.push_back(Concept::atomic(h.predicate));
            continue;
        }
        at[h.args[0]].push_back(Concept::negation(Concept::atomic(h.predicate)));
    }
    std::vector<ConceptPtr> lhs = at[root];
    for (const auto& v : order) {
        if (v == root) continue;
        ConceptPtr inner = rule_to_concept_side(at[v]);
        lhs.push_back(Concept::exists(v == succ ? binary->predicate : kUniversalRole, inner));
    }
    return Inclusion{Concept::conj_all(lhs), Concept::disj_all(rhs)};
}

}  // namespace

OmqQuery mddlog_to_aq_omq(const Program& p, MddlogVariant variant) {
    Classification c = classify(p);
    bool unary = variant == MddlogVariant::UnaryConnectedSimple || variant == MddlogVariant::UnarySimple;
    bool connected = variant == MddlogVariant::UnaryConnectedSimple || variant == MddlogVariant::BooleanConnectedSimple;
    if (!c.monadic) throw ValidationError("program is not monadic");
    if (!one_binary_atom_per_rule(p)) throw ValidationError("program is not simple");
    if (connected && !c.connected) throw ValidationError("program is not connected");
    if (p.goal_arity != (unary ? 1u : 0u)) throw ValidationError("goal arity does not match the variant");
    if (p.edb.max_arity() > 2) throw ValidationError("EDB relations must be unary or binary");

    OmqQuery q;
    q.data_schema = p.edb;
    q.kind = unary ? OmqQuery::Kind::AQ : OmqQuery::Kind::BAQ;
    q.concept_name = kGoal;
    q.comments.push_back("mddlog-to-omq");
    for (const auto& r : p.rules) {
        bool adom_head = std::any_of(r.head.begin(), r.head.end(), [](const Atom& a) { return a.predicate == kAdom; });
        if (adom_head) continue;
        q.ontology.inclusions.push_back(rule_to_inclusion(p, r));
    }
    q.ontology.dialect = q.ontology.uses_universal_role() ? Dialect::ALCU : Dialect::ALC;
    return q;
}

namespace {

std::string complement_name(const std::string& n) { return "Abar_" + n; }

}  // namespace

OmqQuery mddlog_to_ucq_omq(const Program& p) {
    if (!classify(p).monadic) throw ValidationError("program has a non-monadic IDB relation");
    const std::size_t k = p.goal_arity;
    // every (relation, position) slot of the data schema that can hold an answer element
    std::vector<std::pair<std::string, std::size_t>> slots;
    for (const auto& r : p.edb.relations())
        for (std::size_t i = 0; i < r.arity; ++i) slots.push_back({r.name, i});

    std::set<std::string> taken;
    for (const auto& r : p.edb.relations()) taken.insert(r.name);
    for (const auto& r : p.idb.relations()) taken.insert(r.name);
    std::map<std::string, std::string> bar;
    OmqQuery q;
    q.data_schema = p.edb;
    q.kind = OmqQuery::Kind::UCQ;
    q.comments.push_back("mddlog-to-ucq-omq");
    for (const auto& r : p.idb.relations()) {
        if (r.name == kGoal) continue;
        std::string b = fresh_name(complement_name(r.name), taken);
        taken.insert(b);
        bar[r.name] = b;
        auto a = Concept::atomic(r.name), na = Concept::atomic(b);
        q.ontology.inclusions.push_back(
            {Concept::top(), Concept::conj(Concept::disj(a, na), Concept::negation(Concept::conj(a, na)))});
    }

    for (const auto& r : p.rules) {
        Cq cq;
        cq.atoms = r.body;
        if (p.is_goal_rule(r)) {
            const auto& args = r.head[0].args;
            std::set<std::string> rule_vars;
            for (const auto& a : r.body) rule_vars.insert(a.args.begin(), a.args.end());
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (std::find(cq.answer_vars.begin(), cq.answer_vars.end(), args[i]) == cq.answer_vars.end()) {
                    cq.answer_vars.push_back(args[i]);
                    continue;
                }
                std::string y = fresh_name("Y" + std::to_string(i + 1), rule_vars);
                rule_vars.insert(y);
                cq.answer_vars.push_back(y);
                cq.atoms.push_back(make_equality(y, args[i]));
            }
            q.ucq.disjuncts.push_back(std::move(cq));
            continue;
        }
        for (const auto& h : r.head) cq.atoms.push_back(make_atom(bar.at(h.predicate), h.args));
        if (k == 0) {
            q.ucq.disjuncts.push_back(std::move(cq));
            continue;
        }
        // a violated rule makes every tuple an answer; each answer element is
        // bound by some data atom
        std::set<std::string> rule_vars;
        for (const auto& a : r.body) rule_vars.insert(a.args.begin(), a.args.end());
        std::vector<std::string> ys;
        for (std::size_t i = 0; i < k; ++i) {
            ys.push_back(fresh_name("Y" + std::to_string(i + 1), rule_vars));
            rule_vars.insert(ys.back());
        }
        std::vector<std::size_t> pick(k, 0);
        while (!slots.empty()) {
            Cq v = cq;
            v.answer_vars = ys;
            for (std::size_t i = 0; i < k; ++i) {
                const auto& [rel, pos] = slots[pick[i]];
                std::vector<std::string> args;
                for (std::size_t j = 0; j < *p.edb.arity(rel); ++j) {
                    if (j == pos) {
                        args.push_back(ys[i]);
                        continue;
                    }
                    args.push_back(fresh_name("Z", rule_vars));
                    rule_vars.insert(args.back());
                }
                v.atoms.push_back(make_atom(rel, args));
            }
            q.ucq.disjuncts.push_back(std::move(v));
            std::size_t i = 0;
            while (i < k && ++pick[i] == slots.size()) pick[i++] = 0;
            if (i == k) break;
        }
    }
    q.ucq.validate();
    q.ontology.dialect = Dialect::ALC;
    return q;
}

namespace {

// Recognizes top sub ((P or Q) and not (P and Q)).
std::optional<std::pair<std::string, std::string>> complement_pair(const Inclusion& inc) {
    const auto& r = inc.rhs;
    if (inc.lhs->kind != ConceptKind::Top || r->kind != ConceptKind::And) return std::nullopt;
    const auto& o = r->left;
    const auto& n = r->right;
    if (o->kind != ConceptKind::Or || n->kind != ConceptKind::Not || n->left->kind != ConceptKind::And) return std::nullopt;
    if (o->left->kind != ConceptKind::Name || o->right->kind != ConceptKind::Name) return std::nullopt;
    if (!same_concept(o->left, n->left->left) || !same_concept(o->right, n->left->right)) return std::nullopt;
    return std::make_pair(o->left->name, o->right->name);
}

}  // namespace

AnswerSet adversarial_complement_eval(const OmqQuery& q, const Instance& d, const Limits& limits) {
    if (q.kind != OmqQuery::Kind::UCQ) throw UnsupportedError("adversarial evaluation expects a UCQ query");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& inc : q.ontology.inclusions) {
        auto p = complement_pair(inc);
        if (!p) throw UnsupportedError("ontology contains an axiom other than a complement axiom");
        pairs.push_back(*p);
    }
    for (const auto& rel : d.schema().relations()) {
        auto a = q.data_schema.arity(rel.name);
        if (!a) throw ValidationError("instance relation " + rel.name + " is not in the data schema");
        if (*a != rel.arity) throw ValidationError("instance relation " + rel.name + " has the wrong arity");
    }
    if (d.empty()) return {};
    const auto adom = d.active_domain();
    const std::vector<std::string> elems(adom.begin(), adom.end());
    const std::size_t bits = pairs.size() * elems.size();
    if (bits >= 63 || (std::uint64_t(1) << bits) > limits.max_models)
        throw LimitError("too many completions to enumerate (--max-models)");
    std::optional<AnswerSet> result;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << bits); ++m) {
        Instance full = d;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t e = 0; e < elems.size(); ++e) {
                bool first = (m >> (i * elems.size() + e)) & 1;
                full.add(first ? pairs[i].first : pairs[i].second, {elems[e]});
            }
        AnswerSet got = eval_ucq(q.ucq, full);
        if (!result) {
            result = std::move(got);
        } else {
            AnswerSet keep;
            std::set_intersection(result->begin(), result->end(), got.begin(), got.end(), std::inserter(keep, keep.end()));
            result = std::move(keep);
        }
        if (result->empty()) break;
    }
    return result ? *result : AnswerSet{};
}

}  // namespace omqkit
