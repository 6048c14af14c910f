#include "omqkit/dl.hpp"

#include "text.hpp"

namespace omqkit {

namespace {

ConceptPtr make(ConceptKind k, std::string name = {}, ConceptPtr l = nullptr, ConceptPtr r = nullptr) {
    auto c = std::make_shared<Concept>();
    c->kind = k;
    c->name = std::move(name);
    c->left = std::move(l);
    c->right = std::move(r);
    return c;
}

const std::set<std::string> kReserved = {"top", "bot", "not", "and", "or", "exists", "forall", "univ", "sub"};

ConceptPtr parse_concept_tokens(text::TokenStream& ts);

ConceptPtr parse_role_filler(text::TokenStream& ts, bool existential) {
    std::string role = ts.expect_ident("role name");
    if (kReserved.count(role) && role != kUniversalRole) ts.fail("reserved word used as role");
    ts.expect(".");
    ConceptPtr filler = parse_concept_tokens(ts);
    return existential ? Concept::exists(role, filler) : Concept::forall(role, filler);
}

ConceptPtr parse_concept_tokens(text::TokenStream& ts) {
    if (ts.accept_word("top")) return Concept::top();
    if (ts.accept_word("bot")) return Concept::bot();
    if (ts.accept_word("not")) return Concept::negation(parse_concept_tokens(ts));
    if (ts.accept_word("exists")) return parse_role_filler(ts, true);
    if (ts.accept_word("forall")) return parse_role_filler(ts, false);
    if (ts.accept("(")) {
        ConceptPtr c = parse_concept_tokens(ts);
        while (true) {
            if (ts.accept_word("and")) {
                c = Concept::conj(c, parse_concept_tokens(ts));
            } else if (ts.accept_word("or")) {
                c = Concept::disj(c, parse_concept_tokens(ts));
            } else {
                break;
            }
        }
        ts.expect(")");
        return c;
    }
    if (ts.peek().kind != text::Token::Ident) ts.fail("expected a concept");
    if (kReserved.count(ts.peek().text)) ts.fail("reserved word used as concept name");
    return Concept::atomic(ts.next().text);
}

void collect_names(const ConceptPtr& c, std::set<std::string>& concepts, std::set<std::string>& roles) {
    if (!c) return;
    if (c->kind == ConceptKind::Name) concepts.insert(c->name);
    if (c->kind == ConceptKind::Exists || c->kind == ConceptKind::Forall) roles.insert(c->name);
    collect_names(c->left, concepts, roles);
    collect_names(c->right, concepts, roles);
}

}  // namespace

ConceptPtr Concept::top() { return make(ConceptKind::Top); }
ConceptPtr Concept::bot() { return make(ConceptKind::Bot); }
ConceptPtr Concept::atomic(const std::string& n) { return make(ConceptKind::Name, n); }
ConceptPtr Concept::negation(ConceptPtr c) { return make(ConceptKind::Not, {}, std::move(c)); }
ConceptPtr Concept::conj(ConceptPtr a, ConceptPtr b) { return make(ConceptKind::And, {}, std::move(a), std::move(b)); }
ConceptPtr Concept::disj(ConceptPtr a, ConceptPtr b) { return make(ConceptKind::Or, {}, std::move(a), std::move(b)); }
ConceptPtr Concept::exists(const std::string& role, ConceptPtr c) { return make(ConceptKind::Exists, role, std::move(c)); }
ConceptPtr Concept::forall(const std::string& role, ConceptPtr c) { return make(ConceptKind::Forall, role, std::move(c)); }

ConceptPtr Concept::conj_all(const std::vector<ConceptPtr>& cs) {
    if (cs.empty()) return top();
    ConceptPtr out = cs.front();
    for (std::size_t i = 1; i < cs.size(); ++i) out = conj(out, cs[i]);
    return out;
}

ConceptPtr Concept::disj_all(const std::vector<ConceptPtr>& cs) {
    if (cs.empty()) return bot();
    ConceptPtr out = cs.front();
    for (std::size_t i = 1; i < cs.size(); ++i) out = disj(out, cs[i]);
    return out;
}

std::string to_string(const ConceptPtr& c) {
    switch (c->kind) {
        case ConceptKind::Top: return "top";
        case ConceptKind::Bot: return "bot";
        case ConceptKind::Name: return c->name;
        case ConceptKind::Not: return "not " + to_string(c->left);
        case ConceptKind::And: return "(" + to_string(c->left) + " and " + to_string(c->right) + ")";
        case ConceptKind::Or: return "(" + to_string(c->left) + " or " + to_string(c->right) + ")";
        case ConceptKind::Exists: return "exists " + c->name + " . " + to_string(c->left);
        case ConceptKind::Forall: return "forall " + c->name + " . " + to_string(c->left);
    }
    return "";
}

bool same_concept(const ConceptPtr& a, const ConceptPtr& b) {
    if (a->kind != b->kind || a->name != b->name) return false;
    if (static_cast<bool>(a->left) != static_cast<bool>(b->left)) return false;
    if (static_cast<bool>(a->right) != static_cast<bool>(b->right)) return false;
    if (a->left && !same_concept(a->left, b->left)) return false;
    if (a->right && !same_concept(a->right, b->right)) return false;
    return true;
}

std::set<std::string> concept_names(const ConceptPtr& c) {
    std::set<std::string> cs, rs;
    collect_names(c, cs, rs);
    return cs;
}

std::set<std::string> role_names(const ConceptPtr& c) {
    std::set<std::string> cs, rs;
    collect_names(c, cs, rs);
    rs.erase(kUniversalRole);
    return rs;
}

std::set<std::string> Ontology::concept_names() const {
    std::set<std::string> cs, rs;
    for (const auto& i : inclusions) {
        collect_names(i.lhs, cs, rs);
        collect_names(i.rhs, cs, rs);
    }
    return cs;
}

std::set<std::string> Ontology::role_names() const {
    std::set<std::string> cs, rs;
    for (const auto& i : inclusions) {
        collect_names(i.lhs, cs, rs);
        collect_names(i.rhs, cs, rs);
    }
    rs.erase(kUniversalRole);
    return rs;
}

bool Ontology::uses_universal_role() const {
    std::set<std::string> cs, rs;
    for (const auto& i : inclusions) {
        collect_names(i.lhs, cs, rs);
        collect_names(i.rhs, cs, rs);
    }
    return rs.count(kUniversalRole) > 0;
}

ConceptPtr parse_concept(const std::string& src) {
    text::TokenStream ts(text::tokenize(src));
    ConceptPtr c = parse_concept_tokens(ts);
    if (!ts.at_end()) ts.fail("unexpected trailing input after concept");
    return c;
}

namespace {

Inclusion parse_inclusion_tokens(text::TokenStream& ts) {
    Inclusion inc;
    inc.lhs = parse_concept_tokens(ts);
    ts.expect_word("sub");
    inc.rhs = parse_concept_tokens(ts);
    if (!ts.at_end()) ts.fail("unexpected trailing input after inclusion");
    return inc;
}

void settle_dialect(Ontology& o, std::optional<Dialect> pinned, int line) {
    bool u = o.uses_universal_role();
    if (pinned == Dialect::ALC && u) throw ParseError(line, 1, "universal role used in an ALC ontology");
    o.dialect = (u || pinned == Dialect::ALCU) ? Dialect::ALCU : Dialect::ALC;
}

}  // namespace

Ontology parse_ontology(const std::string& src, std::optional<Dialect> pinned) {
    Ontology o;
    int last = 1;
    for (const auto& line : text::split_lines(src)) {
        text::TokenStream ts(text::tokenize(line.text, line.number));
        o.inclusions.push_back(parse_inclusion_tokens(ts));
        last = line.number;
        settle_dialect(o, pinned, last);
    }
    settle_dialect(o, pinned, last);
    return o;
}

std::string render_inclusion(const Inclusion& inc) { return to_string(inc.lhs) + " sub " + to_string(inc.rhs); }

std::string render_ontology(const Ontology& o) {
    std::string out;
    for (const auto& i : o.inclusions) out += render_inclusion(i) + "\n";
    return out;
}

std::size_t OmqQuery::arity() const {
    switch (kind) {
        case Kind::AQ:
        case Kind::ConQ: return 1;
        case Kind::BAQ: return 0;
        case Kind::UCQ: return ucq.arity();
    }
    return 0;
}

void OmqQuery::validate() const {
    if (data_schema.max_arity() > 2) throw ValidationError("OMQ data schemas may only contain unary and binary relations");
    for (const auto& r : data_schema.relations())
        if (r.name == kUniversalRole) throw ValidationError("univ is reserved and cannot be a data relation");
    auto cs = ontology.concept_names();
    auto rs = ontology.role_names();
    for (const auto& c : cs)
        if (data_schema.arity(c) && *data_schema.arity(c) != 1)
            throw ValidationError(c + " is used as a concept but has arity " + std::to_string(*data_schema.arity(c)));
    for (const auto& r : rs)
        if (data_schema.arity(r) && *data_schema.arity(r) != 2)
            throw ValidationError(r + " is used as a role but has arity " + std::to_string(*data_schema.arity(r)));
    if (ontology.dialect == Dialect::ALC && ontology.uses_universal_role())
        throw ValidationError("universal role used in an ALC ontology");
    if (kind == Kind::UCQ) ucq.validate();
}

OmqQuery parse_omq(const std::string& src) {
    OmqQuery q;
    bool have_query = false;
    bool have_schema = false;
    for (const auto& line : text::split_lines(src)) {
        text::TokenStream ts(text::tokenize(line.text, line.number));
        if (ts.accept_word("schema")) {
            if (have_schema) ts.fail("duplicate schema line");
            text::parse_signature_list(ts, q.data_schema);
            if (!ts.at_end()) ts.fail("expected Name/arity");
            have_schema = true;
        } else if (ts.accept_word("axiom")) {
            q.ontology.inclusions.push_back(parse_inclusion_tokens(ts));
        } else if (ts.accept_word("query")) {
            if (have_query) ts.fail("only one query line is allowed");
            have_query = true;
            if (ts.accept_word("aq")) {
                q.kind = OmqQuery::Kind::AQ;
                q.concept_name = ts.expect_ident("concept name");
            } else if (ts.accept_word("baq")) {
                q.kind = OmqQuery::Kind::BAQ;
                q.concept_name = ts.expect_ident("concept name");
            } else if (ts.accept_word("conq")) {
                q.kind = OmqQuery::Kind::ConQ;
                q.query_concept = parse_concept_tokens(ts);
            } else if (ts.accept_word("ucq")) {
                q.kind = OmqQuery::Kind::UCQ;
                std::size_t at = line.text.find("ucq");
                try {
                    q.ucq = parse_ucq(line.text.substr(at + 3));
                } catch (const ParseError& e) {
                    throw ParseError(line.number, static_cast<int>(at + 4) + e.column(), e.what());
                }
                continue;
            } else {
                ts.fail("expected aq, baq, conq or ucq");
            }
            if (!ts.at_end()) ts.fail("unexpected trailing input");
        } else {
            ts.fail("expected schema, axiom or query");
        }
    }
    if (!have_query) throw ParseError(1, 1, "OMQ bundle has no query line");
    q.ontology.dialect = q.ontology.uses_universal_role() ? Dialect::ALCU : Dialect::ALC;
    try {
        q.validate();
    } catch (const ValidationError& e) {
        throw ParseError(1, 1, e.what());
    }
    return q;
}

std::string render_omq(const OmqQuery& q) {
    std::string out;
    for (const auto& c : q.comments) out += "# " + c + "\n";
    out += q.data_schema.render() + "\n";
    for (const auto& i : q.ontology.inclusions) out += "axiom " + render_inclusion(i) + "\n";
    switch (q.kind) {
        case OmqQuery::Kind::AQ: out += "query aq " + q.concept_name + "\n"; break;
        case OmqQuery::Kind::BAQ: out += "query baq " + q.concept_name + "\n"; break;
        case OmqQuery::Kind::ConQ: out += "query conq " + to_string(q.query_concept) + "\n"; break;
        case OmqQuery::Kind::UCQ: out += "query ucq " + render_ucq(q.ucq) + "\n"; break;
    }
    return out;
}

OmqQuery conq_to_aq(const OmqQuery& q) {
    if (q.kind != OmqQuery::Kind::ConQ) throw UnsupportedError("conq_to_aq expects a concept query");
    OmqQuery out = q;
    out.kind = OmqQuery::Kind::AQ;
    out.query_concept = nullptr;
    if (q.query_concept->kind == ConceptKind::Name) {
        out.concept_name = q.query_concept->name;
        return out;
    }
    std::set<std::string> taken = q.ontology.concept_names();
    for (const auto& r : q.ontology.role_names()) taken.insert(r);
    for (const auto& r : q.data_schema.relations()) taken.insert(r.name);
    for (const auto& n : concept_names(q.query_concept)) taken.insert(n);
    out.concept_name = fresh_name("A_q", taken);
    out.ontology.inclusions.push_back({q.query_concept, Concept::atomic(out.concept_name)});
    std::set<std::string> cs, rs;
    collect_names(q.query_concept, cs, rs);
    if (rs.count(kUniversalRole)) out.ontology.dialect = Dialect::ALCU;
    return out;
}

bool holds_at(const RelStructure& b, const ConceptPtr& c, const std::string& e) {
    switch (c->kind) {
        case ConceptKind::Top: return true;
        case ConceptKind::Bot: return false;
        case ConceptKind::Name: return b.facts.contains(Fact{c->name, {e}});
        case ConceptKind::Not: return !holds_at(b, c->left, e);
        case ConceptKind::And: return holds_at(b, c->left, e) && holds_at(b, c->right, e);
        case ConceptKind::Or: return holds_at(b, c->left, e) || holds_at(b, c->right, e);
        case ConceptKind::Exists:
        case ConceptKind::Forall: {
            bool ex = c->kind == ConceptKind::Exists;
            for (const auto& f : b.domain) {
                bool edge = c->name == kUniversalRole || b.facts.contains(Fact{c->name, {e, f}});
                if (!edge) continue;
                bool h = holds_at(b, c->left, f);
                if (ex && h) return true;
                if (!ex && !h) return false;
            }
            return !ex;
        }
    }
    return false;
}

bool check_model(const RelStructure& b, const Ontology& o) {
    for (const auto& inc : o.inclusions)
        for (const auto& e : b.domain)
            if (holds_at(b, inc.lhs, e) && !holds_at(b, inc.rhs, e)) return false;
    return true;
}

}  // namespace omqkit
