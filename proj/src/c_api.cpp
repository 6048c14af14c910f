#include "omqkit/omqkit.h"

#include <cstring>
#include <deque>
#include <variant>

#include "omqkit/csp.hpp"
#include "omqkit/translate.hpp"
#include "text.hpp"

using namespace omqkit;

struct omqk_artifact {
    omqk_format format;
    std::variant<Instance, Ontology, OmqQuery, Program, MsnpFormula, TemplateFamily, PatternSet> value;
};

struct omqk_answers {
    std::size_t arity = 0;
    std::vector<Tuple> rows;
};

namespace {

thread_local std::string last_error;

omqk_status fail(omqk_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

template <class F>
omqk_status guarded(F&& body) {
    last_error.clear();
    try {
        return body();
    } catch (const ParseError& e) {
        return fail(OMQK_ERR_PARSE, e.what());
    } catch (const ValidationError& e) {
        return fail(OMQK_ERR_PARSE, e.what());
    } catch (const UnsupportedError& e) {
        return fail(OMQK_ERR_UNSUPPORTED, e.what());
    } catch (const LimitError& e) {
        return fail(OMQK_ERR_LIMIT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(OMQK_ERR_LIMIT, "out of memory");
    } catch (const std::exception& e) {
        return fail(OMQK_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(OMQK_ERR_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

Limits to_limits(const omqk_limits* l) {
    Limits out;
    if (l) {
        out.max_models = l->max_models;
        out.max_product = l->max_product;
        out.max_rules = l->max_rules;
    }
    return out;
}

omqk_artifact* wrap(omqk_format f, auto value) { return new omqk_artifact{f, std::move(value)}; }

const char* yes_no(bool b) { return b ? "yes" : "no"; }

const char* kind_word(OmqQuery::Kind k) {
    switch (k) {
        case OmqQuery::Kind::AQ: return "aq";
        case OmqQuery::Kind::BAQ: return "baq";
        case OmqQuery::Kind::ConQ: return "conq";
        case OmqQuery::Kind::UCQ: return "ucq";
    }
    return "";
}

const char* dialect_word(MsnpDialect d) {
    switch (d) {
        case MsnpDialect::MMSNP: return "mmsnp";
        case MsnpDialect::GMSNP: return "gmsnp";
        case MsnpDialect::MMSNP2: return "mmsnp2";
    }
    return "";
}

// ---- compile graph ----

using Value = decltype(omqk_artifact::value);

std::string kind_of(const Value& v) {
    if (auto q = std::get_if<OmqQuery>(&v)) {
        switch (q->kind) {
            case OmqQuery::Kind::AQ: return "alc-aq";
            case OmqQuery::Kind::BAQ: return "alc-baq";
            case OmqQuery::Kind::ConQ: return "alc-conq";
            case OmqQuery::Kind::UCQ: return "alc-ucq";
        }
    }
    if (std::holds_alternative<Program>(v)) return "mddlog";
    if (auto f = std::get_if<MsnpFormula>(&v)) {
        switch (f->dialect) {
            case MsnpDialect::MMSNP: return "commsnp";
            case MsnpDialect::GMSNP: return "gmsnp";
            case MsnpDialect::MMSNP2: return "mmsnp2";
        }
    }
    return "";
}

struct Edge {
    const char* from;
    const char* to;
    Value (*run)(const Value&, const Limits&);
};

Value to_mddlog(const Value& v, const Limits& l) { return aq_omq_to_mddlog(std::get<OmqQuery>(v), l); }

Value program_to_aq(const Value& v, const Limits&, bool unary) {
    const Program& p = std::get<Program>(v);
    auto variant = detect_variant(p);
    if (!variant) throw ValidationError("program is not a monadic simple program over a binary schema");
    bool is_unary = *variant == MddlogVariant::UnaryConnectedSimple || *variant == MddlogVariant::UnarySimple;
    if (is_unary != unary) throw ValidationError(unary ? "goal must be unary" : "goal must be nullary");
    return mddlog_to_aq_omq(p, *variant);
}

const Edge kEdges[] = {
    {"alc-aq", "mddlog", to_mddlog},
    {"alc-baq", "mddlog", to_mddlog},
    {"alc-conq", "mddlog", to_mddlog},
    {"alc-conq", "alc-aq", [](const Value& v, const Limits&) -> Value { return conq_to_aq(std::get<OmqQuery>(v)); }},
    {"mddlog", "alc-aq", [](const Value& v, const Limits& l) { return program_to_aq(v, l, true); }},
    {"mddlog", "alc-baq", [](const Value& v, const Limits& l) { return program_to_aq(v, l, false); }},
    {"mddlog", "alc-ucq", [](const Value& v, const Limits&) -> Value { return mddlog_to_ucq_omq(std::get<Program>(v)); }},
    {"mddlog", "commsnp", [](const Value& v, const Limits&) -> Value { return mddlog_to_commsnp(std::get<Program>(v)); }},
    {"commsnp", "mddlog", [](const Value& v, const Limits&) -> Value { return commsnp_to_mddlog(std::get<MsnpFormula>(v)); }},
    {"fgddlog", "gmsnp", [](const Value& v, const Limits&) -> Value { return fgddlog_to_gmsnp(std::get<Program>(v)); }},
    {"gmsnp", "fgddlog", [](const Value& v, const Limits&) -> Value { return gmsnp_to_fgddlog(std::get<MsnpFormula>(v)); }},
    {"gmsnp", "mmsnp2", [](const Value& v, const Limits& l) -> Value { return gmsnp_to_mmsnp2(std::get<MsnpFormula>(v), l); }},
    {"mmsnp2", "gmsnp", [](const Value& v, const Limits&) -> Value { return mmsnp2_to_gmsnp(std::get<MsnpFormula>(v)); }},
};

const char* const kKinds[] = {"alc-aq", "alc-baq", "alc-conq", "alc-ucq", "mddlog", "fgddlog", "commsnp", "gmsnp", "mmsnp2"};

bool known_kind(const std::string& k) {
    for (const char* x : kKinds)
        if (k == x) return true;
    return false;
}

// Datalog values serve both as mddlog and fgddlog.
bool kind_matches(const Value& v, const std::string& k) {
    std::string actual = kind_of(v);
    if (k == "fgddlog") return actual == "mddlog";
    return actual == k;
}

std::vector<const Edge*> find_path(const std::string& from, const std::string& to) {
    std::map<std::string, const Edge*> via;
    std::deque<std::string> queue{from};
    std::set<std::string> seen{from};
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        if (cur == to) break;
        for (const auto& e : kEdges)
            if (cur == e.from && !seen.count(e.to)) {
                seen.insert(e.to);
                via[e.to] = &e;
                queue.push_back(e.to);
            }
    }
    std::vector<const Edge*> path;
    if (from == to || !via.count(to)) return path;
    for (std::string cur = to; cur != from; cur = via[cur]->from) path.insert(path.begin(), via[cur]);
    return path;
}

omqk_format format_of(const Value& v) {
    return static_cast<omqk_format>(static_cast<int>(OMQK_FORMAT_FACTS) + static_cast<int>(v.index()));
}

// ---- evaluation ----

bool only_complement_axioms(const OmqQuery& q) {
    try {
        adversarial_complement_eval(q, Instance(), Limits{});
        return true;
    } catch (const UnsupportedError&) {
        return false;
    }
}

AnswerSet eval_ucq_omq(const OmqQuery& q, const Instance& d, const Limits& l) {
    if (q.ontology.inclusions.empty()) {
        for (const auto& rel : d.schema().relations()) {
            auto a = q.data_schema.arity(rel.name);
            if (!a || *a != rel.arity) throw ValidationError("instance relation " + rel.name + " does not match the data schema");
        }
        return eval_ucq(q.ucq, d);
    }
    if (only_complement_axioms(q)) return adversarial_complement_eval(q, d, l);
    throw UnsupportedError("UCQ queries are evaluated only over empty or complement-axiom ontologies");
}

AnswerSet run_eval(const Value& query, const Instance& d, omqk_engine engine, const Limits& l, std::size_t& arity) {
    if (auto q = std::get_if<OmqQuery>(&query)) {
        arity = q->arity();
        if (q->kind == OmqQuery::Kind::UCQ) return eval_ucq_omq(*q, d, l);
        switch (engine) {
            case OMQK_ENGINE_TEMPLATE: return eval_cocsp(aq_omq_to_templates(*q, l), d);
            case OMQK_ENGINE_DDLOG: return eval_bruteforce(aq_omq_to_mddlog(*q, l), d, l);
            case OMQK_ENGINE_MSNP: return eval_msnp(mddlog_to_commsnp(aq_omq_to_mddlog(*q, l)), d, l);
        }
    }
    if (auto p = std::get_if<Program>(&query)) {
        arity = p->goal_arity;
        switch (engine) {
            case OMQK_ENGINE_DDLOG: return eval_bruteforce(*p, d, l);
            case OMQK_ENGINE_MSNP:
                return eval_msnp(classify(*p).monadic ? mddlog_to_commsnp(*p) : fgddlog_to_gmsnp(*p), d, l);
            case OMQK_ENGINE_TEMPLATE: {
                auto variant = detect_variant(*p);
                if (!variant) throw UnsupportedError("the template engine needs a monadic simple program");
                return eval_cocsp(aq_omq_to_templates(mddlog_to_aq_omq(*p, *variant), l), d);
            }
        }
    }
    if (auto f = std::get_if<MsnpFormula>(&query)) {
        arity = f->free_vars.size();
        switch (engine) {
            case OMQK_ENGINE_MSNP: return eval_msnp(*f, d, l);
            case OMQK_ENGINE_DDLOG:
                if (f->dialect == MsnpDialect::MMSNP2) return eval_bruteforce(gmsnp_to_fgddlog(mmsnp2_to_gmsnp(*f)), d, l);
                return eval_bruteforce(gmsnp_to_fgddlog(*f), d, l);
            case OMQK_ENGINE_TEMPLATE: throw UnsupportedError("the template engine does not evaluate MSNP formulas");
        }
    }
    if (auto t = std::get_if<TemplateFamily>(&query)) {
        arity = t->constant_names.size();
        switch (engine) {
            case OMQK_ENGINE_TEMPLATE: return eval_cocsp(*t, d);
            case OMQK_ENGINE_DDLOG: return eval_bruteforce(aq_omq_to_mddlog(templates_to_omq(*t), l), d, l);
            case OMQK_ENGINE_MSNP:
                return eval_msnp(mddlog_to_commsnp(aq_omq_to_mddlog(templates_to_omq(*t), l)), d, l);
        }
    }
    throw UnsupportedError("artifact is not a query");
}

TemplateFamily as_family(const Value& v, const Limits& l) {
    if (auto t = std::get_if<TemplateFamily>(&v)) return *t;
    if (auto q = std::get_if<OmqQuery>(&v)) return aq_omq_to_templates(*q, l);
    if (auto p = std::get_if<Program>(&v)) {
        auto variant = detect_variant(*p);
        if (!variant) throw UnsupportedError("program is not a monadic simple program over a binary schema");
        return aq_omq_to_templates(mddlog_to_aq_omq(*p, *variant), l);
    }
    throw UnsupportedError("artifact has no template representation");
}

}  // namespace

extern "C" {

const char* omqk_version(void) { return OMQKIT_VERSION; }

omqk_limits omqk_limits_default(void) {
    Limits l;
    return omqk_limits{l.max_models, l.max_product, l.max_rules};
}

const char* omqk_last_error(void) { return last_error.c_str(); }

omqk_format omqk_detect_format(const char* text) {
    if (!text) return OMQK_FORMAT_AUTO;
    std::string src(text);
    auto lines = text::split_lines(src);
    if (lines.empty()) return OMQK_FORMAT_FACTS;
    auto first_word = [](const std::string& s) { return s.substr(0, s.find_first_of(" \t(")); };
    std::string head = first_word(lines.front().text);
    if (head == "msnp") return OMQK_FORMAT_MSNP;
    if (head == "colors") return OMQK_FORMAT_PATTERNS;
    bool omq = false, datalog = false, ontology = false;
    for (const auto& l : lines) {
        std::string w = first_word(l.text);
        if (w == "domain" || w == "constants" || l.text == "---") return OMQK_FORMAT_TEMPLATES;
        if (w == "query" || w == "axiom") omq = true;
        if (l.text.find(":-") != std::string::npos || w == "edb" || w == "idb") datalog = true;
        if (l.text.find(" sub ") != std::string::npos) ontology = true;
    }
    if (omq) return OMQK_FORMAT_OMQ;
    if (datalog) return OMQK_FORMAT_DATALOG;
    if (ontology) return OMQK_FORMAT_ONTOLOGY;
    return OMQK_FORMAT_FACTS;
}

const char* omqk_format_name(omqk_format fmt) {
    switch (fmt) {
        case OMQK_FORMAT_AUTO: return "auto";
        case OMQK_FORMAT_FACTS: return "facts";
        case OMQK_FORMAT_ONTOLOGY: return "ontology";
        case OMQK_FORMAT_OMQ: return "omq";
        case OMQK_FORMAT_DATALOG: return "datalog";
        case OMQK_FORMAT_MSNP: return "msnp";
        case OMQK_FORMAT_TEMPLATES: return "templates";
        case OMQK_FORMAT_PATTERNS: return "patterns";
    }
    return "unknown";
}

omqk_status omqk_parse(const char* text, omqk_format fmt, omqk_artifact** out) {
    return guarded([&] {
        if (!text || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        *out = nullptr;
        if (fmt == OMQK_FORMAT_AUTO) fmt = omqk_detect_format(text);
        std::string src(text);
        switch (fmt) {
            case OMQK_FORMAT_FACTS: *out = wrap(fmt, parse_instance(src)); break;
            case OMQK_FORMAT_ONTOLOGY: *out = wrap(fmt, parse_ontology(src)); break;
            case OMQK_FORMAT_OMQ: *out = wrap(fmt, parse_omq(src)); break;
            case OMQK_FORMAT_DATALOG: *out = wrap(fmt, parse_program(src)); break;
            case OMQK_FORMAT_MSNP: *out = wrap(fmt, parse_msnp(src)); break;
            case OMQK_FORMAT_TEMPLATES: *out = wrap(fmt, parse_templates(src)); break;
            case OMQK_FORMAT_PATTERNS: *out = wrap(fmt, parse_patterns(src)); break;
            default: return fail(OMQK_ERR_ARGUMENT, "unknown format");
        }
        return OMQK_OK;
    });
}

omqk_format omqk_artifact_format(const omqk_artifact* a) { return a ? a->format : OMQK_FORMAT_AUTO; }

omqk_status omqk_render(const omqk_artifact* a, char** out) {
    return guarded([&] {
        if (!a || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        std::string s = std::visit(
            [](const auto& v) -> std::string {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Instance>) return render_instance(v);
                if constexpr (std::is_same_v<T, Ontology>) return render_ontology(v);
                if constexpr (std::is_same_v<T, OmqQuery>) return render_omq(v);
                if constexpr (std::is_same_v<T, Program>) return render_program(v);
                if constexpr (std::is_same_v<T, MsnpFormula>) return render_msnp(v);
                if constexpr (std::is_same_v<T, TemplateFamily>) return render_templates(v);
                if constexpr (std::is_same_v<T, PatternSet>) {
                    std::string r = "colors";
                    for (const auto& c : v.colors) r += " " + c;
                    r += "\n";
                    for (std::size_t i = 0; i < v.patterns.size(); ++i) {
                        if (i) r += "---\n";
                        for (const auto& f : v.patterns[i].base.facts.facts()) r += render_fact(f) + ".\n";
                        for (const auto& [e, c] : v.patterns[i].colors) r += "color(" + e + ") = " + c + "\n";
                    }
                    return r;
                }
                return "";
            },
            a->value);
        *out = dup(s);
        return OMQK_OK;
    });
}

omqk_status omqk_describe(const omqk_artifact* a, char** out) {
    return guarded([&] {
        if (!a || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        std::string s;
        if (auto d = std::get_if<Instance>(&a->value)) {
            s = "facts: " + std::to_string(d->facts().size()) + " facts, " + std::to_string(d->active_domain().size()) +
                " constants";
        } else if (auto o = std::get_if<Ontology>(&a->value)) {
            s = std::string("ontology: ") + (o->dialect == Dialect::ALCU ? "ALCU" : "ALC") + ", " +
                std::to_string(o->inclusions.size()) + " axioms";
        } else if (auto q = std::get_if<OmqQuery>(&a->value)) {
            s = std::string("omq: ") + (q->ontology.dialect == Dialect::ALCU ? "ALCU" : "ALC") + ", query " +
                kind_word(q->kind) + ", arity " + std::to_string(q->arity()) + ", " +
                std::to_string(q->ontology.inclusions.size()) + " axioms";
        } else if (auto p = std::get_if<Program>(&a->value)) {
            Classification c = classify(*p);
            s = "datalog: " + std::to_string(p->rules.size()) + " rules, goal arity " + std::to_string(p->goal_arity) +
                "\nmonadic: " + yes_no(c.monadic) + "\nsimple: " + yes_no(c.simple) + "\nconnected: " +
                yes_no(c.connected) + "\nfrontier-guarded: " + yes_no(c.frontier_guarded) + "\nguarded: " +
                yes_no(c.guarded);
        } else if (auto f = std::get_if<MsnpFormula>(&a->value)) {
            s = std::string("msnp: ") + dialect_word(f->dialect) + ", " + std::to_string(f->matrix.size()) +
                " implications, " + std::to_string(f->so_vars.size()) + " second-order variables, " +
                std::to_string(f->free_vars.size()) + " free variables\nguarded: " + yes_no(check_guarded(*f));
        } else if (auto t = std::get_if<TemplateFamily>(&a->value)) {
            s = "templates: " + std::to_string(t->templates.size()) + " templates, " +
                std::to_string(t->constant_names.size()) + " constants";
        } else if (auto ps = std::get_if<PatternSet>(&a->value)) {
            s = "patterns: " + std::to_string(ps->patterns.size()) + " patterns, " + std::to_string(ps->colors.size()) +
                " colors";
        }
        *out = dup(s + "\n");
        return OMQK_OK;
    });
}

void omqk_artifact_free(omqk_artifact* a) { delete a; }
void omqk_string_free(char* s) { std::free(s); }

omqk_status omqk_compile(const omqk_artifact* in, const char* from, const char* to, const omqk_limits* limits,
                         omqk_artifact** out) {
    return guarded([&] {
        if (!in || !from || !to || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        *out = nullptr;
        std::string f(from), t(to);
        if (!known_kind(f)) return fail(OMQK_ERR_ARGUMENT, "unknown source kind " + f);
        if (!known_kind(t)) return fail(OMQK_ERR_ARGUMENT, "unknown target kind " + t);
        if (!kind_matches(in->value, f))
            return fail(OMQK_ERR_PARSE, "input is " + kind_of(in->value) + ", not " + f);
        if (f == t) {
            *out = new omqk_artifact(*in);
            return OMQK_OK;
        }
        auto path = find_path(f, t);
        if (path.empty()) return fail(OMQK_ERR_UNSUPPORTED, "no translation from " + f + " to " + t);
        Limits l = to_limits(limits);
        Value v = in->value;
        for (const Edge* e : path) v = e->run(v, l);
        omqk_format fmt = format_of(v);
        *out = new omqk_artifact{fmt, std::move(v)};
        return OMQK_OK;
    });
}

omqk_status omqk_to_templates(const omqk_artifact* omq, const omqk_limits* limits, omqk_artifact** out) {
    return guarded([&] {
        if (!omq || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        *out = wrap(OMQK_FORMAT_TEMPLATES, as_family(omq->value, to_limits(limits)));
        return OMQK_OK;
    });
}

omqk_status omqk_from_templates(const omqk_artifact* family, omqk_artifact** out) {
    return guarded([&] {
        if (!family || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        auto t = std::get_if<TemplateFamily>(&family->value);
        if (!t) return fail(OMQK_ERR_ARGUMENT, "artifact is not a template family");
        *out = wrap(OMQK_FORMAT_OMQ, templates_to_omq(*t));
        return OMQK_OK;
    });
}

omqk_status omqk_eval(const omqk_artifact* query, const omqk_artifact* data, omqk_engine engine,
                      const omqk_limits* limits, omqk_answers** out) {
    return guarded([&] {
        if (!query || !data || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        *out = nullptr;
        auto d = std::get_if<Instance>(&data->value);
        if (!d) return fail(OMQK_ERR_ARGUMENT, "data artifact is not a fact list");
        auto res = std::make_unique<omqk_answers>();
        AnswerSet got = run_eval(query->value, *d, engine, to_limits(limits), res->arity);
        res->rows.assign(got.begin(), got.end());
        *out = res.release();
        return OMQK_OK;
    });
}

size_t omqk_answers_count(const omqk_answers* a) { return a ? a->rows.size() : 0; }
size_t omqk_answers_arity(const omqk_answers* a) { return a ? a->arity : 0; }

const char* omqk_answers_get(const omqk_answers* a, size_t row, size_t col) {
    if (!a || row >= a->rows.size() || col >= a->rows[row].size()) return nullptr;
    return a->rows[row][col].c_str();
}

omqk_status omqk_answers_render(const omqk_answers* a, char** out) {
    return guarded([&] {
        if (!a || !out) return fail(OMQK_ERR_ARGUMENT, "null argument");
        *out = dup(render_answers(AnswerSet(a->rows.begin(), a->rows.end())));
        return OMQK_OK;
    });
}

void omqk_answers_free(omqk_answers* a) { delete a; }

omqk_status omqk_contain(const omqk_artifact* q1, const omqk_artifact* q2, const omqk_limits* limits, int* contained,
                         omqk_artifact** witness) {
    return guarded([&] {
        if (!q1 || !q2 || !contained) return fail(OMQK_ERR_ARGUMENT, "null argument");
        if (witness) *witness = nullptr;
        Limits l = to_limits(limits);
        TemplateFamily f1 = as_family(q1->value, l), f2 = as_family(q2->value, l);
        ContainmentResult r = contains(f1, f2);
        *contained = r.contained ? 1 : 0;
        if (!r.contained && witness) {
            TemplateFamily w;
            w.schema = f2.schema;
            w.constant_names = f2.constant_names;
            w.comments.push_back("witness");
            w.templates.push_back(*r.witness);
            *witness = wrap(OMQK_FORMAT_TEMPLATES, std::move(w));
        }
        return OMQK_OK;
    });
}

omqk_status omqk_fo_definable(const omqk_artifact* q, const omqk_limits* limits, int* result) {
    return guarded([&] {
        if (!q || !result) return fail(OMQK_ERR_ARGUMENT, "null argument");
        Limits l = to_limits(limits);
        *result = fo_definable(as_family(q->value, l), l) ? 1 : 0;
        return OMQK_OK;
    });
}

omqk_status omqk_datalog_definable(const omqk_artifact* q, int* result) {
    (void)q;
    if (result) *result = 0;
    return fail(OMQK_ERR_UNSUPPORTED, "datalog-definability is not implemented");
}

omqk_status omqk_forb_member(const omqk_artifact* patterns, const omqk_artifact* data, const omqk_limits* limits,
                             int* member) {
    return guarded([&] {
        if (!patterns || !data || !member) return fail(OMQK_ERR_ARGUMENT, "null argument");
        auto p = std::get_if<PatternSet>(&patterns->value);
        auto d = std::get_if<Instance>(&data->value);
        if (!p || !d) return fail(OMQK_ERR_ARGUMENT, "expected a pattern set and a fact list");
        *member = forb_membership(*p, *d, to_limits(limits)) ? 1 : 0;
        return OMQK_OK;
    });
}

}  // extern "C"
