#include "omqkit/core.hpp"

#include <algorithm>
#include <sstream>

#include "text.hpp"

namespace omqkit {

ParseError::ParseError(int line, int col, const std::string& msg)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
      line_(line),
      col_(col) {}

Schema::Schema(std::initializer_list<Relation> rels) {
    for (const auto& r : rels) add(r.name, r.arity);
}

void Schema::add(const std::string& name, std::size_t arity) {
    if (auto a = this->arity(name)) {
        if (*a != arity)
            throw ValidationError("relation " + name + " used with arity " + std::to_string(arity) +
                                  " and " + std::to_string(*a));
        return;
    }
    rels_.push_back({name, arity});
}

void Schema::merge(const Schema& other) {
    for (const auto& r : other.rels_) add(r.name, r.arity);
}

std::optional<std::size_t> Schema::arity(const std::string& name) const {
    for (const auto& r : rels_)
        if (r.name == name) return r.arity;
    return std::nullopt;
}

std::size_t Schema::max_arity() const {
    std::size_t m = 0;
    for (const auto& r : rels_) m = std::max(m, r.arity);
    return m;
}

std::string Schema::render() const {
    std::string s = "schema";
    for (const auto& r : rels_) s += " " + r.name + "/" + std::to_string(r.arity);
    return s;
}

bool Schema::operator==(const Schema& o) const {
    if (rels_.size() != o.rels_.size()) return false;
    for (const auto& r : rels_)
        if (o.arity(r.name) != r.arity) return false;
    return true;
}

std::string render_fact(const Fact& f) {
    std::string s = f.relation + "(";
    for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? "," : "") + f.args[i];
    return s + ")";
}

void Instance::add(const Fact& f) {
    if (auto a = schema_.arity(f.relation)) {
        if (*a != f.args.size())
            throw ValidationError("fact " + render_fact(f) + " does not match arity " +
                                  std::to_string(*a) + " of " + f.relation);
    } else {
        schema_.add(f.relation, f.args.size());
    }
    facts_.insert(f);
}

std::set<std::string> Instance::active_domain() const {
    std::set<std::string> out;
    for (const auto& f : facts_) out.insert(f.args.begin(), f.args.end());
    return out;
}

RelStructure RelStructure::from_instance(const Instance& d) {
    RelStructure b;
    b.domain = d.active_domain();
    b.facts = d;
    b.validate();
    return b;
}

void RelStructure::validate() const {
    if (domain.empty()) throw ValidationError("structure domain must be non-empty");
    for (const auto& e : facts.active_domain())
        if (!domain.count(e)) throw ValidationError("element " + e + " occurs in a fact but not in the domain");
}

Atom make_atom(std::string pred, std::vector<std::string> args) {
    return Atom{std::move(pred), std::move(args), {}};
}

Atom make_equality(std::string a, std::string b) {
    return Atom{"=", {std::move(a), std::move(b)}, {}};
}

std::string render_atom(const Atom& a) {
    if (a.is_equality()) return a.args[0] + " = " + a.args[1];
    std::string inner;
    for (std::size_t i = 0; i < a.args.size(); ++i) inner += (i ? "," : "") + a.args[i];
    if (a.is_fact_atom()) return a.predicate + "(" + a.fact_relation + "(" + inner + "))";
    return a.predicate + "(" + inner + ")";
}

std::vector<std::string> Cq::exist_vars() const {
    std::vector<std::string> out;
    for (const auto& a : atoms)
        for (const auto& v : a.args)
            if (std::find(answer_vars.begin(), answer_vars.end(), v) == answer_vars.end() &&
                std::find(out.begin(), out.end(), v) == out.end())
                out.push_back(v);
    return out;
}

void Ucq::validate() const {
    for (const auto& cq : disjuncts) {
        if (cq.answer_vars.size() != arity())
            throw ValidationError("all disjuncts of a UCQ must have the same number of answer variables");
        for (const auto& v : cq.answer_vars) {
            bool seen = false;
            for (const auto& a : cq.atoms)
                if (std::find(a.args.begin(), a.args.end(), v) != a.args.end()) seen = true;
            if (!seen) throw ValidationError("answer variable " + v + " does not occur in its disjunct");
        }
    }
}

Instance parse_instance(const std::string& src) {
    text::TokenStream ts(text::tokenize(src));
    Instance d;
    if (ts.is_word("schema") && !(ts.peek(1).kind == text::Token::Punct && ts.peek(1).text == "(")) {
        int line = ts.next().line;
        text::parse_signature_list(ts, d.schema(), line);
    }
    while (!ts.at_end()) {
        const auto& t = ts.peek();
        int line = t.line;
        int col = t.col;
        Atom a = text::parse_atom(ts);
        ts.expect(".");
        try {
            d.add(a.predicate, a.args);
        } catch (const ValidationError& e) {
            throw ParseError(line, col, e.what());
        }
    }
    return d;
}

std::string render_instance(const Instance& d, bool with_schema) {
    std::string out;
    if (with_schema && !d.schema().empty()) out += d.schema().render() + "\n";
    for (const auto& f : d.facts()) out += render_fact(f) + ".\n";
    return out;
}

Ucq parse_ucq(const std::string& src) {
    text::TokenStream ts(text::tokenize(src));
    Ucq q;
    do {
        Cq cq;
        ts.expect("(");
        if (!ts.is(")")) {
            do {
                cq.answer_vars.push_back(ts.expect_ident("answer variable"));
            } while (ts.accept(","));
        }
        ts.expect(")");
        ts.expect(":-");
        do {
            if (ts.peek(1).kind == text::Token::Punct && ts.peek(1).text == "=") {
                std::string a = ts.expect_ident();
                ts.expect("=");
                std::string b = ts.expect_ident();
                cq.atoms.push_back(make_equality(a, b));
            } else {
                cq.atoms.push_back(text::parse_atom(ts));
            }
        } while (ts.accept(","));
        q.disjuncts.push_back(std::move(cq));
    } while (ts.accept("|"));
    if (!ts.at_end()) ts.fail("expected '|' or end of query");
    try {
        q.validate();
    } catch (const ValidationError& e) {
        throw ParseError(1, 1, e.what());
    }
    return q;
}

std::string render_ucq(const Ucq& q) {
    std::string out;
    for (std::size_t i = 0; i < q.disjuncts.size(); ++i) {
        const Cq& cq = q.disjuncts[i];
        if (i) out += " | ";
        out += "(";
        for (std::size_t k = 0; k < cq.answer_vars.size(); ++k) out += (k ? "," : "") + cq.answer_vars[k];
        out += ") :- ";
        for (std::size_t k = 0; k < cq.atoms.size(); ++k) out += (k ? ", " : "") + render_atom(cq.atoms[k]);
    }
    return out;
}

IndexedInstance::IndexedInstance(const Instance& d) {
    for (const auto& e : d.active_domain()) {
        index_[e] = static_cast<int>(elements_.size());
        elements_.push_back(e);
    }
    for (const auto& r : d.schema().relations()) rels_[r.name].arity = r.arity;
    for (const auto& f : d.facts()) {
        Rel& r = rels_[f.relation];
        r.arity = f.args.size();
        std::vector<int> t;
        for (const auto& a : f.args) t.push_back(index_.at(a));
        if (r.members.insert(t).second) r.tuples.push_back(t);
    }
}

int IndexedInstance::index(const std::string& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? -1 : it->second;
}

const IndexedInstance::Rel* IndexedInstance::rel(const std::string& name) const {
    auto it = rels_.find(name);
    return it == rels_.end() ? nullptr : &it->second;
}

namespace {

struct MatchState {
    const IndexedInstance& inst;
    struct CAtom {
        const IndexedInstance::Rel* rel;
        std::vector<int> vars;
        bool eq;
    };
    std::vector<CAtom> atoms;
    std::vector<int> assign;
    std::vector<char> done;
    const std::function<bool(const std::vector<int>&)>& emit;

    bool equalities_ok() const {
        for (const auto& a : atoms)
            if (a.eq && assign[a.vars[0]] >= 0 && assign[a.vars[1]] >= 0 &&
                assign[a.vars[0]] != assign[a.vars[1]])
                return false;
        return true;
    }

    bool finish(std::size_t var) {
        // Remaining unbound variables: propagate equalities, then range over adom.
        while (var < assign.size() && assign[var] >= 0) ++var;
        if (var == assign.size()) return emit(assign);
        for (const auto& a : atoms) {
            if (!a.eq) continue;
            int x = a.vars[0], y = a.vars[1];
            if (assign[x] < 0 && assign[y] >= 0) std::swap(x, y);
            if (assign[x] >= 0 && assign[y] < 0) {
                assign[y] = assign[x];
                bool go = finish(0);
                assign[y] = -1;
                return go;
            }
        }
        for (int e = 0; e < static_cast<int>(inst.size()); ++e) {
            assign[var] = e;
            bool go = !equalities_ok() || finish(var + 1);
            assign[var] = -1;
            if (!go) return false;
        }
        return true;
    }

    bool step() {
        int best = -1;
        int best_bound = -1;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (done[i] || atoms[i].eq) continue;
            int bound = 0;
            for (int v : atoms[i].vars)
                if (assign[v] >= 0) ++bound;
            if (bound > best_bound) {
                best_bound = bound;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) return finish(0);
        const CAtom& a = atoms[best];
        done[best] = 1;
        bool go = true;
        std::vector<int> newly;
        for (const auto& t : a.rel->tuples) {
            newly.clear();
            bool ok = true;
            for (std::size_t k = 0; k < a.vars.size() && ok; ++k) {
                int v = a.vars[k];
                if (assign[v] < 0) {
                    assign[v] = t[k];
                    newly.push_back(v);
                } else if (assign[v] != t[k]) {
                    ok = false;
                }
            }
            if (ok && equalities_ok()) go = step();
            for (int v : newly) assign[v] = -1;
            if (!go) break;
        }
        done[best] = 0;
        return go;
    }
};

}  // namespace

void for_each_match(const IndexedInstance& inst, const std::vector<Atom>& atoms,
                    const std::vector<std::string>& vars, std::vector<int> preset,
                    const std::function<bool(const std::vector<int>&)>& emit) {
    MatchState st{inst, {}, std::move(preset), {}, emit};
    st.assign.resize(vars.size(), -1);
    auto var_index = [&](const std::string& v) {
        auto it = std::find(vars.begin(), vars.end(), v);
        if (it == vars.end()) throw ValidationError("variable " + v + " not declared for matching");
        return static_cast<int>(it - vars.begin());
    };
    for (const auto& a : atoms) {
        MatchState::CAtom c{nullptr, {}, a.is_equality()};
        for (const auto& v : a.args) c.vars.push_back(var_index(v));
        if (!c.eq) {
            c.rel = inst.rel(a.predicate);
            if (c.rel && c.rel->arity != a.args.size())
                throw ValidationError("atom " + render_atom(a) + " does not match arity " +
                                      std::to_string(c.rel->arity));
            if (!c.rel || c.rel->tuples.empty()) return;
        }
        st.atoms.push_back(std::move(c));
    }
    st.done.assign(st.atoms.size(), 0);
    if (!st.equalities_ok()) return;
    st.step();
}

AnswerSet eval_ucq(const Ucq& q, const Instance& d) {
    q.validate();
    AnswerSet out;
    IndexedInstance inst(d);
    if (inst.size() == 0 && q.arity() > 0) return out;
    for (const auto& cq : q.disjuncts) {
        for (const auto& a : cq.atoms) {
            if (a.is_equality()) continue;
            auto ar = d.schema().arity(a.predicate);
            if (ar && *ar != a.args.size())
                throw ValidationError("query atom " + render_atom(a) + " does not match arity " +
                                      std::to_string(*ar));
        }
        std::vector<std::string> vars = cq.answer_vars;
        for (const auto& v : cq.exist_vars()) vars.push_back(v);
        // repeated answer variables collapse onto their first position
        std::vector<std::string> uniq;
        for (const auto& v : vars)
            if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
        if (inst.size() == 0) continue;
        for_each_match(inst, cq.atoms, uniq, {}, [&](const std::vector<int>& asg) {
            Tuple t;
            for (const auto& v : cq.answer_vars) {
                auto k = std::find(uniq.begin(), uniq.end(), v) - uniq.begin();
                t.push_back(inst.elements()[asg[k]]);
            }
            out.insert(std::move(t));
            return true;
        });
    }
    return out;
}

std::string render_answers(const AnswerSet& answers) {
    std::string out;
    for (const auto& t : answers) {
        if (t.empty()) {
            out += "()\n";
            continue;
        }
        for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + t[i];
        out += "\n";
    }
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (int i = 1;; ++i) {
        std::string c = base + "_" + std::to_string(i);
        if (!taken.count(c)) return c;
    }
}

}  // namespace omqkit
