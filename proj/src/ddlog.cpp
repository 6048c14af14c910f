#include "omqkit/ddlog.hpp"

#include <algorithm>
#include <map>

#include "text.hpp"

namespace omqkit {

namespace {

std::set<std::string> vars_of(const std::vector<Atom>& atoms) {
    std::set<std::string> out;
    for (const auto& a : atoms) out.insert(a.args.begin(), a.args.end());
    return out;
}

std::vector<std::string> ordered_vars(const Rule& r) {
    std::vector<std::string> out;
    auto add = [&](const std::vector<Atom>& atoms) {
        for (const auto& a : atoms)
            for (const auto& v : a.args)
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    add(r.body);
    add(r.head);
    return out;
}

void check_rule(const Rule& r) {
    if (r.body.empty()) throw ValidationError("rule body must not be empty");
    auto bv = vars_of(r.body);
    for (const auto& h : r.head) {
        if (h.is_equality()) throw ValidationError("equality is not allowed in rule heads");
        for (const auto& v : h.args)
            if (!bv.count(v)) throw ValidationError("head variable " + v + " does not occur in the body");
        if (h.predicate == kGoal && r.head.size() != 1)
            throw ValidationError("goal must be the only head atom of its rule");
    }
    for (const auto& b : r.body) {
        if (b.is_equality()) throw ValidationError("equality atoms are not supported in datalog bodies");
        if (b.predicate == kGoal) throw ValidationError("goal must not occur in a rule body");
    }
}

}  // namespace

Program make_program(std::vector<Rule> rules, Schema edb, Schema idb) {
    Program p;
    p.rules = std::move(rules);
    for (const auto& r : p.rules) {
        check_rule(r);
        for (const auto& h : r.head) {
            if (edb.contains(h.predicate)) throw ValidationError(h.predicate + " is declared EDB but occurs in a head");
            idb.add(h.predicate, h.args.size());
        }
    }
    bool uses_adom = false;
    for (const auto& r : p.rules)
        for (const auto& a : r.body)
            if (a.predicate == kAdom) uses_adom = true;
    if (uses_adom || idb.contains(kAdom)) {
        if (edb.contains(kAdom)) throw ValidationError("adom is reserved");
        idb.add(kAdom, 1);
    }
    if (!idb.contains(kGoal)) idb.add(kGoal, 0);
    for (const auto& r : p.rules)
        for (const auto& a : r.body) {
            if (idb.contains(a.predicate)) {
                idb.add(a.predicate, a.args.size());
            } else {
                edb.add(a.predicate, a.args.size());
            }
        }
    p.goal_arity = *idb.arity(kGoal);
    if (idb.contains(kAdom)) {
        if (*idb.arity(kAdom) != 1) throw ValidationError("adom is unary");
        for (const auto& rel : edb.relations()) {
            std::vector<std::string> xs;
            for (std::size_t i = 0; i < rel.arity; ++i) xs.push_back("X" + std::to_string(i + 1));
            for (std::size_t i = 0; i < rel.arity; ++i) {
                Rule r{{make_atom(kAdom, {xs[i]})}, {make_atom(rel.name, xs)}};
                if (std::find(p.rules.begin(), p.rules.end(), r) == p.rules.end()) p.rules.push_back(r);
            }
        }
    }
    p.edb = std::move(edb);
    p.idb = std::move(idb);
    return p;
}

namespace {

Atom parse_pred_atom(text::TokenStream& ts) {
    if (ts.peek(1).kind == text::Token::Punct && ts.peek(1).text == "(") return text::parse_atom(ts);
    return make_atom(ts.expect_ident("predicate name"), {});
}

bool is_declaration(text::TokenStream& ts, const char* word) {
    return ts.is_word(word) && !(ts.peek(1).kind == text::Token::Punct && ts.peek(1).text == "(");
}

}  // namespace

Program parse_program(const std::string& src) {
    text::TokenStream ts(text::tokenize(src));
    Schema edb, idb;
    std::vector<Rule> rules;
    while (!ts.at_end()) {
        int line = ts.peek().line;
        int col = ts.peek().col;
        if (is_declaration(ts, "edb") || is_declaration(ts, "idb")) {
            bool is_edb = ts.next().text == "edb";
            text::parse_signature_list(ts, is_edb ? edb : idb);
            ts.expect(".");
            continue;
        }
        Rule r;
        if (!ts.accept_word("bot")) {
            do {
                r.head.push_back(parse_pred_atom(ts));
            } while (ts.accept(";"));
        }
        ts.expect(":-");
        do {
            r.body.push_back(parse_pred_atom(ts));
        } while (ts.accept(","));
        ts.expect(".");
        try {
            check_rule(r);
        } catch (const ValidationError& e) {
            throw ParseError(line, col, e.what());
        }
        rules.push_back(std::move(r));
    }
    try {
        return make_program(std::move(rules), std::move(edb), std::move(idb));
    } catch (const ValidationError& e) {
        throw ParseError(1, 1, e.what());
    }
}

namespace {

std::string render_pred(const Atom& a) { return a.args.empty() ? a.predicate : render_atom(a); }

}  // namespace

std::string render_rule(const Rule& r) {
    std::string s;
    if (r.head.empty()) s = "bot";
    for (std::size_t i = 0; i < r.head.size(); ++i) s += (i ? " ; " : "") + render_pred(r.head[i]);
    s += " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) s += (i ? ", " : "") + render_pred(r.body[i]);
    return s + ".";
}

std::string render_program(const Program& p) {
    std::string out;
    for (const auto& c : p.comments) out += "# " + c + "\n";
    auto decl = [&](const char* kw, const Schema& s) {
        if (s.empty()) return;
        out += kw;
        for (const auto& r : s.relations()) out += " " + r.name + "/" + std::to_string(r.arity);
        out += ".\n";
    };
    decl("edb", p.edb);
    decl("idb", p.idb);
    for (const auto& r : p.rules) out += render_rule(r) + "\n";
    return out;
}

Classification classify(const Program& p) {
    Classification c{true, true, true, true, true};
    for (const auto& rel : p.idb.relations())
        if (rel.name != kGoal && rel.arity != 1) c.monadic = false;
    for (const auto& r : p.rules) {
        int edb_atoms = 0;
        for (const auto& a : r.body) {
            if (!p.edb.contains(a.predicate)) continue;
            ++edb_atoms;
            std::set<std::string> distinct(a.args.begin(), a.args.end());
            if (distinct.size() != a.args.size()) c.simple = false;
        }
        if (edb_atoms > 1) c.simple = false;

        // union-find over body variables
        std::vector<std::string> vs = ordered_vars(r);
        std::map<std::string, std::string> parent;
        for (const auto& v : vs) parent[v] = v;
        std::function<std::string(const std::string&)> root = [&](const std::string& v) {
            return parent[v] == v ? v : parent[v] = root(parent[v]);
        };
        for (const auto& a : r.body)
            for (std::size_t i = 1; i < a.args.size(); ++i) parent[root(a.args[i])] = root(a.args[0]);
        std::set<std::string> roots;
        for (const auto& v : vs) roots.insert(root(v));
        if (roots.size() > 1) c.connected = false;

        auto covered = [&](const std::set<std::string>& need) {
            for (const auto& b : r.body) {
                std::set<std::string> have(b.args.begin(), b.args.end());
                if (std::includes(have.begin(), have.end(), need.begin(), need.end())) return true;
            }
            return false;
        };
        if (!p.is_goal_rule(r))
            for (const auto& h : r.head)
                if (!covered(std::set<std::string>(h.args.begin(), h.args.end()))) c.frontier_guarded = false;
        if (!covered(vars_of(r.body))) c.guarded = false;
    }
    return c;
}

namespace {

// DPLL with two watched literals, chronological backtracking and no learning.
// Literals are 2*v (true) and 2*v+1 (false).
class Dpll {
public:
    explicit Dpll(std::size_t nvars) : value_(nvars, -1), watches_(2 * nvars) {}

    void add_clause(std::vector<int> lits) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 0; i + 1 < lits.size(); ++i)
            if ((lits[i] ^ 1) == lits[i + 1]) return;  // tautology
        if (lits.empty()) {
            empty_clause_ = true;
            return;
        }
        if (lits.size() == 1) {
            units_.push_back(lits[0]);
            return;
        }
        int id = static_cast<int>(clauses_.size());
        clauses_.push_back(std::move(lits));
        watches_[clauses_[id][0]].push_back(id);
        watches_[clauses_[id][1]].push_back(id);
    }

    // Returns true and fills the model when satisfiable under the assumption literals.
    bool solve(const std::vector<int>& assumptions, std::uint64_t& budget, std::vector<char>& model) {
        std::fill(value_.begin(), value_.end(), -1);
        trail_.clear();
        if (empty_clause_) return false;
        for (int u : units_)
            if (!enqueue(u)) return false;
        for (int a : assumptions)
            if (!enqueue(a)) return false;
        if (!propagate(0)) return false;
        if (!search(budget)) return false;
        model.assign(value_.size(), 0);
        for (std::size_t v = 0; v < value_.size(); ++v) model[v] = value_[v] == 1;
        return true;
    }

private:
    int lit_value(int lit) const {
        int v = value_[lit >> 1];
        if (v < 0) return -1;
        return (lit & 1) ? 1 - v : v;
    }

    bool enqueue(int lit) {
        int lv = lit_value(lit);
        if (lv == 1) return true;
        if (lv == 0) return false;
        value_[lit >> 1] = (lit & 1) ? 0 : 1;
        trail_.push_back(lit);
        return true;
    }

    bool propagate(std::size_t from) {
        for (std::size_t qi = from; qi < trail_.size(); ++qi) {
            int falsified = trail_[qi] ^ 1;
            auto& ws = watches_[falsified];
            for (std::size_t k = 0; k < ws.size();) {
                int cid = ws[k];
                auto& c = clauses_[cid];
                if (c[0] == falsified) std::swap(c[0], c[1]);
                if (lit_value(c[0]) == 1) {
                    ++k;
                    continue;
                }
                bool moved = false;
                for (std::size_t j = 2; j < c.size(); ++j) {
                    if (lit_value(c[j]) != 0) {
                        std::swap(c[1], c[j]);
                        watches_[c[1]].push_back(cid);
                        ws[k] = ws.back();
                        ws.pop_back();
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                if (!enqueue(c[0])) return false;
                ++k;
            }
        }
        return true;
    }

    void undo(std::size_t to) {
        while (trail_.size() > to) {
            value_[trail_.back() >> 1] = -1;
            trail_.pop_back();
        }
    }

    // Branch on a positive literal of the first clause that is unsatisfied and
    // still has one open. Clauses before `from` stay skippable deeper down, so
    // the scan resumes there; when none is left every open variable can be set
    // false.
    std::pair<int, std::size_t> pick(std::size_t from) const {
        for (std::size_t i = from; i < clauses_.size(); ++i) {
            int first = -1;
            bool sat = false;
            for (int l : clauses_[i]) {
                int lv = lit_value(l);
                if (lv == 1) {
                    sat = true;
                    break;
                }
                if (lv < 0 && !(l & 1) && first < 0) first = l;
            }
            if (!sat && first >= 0) return {first, i};
        }
        return {-1, clauses_.size()};
    }

    bool search(std::uint64_t& budget, std::size_t from = 0) {
        auto [lit, at] = pick(from);
        if (lit < 0) {
            for (std::size_t v = 0; v < value_.size(); ++v)
                if (value_[v] < 0) value_[v] = 0;
            return true;
        }
        if (budget == 0) throw LimitError("model search exceeds the configured bound (--max-models)");
        --budget;
        for (int l : {lit, lit ^ 1}) {
            std::size_t mark = trail_.size();
            if (enqueue(l) && propagate(mark) && search(budget, at)) return true;
            undo(mark);
        }
        return false;
    }

    std::vector<signed char> value_;
    std::vector<std::vector<int>> watches_;
    std::vector<std::vector<int>> clauses_;
    std::vector<int> units_;
    std::vector<int> trail_;
    bool empty_clause_ = false;
};

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

AnswerSet eval_bruteforce(const Program& p, const Instance& d, const Limits& limits) {
    for (const auto& rel : d.schema().relations()) {
        if (p.idb.contains(rel.name)) throw ValidationError("instance uses IDB relation " + rel.name);
        auto a = p.edb.arity(rel.name);
        if (!a) throw ValidationError("instance relation " + rel.name + " is not part of the program's EDB schema");
        if (*a != rel.arity) throw ValidationError("instance relation " + rel.name + " has the wrong arity");
    }
    AnswerSet out;
    IndexedInstance inst(d);
    const std::size_t n = inst.size();
    if (n == 0) return out;

    std::map<std::string, std::size_t> base;
    std::size_t nvars = 0;
    for (const auto& rel : p.idb.relations()) {
        base[rel.name] = nvars;
        std::size_t cnt = ipow(n, rel.arity);
        if (cnt > (std::size_t(1) << 26) || nvars + cnt > (std::size_t(1) << 26))
            throw LimitError("too many ground IDB atoms");
        nvars += cnt;
    }
    auto ground = [&](const Atom& a, const std::vector<std::string>& vars, const std::vector<int>& asg) {
        std::size_t idx = 0;
        for (const auto& v : a.args) {
            auto k = std::find(vars.begin(), vars.end(), v) - vars.begin();
            idx = idx * n + static_cast<std::size_t>(asg[k]);
        }
        return static_cast<int>(base.at(a.predicate) + idx);
    };

    Dpll solver(nvars);
    std::size_t clause_count = 0;
    for (const auto& r : p.rules) {
        std::vector<std::string> vars = ordered_vars(r);
        std::vector<Atom> edb_atoms, idb_atoms;
        for (const auto& a : r.body) (p.idb.contains(a.predicate) ? idb_atoms : edb_atoms).push_back(a);
        for_each_match(inst, edb_atoms, vars, {}, [&](const std::vector<int>& asg) {
            std::vector<int> lits;
            for (const auto& a : idb_atoms) lits.push_back(2 * ground(a, vars, asg) + 1);
            for (const auto& h : r.head) lits.push_back(2 * ground(h, vars, asg));
            solver.add_clause(std::move(lits));
            if (++clause_count > (std::size_t(1) << 25)) throw LimitError("grounding exceeds the clause bound");
            return true;
        });
    }

    const std::size_t k = p.goal_arity;
    const std::size_t goal_base = base.at(kGoal);
    const std::size_t tuples = ipow(n, k);
    auto decode = [&](std::size_t idx) {
        Tuple t(k);
        for (std::size_t i = k; i-- > 0;) {
            t[i] = inst.elements()[idx % n];
            idx /= n;
        }
        return t;
    };

    std::uint64_t budget = limits.max_models;
    std::vector<char> model;
    if (!solver.solve({}, budget, model)) {
        for (std::size_t i = 0; i < tuples; ++i) out.insert(decode(i));
        return out;
    }
    std::vector<char> candidate(tuples, 0);
    for (std::size_t i = 0; i < tuples; ++i) candidate[i] = model[goal_base + i];
    for (std::size_t i = 0; i < tuples; ++i) {
        if (!candidate[i]) continue;
        int lit = 2 * static_cast<int>(goal_base + i) + 1;
        if (solver.solve({lit}, budget, model)) {
            for (std::size_t j = 0; j < tuples; ++j)
                if (!model[goal_base + j]) candidate[j] = 0;
        } else {
            out.insert(decode(i));
        }
    }
    return out;
}

}  // namespace omqkit
