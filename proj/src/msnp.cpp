#include "omqkit/msnp.hpp"

#include <algorithm>
#include <functional>

#include "omqkit/csp.hpp"
#include "text.hpp"

namespace omqkit {

const SoVar* MsnpFormula::so_var(const std::string& name) const {
    for (const auto& v : so_vars)
        if (v.name == name) return &v;
    return nullptr;
}

namespace {

const char* dialect_word(MsnpDialect d) {
    switch (d) {
        case MsnpDialect::MMSNP: return "mmsnp";
        case MsnpDialect::GMSNP: return "gmsnp";
        case MsnpDialect::MMSNP2: return "mmsnp2";
    }
    return "";
}

Atom parse_msnp_atom(text::TokenStream& ts) {
    if (ts.peek(1).kind == text::Token::Punct && ts.peek(1).text == "=") {
        std::string a = ts.expect_ident();
        ts.expect("=");
        return make_equality(a, ts.expect_ident());
    }
    Atom a;
    a.predicate = ts.expect_ident("predicate name");
    ts.expect("(");
    if (ts.peek().kind == text::Token::Ident && ts.peek(1).kind == text::Token::Punct && ts.peek(1).text == "(") {
        Atom inner = text::parse_atom(ts);
        a.fact_relation = inner.predicate;
        a.args = inner.args;
        ts.expect(")");
        return a;
    }
    if (!ts.is(")")) {
        do {
            a.args.push_back(ts.expect_ident("variable"));
        } while (ts.accept(","));
    }
    ts.expect(")");
    return a;
}

std::set<std::string> atom_vars(const std::vector<Atom>& atoms, bool with_equalities) {
    std::set<std::string> out;
    for (const auto& a : atoms)
        if (with_equalities || !a.is_equality()) out.insert(a.args.begin(), a.args.end());
    return out;
}

bool covered_by_body(const Atom& h, const std::vector<Atom>& body) {
    std::set<std::string> need(h.args.begin(), h.args.end());
    for (const auto& b : body) {
        if (b.is_equality()) continue;
        std::set<std::string> have(b.args.begin(), b.args.end());
        if (std::includes(have.begin(), have.end(), need.begin(), need.end())) return true;
    }
    return false;
}

}  // namespace

void validate_msnp(MsnpFormula& f) {
    std::set<std::string> seen;
    for (const auto& v : f.so_vars) {
        if (!seen.insert(v.name).second) throw ValidationError("duplicate second-order variable " + v.name);
        if (f.schema.contains(v.name)) throw ValidationError(v.name + " is both an input relation and a second-order variable");
        if (f.dialect == MsnpDialect::MMSNP && v.kind != SoKind::Monadic)
            throw ValidationError("MMSNP allows only monadic second-order variables");
        if (f.dialect == MsnpDialect::GMSNP && v.kind == SoKind::FactSet)
            throw ValidationError("fact-set variables require the mmsnp2 dialect");
        if (f.dialect == MsnpDialect::MMSNP2 && v.kind == SoKind::Relation)
            throw ValidationError("MMSNP2 allows monadic and fact-set variables only");
    }
    auto check_atom = [&](const Atom& a, bool in_head) {
        if (a.is_equality()) {
            if (in_head) throw ValidationError("equality may only occur in implication bodies");
            return;
        }
        const SoVar* so = f.so_var(a.predicate);
        if (!so) {
            if (in_head) throw ValidationError("head atom " + render_atom(a) + " uses an input relation");
            if (a.is_fact_atom()) throw ValidationError(a.predicate + " is not a second-order variable");
            f.schema.add(a.predicate, a.args.size());
            return;
        }
        if (a.is_fact_atom()) {
            if (so->kind != SoKind::FactSet) throw ValidationError(so->name + " does not range over facts");
            if (f.so_var(a.fact_relation)) throw ValidationError("fact atoms must wrap an input relation");
            f.schema.add(a.fact_relation, a.args.size());
            return;
        }
        std::size_t want = so->kind == SoKind::Relation ? so->arity : 1;
        if (a.args.size() != want)
            throw ValidationError("atom " + render_atom(a) + " does not match the arity of " + so->name);
    };
    for (const auto& imp : f.matrix) {
        for (const auto& a : imp.body) check_atom(a, false);
        for (const auto& a : imp.head) check_atom(a, true);
        if (f.dialect == MsnpDialect::GMSNP)
            for (const auto& h : imp.head)
                if (!covered_by_body(h, imp.body))
                    throw ValidationError("head atom " + render_atom(h) + " is not guarded by a body atom");
        if (f.dialect == MsnpDialect::MMSNP2)
            for (const auto& h : imp.head)
                if (h.is_fact_atom() &&
                    std::find(imp.body.begin(), imp.body.end(), make_atom(h.fact_relation, h.args)) == imp.body.end())
                    throw ValidationError("fact atom " + render_atom(h) + " needs its fact in the body");
    }
}

MsnpFormula parse_msnp(const std::string& src) {
    MsnpFormula f;
    auto lines = text::split_lines(src);
    if (lines.empty()) throw ParseError(1, 1, "expected msnp header");
    bool header = false;
    for (const auto& line : lines) {
        text::TokenStream ts(text::tokenize(line.text, line.number));
        if (!header) {
            ts.expect_word("msnp");
            std::string d = ts.expect_ident("dialect");
            if (d == "mmsnp")
                f.dialect = MsnpDialect::MMSNP;
            else if (d == "gmsnp")
                f.dialect = MsnpDialect::GMSNP;
            else if (d == "mmsnp2")
                f.dialect = MsnpDialect::MMSNP2;
            else
                throw ParseError(line.number, 1, "unknown dialect " + d);
            header = true;
        } else if (ts.accept_word("schema")) {
            text::parse_signature_list(ts, f.schema);
        } else if (ts.accept_word("sovar")) {
            SoVar v;
            v.name = ts.expect_ident("variable name");
            if (ts.accept_word("monadic")) {
                v.kind = SoKind::Monadic;
            } else if (ts.accept_word("factset")) {
                v.kind = SoKind::FactSet;
            } else if (ts.accept_word("rel")) {
                ts.expect("/");
                v.kind = SoKind::Relation;
                v.arity = ts.expect_number();
            } else {
                ts.fail("expected monadic, rel/k or factset");
            }
            f.so_vars.push_back(v);
        } else if (ts.accept_word("freevar")) {
            while (ts.peek().kind == text::Token::Ident) f.free_vars.push_back(ts.next().text);
        } else if (ts.accept_word("imp")) {
            Implication imp;
            if (!ts.is("->")) {
                do {
                    imp.body.push_back(parse_msnp_atom(ts));
                } while (ts.accept(","));
            }
            ts.expect("->");
            if (!ts.accept_word("false")) {
                do {
                    imp.head.push_back(parse_msnp_atom(ts));
                } while (ts.accept(";"));
            }
            f.matrix.push_back(std::move(imp));
        } else {
            ts.fail("expected schema, sovar, freevar or imp");
        }
        if (!ts.at_end()) ts.fail("unexpected trailing input");
    }
    try {
        validate_msnp(f);
    } catch (const ValidationError& e) {
        throw ParseError(lines.front().number, 1, e.what());
    }
    return f;
}

std::string render_implication(const Implication& imp) {
    std::string s = "imp ";
    for (std::size_t i = 0; i < imp.body.size(); ++i) s += (i ? ", " : "") + render_atom(imp.body[i]);
    s += imp.body.empty() ? "-> " : " -> ";
    if (imp.head.empty()) s += "false";
    for (std::size_t i = 0; i < imp.head.size(); ++i) s += (i ? " ; " : "") + render_atom(imp.head[i]);
    return s;
}

std::string render_msnp(const MsnpFormula& f) {
    std::string out;
    for (const auto& c : f.comments) out += "# " + c + "\n";
    out += std::string("msnp ") + dialect_word(f.dialect) + "\n";
    if (!f.schema.empty()) out += f.schema.render() + "\n";
    for (const auto& v : f.so_vars) {
        out += "sovar " + v.name + " ";
        switch (v.kind) {
            case SoKind::Monadic: out += "monadic"; break;
            case SoKind::Relation: out += "rel/" + std::to_string(v.arity); break;
            case SoKind::FactSet: out += "factset"; break;
        }
        out += "\n";
    }
    if (!f.free_vars.empty()) {
        out += "freevar";
        for (const auto& v : f.free_vars) out += " " + v;
        out += "\n";
    }
    for (const auto& imp : f.matrix) out += render_implication(imp) + "\n";
    return out;
}

bool check_guarded(const MsnpFormula& f) {
    for (const auto& imp : f.matrix)
        for (const auto& h : imp.head)
            if (!covered_by_body(h, imp.body)) return false;
    return true;
}

namespace {

// Unifies body equalities; a class keeps a free variable as its representative
// and equalities between two free variables are retained.
Implication unify(const Implication& imp, const std::vector<std::string>& free_vars) {
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> root = [&](const std::string& v) -> std::string {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v) return v;
        return it->second = root(it->second);
    };
    auto is_free = [&](const std::string& v) {
        return std::find(free_vars.begin(), free_vars.end(), v) != free_vars.end();
    };
    std::vector<std::pair<std::string, std::string>> kept;
    for (const auto& a : imp.body) {
        if (!a.is_equality()) continue;
        std::string x = root(a.args[0]), y = root(a.args[1]);
        if (x == y) continue;
        if (is_free(x) && is_free(y)) {
            kept.push_back({x, y});
            continue;
        }
        if (is_free(y)) std::swap(x, y);
        parent[y] = x;
    }
    auto rename = [&](Atom a) {
        for (auto& v : a.args) v = root(v);
        return a;
    };
    Implication out;
    for (const auto& a : imp.body) {
        if (a.is_equality()) continue;
        Atom r = rename(a);
        if (std::find(out.body.begin(), out.body.end(), r) == out.body.end()) out.body.push_back(r);
    }
    for (const auto& [x, y] : kept) {
        Atom e = make_equality(root(x), root(y));
        if (e.args[0] != e.args[1] && std::find(out.body.begin(), out.body.end(), e) == out.body.end())
            out.body.push_back(e);
    }
    for (const auto& a : imp.head) {
        Atom r = rename(a);
        if (std::find(out.head.begin(), out.head.end(), r) == out.head.end()) out.head.push_back(r);
    }
    return out;
}

}  // namespace

MsnpFormula normalize_msnp(const MsnpFormula& f) {
    MsnpFormula out = f;
    out.matrix.clear();
    std::set<std::string> names;
    for (const auto& imp : f.matrix) {
        auto vs = atom_vars(imp.body, true);
        names.insert(vs.begin(), vs.end());
        vs = atom_vars(imp.head, true);
        names.insert(vs.begin(), vs.end());
    }
    names.insert(f.free_vars.begin(), f.free_vars.end());
    int counter = 0;
    auto fresh = [&]() {
        std::string v;
        do {
            v = "v" + std::to_string(++counter);
        } while (names.count(v));
        names.insert(v);
        return v;
    };
    auto push = [&](const Implication& imp) {
        if (std::find(out.matrix.begin(), out.matrix.end(), imp) == out.matrix.end()) out.matrix.push_back(imp);
    };

    for (const auto& raw : f.matrix) {
        Implication imp = unify(raw, f.free_vars);
        std::set<std::string> bound = atom_vars(imp.body, false);
        std::vector<std::string> loose;
        for (const auto& h : imp.head)
            for (const auto& v : h.args)
                if (!bound.count(v) && std::find(loose.begin(), loose.end(), v) == loose.end()) loose.push_back(v);

        std::vector<Implication> family{imp};
        for (const auto& u : loose) {
            std::vector<Implication> next;
            for (const auto& base : family)
                for (const auto& rel : f.schema.relations())
                    for (std::size_t pos = 0; pos < rel.arity; ++pos) {
                        Implication g = base;
                        std::vector<std::string> args;
                        for (std::size_t k = 0; k < rel.arity; ++k) args.push_back(k == pos ? u : fresh());
                        g.body.push_back(make_atom(rel.name, args));
                        next.push_back(std::move(g));
                    }
            family = std::move(next);
        }
        for (auto& g : family) {
            bool has_atom = std::any_of(g.body.begin(), g.body.end(), [](const Atom& a) { return !a.is_equality(); });
            if (has_atom) {
                push(g);
                continue;
            }
            for (const auto& rel : f.schema.relations()) {
                Implication h = g;
                std::vector<std::string> args;
                for (std::size_t k = 0; k < rel.arity; ++k) args.push_back(fresh());
                h.body.insert(h.body.begin(), make_atom(rel.name, args));
                push(h);
            }
        }
    }
    return out;
}

namespace {

// Counter-based backtracking over ground second-order atoms in index order.
// Each clause records how many of its literals are still open or true.
class SoSearch {
public:
    explicit SoSearch(std::size_t nvars) : value_(nvars, -1), occurs_(nvars) {}

    // Literals: +v+1 asserts atom v, -(v+1) denies it.
    void add(std::vector<int> lits) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (int l : lits)
            if (std::binary_search(lits.begin(), lits.end(), -l)) return;
        if (lits.empty()) {
            contradiction_ = true;
            return;
        }
        int id = static_cast<int>(clauses_.size());
        for (int l : lits) occurs_[std::abs(l) - 1].push_back(id);
        open_.push_back(static_cast<int>(lits.size()));
        sat_.push_back(0);
        clauses_.push_back(std::move(lits));
    }

    bool satisfiable(std::uint64_t& budget) {
        if (contradiction_) return false;
        for (std::size_t c = 0; c < clauses_.size(); ++c)
            if (clauses_[c].size() == 1 && !force(clauses_[c][0])) return false;
        return run(0, budget);
    }

private:
    bool lit_true(int l) const { return value_[std::abs(l) - 1] == (l > 0 ? 1 : 0); }

    // Sets the variable of literal l so that l holds, then propagates units.
    bool force(int l) {
        int v = std::abs(l) - 1;
        if (value_[v] >= 0) return lit_true(l);
        return assign(v, l > 0 ? 1 : 0);
    }

    bool assign(int v, int val) {
        value_[v] = static_cast<signed char>(val);
        trail_.push_back(v);
        std::vector<int> units;
        bool ok = true;
        for (int c : occurs_[v]) {
            --open_[c];
            int lit = 0;
            for (int l : clauses_[c])
                if (std::abs(l) - 1 == v) lit = l;
            if ((lit > 0) == (val == 1)) ++sat_[c];
            if (sat_[c] == 0 && open_[c] == 0) ok = false;
            if (sat_[c] == 0 && open_[c] == 1) units.push_back(c);
        }
        if (!ok) return false;
        for (int c : units) {
            if (sat_[c] > 0) continue;
            for (int l : clauses_[c])
                if (value_[std::abs(l) - 1] < 0) {
                    if (!force(l)) return false;
                    break;
                }
            if (sat_[c] == 0 && open_[c] == 0) return false;
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            int v = trail_.back();
            trail_.pop_back();
            int val = value_[v];
            for (int c : occurs_[v]) {
                ++open_[c];
                for (int l : clauses_[c])
                    if (std::abs(l) - 1 == v && (l > 0) == (val == 1)) --sat_[c];
            }
            value_[v] = -1;
        }
    }

    // Branches on an open positive literal of the first unsatisfied clause;
    // once none is left, denying every open atom satisfies the rest.
    bool run(std::size_t from, std::uint64_t& budget) {
        int var = -1;
        for (; from < clauses_.size(); ++from) {
            if (sat_[from] > 0) continue;
            for (int l : clauses_[from])
                if (l > 0 && value_[l - 1] < 0) {
                    var = l - 1;
                    break;
                }
            if (var >= 0) break;
        }
        if (var < 0) return true;
        if (budget == 0) throw LimitError("second-order search exceeds the configured bound (--max-models)");
        --budget;
        for (int val : {1, 0}) {
            std::size_t mark = trail_.size();
            if (assign(var, val) && run(from, budget)) return true;
            undo(mark);
        }
        return false;
    }

    std::vector<signed char> value_;
    std::vector<std::vector<int>> occurs_;
    std::vector<std::vector<int>> clauses_;
    std::vector<int> open_;
    std::vector<int> sat_;
    std::vector<int> trail_;
    bool contradiction_ = false;
};

}  // namespace

AnswerSet eval_msnp(const MsnpFormula& f, const Instance& d, const Limits& limits) {
    for (const auto& rel : d.schema().relations()) {
        auto a = f.schema.arity(rel.name);
        if (!a) throw ValidationError("instance relation " + rel.name + " is not an input relation of the formula");
        if (*a != rel.arity) throw ValidationError("instance relation " + rel.name + " has the wrong arity");
    }
    AnswerSet out;
    const auto adom = d.active_domain();
    const std::vector<std::string> elems(adom.begin(), adom.end());
    const int n = static_cast<int>(elems.size());
    if (n == 0) return out;
    std::map<std::string, int> eindex;
    for (int i = 0; i < n; ++i) eindex[elems[i]] = i;
    std::map<std::pair<std::string, std::vector<int>>, int> fact_index;
    for (const auto& fact : d.facts()) {
        std::vector<int> t;
        for (const auto& a : fact.args) t.push_back(eindex.at(a));
        fact_index.emplace(std::make_pair(fact.relation, t), static_cast<int>(fact_index.size()));
    }

    std::map<std::string, std::size_t> base;
    std::size_t nvars = 0;
    for (const auto& v : f.so_vars) {
        base[v.name] = nvars;
        std::size_t cnt = 1;
        if (v.kind == SoKind::Relation)
            for (std::size_t i = 0; i < v.arity; ++i) cnt *= static_cast<std::size_t>(n);
        else
            cnt = static_cast<std::size_t>(n);
        if (v.kind == SoKind::FactSet) cnt += fact_index.size();
        nvars += cnt;
        if (nvars > (std::size_t(1) << 24)) throw LimitError("second-order search space too large");
    }

    const std::size_t k = f.free_vars.size();
    std::uint64_t budget = limits.max_models;
    std::vector<int> tuple(k, 0);
    while (true) {
        SoSearch search(nvars);
        for (const auto& imp : f.matrix) {
            // variable order: free first (fixed), then first occurrence
            std::vector<std::string> vars(f.free_vars.begin(), f.free_vars.end());
            auto add_vars = [&](const std::vector<Atom>& atoms) {
                for (const auto& a : atoms)
                    for (const auto& v : a.args)
                        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            };
            add_vars(imp.body);
            add_vars(imp.head);
            auto pos = [&](const std::string& v) { return static_cast<int>(std::find(vars.begin(), vars.end(), v) - vars.begin()); };
            // atoms checkable once their last variable is set
            std::vector<std::vector<const Atom*>> ready(vars.size() + 1);
            for (const auto& a : imp.body) {
                if (f.is_so(a.predicate)) continue;
                int last = 0;
                for (const auto& v : a.args) last = std::max(last, pos(v) + 1);
                ready[static_cast<std::size_t>(last)].push_back(&a);
            }
            std::vector<int> asg(vars.size(), -1);
            for (std::size_t i = 0; i < k; ++i) asg[i] = tuple[i];

            auto input_holds = [&](const Atom& a) {
                if (a.is_equality()) return asg[pos(a.args[0])] == asg[pos(a.args[1])];
                std::vector<int> t;
                for (const auto& v : a.args) t.push_back(asg[pos(v)]);
                return fact_index.count({a.predicate, t}) > 0;
            };
            // ground index of an SO atom, or -1 when a fact atom names a missing fact
            auto so_atom = [&](const Atom& a) -> int {
                const SoVar* so = f.so_var(a.predicate);
                std::vector<int> t;
                for (const auto& v : a.args) t.push_back(asg[pos(v)]);
                if (a.is_fact_atom()) {
                    auto it = fact_index.find({a.fact_relation, t});
                    if (it == fact_index.end()) return -1;
                    return static_cast<int>(base.at(so->name)) + n + it->second;
                }
                std::size_t idx = 0;
                for (int x : t) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(x);
                return static_cast<int>(base.at(so->name) + idx);
            };
            std::function<void(std::size_t)> walk = [&](std::size_t i) {
                for (const Atom* a : ready[i])
                    if (!input_holds(*a)) return;
                if (i == vars.size()) {
                    std::vector<int> lits;
                    for (const auto& a : imp.body) {
                        if (!f.is_so(a.predicate)) continue;
                        int g = so_atom(a);
                        if (g < 0) return;
                        lits.push_back(-(g + 1));
                    }
                    for (const auto& a : imp.head) {
                        int g = so_atom(a);
                        if (g >= 0) lits.push_back(g + 1);
                    }
                    search.add(std::move(lits));
                    return;
                }
                if (i < k) {
                    walk(i + 1);
                    return;
                }
                for (int e = 0; e < n; ++e) {
                    asg[i] = e;
                    walk(i + 1);
                }
                asg[i] = -1;
            };
            walk(0);
        }
        if (!search.satisfiable(budget)) {
            Tuple t;
            for (int x : tuple) t.push_back(elems[static_cast<std::size_t>(x)]);
            out.insert(t);
        }
        std::size_t i = k;
        while (i > 0 && tuple[i - 1] == n - 1) tuple[--i] = 0;
        if (i == 0) break;
        ++tuple[i - 1];
    }
    return out;
}

PatternSet parse_patterns(const std::string& src) {
    PatternSet ps;
    auto lines = text::split_lines(src);
    bool have_colors = false;
    Instance facts;
    std::set<std::string> elements;
    std::map<std::string, std::string> coloring;
    bool open = false;
    int block_line = 1;
    auto close = [&]() {
        if (!open) return;
        for (const auto& e : facts.active_domain()) elements.insert(e);
        for (const auto& e : elements)
            if (!coloring.count(e)) throw ParseError(block_line, 1, "element " + e + " has no color");
        ColoredStructure cs;
        cs.base.domain = elements;
        cs.base.facts = facts;
        cs.colors = coloring;
        if (elements.empty()) throw ParseError(block_line, 1, "pattern has no elements");
        ps.schema.merge(facts.schema());
        ps.patterns.push_back(std::move(cs));
        facts = Instance();
        elements.clear();
        coloring.clear();
        open = false;
    };
    for (const auto& line : lines) {
        if (line.text == "---") {
            close();
            continue;
        }
        text::TokenStream ts(text::tokenize(line.text, line.number));
        if (!have_colors) {
            ts.expect_word("colors");
            while (ts.peek().kind == text::Token::Ident) ps.colors.push_back(ts.next().text);
            if (!ts.at_end()) ts.fail("expected color names");
            have_colors = true;
            continue;
        }
        if (ts.accept_word("schema")) {
            text::parse_signature_list(ts, ps.schema);
            continue;
        }
        if (!open) block_line = line.number;
        open = true;
        if (ts.is_word("color") && ts.peek(1).kind == text::Token::Punct && ts.peek(1).text == "(") {
            ts.next();
            ts.expect("(");
            std::string e = ts.expect_ident("element");
            ts.expect(")");
            ts.expect("=");
            std::string c = ts.expect_ident("color");
            if (std::find(ps.colors.begin(), ps.colors.end(), c) == ps.colors.end())
                throw ParseError(line.number, 1, "unknown color " + c);
            if (coloring.count(e) && coloring[e] != c) throw ParseError(line.number, 1, "element " + e + " has two colors");
            coloring[e] = c;
            elements.insert(e);
        } else {
            while (!ts.at_end()) {
                Atom a = text::parse_atom(ts);
                ts.accept(".");
                try {
                    facts.add(a.predicate, a.args);
                } catch (const ValidationError& e) {
                    throw ParseError(line.number, 1, e.what());
                }
            }
        }
        if (!ts.at_end()) ts.fail("unexpected trailing input");
    }
    close();
    if (!have_colors) throw ParseError(1, 1, "expected colors line");
    return ps;
}

namespace {

std::string color_relation(const std::string& c) { return "color " + c; }

}  // namespace

bool forb_membership(const PatternSet& ps, const Instance& d, const Limits& limits) {
    std::vector<Template> patterns;
    for (const auto& p : ps.patterns) {
        Template t;
        t.structure = p.base;
        for (const auto& [e, c] : p.colors) t.structure.facts.add(color_relation(c), {e});
        patterns.push_back(std::move(t));
    }
    if (patterns.empty()) return true;
    const auto adom = d.active_domain();
    std::vector<std::string> elems(adom.begin(), adom.end());
    const std::size_t nc = ps.colors.size();
    if (nc == 0) return elems.empty() ? false : true;
    double space = 1;
    for (std::size_t i = 0; i < elems.size(); ++i) space *= static_cast<double>(nc);
    if (space > static_cast<double>(limits.max_models)) throw LimitError("too many colorings to enumerate");
    std::vector<std::size_t> col(elems.size(), 0);
    while (true) {
        Template colored;
        colored.structure.facts = d;
        colored.structure.domain.insert(elems.begin(), elems.end());
        for (std::size_t i = 0; i < elems.size(); ++i) colored.structure.facts.add(color_relation(ps.colors[col[i]]), {elems[i]});
        if (colored.structure.domain.empty()) colored.structure.domain.insert("_");
        bool blocked = false;
        for (const auto& p : patterns)
            if (find_hom(p, colored)) {
                blocked = true;
                break;
            }
        if (!blocked) return true;
        std::size_t i = elems.size();
        while (i > 0 && col[i - 1] == nc - 1) col[--i] = 0;
        if (i == 0) break;
        ++col[i - 1];
    }
    return false;
}

}  // namespace omqkit
