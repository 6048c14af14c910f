#include <algorithm>
#include <functional>

#include "omqkit/translate.hpp"

namespace omqkit {

namespace {

std::set<std::string> vars_in(const std::vector<Atom>& atoms) {
    std::set<std::string> out;
    for (const auto& a : atoms) out.insert(a.args.begin(), a.args.end());
    return out;
}

MsnpFormula program_to_msnp(const Program& p, MsnpDialect dialect, const char* header) {
    MsnpFormula f;
    f.dialect = dialect;
    f.schema = p.edb;
    f.comments.push_back(header);
    for (const auto& r : p.idb.relations()) {
        if (r.name == kGoal) continue;
        if (r.arity == 1)
            f.so_vars.push_back({r.name, SoKind::Monadic, 1});
        else if (dialect == MsnpDialect::MMSNP)
            throw ValidationError("IDB relation " + r.name + " is not monadic");
        else
            f.so_vars.push_back({r.name, SoKind::Relation, r.arity});
    }
    std::set<std::string> taken;
    for (const auto& r : p.rules) {
        auto vs = vars_in(r.body);
        taken.insert(vs.begin(), vs.end());
    }
    for (std::size_t i = 0; i < p.goal_arity; ++i) {
        std::string y = fresh_name("y" + std::to_string(i + 1), taken);
        taken.insert(y);
        f.free_vars.push_back(y);
    }
    for (const auto& r : p.rules) {
        if (!p.is_goal_rule(r)) {
            f.matrix.push_back({r.body, r.head});
            continue;
        }
        std::map<std::string, std::string> sub;
        Implication imp;
        const auto& args = r.head[0].args;
        for (std::size_t i = 0; i < args.size(); ++i) {
            auto it = sub.find(args[i]);
            if (it == sub.end())
                sub[args[i]] = f.free_vars[i];
            else
                imp.body.push_back(make_equality(it->second, f.free_vars[i]));
        }
        std::vector<Atom> body;
        for (Atom a : r.body) {
            for (auto& v : a.args)
                if (sub.count(v)) v = sub[v];
            body.push_back(std::move(a));
        }
        imp.body.insert(imp.body.begin(), body.begin(), body.end());
        f.matrix.push_back(std::move(imp));
    }
    validate_msnp(f);
    return f;
}

// Second-order variables named like the reserved datalog predicates are renamed.
MsnpFormula rename_reserved(const MsnpFormula& input) {
    MsnpFormula f = input;
    std::set<std::string> taken{kGoal, kAdom};
    for (const auto& r : f.schema.relations()) taken.insert(r.name);
    for (const auto& v : f.so_vars) taken.insert(v.name);
    std::map<std::string, std::string> ren;
    for (auto& v : f.so_vars) {
        if (v.kind == SoKind::FactSet) throw UnsupportedError("fact-set variables have no datalog counterpart");
        if (v.name != kGoal && v.name != kAdom) continue;
        std::string n = fresh_name(v.name == kGoal ? "Goal" : "Adom", taken);
        taken.insert(n);
        ren[v.name] = n;
        v.name = n;
    }
    for (auto& imp : f.matrix)
        for (auto* part : {&imp.body, &imp.head})
            for (auto& a : *part)
                if (ren.count(a.predicate)) a.predicate = ren[a.predicate];
    return f;
}

Program msnp_to_program(const MsnpFormula& input, const char* header) {
    MsnpFormula f = normalize_msnp(rename_reserved(input));
    const std::size_t k = f.free_vars.size();
    std::set<std::string> taken{kGoal, kAdom};
    for (const auto& r : f.schema.relations()) taken.insert(r.name);
    for (const auto& v : f.so_vars) taken.insert(v.name);
    std::vector<std::string> mark(k), unmark(k);
    for (std::size_t i = 0; i < k; ++i) {
        mark[i] = fresh_name("Mark_" + std::to_string(i + 1), taken);
        taken.insert(mark[i]);
        unmark[i] = fresh_name("Unmark_" + std::to_string(i + 1), taken);
        taken.insert(unmark[i]);
    }
    std::vector<bool> used(k, false);
    auto free_index = [&](const std::string& v) -> int {
        auto it = std::find(f.free_vars.begin(), f.free_vars.end(), v);
        return it == f.free_vars.end() ? -1 : static_cast<int>(it - f.free_vars.begin());
    };

    std::vector<Rule> rules;
    for (const auto& imp : f.matrix) {
        // union-find over the surviving free-variable equalities
        std::map<std::string, std::string> rep;
        std::function<std::string(const std::string&)> root = [&](const std::string& v) -> std::string {
            auto it = rep.find(v);
            if (it == rep.end() || it->second == v) return v;
            return it->second = root(it->second);
        };
        for (const auto& a : imp.body)
            if (a.is_equality()) {
                std::string x = root(a.args[0]), y = root(a.args[1]);
                if (x == y) continue;
                if (free_index(y) < free_index(x)) std::swap(x, y);
                rep[y] = x;
            }
        auto rename = [&](Atom a, const std::map<std::string, std::string>& extra) {
            for (auto& v : a.args) {
                v = root(v);
                if (auto it = extra.find(v); it != extra.end()) v = it->second;
            }
            return a;
        };
        if (imp.head.empty()) {
            Rule r;
            for (const auto& a : imp.body)
                if (!a.is_equality()) r.body.push_back(rename(a, {}));
            std::vector<std::string> head;
            for (const auto& y : f.free_vars) {
                head.push_back(root(y));
                Atom ad = make_atom(kAdom, {root(y)});
                if (std::find(r.body.begin(), r.body.end(), ad) == r.body.end()) r.body.push_back(ad);
            }
            r.head.push_back(make_atom(kGoal, head));
            rules.push_back(std::move(r));
            continue;
        }
        std::set<std::string> names = vars_in(imp.body);
        auto hv = vars_in(imp.head);
        names.insert(hv.begin(), hv.end());
        std::map<std::string, std::string> marked;
        Rule r;
        for (const auto& y : f.free_vars) {
            std::string ry = root(y);
            if (!names.count(ry) || marked.count(ry)) continue;
            std::string z = fresh_name("z" + std::to_string(free_index(ry) + 1), names);
            names.insert(z);
            marked[ry] = z;
        }
        for (const auto& y : f.free_vars) {
            std::string ry = root(y);
            if (!marked.count(ry)) continue;
            int i = free_index(y);
            used[i] = true;
            r.body.push_back(make_atom(mark[i], {marked[ry]}));
        }
        for (const auto& a : imp.body)
            if (!a.is_equality()) r.body.push_back(rename(a, marked));
        for (const auto& a : imp.head) r.head.push_back(rename(a, marked));
        rules.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!used[i]) continue;
        rules.push_back(Rule{{make_atom(mark[i], {"X"}), make_atom(unmark[i], {"X"})}, {make_atom(kAdom, {"X"})}});
        Rule g;
        g.head.push_back(make_atom(kGoal, f.free_vars));
        g.body.push_back(make_atom(unmark[i], {f.free_vars[i]}));
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) g.body.push_back(make_atom(kAdom, {f.free_vars[j]}));
        rules.push_back(std::move(g));
    }
    Schema idb;
    idb.add(kGoal, k);
    for (const auto& v : f.so_vars) idb.add(v.name, v.kind == SoKind::Relation ? v.arity : 1);
    for (std::size_t i = 0; i < k; ++i)
        if (used[i]) {
            idb.add(mark[i], 1);
            idb.add(unmark[i], 1);
        }
    Program p = make_program(std::move(rules), f.schema, idb);
    p.comments.push_back(header);
    return p;
}

}  // namespace

MsnpFormula mddlog_to_commsnp(const Program& p) {
    if (!classify(p).monadic) throw ValidationError("program has a non-monadic IDB relation");
    return program_to_msnp(p, MsnpDialect::MMSNP, "mddlog-to-commsnp");
}

Program commsnp_to_mddlog(const MsnpFormula& f) {
    if (f.dialect != MsnpDialect::MMSNP) throw ValidationError("expected an MMSNP formula");
    return msnp_to_program(f, "commsnp-to-mddlog");
}

MsnpFormula fgddlog_to_gmsnp(const Program& p) {
    if (!classify(p).frontier_guarded) throw ValidationError("program is not frontier-guarded");
    return program_to_msnp(p, MsnpDialect::GMSNP, "fgddlog-to-gmsnp");
}

Program gmsnp_to_fgddlog(const MsnpFormula& f) {
    if (f.dialect == MsnpDialect::MMSNP2) throw ValidationError("expected a GMSNP or MMSNP formula");
    if (!check_guarded(f)) throw ValidationError("formula is not guarded");
    return msnp_to_program(f, "gmsnp-to-fgddlog");
}

MsnpFormula mmsnp2_to_gmsnp(const MsnpFormula& input) {
    if (input.dialect != MsnpDialect::MMSNP2) throw ValidationError("expected an MMSNP2 formula");
    MsnpFormula f = normalize_msnp(input);
    MsnpFormula out;
    out.dialect = MsnpDialect::GMSNP;
    out.schema = f.schema;
    out.free_vars = f.free_vars;
    out.comments.push_back("mmsnp2-to-gmsnp");
    std::set<std::string> taken;
    for (const auto& r : f.schema.relations()) taken.insert(r.name);
    for (const auto& v : f.so_vars) taken.insert(v.name);
    std::map<std::pair<std::string, std::string>, std::string> split;
    for (const auto& v : f.so_vars) out.so_vars.push_back({v.name, SoKind::Monadic, 1});
    for (const auto& v : f.so_vars) {
        if (v.kind != SoKind::FactSet) continue;
        for (const auto& r : f.schema.relations()) {
            std::string n = fresh_name(v.name + "_" + r.name, taken);
            taken.insert(n);
            split[{v.name, r.name}] = n;
            out.so_vars.push_back({n, SoKind::Relation, r.arity});
        }
    }
    auto conv = [&](const Atom& a) {
        if (!a.is_fact_atom()) return a;
        return make_atom(split.at({a.predicate, a.fact_relation}), a.args);
    };
    for (const auto& imp : f.matrix) {
        Implication n;
        for (const auto& a : imp.body) n.body.push_back(conv(a));
        for (const auto& a : imp.head) n.head.push_back(conv(a));
        out.matrix.push_back(std::move(n));
    }
    validate_msnp(out);
    return out;
}

namespace {

// Renames variables to v1, v2, ... by first occurrence and drops duplicate atoms.
Implication canonical(const Implication& imp) {
    std::map<std::string, std::string> ren;
    auto fix = [&](const std::vector<Atom>& atoms) {
        std::vector<Atom> out;
        for (Atom a : atoms) {
            for (auto& v : a.args) {
                if (!ren.count(v)) ren[v] = "v" + std::to_string(ren.size() + 1);
                v = ren[v];
            }
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
        }
        return out;
    };
    Implication out;
    out.body = fix(imp.body);
    out.head = fix(imp.head);
    return out;
}

std::vector<std::string> ordered_vars(const Implication& imp) {
    std::vector<std::string> out;
    for (const auto* part : {&imp.body, &imp.head})
        for (const auto& a : *part)
            for (const auto& v : a.args)
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}

// Closes the matrix under identification of variables inside an implication.
std::vector<Implication> identification_closure(const std::vector<Implication>& matrix, std::size_t cap) {
    std::vector<Implication> out;
    std::set<std::string> seen;
    auto key = [](const Implication& imp) { return render_implication(imp); };
    for (const auto& imp : matrix) {
        std::vector<std::string> vs = ordered_vars(imp);
        std::vector<std::size_t> block(vs.size(), 0);
        // restricted growth strings enumerate set partitions
        std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t blocks) {
            if (i == vs.size()) {
                std::map<std::string, std::string> sub;
                std::vector<std::string> first(blocks);
                for (std::size_t j = 0; j < vs.size(); ++j) {
                    if (first[block[j]].empty()) first[block[j]] = vs[j];
                    sub[vs[j]] = first[block[j]];
                }
                Implication n;
                for (Atom a : imp.body) {
                    for (auto& v : a.args) v = sub[v];
                    n.body.push_back(std::move(a));
                }
                for (Atom a : imp.head) {
                    for (auto& v : a.args) v = sub[v];
                    n.head.push_back(std::move(a));
                }
                n = canonical(n);
                if (seen.insert(key(n)).second) {
                    if (out.size() >= cap) throw LimitError("variable identification closure exceeds the rule bound");
                    out.push_back(std::move(n));
                }
                return;
            }
            for (std::size_t b = 0; b <= blocks; ++b) {
                block[i] = b;
                go(i + 1, std::max(blocks, b + 1));
            }
        };
        go(0, 0);
    }
    return out;
}

bool input_covers(const MsnpFormula& f, const Implication& imp, const std::set<std::string>& need, const Atom** guard) {
    for (const auto& b : imp.body) {
        if (b.is_equality() || f.is_so(b.predicate)) continue;
        std::set<std::string> have(b.args.begin(), b.args.end());
        if (std::includes(have.begin(), have.end(), need.begin(), need.end())) {
            if (guard) *guard = &b;
            return true;
        }
    }
    return false;
}

// Adds input-relation guards for head atoms guarded only by second-order atoms.
std::vector<Implication> add_input_guards(const MsnpFormula& f, const std::vector<Implication>& matrix, std::size_t cap) {
    std::vector<Implication> out;
    for (const auto& imp : matrix) {
        std::vector<Implication> family{imp};
        bool dropped = false;
        for (const auto& h : imp.head) {
            std::set<std::string> need(h.args.begin(), h.args.end());
            if (input_covers(f, imp, need, nullptr)) continue;
            std::vector<std::string> vs(need.begin(), need.end());
            std::vector<Implication> next;
            for (const auto& base : family) {
                std::set<std::string> names;
                for (const auto& v : ordered_vars(base)) names.insert(v);
                for (const auto& r : f.schema.relations()) {
                    const std::size_t m = r.arity;
                    // each position takes a needed variable or a fresh one (index vs.size())
                    std::vector<std::size_t> choice(m, 0);
                    while (true) {
                        std::set<std::size_t> hit;
                        for (auto c : choice)
                            if (c < vs.size()) hit.insert(c);
                        if (hit.size() == vs.size()) {
                            std::set<std::string> local = names;
                            std::vector<std::string> args;
                            for (auto c : choice) {
                                if (c < vs.size()) {
                                    args.push_back(vs[c]);
                                } else {
                                    std::string w = fresh_name("w", local);
                                    local.insert(w);
                                    args.push_back(w);
                                }
                            }
                            Implication g = base;
                            g.body.push_back(make_atom(r.name, args));
                            next.push_back(std::move(g));
                            if (next.size() > cap) throw LimitError("guard expansion exceeds the rule bound");
                        }
                        std::size_t i = m;
                        while (i > 0 && choice[i - 1] == vs.size()) choice[--i] = 0;
                        if (i == 0) break;
                        ++choice[i - 1];
                    }
                }
            }
            family = std::move(next);
            if (family.empty()) {
                dropped = true;
                break;
            }
        }
        if (dropped) continue;
        for (auto& g : family) {
            if (out.size() >= cap) throw LimitError("guard expansion exceeds the rule bound");
            out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace

MsnpFormula gmsnp_to_mmsnp2(const MsnpFormula& input, const Limits& limits) {
    if (input.dialect != MsnpDialect::GMSNP && input.dialect != MsnpDialect::MMSNP)
        throw ValidationError("expected a GMSNP formula");
    if (!input.free_vars.empty()) throw UnsupportedError("only sentences can be translated to MMSNP2");
    if (!check_guarded(input)) throw ValidationError("formula is not guarded");
    for (const auto& v : input.so_vars)
        if (v.kind == SoKind::FactSet) throw ValidationError("GMSNP formulas have no fact-set variables");
    MsnpFormula f = normalize_msnp(input);
    const std::size_t cap = limits.max_rules;
    auto matrix = identification_closure(f.matrix, cap);
    matrix = add_input_guards(f, matrix, cap);
    matrix = identification_closure(matrix, cap);

    struct HeadInfo {
        std::string so;
        std::vector<std::string> args;
        Atom guard;
        std::string name;
    };
    std::vector<HeadInfo> heads;
    std::vector<std::vector<std::size_t>> head_ids(matrix.size());
    std::set<std::string> taken;
    for (const auto& r : f.schema.relations()) taken.insert(r.name);
    for (const auto& v : f.so_vars) taken.insert(v.name);
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (const auto& h : matrix[i].head) {
            const Atom* g = nullptr;
            input_covers(f, matrix[i], std::set<std::string>(h.args.begin(), h.args.end()), &g);
            if (!g) throw UnsupportedError("head atom " + render_atom(h) + " has no input guard");
            std::string n = fresh_name("X_" + std::to_string(heads.size() + 1), taken);
            taken.insert(n);
            head_ids[i].push_back(heads.size());
            heads.push_back({h.predicate, h.args, *g, n});
        }

    MsnpFormula out;
    out.dialect = MsnpDialect::MMSNP2;
    out.schema = f.schema;
    out.comments.push_back("gmsnp-to-mmsnp2");
    for (const auto& h : heads) out.so_vars.push_back({h.name, SoKind::FactSet, 1});

    for (std::size_t i = 0; i < matrix.size(); ++i) {
        const Implication& imp = matrix[i];
        std::vector<Atom> fixed;
        std::vector<const Atom*> so_atoms;
        for (const auto& a : imp.body) {
            if (f.is_so(a.predicate))
                so_atoms.push_back(&a);
            else
                fixed.push_back(a);
        }
        std::vector<Atom> head;
        for (std::size_t j = 0; j < imp.head.size(); ++j) {
            const HeadInfo& h = heads[head_ids[i][j]];
            Atom x;
            x.predicate = h.name;
            x.fact_relation = h.guard.predicate;
            x.args = h.guard.args;
            head.push_back(std::move(x));
        }
        // compatible head atoms per body occurrence: u_j = u_l must imply x_j = x_l
        std::vector<std::vector<std::size_t>> options;
        bool dead = false;
        for (const Atom* a : so_atoms) {
            std::vector<std::size_t> opts;
            for (std::size_t h = 0; h < heads.size(); ++h) {
                if (heads[h].so != a->predicate) continue;
                std::map<std::string, std::string> m;
                bool ok = true;
                for (std::size_t j = 0; j < a->args.size() && ok; ++j) {
                    auto it = m.find(heads[h].args[j]);
                    if (it == m.end())
                        m[heads[h].args[j]] = a->args[j];
                    else
                        ok = it->second == a->args[j];
                }
                if (ok) opts.push_back(h);
            }
            if (opts.empty()) dead = true;
            options.push_back(std::move(opts));
        }
        if (dead) continue;
        std::vector<std::size_t> pick(so_atoms.size(), 0);
        while (true) {
            std::set<std::string> names;
            for (const auto& v : ordered_vars(imp)) names.insert(v);
            Implication n;
            n.body = fixed;
            for (std::size_t s = 0; s < so_atoms.size(); ++s) {
                const HeadInfo& h = heads[options[s][pick[s]]];
                std::map<std::string, std::string> sigma;
                for (std::size_t j = 0; j < h.args.size(); ++j) sigma[h.args[j]] = so_atoms[s]->args[j];
                std::vector<std::string> args;
                for (const auto& w : h.guard.args) {
                    if (!sigma.count(w)) {
                        std::string fresh = fresh_name("u", names);
                        names.insert(fresh);
                        sigma[w] = fresh;
                    }
                    args.push_back(sigma[w]);
                }
                Atom g = make_atom(h.guard.predicate, args);
                if (std::find(n.body.begin(), n.body.end(), g) == n.body.end()) n.body.push_back(g);
                Atom x;
                x.predicate = h.name;
                x.fact_relation = h.guard.predicate;
                x.args = args;
                n.body.push_back(std::move(x));
            }
            n.head = head;
            if (out.matrix.size() >= cap) throw LimitError("MMSNP2 translation exceeds the rule bound");
            out.matrix.push_back(std::move(n));
            std::size_t s = so_atoms.size();
            while (s > 0 && pick[s - 1] + 1 == options[s - 1].size()) pick[--s] = 0;
            if (s == 0) break;
            ++pick[s - 1];
        }
    }
    validate_msnp(out);
    return out;
}

}  // namespace omqkit
