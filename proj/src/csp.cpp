#include "omqkit/csp.hpp"

#include <algorithm>
#include <functional>

#include "text.hpp"

namespace omqkit {

std::vector<std::string> Template::constant_elements() const {
    std::vector<std::string> out;
    for (const auto& [_, e] : constants) out.push_back(e);
    return out;
}

TemplateFamily parse_templates(const std::string& src) {
    TemplateFamily fam;
    auto lines = text::split_lines(src);
    Template cur;
    bool open = false;
    int block_line = 1;
    bool names_declared = false;

    auto close = [&]() {
        if (!open) return;
        for (const auto& e : cur.structure.facts.active_domain())
            if (!cur.structure.domain.count(e))
                throw ParseError(block_line, 1, "fact element " + e + " is not in the domain");
        if (cur.structure.domain.empty()) throw ParseError(block_line, 1, "template domain is empty");
        std::vector<std::string> names;
        for (const auto& [n, _] : cur.constants) names.push_back(n);
        if (!names_declared && fam.templates.empty()) {
            fam.constant_names = names;
            names_declared = true;
        } else {
            auto a = names, b = fam.constant_names;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) throw ParseError(block_line, 1, "templates disagree on constant names");
        }
        // keep the family order of constants
        std::vector<std::pair<std::string, std::string>> ordered;
        for (const auto& n : fam.constant_names)
            for (const auto& c : cur.constants)
                if (c.first == n) ordered.push_back(c);
        cur.constants = ordered;
        fam.schema.merge(cur.structure.facts.schema());
        fam.templates.push_back(std::move(cur));
        cur = Template();
        open = false;
    };

    for (const auto& line : lines) {
        if (line.text == "---") {
            close();
            continue;
        }
        text::TokenStream ts(text::tokenize(line.text, line.number));
        try {
            if (ts.accept_word("schema")) {
                text::parse_signature_list(ts, fam.schema);
            } else if (ts.accept_word("constants")) {
                if (names_declared) ts.fail("constant names declared twice");
                while (ts.peek().kind == text::Token::Ident) fam.constant_names.push_back(ts.next().text);
                names_declared = true;
            } else {
                if (!open) block_line = line.number;
                open = true;
                if (ts.accept_word("domain")) {
                    while (ts.peek().kind == text::Token::Ident) cur.structure.domain.insert(ts.next().text);
                } else if (ts.accept_word("const")) {
                    std::string n = ts.expect_ident("constant name");
                    ts.expect("=");
                    std::string e = ts.expect_ident("element");
                    if (!cur.structure.domain.count(e)) ts.fail("constant bound to unknown element " + e);
                    for (const auto& c : cur.constants)
                        if (c.first == n) ts.fail("constant " + n + " bound twice");
                    cur.constants.push_back({n, e});
                } else if (ts.accept_word("fact")) {
                    Atom a = text::parse_atom(ts);
                    ts.accept(".");
                    if (auto ar = fam.schema.arity(a.predicate); ar && *ar != a.args.size())
                        ts.fail("arity conflict for " + a.predicate);
                    cur.structure.facts.add(a.predicate, a.args);
                } else {
                    ts.fail("expected domain, const, fact or ---");
                }
            }
        } catch (const ValidationError& e) {
            throw ParseError(line.number, 1, e.what());
        }
        if (!ts.at_end()) ts.fail("unexpected trailing input");
    }
    close();
    for (auto& t : fam.templates)
        for (const auto& r : fam.schema.relations()) t.structure.facts.schema().add(r.name, r.arity);
    return fam;
}

std::string render_template(const Template& t) {
    std::string out = "domain";
    for (const auto& e : t.structure.domain) out += " " + e;
    out += "\n";
    for (const auto& [n, e] : t.constants) out += "const " + n + " = " + e + "\n";
    for (const auto& f : t.structure.facts.facts()) out += "fact " + render_fact(f) + "\n";
    return out;
}

std::string render_templates(const TemplateFamily& f) {
    std::string out;
    for (const auto& c : f.comments) out += "# " + c + "\n";
    if (!f.schema.empty()) out += f.schema.render() + "\n";
    if (!f.constant_names.empty()) {
        out += "constants";
        for (const auto& n : f.constant_names) out += " " + n;
        out += "\n";
    }
    for (std::size_t i = 0; i < f.templates.size(); ++i) {
        if (i) out += "---\n";
        out += render_template(f.templates[i]);
    }
    return out;
}

Template pointed_instance(const Instance& d, const std::vector<std::string>& tuple,
                          const std::vector<std::string>& constant_names) {
    if (tuple.size() != constant_names.size()) throw ValidationError("tuple length differs from the constant count");
    Template t;
    t.structure.facts = d;
    t.structure.domain = d.active_domain();
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        t.structure.domain.insert(tuple[i]);
        t.constants.push_back({constant_names[i], tuple[i]});
    }
    return t;
}

namespace {

// Tuples of one relation with, per position and value, the ids of the tuples
// carrying that value there.
struct RelIndex {
    std::vector<std::vector<int>> tuples;
    std::vector<std::vector<std::vector<int>>> by_pos;

    void build(std::size_t arity, std::size_t m) {
        by_pos.assign(arity, std::vector<std::vector<int>>(m));
        for (std::size_t i = 0; i < tuples.size(); ++i)
            for (std::size_t p = 0; p < arity; ++p) by_pos[p][tuples[i][p]].push_back(static_cast<int>(i));
    }
};

// A target structure together with the admissible images of the constants:
// one row per template sharing this structure.
struct TargetIndex {
    std::vector<std::string> elems;
    std::map<std::string, int> pos;
    std::map<std::string, RelIndex> rels;
    std::vector<std::string> constant_names;
    std::vector<std::vector<int>> constant_rows;

    explicit TargetIndex(const Template& t) {
        for (const auto& e : t.structure.domain) {
            pos[e] = static_cast<int>(elems.size());
            elems.push_back(e);
        }
        for (const auto& f : t.structure.facts.facts()) {
            std::vector<int> tu;
            for (const auto& a : f.args) tu.push_back(pos.at(a));
            rels[f.relation].tuples.push_back(std::move(tu));
        }
        for (const auto& f : t.structure.facts.schema().relations())
            if (auto it = rels.find(f.name); it != rels.end()) it->second.build(f.arity, elems.size());
        for (const auto& [name, _] : t.constants) constant_names.push_back(name);
        add_row(t);
    }

    void add_row(const Template& t) {
        std::vector<int> row;
        for (const auto& name : constant_names)
            for (const auto& [n, e] : t.constants)
                if (n == name) {
                    row.push_back(pos.at(e));
                    break;
                }
        constant_rows.push_back(std::move(row));
    }
};

bool same_structure(const RelStructure& a, const RelStructure& b) {
    return a.domain == b.domain && a.facts.facts().size() == b.facts.facts().size() && a.facts.facts() == b.facts.facts();
}

class HomSearch {
public:
    HomSearch(const Template& src, const TargetIndex& tgt) : tgt_(tgt) {
        const std::size_t m = tgt.elems.size();
        auto var_of = [&](const std::string& e) {
            auto it = var_.find(e);
            if (it != var_.end()) return it->second;
            int v = static_cast<int>(names_.size());
            var_[e] = v;
            names_.push_back(e);
            return v;
        };
        for (const auto& e : src.structure.domain) var_of(e);
        for (const auto& f : src.structure.facts.facts()) {
            Constraint c;
            auto it = tgt.rels.find(f.relation);
            c.rel = it == tgt.rels.end() ? nullptr : &it->second;
            for (const auto& a : f.args) c.vars.push_back(var_of(a));
            cons_.push_back(std::move(c));
        }
        // Constants shared by both sides must land on one admissible row.
        std::vector<std::size_t> cols;
        Constraint pin;
        for (const auto& [name, e] : src.constants) {
            auto it = std::find(tgt.constant_names.begin(), tgt.constant_names.end(), name);
            if (it == tgt.constant_names.end()) {
                impossible_ = true;
                continue;
            }
            cols.push_back(static_cast<std::size_t>(it - tgt.constant_names.begin()));
            pin.vars.push_back(var_of(e));
        }
        if (!pin.vars.empty()) {
            for (const auto& row : tgt.constant_rows) {
                std::vector<int> tu;
                for (auto c : cols) tu.push_back(row[c]);
                pins_.tuples.push_back(std::move(tu));
            }
            pins_.build(pin.vars.size(), m);
            pin.rel = &pins_;
            cons_.push_back(std::move(pin));
        }
        watch_.resize(names_.size());
        for (std::size_t i = 0; i < cons_.size(); ++i)
            for (int v : cons_[i].vars) watch_[v].push_back(static_cast<int>(i));
    }

    std::optional<Homomorphism> run() {
        if (impossible_) return std::nullopt;
        const std::size_t m = tgt_.elems.size();
        if (m == 0) {
            if (names_.empty()) return Homomorphism{};
            return std::nullopt;
        }
        Domains dom(names_.size(), std::vector<char>(m, 1));
        if (!propagate_all(dom)) return std::nullopt;
        std::vector<int> asg(names_.size(), -1);
        if (!search(dom, asg)) return std::nullopt;
        Homomorphism h;
        for (std::size_t v = 0; v < names_.size(); ++v) h[names_[v]] = tgt_.elems[asg[v]];
        return h;
    }

private:
    using Domains = std::vector<std::vector<char>>;
    struct Constraint {
        const RelIndex* rel = nullptr;
        std::vector<int> vars;
    };

    bool supported(const Constraint& c, const std::vector<int>& tu, const Domains& dom) const {
        for (std::size_t k = 0; k < tu.size(); ++k) {
            if (!dom[c.vars[k]][tu[k]]) return false;
            for (std::size_t j = 0; j < k; ++j)
                if (c.vars[j] == c.vars[k] && tu[j] != tu[k]) return false;
        }
        return true;
    }

    // Keeps only values with support in some target tuple; false on wipe-out.
    bool revise(int ci, Domains& dom, bool* changed = nullptr) {
        const Constraint& c = cons_[ci];
        const std::size_t m = tgt_.elems.size();
        for (std::size_t k = 0; k < c.vars.size(); ++k) {
            auto& d = dom[c.vars[k]];
            bool any = false;
            for (std::size_t x = 0; x < m; ++x) {
                if (!d[x]) continue;
                bool ok = false;
                if (c.rel)
                    for (int id : c.rel->by_pos[k][x])
                        if (supported(c, c.rel->tuples[id], dom)) {
                            ok = true;
                            break;
                        }
                if (!ok) {
                    d[x] = 0;
                    if (changed) *changed = true;
                } else {
                    any = true;
                }
            }
            if (!any) return false;
        }
        return true;
    }

    bool propagate_all(Domains& dom) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < cons_.size(); ++i)
                if (!revise(static_cast<int>(i), dom, &changed)) return false;
        }
        return true;
    }

    bool search(Domains& dom, std::vector<int>& asg) {
        int best = -1;
        std::size_t best_size = 0;
        for (std::size_t v = 0; v < names_.size(); ++v) {
            if (asg[v] >= 0) continue;
            std::size_t sz = static_cast<std::size_t>(std::count(dom[v].begin(), dom[v].end(), 1));
            if (best < 0 || sz < best_size) {
                best = static_cast<int>(v);
                best_size = sz;
            }
        }
        if (best < 0) return true;
        for (std::size_t x = 0; x < tgt_.elems.size(); ++x) {
            if (!dom[best][x]) continue;
            Domains next = dom;
            std::fill(next[best].begin(), next[best].end(), 0);
            next[best][x] = 1;
            asg[best] = static_cast<int>(x);
            bool ok = true;
            for (int ci : watch_[best])
                if (!revise(ci, next)) {
                    ok = false;
                    break;
                }
            if (ok) ok = propagate_all(next);
            if (ok && search(next, asg)) return true;
            asg[best] = -1;
        }
        return false;
    }

    const TargetIndex& tgt_;
    std::map<std::string, int> var_;
    std::vector<std::string> names_;
    std::vector<Constraint> cons_;
    std::vector<std::vector<int>> watch_;
    RelIndex pins_;
    bool impossible_ = false;
};

}  // namespace

std::optional<Homomorphism> find_hom(const Template& src, const Template& tgt) {
    TargetIndex index(tgt);
    return HomSearch(src, index).run();
}

struct CocspEvaluator::Impl {
    std::vector<TargetIndex> targets;
};

CocspEvaluator::CocspEvaluator(const TemplateFamily& f) : schema_(f.schema), constant_names_(f.constant_names) {
    auto impl = std::make_shared<Impl>();
    std::vector<const Template*> firsts;
    for (const auto& t : f.templates) {
        bool merged = false;
        for (std::size_t g = 0; g < firsts.size() && !merged; ++g)
            if (same_structure(firsts[g]->structure, t.structure)) {
                impl->targets[g].add_row(t);
                merged = true;
            }
        if (!merged) {
            firsts.push_back(&t);
            impl->targets.emplace_back(t);
        }
    }
    impl_ = std::move(impl);
}

AnswerSet CocspEvaluator::eval(const Instance& d) const {
    for (const auto& rel : d.schema().relations()) {
        auto a = schema_.arity(rel.name);
        if (!a) throw ValidationError("instance relation " + rel.name + " is not in the template schema");
        if (*a != rel.arity) throw ValidationError("instance relation " + rel.name + " has the wrong arity");
    }
    AnswerSet out;
    if (d.empty()) return out;
    const auto adom = d.active_domain();
    const std::vector<std::string> elems(adom.begin(), adom.end());
    const std::size_t k = constant_names_.size();
    std::vector<std::size_t> idx(k, 0);
    while (true) {
        Tuple t;
        for (auto i : idx) t.push_back(elems[i]);
        Template p = pointed_instance(d, t, constant_names_);
        bool blocked = false;
        for (const auto& tgt : impl_->targets)
            if (HomSearch(p, tgt).run()) {
                blocked = true;
                break;
            }
        if (!blocked) out.insert(t);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == elems.size() - 1) idx[--i] = 0;
        if (i == 0) break;
        ++idx[i - 1];
    }
    return out;
}

AnswerSet eval_cocsp(const TemplateFamily& f, const Instance& d) { return CocspEvaluator(f).eval(d); }

TemplateFamily incomparable_reduce(const TemplateFamily& f) {
    TemplateFamily out = f;
    std::vector<char> alive(f.templates.size(), 1);
    for (std::size_t i = 0; i < f.templates.size(); ++i)
        for (std::size_t j = 0; j < f.templates.size(); ++j)
            if (i != j && alive[j] && find_hom(f.templates[i], f.templates[j])) {
                alive[i] = 0;
                break;
            }
    out.templates.clear();
    for (std::size_t i = 0; i < f.templates.size(); ++i)
        if (alive[i]) out.templates.push_back(f.templates[i]);
    return out;
}

RelStructure collapse_constants(const Template& t, std::vector<std::string>* predicate_names) {
    RelStructure out = t.structure;
    std::set<std::string> taken;
    for (const auto& r : out.facts.schema().relations()) taken.insert(r.name);
    for (std::size_t i = 0; i < t.constants.size(); ++i) {
        std::string p = fresh_name("P_" + std::to_string(i + 1), taken);
        taken.insert(p);
        out.facts.add(p, {t.constants[i].second});
        if (predicate_names) predicate_names->push_back(p);
    }
    return out;
}

namespace {

// A template blocks no non-empty pointed instance when it has no facts or a
// constant sits on an element without facts; such templates are dropped.
bool blocks_something(const Template& t) {
    if (t.structure.facts.empty()) return false;
    auto adom = t.structure.facts.active_domain();
    for (const auto& [_, e] : t.constants)
        if (!adom.count(e)) return false;
    return true;
}

Template restrict_to_facts(const Template& t) {
    Template out = t;
    out.structure.domain = t.structure.facts.active_domain();
    return out;
}

}  // namespace

namespace {

// Replaces a pointed structure by its core, which maps to and from it.
Template shrink(const Template& t) {
    std::vector<std::string> preds;
    RelStructure core;
    try {
        core = core_of(collapse_constants(t, &preds));
    } catch (const LimitError&) {
        return t;
    }
    Template out;
    out.structure.domain = core.domain;
    out.structure.facts = Instance(t.structure.facts.schema());
    for (const auto& f : core.facts.facts()) {
        auto it = std::find(preds.begin(), preds.end(), f.relation);
        if (it == preds.end())
            out.structure.facts.add(f);
        else
            out.constants.push_back({t.constants[static_cast<std::size_t>(it - preds.begin())].first, f.args[0]});
    }
    std::sort(out.constants.begin(), out.constants.end(), [&](const auto& a, const auto& b) {
        auto rank = [&](const std::string& c) {
            for (std::size_t i = 0; i < t.constants.size(); ++i)
                if (t.constants[i].first == c) return i;
            return t.constants.size();
        };
        return rank(a.first) < rank(b.first);
    });
    return out;
}

}  // namespace

ContainmentResult contains(const TemplateFamily& f1, const TemplateFamily& f2) {
    auto names1 = f1.constant_names, names2 = f2.constant_names;
    std::sort(names1.begin(), names1.end());
    std::sort(names2.begin(), names2.end());
    if (names1 != names2) throw ValidationError("families use different constants");
    for (const auto& r : f1.schema.relations())
        if (f2.schema.arity(r.name) != r.arity) throw ValidationError("schema mismatch on " + r.name);
    for (const auto& r : f2.schema.relations())
        if (f1.schema.arity(r.name) != r.arity) throw ValidationError("schema mismatch on " + r.name);
    ContainmentResult res;
    for (const auto& b2 : f2.templates) {
        if (!blocks_something(b2)) continue;
        bool mapped = false;
        for (const auto& b1 : f1.templates)
            if (find_hom(b2, b1)) {
                mapped = true;
                break;
            }
        if (!mapped) {
            res.contained = false;
            res.witness = shrink(restrict_to_facts(b2));
            return res;
        }
    }
    return res;
}

}  // namespace omqkit
