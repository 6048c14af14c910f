#include <algorithm>

#include "dl_internal.hpp"

namespace omqkit {

namespace detail {

ConceptPtr normalize_concept(const ConceptPtr& c) {
    switch (c->kind) {
        case ConceptKind::Top:
        case ConceptKind::Bot:
        case ConceptKind::Name: return c;
        case ConceptKind::Not: return Concept::negation(normalize_concept(c->left));
        case ConceptKind::And: return Concept::conj(normalize_concept(c->left), normalize_concept(c->right));
        case ConceptKind::Or: return Concept::disj(normalize_concept(c->left), normalize_concept(c->right));
        case ConceptKind::Exists: return Concept::exists(c->name, normalize_concept(c->left));
        case ConceptKind::Forall:
            return Concept::negation(Concept::exists(c->name, Concept::negation(normalize_concept(c->left))));
    }
    return c;
}

namespace {

void post_order(const ConceptPtr& c, std::vector<ConceptPtr>& out, std::map<std::string, int>& seen) {
    if (c->left) post_order(c->left, out, seen);
    if (c->right) post_order(c->right, out, seen);
    std::string key = to_string(c);
    if (seen.count(key)) return;
    seen[key] = static_cast<int>(out.size());
    out.push_back(c);
}

}  // namespace

TypeSystem::TypeSystem(const Ontology& o, const std::vector<ConceptPtr>& extra) {
    closure_ = normalize_closure(o, extra);
    for (std::size_t i = 0; i < closure_.size(); ++i) index_[to_string(closure_[i])] = static_cast<int>(i);
    for (const auto& c : closure_) {
        Node n{c->kind, -1, -1, {}};
        if (c->left) n.left = find(c->left);
        if (c->right) n.right = find(c->right);
        if (c->kind == ConceptKind::Exists) n.role = c->name;
        nodes_.push_back(n);
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.kind == ConceptKind::Name || n.kind == ConceptKind::Exists) atoms_.push_back(static_cast<int>(i));
        if (n.kind == ConceptKind::Exists) {
            if (n.role == kUniversalRole)
                universal_.push_back(static_cast<int>(i));
            else
                existentials_[n.role].push_back({static_cast<int>(i), n.left});
        }
    }
    for (const auto& inc : o.inclusions)
        inclusions_.push_back({find(normalize_concept(inc.lhs)), find(normalize_concept(inc.rhs))});
}

int TypeSystem::find(const ConceptPtr& c) const {
    auto it = index_.find(to_string(c));
    return it == index_.end() ? -1 : it->second;
}

int TypeSystem::find_name(const std::string& name) const { return find(Concept::atomic(name)); }

std::vector<std::string> TypeSystem::roles() const {
    std::vector<std::string> out;
    for (const auto& [r, _] : existentials_) out.push_back(r);
    return out;
}

std::vector<TypeBits> TypeSystem::coherent_types(std::uint64_t limit) const {
    std::vector<TypeBits> out;
    const std::size_t n = nodes_.size();
    std::vector<signed char> val(n, -1);
    std::uint64_t visited = 0;

    auto derive = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            const Node& nd = nodes_[i];
            switch (nd.kind) {
                case ConceptKind::Top: val[i] = 1; break;
                case ConceptKind::Bot: val[i] = 0; break;
                case ConceptKind::Not: val[i] = val[nd.left] < 0 ? -1 : 1 - val[nd.left]; break;
                case ConceptKind::And: {
                    signed char a = val[nd.left], b = val[nd.right];
                    val[i] = (a == 0 || b == 0) ? 0 : (a == 1 && b == 1 ? 1 : -1);
                    break;
                }
                case ConceptKind::Or: {
                    signed char a = val[nd.left], b = val[nd.right];
                    val[i] = (a == 1 || b == 1) ? 1 : (a == 0 && b == 0 ? 0 : -1);
                    break;
                }
                default: break;
            }
        }
    };
    auto violated = [&]() {
        for (const auto& [l, r] : inclusions_)
            if (val[l] == 1 && val[r] == 0) return true;
        for (int u : universal_)
            if (val[nodes_[u].left] == 1 && val[u] == 0) return true;
        return false;
    };
    std::function<void(std::size_t)> go = [&](std::size_t k) {
        if (++visited > limit) throw LimitError("type enumeration exceeds the model bound");
        derive();
        if (violated()) return;
        if (k == atoms_.size()) {
            TypeBits t(n);
            for (std::size_t i = 0; i < n; ++i) t[i] = val[i] == 1;
            out.push_back(std::move(t));
            return;
        }
        int a = atoms_[k];
        for (signed char v : {0, 1}) {
            val[a] = v;
            go(k + 1);
        }
        val[a] = -1;
        derive();
    };
    go(0);
    return out;
}

bool TypeSystem::r_coherent(const TypeBits& a, const TypeBits& b, const std::string& role) const {
    auto it = existentials_.find(role);
    if (it == existentials_.end()) return true;
    for (const auto& [ex, filler] : it->second)
        if (b[filler] && !a[ex]) return false;
    return true;
}

std::vector<TypeBits> TypeSystem::eliminate(std::vector<TypeBits> start) const {
    std::vector<char> alive(start.size(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < start.size(); ++i) {
            if (!alive[i]) continue;
            const TypeBits& t = start[i];
            bool ok = true;
            for (const auto& [role, list] : existentials_) {
                for (const auto& [ex, filler] : list) {
                    if (!t[ex]) continue;
                    bool witnessed = false;
                    for (std::size_t j = 0; j < start.size() && !witnessed; ++j)
                        witnessed = alive[j] && start[j][filler] && r_coherent(t, start[j], role);
                    if (!witnessed) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (!ok) {
                alive[i] = 0;
                changed = true;
            }
        }
    }
    std::vector<TypeBits> out;
    for (std::size_t i = 0; i < start.size(); ++i)
        if (alive[i]) out.push_back(std::move(start[i]));
    return out;
}

TypeBits TypeSystem::profile_of(const TypeBits& t) const {
    TypeBits key;
    for (int u : universal_) key.push_back(t[u]);
    return key;
}

std::vector<TypeSystem::Profile> TypeSystem::profiles(const std::vector<TypeBits>& start) const {
    std::map<TypeBits, std::vector<TypeBits>> groups;
    std::vector<TypeBits> order;
    for (const auto& t : start) {
        TypeBits k = profile_of(t);
        if (!groups.count(k)) order.push_back(k);
        groups[k].push_back(t);
    }
    std::vector<Profile> out;
    for (const auto& k : order) {
        std::vector<TypeBits> kept = eliminate(groups[k]);
        if (kept.empty()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < universal_.size() && ok; ++i) {
            if (!k[i]) continue;
            int filler = nodes_[universal_[i]].left;
            ok = std::any_of(kept.begin(), kept.end(), [&](const TypeBits& t) { return t[filler]; });
        }
        if (ok) out.push_back({k, std::move(kept)});
    }
    return out;
}

}  // namespace detail

std::vector<ConceptPtr> normalize_closure(const Ontology& o, const std::vector<ConceptPtr>& extra) {
    std::vector<ConceptPtr> out;
    std::map<std::string, int> seen;
    for (const auto& inc : o.inclusions) {
        detail::post_order(detail::normalize_concept(inc.lhs), out, seen);
        detail::post_order(detail::normalize_concept(inc.rhs), out, seen);
    }
    for (const auto& c : extra) detail::post_order(detail::normalize_concept(c), out, seen);
    return out;
}

TypeSet eliminate_types(const Ontology& o, const std::vector<ConceptPtr>& extra) {
    if (o.uses_universal_role()) throw UnsupportedError("type elimination without profiles requires an ALC ontology");
    detail::TypeSystem ts(o, extra);
    return TypeSet{ts.closure(), ts.eliminate(ts.coherent_types(Limits{}.max_models))};
}

bool r_coherent(const TypeBits& t1, const TypeBits& t2, const std::string& role,
                const std::vector<ConceptPtr>& closure) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < closure.size(); ++i) idx[to_string(closure[i])] = i;
    for (std::size_t i = 0; i < closure.size(); ++i) {
        const auto& c = closure[i];
        if (c->kind != ConceptKind::Exists || c->name != role) continue;
        auto f = idx.find(to_string(c->left));
        if (f != idx.end() && t2[f->second] && !t1[i]) return false;
    }
    return true;
}

std::vector<TypeSet> countermodel_type_sets(const Ontology& o, const std::string& a,
                                            const std::vector<ConceptPtr>& extra) {
    std::vector<ConceptPtr> ex{Concept::atomic(a)};
    ex.insert(ex.end(), extra.begin(), extra.end());
    detail::TypeSystem ts(o, ex);
    int ai = ts.find_name(a);
    std::vector<TypeSet> cands;
    for (auto& p : ts.profiles(ts.coherent_types(Limits{}.max_models))) {
        bool a_free = std::any_of(p.types.begin(), p.types.end(), [&](const TypeBits& t) { return !t[ai]; });
        if (a_free) cands.push_back(TypeSet{ts.closure(), std::move(p.types)});
    }
    auto subset = [](const TypeSet& x, const TypeSet& y) {
        return std::all_of(x.types.begin(), x.types.end(), [&](const TypeBits& t) {
            return std::find(y.types.begin(), y.types.end(), t) != y.types.end();
        });
    };
    std::vector<TypeSet> out;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < cands.size() && !dominated; ++j) {
            if (i == j || !subset(cands[i], cands[j])) continue;
            dominated = !subset(cands[j], cands[i]) || j < i;
        }
        if (!dominated) out.push_back(cands[i]);
    }
    return out;
}

std::string describe_type(const TypeBits& t, const std::vector<ConceptPtr>& closure) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < closure.size(); ++i) {
        auto k = closure[i]->kind;
        if (!t[i] || (k != ConceptKind::Name && k != ConceptKind::Exists)) continue;
        s += (first ? "" : ", ") + to_string(closure[i]);
        first = false;
    }
    return s + "}";
}

}  // namespace omqkit
