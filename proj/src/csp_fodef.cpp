#include <algorithm>
#include <map>
#include <set>

#include "omqkit/csp.hpp"

namespace omqkit {

namespace {

Template as_template(const RelStructure& b) {
    Template t;
    t.structure = b;
    return t;
}

RelStructure without(const RelStructure& b, const std::string& e) {
    RelStructure out;
    out.domain = b.domain;
    out.domain.erase(e);
    out.facts = Instance(b.facts.schema());
    for (const auto& f : b.facts.facts())
        if (std::find(f.args.begin(), f.args.end(), e) == f.args.end()) out.facts.add(f);
    return out;
}


// Removes elements e for which some e' makes e -> e' (identity elsewhere) a
// retraction. Cheap, and usually does most of the work before full searches.
RelStructure fold(const RelStructure& b) {
    const std::vector<std::string> elems(b.domain.begin(), b.domain.end());
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
    std::set<std::pair<std::string, std::vector<int>>> facts;
    std::vector<std::vector<const std::pair<std::string, std::vector<int>>*>> touching(elems.size());
    for (const auto& f : b.facts.facts()) {
        std::vector<int> t;
        for (const auto& a : f.args) t.push_back(pos.at(a));
        facts.insert({f.relation, t});
    }
    for (const auto& f : facts)
        for (int x : f.second)
            if (touching[x].empty() || touching[x].back() != &f) touching[x].push_back(&f);
    std::vector<char> alive(elems.size(), 1);
    auto retracts = [&](int e, int to) {
        for (const auto* f : touching[e]) {
            if (!std::all_of(f->second.begin(), f->second.end(), [&](int x) { return alive[x]; })) continue;
            std::pair<std::string, std::vector<int>> img = *f;
            for (int& x : img.second)
                if (x == e) x = to;
            if (!facts.count(img)) return false;
        }
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int e = 0; e < static_cast<int>(elems.size()); ++e) {
            if (!alive[e]) continue;
            for (int to = 0; to < static_cast<int>(elems.size()); ++to)
                if (to != e && alive[to] && retracts(e, to)) {
                    alive[e] = 0;
                    changed = true;
                    break;
                }
        }
    }
    RelStructure out = b;
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (!alive[i]) out = without(out, elems[i]);
    return out;
}

}  // namespace

RelStructure core_of(const RelStructure& b, const Limits& limits) {
    if (b.domain.size() > limits.max_product) throw LimitError("structure too large for core computation");
    RelStructure cur = fold(b);
    bool shrunk = true;
    while (shrunk && cur.domain.size() > 1) {
        shrunk = false;
        for (const auto& e : cur.domain) {
            RelStructure smaller = without(cur, e);
            if (find_hom(as_template(cur), as_template(smaller))) {
                cur = fold(smaller);
                shrunk = true;
                break;
            }
        }
    }
    return cur;
}

bool fo_definable_core(const RelStructure& b, const Limits& limits) {
    const std::vector<std::string> elems(b.domain.begin(), b.domain.end());
    const std::size_t n = elems.size();
    if (n * n > limits.max_product) throw LimitError("square of the core exceeds the product bound (--max-product)");
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < n; ++i) pos[elems[i]] = static_cast<int>(i);

    // Square: element (x, y) is encoded as x * n + y.
    struct Rel {
        std::size_t arity;
        std::set<std::vector<int>> tuples;
    };
    std::map<std::string, std::vector<std::vector<int>>> base;
    for (const auto& f : b.facts.facts()) {
        std::vector<int> t;
        for (const auto& a : f.args) t.push_back(pos.at(a));
        base[f.relation].push_back(std::move(t));
    }
    std::vector<Rel> rels;
    for (const auto& [name, ts] : base) {
        Rel r{ts.front().size(), {}};
        for (const auto& s : ts)
            for (const auto& t : ts) {
                std::vector<int> p;
                for (std::size_t k = 0; k < s.size(); ++k) p.push_back(s[k] * static_cast<int>(n) + t[k]);
                r.tuples.insert(std::move(p));
            }
        rels.push_back(std::move(r));
    }

    const int total = static_cast<int>(n * n);
    std::vector<char> alive(total, 1);
    auto dominated_by = [&](int u, int v) {
        for (const auto& r : rels)
            for (const auto& t : r.tuples) {
                if (std::find(t.begin(), t.end(), u) == t.end()) continue;
                bool live = std::all_of(t.begin(), t.end(), [&](int x) { return alive[x]; });
                if (!live) continue;
                for (std::size_t k = 0; k < t.size(); ++k) {
                    if (t[k] != u) continue;
                    std::vector<int> s = t;
                    s[k] = v;
                    if (!r.tuples.count(s)) return false;
                }
            }
        return true;
    };
    bool removed = true;
    while (removed) {
        removed = false;
        for (int u = 0; u < total && !removed; ++u) {
            if (!alive[u] || u / static_cast<int>(n) == u % static_cast<int>(n)) continue;
            for (int v = 0; v < total; ++v)
                if (v != u && alive[v] && dominated_by(u, v)) {
                    alive[u] = 0;
                    removed = true;
                    break;
                }
        }
    }
    for (int u = 0; u < total; ++u)
        if (alive[u] && u / static_cast<int>(n) != u % static_cast<int>(n)) return false;
    return true;
}

bool fo_definable(const TemplateFamily& f, const Limits& limits) {
    TemplateFamily live = f;
    live.templates.clear();
    for (const auto& t : f.templates) {
        if (t.structure.facts.empty()) continue;
        auto adom = t.structure.facts.active_domain();
        bool ok = true;
        for (const auto& [_, e] : t.constants) ok = ok && adom.count(e);
        if (ok) live.templates.push_back(t);
    }
    // Cores are homomorphically equivalent to their templates, so the family
    // is reduced after coring, where the searches are small.
    TemplateFamily cores;
    cores.schema = live.schema;
    for (auto t : live.templates) {
        auto rank = [&](const std::string& c) {
            return std::find(f.constant_names.begin(), f.constant_names.end(), c) - f.constant_names.begin();
        };
        std::sort(t.constants.begin(), t.constants.end(),
                  [&](const auto& a, const auto& b) { return rank(a.first) < rank(b.first); });
        cores.templates.push_back(as_template(core_of(collapse_constants(t), limits)));
    }
    for (const auto& t : incomparable_reduce(cores).templates)
        if (!fo_definable_core(t.structure, limits)) return false;
    return true;
}

}  // namespace omqkit
