#include "rl/simplify.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace rl {

ExprId Session::propagate(ExprId e) {
    if (isAtom(e)) return e;
    auto cs = store.children(e);
    switch (store.type(e)) {
        case ExprType::Union: {
            std::vector<ExprId> reps;
            reps.reserve(cs.size());
            for (ExprId c : cs) reps.push_back(bg.rep(c));
            return store.unionN(reps);
        }
        case ExprType::Concat:
            return store.concat2(bg.rep(cs[0]), bg.rep(cs[1]));
        case ExprType::Star:
            return store.star(bg.rep(cs[0]));
        default:
            return e;
    }
}

ExprId Session::simplifyId(const PipelineConfig& cfg, ExprId root) {
    // Distinct subexpressions of root, scheduled children before parents: a
    // counter of unprocessed children per node, a LIFO list of ready nodes.
    std::unordered_map<ExprId, int> pending;
    std::unordered_map<ExprId, std::vector<ExprId>> parents;
    std::vector<ExprId> ready;
    {
        std::vector<ExprId> stack{root};
        while (!stack.empty()) {
            ExprId e = stack.back();
            stack.pop_back();
            if (pending.count(e)) continue;
            std::unordered_set<ExprId> kids;
            if (!isAtom(e))
                for (ExprId c : store.children(e)) kids.insert(c);
            pending[e] = static_cast<int>(kids.size());
            if (kids.empty()) ready.push_back(e);
            for (ExprId c : kids) {
                parents[c].push_back(e);
                stack.push_back(c);
            }
        }
    }
    while (!ready.empty()) {
        ExprId e = ready.back();
        ready.pop_back();
        ExprId cur = bg.rep(e);
        if (cfg.propagate && !isAtom(e)) {
            ExprId p = propagate(e);
            if (p != e) bg.unify(e, p);
            cur = bg.rep(e);
        }
        if (!isAtom(cur) && (cfg.mdfaBound == 0 || store.size(cur) <= cfg.mdfaBound)) {
            deriv.buildDfaB(bg, cur, true);
            Mdfa m = minimize(bg, cur);
            if (cfg.unifyGlobal) index.unifyInto(bg, m);
        }
        auto it = parents.find(e);
        if (it != parents.end())
            for (ExprId p : it->second)
                if (--pending[p] == 0) ready.push_back(p);
    }
    return bg.rep(root);
}

ExprId Session::simplifyPlain(const PipelineConfig& cfg, const PlainExpr& e) {
    PlainPtr lifted = lift(e);
    return simplifyId(cfg, store.normalize(*lifted));
}

Catalogue enumerateMinimal(Session& session, int maxSize) {
    if (maxSize < 1) throw UsageError("enumerateMinimal: maxSize must be positive");
    ExprStore& store = session.store;
    Background& bg = session.bg;
    int nl = store.nl();

    Catalogue cat;
    cat.bySize.resize(maxSize + 1);
    // The empty language is not catalogued: 0 cannot occur inside a
    // normalized expression, so it would never contribute to a candidate,
    // and the per-size language counts conventionally exclude it.
    cat.bySize[0] = {kOne};
    for (int x = 0; x < nl; ++x) cat.bySize[1].push_back(letterId(x));

    std::unordered_set<ExprId> tested{kZero, kOne};
    for (int x = 0; x < nl; ++x) tested.insert(letterId(x));

    // Class membership survives representative changes by lazy re-resolution.
    std::unordered_set<ExprId> catalogued;
    auto isCatalogued = [&](ExprId r) {
        if (catalogued.count(r)) return true;
        std::unordered_set<ExprId> fresh;
        for (ExprId e : catalogued) fresh.insert(bg.rep(e));
        catalogued = std::move(fresh);
        return catalogued.count(r) != 0;
    };

    auto consider = [&](ExprId c, int s) {
        if (!tested.insert(c).second) return;
        if (store.size(c) != s) return;  // collapsed; found at its own size
        ExprId r0 = bg.rep(c);
        if (isAtom(r0) || isCatalogued(r0)) return;
        session.deriv.buildDfaB(bg, r0, true);
        Mdfa m = minimize(bg, r0);
        ExprId r = session.index.unifyInto(bg, m);
        if (isCatalogued(r)) return;
        catalogued.insert(r);
        int64_t sz = store.size(r);
        if (sz > maxSize) throw InvariantViolation("enumerateMinimal: oversized representative");
        cat.bySize[sz].push_back(r);
    };

    for (int s = 2; s <= maxSize; ++s) {
        // Stars of entries one size below.
        for (ExprId e : cat.bySize[s - 1]) consider(store.star(e), s);
        // Unions: unordered pairs with sizes summing to s-1.
        for (int s1 = 0; 2 * s1 <= s - 1; ++s1) {
            int s2 = s - 1 - s1;
            for (size_t i = 0; i < cat.bySize[s1].size(); ++i) {
                size_t jFrom = (s1 == s2) ? i + 1 : 0;
                for (size_t j = jFrom; j < cat.bySize[s2].size(); ++j)
                    consider(store.union2(cat.bySize[s1][i], cat.bySize[s2][j]), s);
            }
        }
        // Concatenations: ordered pairs over every split.
        for (int s1 = 0; s1 <= s - 1; ++s1) {
            int s2 = s - 1 - s1;
            for (ExprId e1 : cat.bySize[s1])
                for (ExprId e2 : cat.bySize[s2]) consider(store.concat2(e1, e2), s);
        }
    }

    // Entries may have been superseded as representatives by tie-breaking;
    // resolve once at the end.
    for (auto& list : cat.bySize)
        for (ExprId& e : list) e = bg.rep(e);
    return cat;
}

int64_t preloadCatalogue(Session& session, const std::string& path) {
    loadSnapshotFile(session.store, session.bg, path);
    std::unordered_set<ExprId> lefts;
    std::vector<ExprId> order;
    session.bg.forEachEq([&](int32_t eq) {
        ExprId left = session.bg.leftOf(eq);
        if (lefts.insert(left).second) order.push_back(left);
    });
    // Smallest first, so earlier entries stay representatives.
    std::sort(order.begin(), order.end(), [&](ExprId a, ExprId b) {
        int64_t sa = session.store.size(a), sb = session.store.size(b);
        return sa != sb ? sa < sb : a < b;
    });
    for (ExprId left : order) session.index.indexState(session.bg, left);
    return static_cast<int64_t>(order.size());
}

}  // namespace rl
