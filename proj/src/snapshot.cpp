#include "rl/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <unordered_map>

namespace rl {

namespace {

constexpr char kMagic[4] = {'R', 'L', 'B', 'G'};

template <class T>
void put(std::ostream& out, T v) {
    // Little-endian, independent of the host.
    unsigned char buf[sizeof(T)];
    for (size_t k = 0; k < sizeof(T); ++k) buf[k] = static_cast<unsigned char>(v >> (8 * k));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw InvariantViolation("snapshot: truncated input");
    T v = 0;
    for (size_t k = 0; k < sizeof(T); ++k) v |= static_cast<T>(buf[k]) << (8 * k);
    return v;
}

void markExpr(ExprStore& store, std::vector<uint8_t>& marked, std::vector<ExprId>& order,
              ExprId e) {
    // Iterative DFS emitting children before parents.
    if (isAtom(e) || marked[e]) return;
    std::vector<std::pair<ExprId, bool>> stack{{e, false}};
    while (!stack.empty()) {
        auto [cur, expanded] = stack.back();
        stack.pop_back();
        if (isAtom(cur)) continue;
        if (expanded) {
            if (!marked[cur]) {
                marked[cur] = 1;
                order.push_back(cur);
            }
            continue;
        }
        if (marked[cur]) continue;
        stack.push_back({cur, true});
        for (ExprId c : store.children(cur)) stack.push_back({c, false});
    }
}

}  // namespace

void saveSnapshot(ExprStore& store, Background& bg, std::ostream& out) {
    // Everything an equation or the union-find mentions, closed under
    // subexpressions, children first.
    std::vector<uint8_t> marked(store.capacity(), 0);
    std::vector<ExprId> order;
    std::vector<std::pair<ExprId, ExprId>> links;
    bg.forEachEq([&](int32_t eq) {
        markExpr(store, marked, order, bg.leftOf(eq));
        const RightPart& t = bg.rowOf(eq);
        for (int x = 0; x < bg.nl(); ++x) markExpr(store, marked, order, t[x + 1]);
    });
    store.forEachInUse([&](int32_t e) {
        if (bg.parentOf(e) >= 0) {
            links.push_back({e, bg.parentOf(e)});
            markExpr(store, marked, order, e);
            markExpr(store, marked, order, bg.parentOf(e));
        }
    });

    out.write(kMagic, 4);
    put<uint32_t>(out, kSnapshotVersion);
    put<uint32_t>(out, static_cast<uint32_t>(bg.nl()));
    put<uint64_t>(out, static_cast<uint64_t>(store.capacity()));

    put<uint64_t>(out, order.size());
    for (ExprId e : order) {
        put<uint64_t>(out, static_cast<uint64_t>(e));
        put<uint8_t>(out, static_cast<uint8_t>(store.type(e)));
        auto cs = store.children(e);
        put<uint16_t>(out, static_cast<uint16_t>(cs.size()));
        for (ExprId c : cs) put<uint64_t>(out, static_cast<uint64_t>(c));
    }

    put<uint64_t>(out, links.size());
    for (auto [child, parent] : links) {
        put<uint64_t>(out, static_cast<uint64_t>(child));
        put<uint64_t>(out, static_cast<uint64_t>(parent));
    }

    std::vector<EqId> eqs;
    bg.forEachEq([&](int32_t eq) { eqs.push_back(eq); });
    put<uint64_t>(out, eqs.size());
    for (EqId eq : eqs) {
        const RightPart& t = bg.rowOf(eq);
        put<uint64_t>(out, static_cast<uint64_t>(bg.leftOf(eq)));
        put<uint8_t>(out, static_cast<uint8_t>(t[0]));
        for (int x = 0; x < bg.nl(); ++x) put<uint64_t>(out, static_cast<uint64_t>(t[x + 1]));
    }
}

SnapshotLoadResult loadSnapshot(ExprStore& store, Background& bg, std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw InvariantViolation("snapshot: bad magic");
    if (get<uint32_t>(in) != kSnapshotVersion)
        throw InvariantViolation("snapshot: unsupported version");
    uint32_t nl = get<uint32_t>(in);
    if (static_cast<int>(nl) != store.nl())
        throw UsageError("snapshot: alphabet size mismatch");
    get<uint64_t>(in);  // capacity of the writing store; informative only

    SnapshotLoadResult result;
    std::unordered_map<uint64_t, ExprId> remap;
    auto resolve = [&](uint64_t old) -> ExprId {
        if (old < kAtomCount) return static_cast<ExprId>(old);
        auto it = remap.find(old);
        if (it == remap.end()) throw InvariantViolation("snapshot: forward reference");
        return it->second;
    };

    uint64_t nExpr = get<uint64_t>(in);
    for (uint64_t k = 0; k < nExpr; ++k) {
        uint64_t oldId = get<uint64_t>(in);
        auto t = static_cast<ExprType>(get<uint8_t>(in));
        uint16_t nc = get<uint16_t>(in);
        std::vector<ExprId> cs(nc);
        for (uint16_t c = 0; c < nc; ++c) cs[c] = resolve(get<uint64_t>(in));
        remap[oldId] = store.intern(t, std::move(cs));
        ++result.expressions;
    }

    uint64_t nLinks = get<uint64_t>(in);
    for (uint64_t k = 0; k < nLinks; ++k) {
        ExprId child = resolve(get<uint64_t>(in));
        ExprId parent = resolve(get<uint64_t>(in));
        bg.unify(child, parent);
        ++result.links;
    }

    uint64_t nEq = get<uint64_t>(in);
    for (uint64_t k = 0; k < nEq; ++k) {
        ExprId left = resolve(get<uint64_t>(in));
        RightPart t(store.nl() + 1);
        t[0] = get<uint8_t>(in);
        for (int x = 0; x < store.nl(); ++x) t[x + 1] = bg.rep(resolve(get<uint64_t>(in)));
        ExprId lr = bg.rep(left);
        if (!isAtom(lr)) {
            bg.addEq(lr, t);
            bg.reduce();
            ++result.equations;
        }
    }
    return result;
}

void saveSnapshotFile(ExprStore& store, Background& bg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    saveSnapshot(store, bg, out);
    if (!out) throw std::runtime_error("write error on " + path);
}

SnapshotLoadResult loadSnapshotFile(ExprStore& store, Background& bg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return loadSnapshot(store, bg, in);
}

int32_t collectGarbage(ExprStore& store, Background& bg, std::span<const ExprId> roots,
                       DerivEngine* deriv, GlobalIndex* index) {
    std::vector<uint8_t> live(store.capacity(), 0);
    std::vector<ExprId> stack;
    auto push = [&](ExprId e) {
        if (e >= kAtomCount && !live[e]) {
            live[e] = 1;
            stack.push_back(e);
        }
    };
    for (ExprId e : roots) {
        if (!store.inUse(e)) throw UsageError("collectGarbage: root not in use");
        push(e);
    }
    bg.forEachEq([&](int32_t eq) {
        push(bg.leftOf(eq));
        const RightPart& t = bg.rowOf(eq);
        for (int x = 0; x < bg.nl(); ++x) push(t[x + 1]);
    });
    while (!stack.empty()) {
        ExprId e = stack.back();
        stack.pop_back();
        for (ExprId c : store.children(e)) push(c);
        int32_t p = bg.parentOf(e);
        if (p >= 0) push(p);
    }

    std::vector<ExprId> dead;
    store.forEachInUse([&](int32_t e) {
        if (e >= kAtomCount && !live[e]) dead.push_back(e);
    });
    for (ExprId e : dead) {
        bg.clearParentRaw(e);
        store.release(e);
    }
    if (deriv) deriv->invalidate();
    if (index) index->purgeFreed(store);
    return static_cast<int32_t>(dead.size());
}

}  // namespace rl
