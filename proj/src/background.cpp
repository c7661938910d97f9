#include "rl/background.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace rl {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

inline uint64_t fnvWord(uint64_t h, uint32_t w) {
    for (int k = 0; k < 4; ++k) {
        h = (h ^ static_cast<uint8_t>(w >> (8 * k))) * kFnvPrime;
    }
    return h;
}

}  // namespace

Background::Background(ExprStore& store, int32_t eqCapacity)
    : store_(store),
      nBuckets_(std::bit_ceil(static_cast<uint64_t>(std::max<int32_t>(eqCapacity / 2, 64)))),
      nextIEq_(eqCapacity),
      nextIR_(eqCapacity),
      eqLeft_(eqCapacity, kNil),
      eqRight_(eqCapacity, kNil),
      rpTab_(eqCapacity),
      hashEq_(static_cast<int32_t>(nBuckets_), eqCapacity),
      hashRp_(static_cast<int32_t>(nBuckets_), eqCapacity),
      byLeft_(store.capacity(), eqCapacity),
      byRight_(eqCapacity, eqCapacity),
      overlapLeft_(store.capacity()),
      overlapRight_(eqCapacity),
      tree_(store.capacity(), kNil) {
    byNext_.reserve(nl());
    for (int x = 0; x < nl(); ++x) byNext_.emplace_back(store.capacity(), eqCapacity);
}

RightPart Background::atomRow(ExprId atom, int nl) {
    RightPart t(nl + 1, kZero);
    if (atom == kOne) {
        t[0] = 1;
    } else if (isLetterAtom(atom)) {
        int x = letterOf(atom);
        if (x < nl) t[x + 1] = kOne;
    } else if (atom != kZero) {
        throw UsageError("atomRow: not an atom");
    }
    return t;
}

EqId Background::checkEq(EqId eq) const {
    if (!nextIEq_.inUse(eq)) throw UsageError("Background: unknown equation identifier");
    return eq;
}

RpId Background::checkRp(RpId r) const {
    if (!nextIR_.inUse(r)) throw UsageError("Background: unknown right-part identifier");
    return r;
}

uint64_t Background::codeOfRight(const RightPart& t) const {
    uint64_t h = kFnvOffset;
    for (ExprId e : t) h = fnvWord(h, static_cast<uint32_t>(e));
    return h;
}

uint64_t Background::codeOfEq(ExprId left, RpId r) const {
    uint64_t h = fnvWord(kFnvOffset, static_cast<uint32_t>(left));
    return fnvWord(h, static_cast<uint32_t>(r));
}

RpId Background::findRight(const RightPart& t) const {
    int32_t bucket = bucketOf(codeOfRight(t));
    for (int32_t r = hashRp_.first(bucket); r != kNil; r = hashRp_.next(r))
        if (rpTab_[r] == t) return r;
    return kNil;
}

EqId Background::findEq(ExprId left, RpId r) const {
    int32_t bucket = bucketOf(codeOfEq(left, r));
    for (int32_t eq = hashEq_.first(bucket); eq != kNil; eq = hashEq_.next(eq))
        if (eqLeft_[eq] == left && eqRight_[eq] == r) return eq;
    return kNil;
}

void Background::refreshOverlapLeft(ExprId e) {
    if (byLeft_.hasAtLeastTwo(e))
        overlapLeft_.add(e);  // no-op when already queued
    else
        overlapLeft_.remove(e);
}

void Background::refreshOverlapRight(RpId r) {
    if (byRight_.hasAtLeastTwo(r))
        overlapRight_.add(r);
    else
        overlapRight_.remove(r);
}

EqId Background::addEq(ExprId left, const RightPart& t) {
    if (static_cast<int>(t.size()) != nl() + 1) throw UsageError("addEq: bad right-part width");
    if (t[0] != 0 && t[0] != 1) throw UsageError("addEq: output must be 0 or 1");
    if (isAtom(left)) throw UsageError("addEq: atoms have implicit equations");
    if (!store_.inUse(left)) throw UsageError("addEq: unknown left part");
    for (int x = 1; x <= nl(); ++x)
        if (!store_.inUse(t[x])) throw UsageError("addEq: unknown right-part entry");

    // 1. Look the right part up; with both parts already present the
    // equation may exist as well.
    RpId r = findRight(t);
    if (r != kNil) {
        EqId eq = findEq(left, r);
        if (eq != kNil) return eq;
    } else {
        // 2. New right part.
        r = nextIR_.acquire();
        rpTab_[r] = t;
        hashRp_.add(bucketOf(codeOfRight(t)), r);
    }
    // 3. New equation.
    EqId eq = nextIEq_.acquire();
    eqLeft_[eq] = left;
    eqRight_[eq] = r;
    hashEq_.add(bucketOf(codeOfEq(left, r)), eq);
    // 4. Per-left and per-right indexes.
    byLeft_.add(left, eq);
    byRight_.add(r, eq);
    // 5. Overlap worklists.
    refreshOverlapLeft(left);
    refreshOverlapRight(r);
    // 6. Per-letter next-state indexes.
    for (int x = 0; x < nl(); ++x) byNext_[x].add(t[x + 1], eq);
    return eq;
}

void Background::removeEq(EqId eq) {
    checkEq(eq);
    ExprId left = eqLeft_[eq];
    RpId r = eqRight_[eq];
    hashEq_.remove(eq);
    byLeft_.remove(eq);
    byRight_.remove(eq);
    for (int x = 0; x < nl(); ++x) byNext_[x].remove(eq);
    eqLeft_[eq] = kNil;
    eqRight_[eq] = kNil;
    nextIEq_.release(eq);
    if (byRight_.empty(r)) {
        // Orphaned right part.
        hashRp_.remove(r);
        rpTab_[r].clear();
        nextIR_.release(r);
    } else {
        refreshOverlapRight(r);
    }
    refreshOverlapLeft(left);
}

ExprId Background::leftOf(EqId eq) const { return eqLeft_[checkEq(eq)]; }
RpId Background::rightOf(EqId eq) const { return eqRight_[checkEq(eq)]; }
const RightPart& Background::rightPart(RpId r) const { return rpTab_[checkRp(r)]; }

bool Background::hasEquation(ExprId e) const { return !byLeft_.empty(e); }

EqId Background::equationOf(ExprId e) const { return byLeft_.first(e); }

void Background::substitute(ExprId keep, ExprId gone) {
    if (keep == gone) throw UsageError("substitute: identical expressions");
    // Phase 1: equations whose left part is gone move under keep.
    while (!byLeft_.empty(gone)) {
        EqId eq = byLeft_.first(gone);
        RightPart t = rpTab_[eqRight_[eq]];
        removeEq(eq);
        if (isAtom(keep)) continue;  // subsumed by the atom's implicit row
        for (int x = 1; x <= nl(); ++x)
            if (t[x] == gone) t[x] = keep;
        addEq(keep, t);
    }
    // Phase 2: occurrences of gone inside right parts, letter by letter.
    for (int x = 0; x < nl(); ++x) {
        while (!byNext_[x].empty(gone)) {
            EqId eq = byNext_[x].first(gone);
            ExprId left = eqLeft_[eq];
            RightPart t = rpTab_[eqRight_[eq]];
            removeEq(eq);
            for (int k = 1; k <= nl(); ++k)
                if (t[k] == gone) t[k] = keep;
            addEq(left, t);
        }
    }
}

Background::Overlap Background::firstOverlap() const {
    if (!overlapLeft_.empty()) {
        ExprId e = overlapLeft_.first();
        EqId eq1 = byLeft_.first(e);
        return {eq1, byLeft_.next(eq1), true};
    }
    if (!overlapRight_.empty()) {
        RpId r = overlapRight_.first();
        EqId eq1 = byRight_.first(r);
        return {eq1, byRight_.next(eq1), false};
    }
    throw UsageError("firstOverlap: no overlap pending");
}

std::vector<Background::Overlap> Background::allOverlaps() const {
    std::vector<Overlap> out;
    overlapLeft_.forEach([&](int32_t e) {
        EqId first = byLeft_.first(e);
        for (EqId a = first; a != kNil; a = byLeft_.next(a))
            for (EqId b = byLeft_.next(a); b != kNil; b = byLeft_.next(b))
                out.push_back({a, b, true});
    });
    overlapRight_.forEach([&](int32_t r) {
        EqId first = byRight_.first(r);
        for (EqId a = first; a != kNil; a = byRight_.next(a))
            for (EqId b = byRight_.next(a); b != kNil; b = byRight_.next(b))
                out.push_back({a, b, false});
    });
    return out;
}

std::pair<ExprId, ExprId> Background::differingPair(const Overlap& o) const {
    if (o.sameLeft) {
        const RightPart& t1 = rpTab_[eqRight_[o.eq1]];
        const RightPart& t2 = rpTab_[eqRight_[o.eq2]];
        if (t1[0] != t2[0])
            throw InvariantViolation(
                "reduce: two equations for one expression disagree on acceptance");
        for (int x = 1; x <= nl(); ++x)
            if (t1[x] != t2[x]) return {t1[x], t2[x]};
        throw InvariantViolation("reduce: duplicate equations sharing a left part");
    }
    return {eqLeft_[o.eq1], eqLeft_[o.eq2]};
}

void Background::link(ExprId keep, ExprId gone) {
    if (isAtom(gone))
        throw InvariantViolation("reduce: attempt to rewrite an atom into another expression");
    tree_[gone] = keep;
}

void Background::reduce() {
    while (hasOverlap()) {
        Overlap o = firstOverlap();
        auto [e1, e2] = differingPair(o);
        ExprId keep = e1, gone = e2;
        if (store_.size(e2) < store_.size(e1) ||
            (store_.size(e2) == store_.size(e1) && e2 < e1))
            std::swap(keep, gone);
        substitute(keep, gone);
        link(keep, gone);
    }
}

void Background::reduce(const std::function<Overlap()>& choose) {
    while (hasOverlap()) {
        Overlap o = choose();
        auto [e1, e2] = differingPair(o);
        ExprId keep = e1, gone = e2;
        if (store_.size(e2) < store_.size(e1) ||
            (store_.size(e2) == store_.size(e1) && e2 < e1))
            std::swap(keep, gone);
        substitute(keep, gone);
        link(keep, gone);
    }
}

ExprId Background::rep(ExprId e) {
    if (!store_.inUse(e)) throw UsageError("rep: unknown expression");
    ExprId root = e;
    while (tree_[root] >= 0) root = tree_[root];
    while (tree_[e] >= 0) {
        ExprId next = tree_[e];
        tree_[e] = root;
        e = next;
    }
    return root;
}

void Background::unify(ExprId a, ExprId b) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    ExprId keep = a, gone = b;
    if (store_.size(b) < store_.size(a) || (store_.size(b) == store_.size(a) && b < a))
        std::swap(keep, gone);
    substitute(keep, gone);
    link(keep, gone);
    reduce();
}

void Background::setParentRaw(ExprId child, ExprId parent) {
    if (!store_.inUse(child) || !store_.inUse(parent) || child == parent)
        throw UsageError("setParentRaw: bad pair");
    if (isAtom(child)) throw UsageError("setParentRaw: atoms stay roots");
    tree_[child] = parent;
}

void Background::audit(bool requireReduced) const {
    // Recompute everything from the per-equation tables.
    std::map<ExprId, std::set<EqId>> byLeft;
    std::map<RpId, std::set<EqId>> byRight;
    std::vector<std::map<ExprId, std::set<EqId>>> byNext(nl());
    std::set<RpId> liveRp;
    nextIEq_.forEachInUse([&](int32_t eq) {
        ExprId left = eqLeft_[eq];
        RpId r = eqRight_[eq];
        if (!store_.inUse(left) || isAtom(left))
            throw InvariantViolation("audit: bad left part");
        if (!nextIR_.inUse(r)) throw InvariantViolation("audit: equation with freed right part");
        const RightPart& t = rpTab_[r];
        if (static_cast<int>(t.size()) != nl() + 1)
            throw InvariantViolation("audit: bad right-part width");
        byLeft[left].insert(eq);
        byRight[r].insert(eq);
        liveRp.insert(r);
        for (int x = 0; x < nl(); ++x) byNext[x][t[x + 1]].insert(eq);
        // Hash membership.
        bool found = false;
        for (int32_t v = hashEq_.first(bucketOf(codeOfEq(left, r))); v != kNil;
             v = hashEq_.next(v))
            if (v == eq) found = true;
        if (!found) throw InvariantViolation("audit: equation missing from its hash bucket");
    });
    int32_t nRp = 0;
    nextIR_.forEachInUse([&](int32_t r) {
        ++nRp;
        if (!liveRp.count(r)) throw InvariantViolation("audit: orphaned right part");
        bool found = false;
        for (int32_t v = hashRp_.first(bucketOf(codeOfRight(rpTab_[r]))); v != kNil;
             v = hashRp_.next(v))
            if (v == r) found = true;
        if (!found) throw InvariantViolation("audit: right part missing from its hash bucket");
    });
    if (nRp != static_cast<int32_t>(liveRp.size()))
        throw InvariantViolation("audit: right-part count mismatch");

    // Compare the maintained lists with the recomputed sets.
    for (ExprId e = 0; e < store_.capacity(); ++e) {
        std::set<EqId> got;
        if (byLeft_.first(e) != kNil)
            byLeft_.forEach(e, [&](int32_t eq) { got.insert(eq); });
        auto it = byLeft.find(e);
        const std::set<EqId> want = it == byLeft.end() ? std::set<EqId>{} : it->second;
        if (got != want) throw InvariantViolation("audit: per-left index mismatch");
        if (overlapLeft_.contains(e) != (want.size() >= 2))
            throw InvariantViolation("audit: shared-left worklist mismatch");
        for (int x = 0; x < nl(); ++x) {
            std::set<EqId> gotX;
            byNext_[x].forEach(e, [&](int32_t eq) { gotX.insert(eq); });
            auto itX = byNext[x].find(e);
            const std::set<EqId> wantX = itX == byNext[x].end() ? std::set<EqId>{} : itX->second;
            if (gotX != wantX) throw InvariantViolation("audit: per-letter index mismatch");
        }
    }
    for (RpId r = 0; r < eqCapacity(); ++r) {
        std::set<EqId> got;
        byRight_.forEach(r, [&](int32_t eq) { got.insert(eq); });
        auto it = byRight.find(r);
        const std::set<EqId> want = it == byRight.end() ? std::set<EqId>{} : it->second;
        if (got != want) throw InvariantViolation("audit: per-right index mismatch");
        if (overlapRight_.contains(r) != (want.size() >= 2))
            throw InvariantViolation("audit: shared-right worklist mismatch");
    }

    // Union-find sanity: acyclic, sizes never grow toward the root.
    for (ExprId e = 0; e < store_.capacity(); ++e) {
        if (tree_[e] < 0) continue;
        if (!store_.inUse(e) || !store_.inUse(tree_[e]))
            throw InvariantViolation("audit: union-find touches freed expressions");
        if (isAtom(e)) throw InvariantViolation("audit: atom with a parent");
        ExprId cur = e;
        int steps = 0;
        while (tree_[cur] >= 0) {
            cur = tree_[cur];
            if (++steps > store_.capacity()) throw InvariantViolation("audit: union-find cycle");
        }
        if (store_.size(cur) > store_.size(e))
            throw InvariantViolation("audit: representative larger than class member");
    }

    if (requireReduced && hasOverlap())
        throw InvariantViolation("audit: overlaps remain after reduction");
}

}  // namespace rl
