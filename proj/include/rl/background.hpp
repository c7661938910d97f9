#pragma once

#include <functional>
#include <vector>

#include "rl/expr.hpp"

namespace rl {

using EqId = int32_t;
using RpId = int32_t;

// A right part is the vector (o, E_a, E_b, ...): entry 0 is 0 or 1 and the
// following nl entries are the next-state expressions per letter (atoms
// appear literally).
using RightPart = std::vector<ExprId>;

// Set of equations E = o + a.E_a + b.E_b + ... over expressions of an
// ExprStore, plus a union-find over expression identifiers tracking language
// equality.  Every index needed by substitution and reduction is maintained
// incrementally in O(1) per elementary step.
//
// Atoms (0, 1, letters) never carry stored equations; their rows are
// implicit and obtained from atomRow().  Atoms may appear inside right
// parts, and may become representatives, but a non-atom is never chosen as
// the representative of an atom.
class Background {
public:
    // eqCapacity bounds simultaneously live equations and right parts.
    Background(ExprStore& store, int32_t eqCapacity);

    ExprStore& store() { return store_; }
    int nl() const { return store_.nl(); }
    int32_t eqCapacity() const { return nextIEq_.range(); }
    int32_t eqCount() const { return nextIEq_.inUseCount(); }
    int32_t rightPartCount() const { return nextIR_.inUseCount(); }

    // The implicit row of an atom: 0 is the sink, 1 accepts and maps every
    // letter to 0, a letter maps itself to 1 and the rest to 0.
    static RightPart atomRow(ExprId atom, int nl);

    // Hash lookups; kNil when absent.
    RpId findRight(const RightPart& t) const;
    EqId findEq(ExprId left, RpId r) const;

    // Inserts the equation left = t, sharing an existing right part when one
    // matches.  Returns the (possibly pre-existing) equation identifier.
    // Entries must be in range; the left part must not be an atom.
    EqId addEq(ExprId left, const RightPart& t);

    void removeEq(EqId eq);

    ExprId leftOf(EqId eq) const;
    RpId rightOf(EqId eq) const;
    const RightPart& rightPart(RpId r) const;
    const RightPart& rowOf(EqId eq) const { return rightPart(rightOf(eq)); }

    bool hasEquation(ExprId e) const;
    EqId equationOf(ExprId e) const;  // first equation with left part e, or kNil

    template <class F>
    void forEachEq(F&& f) const {
        nextIEq_.forEachInUse(std::forward<F>(f));
    }

    // Replaces every occurrence of the representative gone by keep, in left
    // parts and right parts alike.  Both must be representatives.  Does not
    // touch the union-find.
    void substitute(ExprId keep, ExprId gone);

    // A pending overlap: two distinct equations sharing a left part or a
    // right part.
    struct Overlap {
        EqId eq1, eq2;
        bool sameLeft;
    };
    bool hasOverlap() const { return !overlapLeft_.empty() || !overlapRight_.empty(); }
    // The deterministic choice: the first overlap on the shared-left list,
    // else the first on the shared-right list.
    Overlap firstOverlap() const;
    // All currently overlapping equation pairs (first two per overlap site);
    // used by randomized reduction order tests.
    std::vector<Overlap> allOverlaps() const;

    // Eliminates overlaps until none remain.  Each round takes an overlap,
    // locates a differing pair of expressions, makes the smaller one (ties:
    // smaller identifier) the representative of the other, and substitutes.
    // A custom chooser may pick any current overlap; the final partition
    // does not depend on the order.
    void reduce();
    void reduce(const std::function<Overlap()>& choose);

    // Representative lookup with full path compression.
    ExprId rep(ExprId e);

    // Declares the languages of a and b equal and restores reducedness.
    void unify(ExprId a, ExprId b);

    // Exposed for snapshots and garbage collection.
    int32_t parentOf(ExprId e) const { return tree_[e]; }
    void setParentRaw(ExprId child, ExprId parent);
    void clearParentRaw(ExprId e) { tree_[e] = kNil; }

    // Recomputes every index from the raw tables and compares; throws
    // InvariantViolation on the first discrepancy.  With requireReduced it
    // also checks that no overlap remains.
    void audit(bool requireReduced = false) const;

private:
    EqId checkEq(EqId eq) const;
    RpId checkRp(RpId r) const;
    uint64_t codeOfRight(const RightPart& t) const;
    uint64_t codeOfEq(ExprId left, RpId r) const;
    int32_t bucketOf(uint64_t code) const { return static_cast<int32_t>(code & (nBuckets_ - 1)); }
    void refreshOverlapLeft(ExprId e);
    void refreshOverlapRight(RpId r);
    void link(ExprId keep, ExprId gone);
    std::pair<ExprId, ExprId> differingPair(const Overlap& o) const;

    ExprStore& store_;
    int64_t nBuckets_;

    TwoLists nextIEq_;  // equation identifier pool
    TwoLists nextIR_;   // right-part identifier pool

    std::vector<ExprId> eqLeft_;      // per equation
    std::vector<RpId> eqRight_;       // per equation
    std::vector<RightPart> rpTab_;    // per right part

    MultiList hashEq_;   // buckets over equation identifiers
    MultiList hashRp_;   // buckets over right-part identifiers

    MultiList byLeft_;               // per expression: its equations
    MultiList byRight_;              // per right part: its equations
    std::vector<MultiList> byNext_;  // per letter x, per expression E: equations with E_x = E

    OneList overlapLeft_;   // expressions with >= 2 equations
    OneList overlapRight_;  // right parts with >= 2 equations

    std::vector<int32_t> tree_;  // union-find; negative at a root
};

}  // namespace rl
