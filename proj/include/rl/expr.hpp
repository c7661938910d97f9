#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rl/multilist.hpp"
#include "rl/plain.hpp"

namespace rl {

using ExprId = int32_t;

constexpr ExprId kZero = 0;
constexpr ExprId kOne = 1;
constexpr int kAtomCount = 28;  // 0, 1 and the 26 letters

inline ExprId letterId(int x) { return 2 + x; }
inline bool isAtom(ExprId e) { return e < kAtomCount; }
inline bool isLetterAtom(ExprId e) { return e >= 2 && e < kAtomCount; }
inline int letterOf(ExprId e) { return e - 2; }

// Interned, normalized expressions.  Equal structure means equal identifier,
// so language-preserving construction plus interning makes structural
// equality an integer comparison.
//
// Normal form: a union has >= 2 children, none of them 0 or a union, in
// strictly ascending identifier order; a concatenation has exactly 2
// children, neither 0 nor 1, the left one not a concatenation; a star child
// is not 0, 1 or a star.
class ExprStore {
public:
    struct Stats {
        int64_t searchesEmpty = 0;     // lookups landing on an empty bucket
        int64_t searchesNonEmpty = 0;  // lookups walking a non-empty bucket
        int64_t iterations = 0;        // entries visited during walks
        int64_t dejaVu = 0;            // lookups that found the expression
    };

    explicit ExprStore(int32_t capacity = 5'000'000, int nl = 2);

    int nl() const { return nl_; }
    int32_t capacity() const { return pool_.range(); }
    int32_t inUseCount() const { return pool_.inUseCount(); }
    int32_t freeCount() const { return pool_.freeCount(); }
    bool inUse(ExprId e) const { return pool_.inUse(e); }

    ExprType type(ExprId e) const { return type_[check(e)]; }
    std::span<const ExprId> children(ExprId e) const {
        check(e);
        return children_[e];
    }
    int64_t size(ExprId e) const { return size_[check(e)]; }
    bool nullable(ExprId e) const { return nullable_[check(e)] != 0; }

    // Looks the structure up and creates it if absent.  The children must
    // already satisfy the normal-form constraints for the given type; this
    // is the raw layer under the smart constructors below.
    ExprId intern(ExprType t, std::vector<ExprId> children);

    // Normalizing constructors.
    ExprId union2(ExprId a, ExprId b);
    ExprId concat2(ExprId a, ExprId b);
    ExprId star(ExprId e);
    ExprId unionN(std::span<const ExprId> es);
    ExprId concatN(std::span<const ExprId> es);

    // Appends the union terms of e: its children if e is a union, nothing
    // for 0, e itself otherwise.
    void terms(ExprId e, std::vector<ExprId>& out) const;
    // Concatenation factors, left to right (a concatenation nests to the
    // right, so this unfolds the spine).
    void factors(ExprId e, std::vector<ExprId>& out) const;

    // nary=true flattens +/concatenation chains and uses the n-ary
    // constructors; nary=false folds pairwise.  Both yield the same result.
    ExprId normalize(const PlainExpr& e, bool nary = true);

    std::string print(ExprId e) const;

    const Stats& stats() const { return stats_; }
    void resetStats() { stats_ = Stats{}; }

    template <class F>
    void forEachInUse(F&& f) const {
        pool_.forEachInUse(std::forward<F>(f));
    }

    // Unlinks e from its hash bucket and returns its identifier to the free
    // list.  Only for garbage collection; the caller guarantees nothing in
    // use refers to e.
    void release(ExprId e);

    // Structural self-check (hash membership, normal form, caches); throws
    // InvariantViolation on failure.
    void audit() const;

private:
    ExprId check(ExprId e) const {
        if (!pool_.inUse(e)) throw UsageError("ExprStore: unknown expression identifier");
        return e;
    }
    uint64_t codeOf(ExprType t, std::span<const ExprId> children) const;
    int32_t bucketOf(uint64_t code) const { return static_cast<int32_t>(code & (nBuckets_ - 1)); }
    void validate(ExprType t, std::span<const ExprId> children) const;

    int nl_;
    TwoLists pool_;
    int64_t nBuckets_;
    MultiList hashTable_;  // nBuckets_ lists over expression identifiers
    std::vector<ExprType> type_;
    std::vector<std::vector<ExprId>> children_;
    std::vector<uint64_t> code_;
    std::vector<int64_t> size_;
    std::vector<uint8_t> nullable_;
    mutable Stats stats_;
};

}  // namespace rl
