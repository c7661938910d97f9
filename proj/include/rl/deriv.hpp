#pragma once

#include <unordered_map>
#include <vector>

#include "rl/background.hpp"

namespace rl {

// One state of a standalone derivative automaton: the source expression, its
// acceptance bit and the derivative per letter.
struct DerivRow {
    ExprId state;
    int o;
    std::vector<ExprId> next;
};

// Derivative computation over an ExprStore, memoized per (expression,
// letter).  The memo survives across calls; invalidate() drops it (after
// garbage collection).
class DerivEngine {
public:
    explicit DerivEngine(ExprStore& store) : store_(store) {}

    ExprStore& store() { return store_; }

    // d_x(e): the left quotient of e by letter x, in normal form.
    ExprId derivative(ExprId e, int x);

    // Closes e under derivatives and returns one row per reached
    // expression, the start first, letters explored in alphabet order.
    // Does not touch any background.
    std::vector<DerivRow> buildDfaE(ExprId e);

    // Adds the derivative equations of e to bg, rewriting every row through
    // representatives and reducing after each insertion.  With checkSeen, a
    // state whose representative already has an equation is not expanded.
    // Returns the representative of e afterwards.
    ExprId buildDfaB(Background& bg, ExprId e, bool checkSeen);

    int64_t derivCount() const { return derivCount_; }
    void resetDerivCount() { derivCount_ = 0; }

    void invalidate() { memo_.clear(); }

private:
    ExprStore& store_;
    std::unordered_map<uint64_t, ExprId> memo_;
    int64_t derivCount_ = 0;  // states expanded by the build functions
};

}  // namespace rl
