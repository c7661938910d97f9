#pragma once

#include <random>

#include "rl/plain.hpp"

namespace rl {

// Expression of exactly the requested size (letters plus operators), drawn
// uniformly from all expressions of that size whose leaves are letters:
// node kind and split sizes are weighted by exact counts of the candidate
// subtrees, so every distinct tree of the requested size is equally likely.
// 0 and 1 never appear as leaves (they are free under the size metric, so
// admitting them would make the sample space infinite); size 0, which has
// no letter-leaf expression, draws 0 or 1 by a coin flip.
PlainPtr randomPlain(std::mt19937_64& rng, int64_t size, int nl);

// True iff a and b are the same tree.
bool equalPlain(const PlainExpr& a, const PlainExpr& b);

// Applies one randomly chosen instance of the congruence axioms, in either
// direction, somewhere in e: idempotence, neutral 0 for +, absorbing 0 and
// neutral 1 for ., associativity of + and ., commutativity of +, 0* = 1* = 1
// and E** = E*.  Expanding directions that need fresh material draw a small
// random expression.  Returns a rewritten copy; the language never changes.
PlainPtr applyCongruenceRewrite(const PlainExpr& e, std::mt19937_64& rng, int nl);

}  // namespace rl
