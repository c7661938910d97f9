#pragma once

#include <set>
#include <string>

#include "rl/expr.hpp"

namespace rl {

// Brute-force reference semantics: every word of the language with length
// at most maxLen.  Exponential; for tests only.
std::set<std::string> langUpTo(const PlainExpr& e, int maxLen, int nl);
std::set<std::string> langUpTo(const ExprStore& store, ExprId e, int maxLen);

}  // namespace rl
