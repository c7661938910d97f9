#pragma once

#include <iosfwd>
#include <string>

#include "rl/dfa.hpp"

namespace rl {

// Binary image of a background: magic "RLBG", version, alphabet size and
// capacity, then three sections.  Expressions are written children before
// parents with their current identifiers; atoms (ids < 28) are implicit.
// The union-find section lists (child, parent) pairs, the equation section
// (left, o, next per letter).  Loading remaps identifiers through interning,
// so a snapshot can be merged into a non-empty store.
constexpr uint32_t kSnapshotVersion = 1;

void saveSnapshot(ExprStore& store, Background& bg, std::ostream& out);
void saveSnapshotFile(ExprStore& store, Background& bg, const std::string& path);

struct SnapshotLoadResult {
    int64_t expressions = 0;  // records read (before deduplication)
    int64_t links = 0;        // union-find pairs applied
    int64_t equations = 0;    // equations added
};

SnapshotLoadResult loadSnapshot(ExprStore& store, Background& bg, std::istream& in);
SnapshotLoadResult loadSnapshotFile(ExprStore& store, Background& bg, const std::string& path);

// Mark-and-sweep over the expression pool.  Live: the given roots, every
// expression referenced by an equation, all their subexpressions, and every
// union-find parent of a live expression.  Freed identifiers return to the
// pool; the derivative memo is dropped and the index purged when provided.
// Returns the number of identifiers freed.
int32_t collectGarbage(ExprStore& store, Background& bg, std::span<const ExprId> roots,
                       DerivEngine* deriv = nullptr, GlobalIndex* index = nullptr);

}  // namespace rl
