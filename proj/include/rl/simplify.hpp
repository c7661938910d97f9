#pragma once

#include "rl/snapshot.hpp"

namespace rl {

// Which steps run per subexpression: propagation (rebuild through
// representatives), and unification against the global index.  The
// automaton of each processed subexpression is built and minimized in every
// configuration; mdfaBound (0 = unlimited) skips that step for
// subexpressions larger than the bound.
struct PipelineConfig {
    bool propagate = false;
    bool unifyGlobal = false;
    int64_t mdfaBound = 0;
};

// Everything one simplification run needs, sharing a single store.
class Session {
public:
    Session(int32_t capacity, int nl, int32_t eqCapacity = 0)
        : store(capacity, nl),
          bg(store, eqCapacity > 0 ? eqCapacity : capacity),
          deriv(store) {}

    ExprStore store;
    Background bg;
    DerivEngine deriv;
    GlobalIndex index;

    // Bottom-up over the distinct subexpressions of root (children before
    // parents, ready ones processed LIFO): optionally propagate, then build
    // and minimize the automaton, then optionally unify against the index.
    // Returns the final representative of root.
    ExprId simplifyId(const PipelineConfig& cfg, ExprId root);

    // lift + normalize + simplifyId.
    ExprId simplifyPlain(const PipelineConfig& cfg, const PlainExpr& e);

    // Language-equal rebuild of e with every child replaced by its
    // representative.
    ExprId propagate(ExprId e);

    // Frees everything except the given roots, what the equations use, and
    // the union-find structure over them.  Returns identifiers freed.
    int32_t gc(std::span<const ExprId> roots) {
        return collectGarbage(store, bg, roots, &deriv, &index);
    }
};

// Catalogue of minimal expressions: one representative per language, grouped
// by size.
struct Catalogue {
    std::vector<std::vector<ExprId>> bySize;  // index = size

    int64_t count(size_t size) const {
        return size < bySize.size() ? static_cast<int64_t>(bySize[size].size()) : 0;
    }
    int64_t countUpTo(size_t size) const {
        int64_t n = 0;
        for (size_t s = 0; s <= size && s < bySize.size(); ++s) n += count(s);
        return n;
    }
};

// Enumerates every language whose minimal expression size is <= maxSize,
// bottom-up by size (the empty language is excluded: 0 never occurs inside
// a normalized expression).  Candidates of size s are unions and concatenations of
// catalogued entries with sizes summing to s-1, plus stars of size s-1
// entries; each new language is unified into the session index, so the
// session afterwards holds one class per language with its minimal
// representative.
Catalogue enumerateMinimal(Session& session, int maxSize);

// Loads a catalogue snapshot into the session and indexes every equation
// left part.  Returns the number of states indexed.
int64_t preloadCatalogue(Session& session, const std::string& path);

}  // namespace rl
