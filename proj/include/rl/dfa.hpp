#pragma once

#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rl/deriv.hpp"

namespace rl {

// A deterministic automaton over expression identifiers, states listed in
// breadth-first order from the start (letters in alphabet order), so the
// listing itself is the canonical naming.
struct Mdfa {
    ExprId start = kNil;
    int nl = 0;
    std::vector<ExprId> states;           // BFS order; may include atoms
    std::vector<RightPart> rows;          // per state: (o, next per letter)

    // "stateN: o=<0|1> a-><tgt> b-><tgt>" per line; targets that are atoms
    // print as 0, 1 or the letter.
    std::string dump() const;
};

// Reads the automaton reachable from rep(e) out of the background.  Every
// reachable non-atom state must carry an equation.
Mdfa mdfaOf(Background& bg, ExprId e);

// Moore partition refinement over explicit rows.  Atoms are kept as frozen
// singleton blocks (no other normalized expression shares an atom's
// language).  Returns the blocks; states absent from rows but referenced as
// targets must be atoms.
std::vector<std::vector<ExprId>> equivClasses(const std::map<ExprId, RightPart>& rows, int nl);

// Merges language-equal states of the automaton of e via unify and returns
// the minimal automaton of rep(e).
Mdfa minimize(Background& bg, ExprId e);

// Language equality by bisimulation over the equations of bg (atoms use
// their implicit rows).  Both arguments need complete equation sets.
bool equivalent(Background& bg, ExprId a, ExprId b);

// Renaming-invariant hash of an automaton shape: the BFS-canonical sequence
// of (o, targets), atoms hashed by their fixed identifiers.
uint64_t shapeHash(const Mdfa& m);

// Hash-indexed set of automaton states, one entry per language.
class GlobalIndex {
public:
    bool containsRep(ExprId r) const { return members_.count(r) != 0; }
    int64_t entryCount() const { return static_cast<int64_t>(members_.size()); }

    // Processes every non-atom state of m (start first): a state whose class
    // is already indexed is skipped; a state equivalent to an indexed entry
    // is unified with it (one list entry survives); anything else becomes a
    // new entry.  Returns the representative of the start afterwards.
    ExprId unifyInto(Background& bg, const Mdfa& m);

    // Indexes a single state the same way without touching the rest of its
    // automaton.  Returns the surviving representative.
    ExprId indexState(Background& bg, ExprId state);

    // Drops entries whose expression is no longer in use (after garbage
    // collection with roots that kept all entries this is a no-op).
    void purgeFreed(const ExprStore& store);

private:
    ExprId probe(Background& bg, ExprId r);

    std::unordered_map<uint64_t, std::vector<ExprId>> buckets_;
    std::unordered_set<ExprId> members_;
};

}  // namespace rl
