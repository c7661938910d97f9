#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rl/errors.hpp"

namespace rl {

constexpr int32_t kNil = -1;

// n disjoint intrusive doubly-linked lists over the value range [0, m).
// add/remove/contains are O(1); traversal is O(length).  A value belongs to
// at most one list.  Heads store their list index encoded in pred as
// -2 - listIndex; a free value has pred == succ == 0 plus a cleared
// membership bit (the bit disambiguates value 0).
class MultiList {
public:
    MultiList(int32_t lists, int32_t range)
        : first_(lists, kNil), pred_(range, 0), succ_(range, 0), member_(range, 0) {}

    int32_t listCount() const { return static_cast<int32_t>(first_.size()); }
    int32_t range() const { return static_cast<int32_t>(pred_.size()); }

    // Prepends v to list i.  Returns false (and changes nothing) if v
    // already belongs to some list.
    bool add(int32_t i, int32_t v) {
        checkList(i);
        checkValue(v);
        if (member_[v]) return false;
        int32_t old = first_[i];
        first_[i] = v;
        pred_[v] = -2 - i;
        succ_[v] = old;
        if (old != kNil) pred_[old] = v;
        member_[v] = 1;
        return true;
    }

    // Unlinks v from whatever list holds it.  Returns false if v is free.
    bool remove(int32_t v) {
        checkValue(v);
        if (!member_[v]) return false;
        int32_t p = pred_[v];
        int32_t s = succ_[v];
        if (p <= -2) {
            int32_t i = -2 - p;
            first_[i] = s;
            if (s != kNil) pred_[s] = p;
        } else {
            succ_[p] = s;
            if (s != kNil) pred_[s] = p;
        }
        pred_[v] = 0;
        succ_[v] = 0;
        member_[v] = 0;
        return true;
    }

    bool contains(int32_t v) const {
        checkValue(v);
        return member_[v] != 0;
    }

    bool empty(int32_t i) const {
        checkList(i);
        return first_[i] == kNil;
    }

    int32_t first(int32_t i) const {
        checkList(i);
        return first_[i];
    }

    // Successor of a member, or kNil at the tail.
    int32_t next(int32_t v) const {
        checkValue(v);
        return succ_[v];
    }

    // True iff list i holds two or more values.
    bool hasAtLeastTwo(int32_t i) const {
        int32_t f = first(i);
        return f != kNil && succ_[f] != kNil;
    }

    // Visits list i front to back.  The successor is captured before each
    // call, so f may remove the current value.  Values prepended during the
    // walk are not visited.
    template <class F>
    void forEach(int32_t i, F&& f) const {
        int32_t v = first(i);
        while (v != kNil) {
            int32_t nxt = succ_[v];
            f(v);
            v = nxt;
        }
    }

    int32_t length(int32_t i) const {
        int32_t n = 0;
        forEach(i, [&](int32_t) { ++n; });
        return n;
    }

private:
    void checkList(int32_t i) const {
        if (i < 0 || i >= listCount()) throw UsageError("MultiList: list index out of range");
    }
    void checkValue(int32_t v) const {
        if (v < 0 || v >= range()) throw UsageError("MultiList: value out of range");
    }

    std::vector<int32_t> first_;
    std::vector<int32_t> pred_;
    std::vector<int32_t> succ_;
    std::vector<uint8_t> member_;
};

// MultiList with a single, implicit list.
class OneList {
public:
    explicit OneList(int32_t range) : ml_(1, range) {}

    bool add(int32_t v) { return ml_.add(0, v); }
    bool remove(int32_t v) { return ml_.remove(v); }
    bool contains(int32_t v) const { return ml_.contains(v); }
    bool empty() const { return ml_.empty(0); }
    int32_t first() const { return ml_.first(0); }
    int32_t next(int32_t v) const { return ml_.next(v); }
    int32_t length() const { return ml_.length(0); }

    template <class F>
    void forEach(F&& f) const {
        ml_.forEach(0, std::forward<F>(f));
    }

private:
    MultiList ml_;
};

// Identifier pool: list 0 holds the identifiers in use, list 1 the free ones.
// A side array remembers which of the two lists each value sits in, so every
// operation stays O(1).
class TwoLists {
public:
    explicit TwoLists(int32_t range) : ml_(2, range), where_(range, kFree) {
        // Reverse insertion so the free list starts as 0, 1, ..., range-1.
        for (int32_t v = range - 1; v >= 0; --v) ml_.add(kFree, v);
        freeCount_ = range;
    }

    int32_t range() const { return ml_.range(); }
    int32_t inUseCount() const { return ml_.range() - freeCount_; }
    int32_t freeCount() const { return freeCount_; }

    // Moves an identifier from the free list to the in-use list.  With no
    // argument the first free identifier is taken.
    int32_t acquire(std::optional<int32_t> v = std::nullopt) {
        int32_t id;
        if (v) {
            id = *v;
            if (id < 0 || id >= range() || where_[id] != kFree)
                throw UsageError("TwoLists: explicit identifier not free");
        } else {
            id = ml_.first(kFree);
            if (id == kNil) throw IdentifiersExhausted();
        }
        ml_.remove(id);
        ml_.add(kInUse, id);
        where_[id] = kInUse;
        --freeCount_;
        return id;
    }

    void release(int32_t v) {
        if (v < 0 || v >= range() || where_[v] != kInUse)
            throw UsageError("TwoLists: releasing an identifier that is not in use");
        ml_.remove(v);
        ml_.add(kFree, v);
        where_[v] = kFree;
        ++freeCount_;
    }

    bool inUse(int32_t v) const { return v >= 0 && v < range() && where_[v] == kInUse; }

    template <class F>
    void forEachInUse(F&& f) const {
        ml_.forEach(kInUse, std::forward<F>(f));
    }

private:
    static constexpr int32_t kInUse = 0;
    static constexpr int32_t kFree = 1;

    MultiList ml_;
    std::vector<uint8_t> where_;
    int32_t freeCount_;
};

}  // namespace rl
