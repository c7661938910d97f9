#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "rl/multilist.hpp"

using namespace rl;

TEST_CASE("multilist basics") {
    MultiList ml(3, 10);
    CHECK(ml.empty(0));
    CHECK(ml.first(1) == kNil);
    CHECK(ml.add(0, 5));
    CHECK(ml.add(0, 7));
    CHECK(ml.contains(5));
    CHECK(ml.contains(7));
    CHECK_FALSE(ml.contains(3));
    // Prepend order: 7 then 5.
    CHECK(ml.first(0) == 7);
    CHECK(ml.next(7) == 5);
    CHECK(ml.next(5) == kNil);
    // A value belongs to at most one list.
    CHECK_FALSE(ml.add(1, 5));
    CHECK(ml.remove(5));
    CHECK_FALSE(ml.remove(5));
    CHECK(ml.add(1, 5));
    CHECK(ml.first(1) == 5);
    CHECK(ml.length(0) == 1);
}

TEST_CASE("multilist value zero is unambiguous") {
    MultiList ml(2, 4);
    CHECK_FALSE(ml.contains(0));
    CHECK(ml.add(1, 0));
    CHECK(ml.contains(0));
    CHECK(ml.remove(0));
    CHECK_FALSE(ml.contains(0));
}

TEST_CASE("multilist traversal tolerates removing the current value") {
    MultiList ml(1, 10);
    for (int v : {9, 7, 5, 3}) ml.add(0, v);  // list reads 3,5,7,9
    std::vector<int> seen;
    ml.forEach(0, [&](int32_t v) {
        seen.push_back(v);
        if (v == 5) ml.remove(5);
    });
    CHECK(seen == std::vector<int>{3, 5, 7, 9});
    CHECK_FALSE(ml.contains(5));
    CHECK(ml.length(0) == 3);
}

TEST_CASE("multilist range checks") {
    MultiList ml(2, 5);
    CHECK_THROWS_AS(ml.add(2, 0), UsageError);
    CHECK_THROWS_AS(ml.add(0, 5), UsageError);
    CHECK_THROWS_AS(ml.contains(-1), UsageError);
}

TEST_CASE("twolists pool") {
    TwoLists pool(5);
    CHECK(pool.freeCount() == 5);
    CHECK(pool.acquire() == 0);
    CHECK(pool.acquire() == 1);
    CHECK(pool.acquire(4) == 4);
    CHECK(pool.inUseCount() == 3);
    CHECK(pool.inUse(4));
    CHECK_FALSE(pool.inUse(3));
    CHECK_THROWS_AS(pool.acquire(4), UsageError);
    pool.release(1);
    CHECK_FALSE(pool.inUse(1));
    CHECK_THROWS_AS(pool.release(1), UsageError);
    pool.acquire();
    pool.acquire();
    pool.acquire();
    CHECK(pool.freeCount() == 0);
    CHECK_THROWS_AS(pool.acquire(), IdentifiersExhausted);
}

TEST_CASE("multilist randomized model check") {
    const int kLists = 8, kRange = 200, kOps = 100000;
    MultiList ml(kLists, kRange);
    std::vector<std::set<int32_t>> model(kLists);
    auto listOf = [&](int32_t v) {
        for (int i = 0; i < kLists; ++i)
            if (model[i].count(v)) return i;
        return -1;
    };
    std::mt19937_64 rng(42);
    for (int op = 0; op < kOps; ++op) {
        int32_t v = static_cast<int32_t>(rng() % kRange);
        switch (rng() % 3) {
            case 0: {
                int i = static_cast<int>(rng() % kLists);
                bool ok = ml.add(i, v);
                REQUIRE(ok == (listOf(v) == -1));
                if (ok) model[i].insert(v);
                break;
            }
            case 1: {
                int where = listOf(v);
                REQUIRE(ml.remove(v) == (where != -1));
                if (where != -1) model[where].erase(v);
                break;
            }
            default:
                REQUIRE(ml.contains(v) == (listOf(v) != -1));
                break;
        }
    }
    // Full sweep at the end: contents and order bookkeeping agree.
    for (int i = 0; i < kLists; ++i) {
        std::set<int32_t> got;
        ml.forEach(i, [&](int32_t v) { got.insert(v); });
        REQUIRE(got == model[i]);
    }
}
