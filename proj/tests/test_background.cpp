#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "rl/background.hpp"

using namespace rl;

namespace {

ExprId norm(ExprStore& store, const std::string& text) {
    return store.normalize(*parsePlain(text));
}

// A supply of distinct non-atom expressions to use as abstract states.
std::vector<ExprId> makeStates(ExprStore& store, int n) {
    std::vector<ExprId> out;
    ExprId cur = store.concat2(letterId(0), letterId(1));  // ab
    out.push_back(cur);
    for (int i = 1; i < n; ++i) {
        cur = store.concat2(letterId(0), cur);  // a...ab, all distinct sizes
        out.push_back(cur);
    }
    return out;
}

}  // namespace

TEST_CASE("equation bookkeeping") {
    ExprStore store(10000, 2);
    Background bg(store, 1000);
    auto s = makeStates(store, 4);

    EqId eq1 = bg.addEq(s[0], {1, s[1], kZero});
    CHECK(bg.eqCount() == 1);
    CHECK(bg.rightPartCount() == 1);
    // Identical insertion is free.
    CHECK(bg.addEq(s[0], {1, s[1], kZero}) == eq1);
    CHECK(bg.eqCount() == 1);
    // A second equation with the same right part shares it.
    EqId eq2 = bg.addEq(s[2], {1, s[1], kZero});
    CHECK(bg.rightPartCount() == 1);
    CHECK(bg.rightOf(eq1) == bg.rightOf(eq2));
    CHECK(bg.hasOverlap());  // shared right part
    // And one with a fresh right part does not.
    bg.addEq(s[3], {0, s[1], s[2]});
    CHECK(bg.rightPartCount() == 2);
    bg.audit();

    bg.removeEq(eq2);
    CHECK_FALSE(bg.hasOverlap());
    CHECK(bg.eqCount() == 2);
    bg.removeEq(eq1);
    CHECK(bg.rightPartCount() == 1);  // the shared right part is orphaned and freed
    bg.audit();

    CHECK_THROWS_AS(bg.addEq(kOne, {1, kZero, kZero}), UsageError);
    CHECK_THROWS_AS(bg.addEq(s[0], {2, kZero, kZero}), UsageError);
}

TEST_CASE("substitution rewrites both sides") {
    ExprStore store(10000, 2);
    Background bg(store, 1000);
    auto s = makeStates(store, 4);
    bg.addEq(s[0], {1, s[1], s[1]});
    bg.addEq(s[1], {0, s[0], s[1]});
    bg.addEq(s[2], {0, s[1], kZero});
    bg.substitute(s[3], s[1]);
    bg.audit();
    CHECK_FALSE(bg.hasEquation(s[1]));
    CHECK(bg.rowOf(bg.equationOf(s[0])) == RightPart{1, s[3], s[3]});
    CHECK(bg.rowOf(bg.equationOf(s[3])) == RightPart{0, s[0], s[3]});
    CHECK(bg.rowOf(bg.equationOf(s[2])) == RightPart{0, s[3], kZero});
}

TEST_CASE("reduction eliminates overlaps and fills the union-find") {
    ExprStore store(10000, 2);
    Background bg(store, 1000);
    auto s = makeStates(store, 4);  // sizes ascend with the index
    // Two equations sharing a right part: the smaller left wins.
    bg.addEq(s[1], {1, kZero, kZero});
    bg.addEq(s[2], {1, kZero, kZero});
    bg.reduce();
    bg.audit(true);
    CHECK(bg.rep(s[2]) == s[1]);
    CHECK(bg.eqCount() == 1);

    // Two equations on one left part differing at one letter.
    bg.addEq(s[0], {0, s[1], kZero});
    bg.addEq(s[0], {0, s[3], kZero});
    bg.reduce();
    bg.audit(true);
    CHECK(bg.rep(s[3]) == s[1]);
}

TEST_CASE("conflicting acceptance bits are an invariant violation") {
    ExprStore store(10000, 2);
    Background bg(store, 1000);
    auto s = makeStates(store, 2);
    bg.addEq(s[0], {0, kZero, kZero});
    bg.addEq(s[0], {1, kZero, kZero});
    CHECK_THROWS_AS(bg.reduce(), InvariantViolation);
}

TEST_CASE("representative lookup compresses paths") {
    ExprStore store(10000, 2);
    Background bg(store, 1000);
    auto s = makeStates(store, 5);
    bg.setParentRaw(s[4], s[3]);
    bg.setParentRaw(s[3], s[2]);
    bg.setParentRaw(s[2], s[0]);
    CHECK(bg.rep(s[4]) == s[0]);
    CHECK(bg.parentOf(s[4]) == s[0]);  // compressed
    CHECK(bg.parentOf(s[3]) == s[0]);
    CHECK(bg.rep(s[1]) == s[1]);
}

TEST_CASE("unify joins classes and keeps the smaller expression") {
    ExprStore store(10000, 2);
    Background bg(store, 1000);
    ExprId small = norm(store, "a*");
    ExprId big = norm(store, "aaa*");
    bg.addEq(big, {0, big, kZero});
    bg.unify(big, small);
    CHECK(bg.rep(big) == small);
    CHECK(bg.hasEquation(small));
    CHECK_FALSE(bg.hasEquation(big));
    bg.audit(true);
}

TEST_CASE("reduction order does not change the final partition") {
    // Small synthetic overlap clusters resolved under random orders.
    std::mt19937_64 rng(31);
    for (int round = 0; round < 20; ++round) {
        ExprStore proto(10000, 2);
        auto s = makeStates(proto, 8);
        // Build one fixed random set of equations with forced overlaps.
        std::vector<std::pair<ExprId, RightPart>> eqs;
        auto pick = [&]() { return s[rng() % s.size()]; };
        for (int k = 0; k < 6; ++k) eqs.push_back({pick(), {0, pick(), pick()}});
        eqs.push_back({s[0], {0, s[1], s[2]}});
        eqs.push_back({s[0], {0, s[3], s[2]}});
        eqs.push_back({s[4], {0, s[5], s[6]}});

        std::map<ExprId, ExprId> expected;
        for (int perm = 0; perm < 10; ++perm) {
            ExprStore store(10000, 2);
            auto t = makeStates(store, 8);
            REQUIRE(t == s);  // same identifiers in a fresh store
            Background bg(store, 1000);
            for (auto& [left, row] : eqs) bg.addEq(left, row);
            bg.reduce([&]() {
                auto all = bg.allOverlaps();
                return all[rng() % all.size()];
            });
            bg.audit(true);
            std::map<ExprId, ExprId> got;
            for (ExprId e : s) got[e] = bg.rep(e);
            if (perm == 0)
                expected = got;
            else
                REQUIRE(got == expected);
        }
    }
}

TEST_CASE("randomized operations keep every index consistent") {
    std::mt19937_64 rng(37);
    ExprStore store(20000, 2);
    Background bg(store, 2000);
    auto s = makeStates(store, 20);
    std::vector<EqId> live;
    for (int op = 0; op < 3000; ++op) {
        switch (rng() % 5) {
            case 0:
            case 1: {
                ExprId left = bg.rep(s[rng() % s.size()]);
                if (isAtom(left)) break;  // its class merged into an atom's
                RightPart t{0, bg.rep(s[rng() % s.size()]), bg.rep(s[rng() % s.size()])};
                if (rng() % 4 == 0) t[1] = kZero;
                bg.addEq(left, t);
                bg.reduce();
                break;
            }
            case 2: {
                if (bg.eqCount() == 0) break;
                // Remove an arbitrary live equation.
                std::vector<EqId> all;
                bg.forEachEq([&](int32_t eq) { all.push_back(eq); });
                bg.removeEq(all[rng() % all.size()]);
                break;
            }
            default: {
                bg.unify(s[rng() % s.size()], s[rng() % s.size()]);
                break;
            }
        }
        if (op % 100 == 0) bg.audit();
    }
    bg.audit();
}
