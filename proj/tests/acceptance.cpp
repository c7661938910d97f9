// Acceptance gate: one line per criterion.  Hard criteria decide the exit
// status; the three distribution-sensitive ones (7, 8, 9) are soft — they
// report but never fail the binary, since the random-expression distribution
// is only pinned down up to the documented generator.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "rl/generate.hpp"
#include "rl/oracle.hpp"
#include "rl/simplify.hpp"

using namespace rl;

namespace {

int64_t nowMs() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool failedHard = false;

void report(int num, bool pass, bool soft, const char* what, const std::string& detail) {
    if (!pass && !soft) failedHard = true;
    std::printf("criterion %2d: %s%s — %s%s%s\n", num, pass ? "PASS" : "FAIL",
                soft ? " (soft)" : "", what, detail.empty() ? "" : "; ", detail.c_str());
    std::fflush(stdout);
}

ExprId norm(ExprStore& store, const std::string& text) {
    return store.normalize(*parsePlain(text));
}

// 1: the three-expression walkthrough ends on exactly two equations and the
// expected classes, automaton dump included, in under a second.
void criterion1() {
    int64_t t0 = nowMs();
    Session s(100000, 2);
    ExprId F = norm(s.store, "(ab*)*");
    ExprId E = norm(s.store, "(1+a)(ab*)*");
    ExprId U = norm(s.store, "(a+b)*");
    ExprId G = norm(s.store, "b*(ab*)*");
    for (ExprId e : {F, E, U}) {
        s.deriv.buildDfaB(s.bg, e, true);
        s.index.unifyInto(s.bg, minimize(s.bg, e));
    }
    ExprId H = s.store.union2(F, G);
    bool ok = s.bg.eqCount() == 2 && s.bg.rowOf(s.bg.equationOf(F)) == RightPart{1, U, kZero} &&
              s.bg.rowOf(s.bg.equationOf(U)) == RightPart{1, U, U} && s.bg.rep(E) == F &&
              s.bg.rep(F) == F && s.bg.rep(G) == U && s.bg.rep(H) == U && s.bg.rep(U) == U &&
              mdfaOf(s.bg, E).dump() ==
                  "state0: o=1 a->state1 b->0\n"
                  "state1: o=1 a->state1 b->state1\n";
    int64_t ms = nowMs() - t0;
    ok = ok && ms < 1000;
    report(1, ok, false, "worked example: 2 equations, classes {E,F}/{G,H,U}, exact dump",
           std::to_string(ms) + "ms");
}

// 2: random congruence rewrites never change the normalized identifier.
void criterion2() {
    int64_t t0 = nowMs();
    std::mt19937_64 rng(1002);
    int64_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        ExprStore store(300000, 2);
        PlainPtr e = randomPlain(rng, 1 + static_cast<int64_t>(rng() % 64), 2);
        ExprId id = store.normalize(*e);
        for (int k = 0; k < 50; ++k) {
            e = applyCongruenceRewrite(*e, rng, 2);
            if (store.normalize(*e) != id) ++bad;
        }
    }
    int64_t ms = nowMs() - t0;
    report(2, bad == 0 && ms < 30000, false,
           "1,000 expressions x 50 rewrites keep their identifier",
           std::to_string(bad) + " mismatches, " + std::to_string(ms) + "ms");
}

// 3: identifier-level algebraic laws on 10,000 random triples.
void criterion3() {
    std::mt19937_64 rng(1003);
    ExprStore store(4000000, 2);
    int64_t bad = 0;
    for (int i = 0; i < 10000; ++i) {
        ExprId a = store.normalize(*randomPlain(rng, 1 + static_cast<int64_t>(rng() % 16), 2));
        ExprId b = store.normalize(*randomPlain(rng, 1 + static_cast<int64_t>(rng() % 16), 2));
        ExprId c = store.normalize(*randomPlain(rng, 1 + static_cast<int64_t>(rng() % 16), 2));
        if (store.union2(a, b) != store.union2(b, a)) ++bad;
        if (store.union2(store.union2(a, b), c) != store.union2(a, store.union2(b, c))) ++bad;
        if (store.union2(a, a) != a) ++bad;
        if (store.concat2(store.concat2(a, b), c) != store.concat2(a, store.concat2(b, c))) ++bad;
    }
    report(3, bad == 0, false, "union/concatenation laws hold on 10,000 triples",
           std::to_string(bad) + " violations");
}

// 4: reduction order never changes the final partition.
void criterion4() {
    std::mt19937_64 rng(1004);
    int64_t bad = 0;
    for (int round = 0; round < 50; ++round) {
        // Fixed random equation set with three forced overlap sites.
        ExprStore proto(10000, 2);
        std::vector<ExprId> s;
        ExprId cur = proto.concat2(letterId(0), letterId(1));
        for (int i = 0; i < 10; ++i) {
            s.push_back(cur);
            cur = proto.concat2(letterId(0), cur);
        }
        std::vector<std::pair<ExprId, RightPart>> eqs;
        auto pick = [&]() { return s[rng() % s.size()]; };
        for (int k = 0; k < 7; ++k) eqs.push_back({pick(), {0, pick(), pick()}});
        eqs.push_back({s[0], {0, s[1], s[2]}});
        eqs.push_back({s[0], {0, s[3], s[2]}});
        eqs.push_back({s[4], {0, s[5], s[6]}});
        eqs.push_back({s[7], {0, s[5], s[6]}});

        std::map<ExprId, ExprId> expected;
        for (int perm = 0; perm < 100; ++perm) {
            ExprStore store(10000, 2);
            ExprId c2 = store.concat2(letterId(0), letterId(1));
            for (int i = 0; i < 10; ++i) c2 = store.concat2(letterId(0), c2);
            Background bg(store, 1000);
            for (auto& [left, row] : eqs) bg.addEq(left, row);
            bg.reduce([&]() {
                auto all = bg.allOverlaps();
                return all[rng() % all.size()];
            });
            std::map<ExprId, ExprId> got;
            for (ExprId e : s) got[e] = bg.rep(e);
            if (perm == 0)
                expected = got;
            else if (got != expected)
                ++bad;
        }
    }
    report(4, bad == 0, false, "50 backgrounds x 100 reduction orders, identical partitions",
           std::to_string(bad) + " divergences");
}

// 5: number of two-letter languages by minimal expression size.
void criterion5() {
    int64_t t0 = nowMs();
    Session s(3000000, 2, 500000);
    Catalogue cat = enumerateMinimal(s, 8);
    bool ok = cat.countUpTo(4) == 36 && cat.count(5) == 41 && cat.count(6) == 132 &&
              cat.count(7) == 353 && cat.count(8) == 836;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "<=4:%lld 5:%lld 6:%lld 7:%lld 8:%lld (want 36/41/132/353/836), %llds",
                  (long long)cat.countUpTo(4), (long long)cat.count(5), (long long)cat.count(6),
                  (long long)cat.count(7), (long long)cat.count(8),
                  (long long)((nowMs() - t0) / 1000));
    report(5, ok, false, "minimal-language counts per size", detail);
}

// 6: full pipeline output denotes the same language as the input.
void criterion6() {
    std::mt19937_64 rng(1006);
    PipelineConfig pu{true, true, 0};
    Session s(2000000, 2, 200000);
    int64_t bad = 0;
    for (int i = 0; i < 500; ++i) {
        PlainPtr e = randomPlain(rng, 1 + static_cast<int64_t>(rng() % 64), 2);
        ExprId r = s.simplifyPlain(pu, *e);
        if (langUpTo(*e, 6, 2) != langUpTo(s.store, r, 6)) ++bad;
        if (i % 100 == 99) s.gc({});
    }
    report(6, bad == 0, false, "500 random inputs: language identical after PU simplification",
           std::to_string(bad) + " mismatches");
}

// 7 and 8 and 9 share one corpus pass each where possible.

// 7: average minimized-automaton size of lifted expressions, sizes 256..8K.
void criterion7() {
    std::mt19937_64 rng(1007);
    Session s(2000000, 2, 200000);
    int64_t eqSum = 0, n = 0, skipped = 0;
    for (int64_t size : {256, 512, 1024, 2048, 4096, 8192}) {
        for (int i = 0; i < 1667; ++i) {
            PlainPtr e = lift(*randomPlain(rng, size, 2));
            try {
                ExprId id = s.store.normalize(*e);
                s.deriv.buildDfaB(s.bg, id, true);
                Mdfa m = minimize(s.bg, id);
                for (ExprId st : m.states)
                    if (!isAtom(st)) ++eqSum;
                ++n;
            } catch (const IdentifiersExhausted&) {
                // Some inputs have derivative closures beyond the identifier
                // budget; count them separately so the average is honest
                // about what it covers.
                ++skipped;
                s.gc({});
            }
            if (i % 400 == 399) s.gc({});
        }
    }
    double avg = n ? double(eqSum) / double(n) : 0.0;
    report(7, avg >= 8.0 && avg <= 14.0, true,
           "average minimal-automaton equation count of lifted inputs in [8,14]",
           "avg " + std::to_string(avg) + " over " + std::to_string(n) + " finished, " +
               std::to_string(skipped) + " beyond the identifier budget");
}

// 8: lifting alone compresses size-8K expressions to around 70 letters+ops.
// 9: the PU pipeline maps a fifth to a third of them to (a+b)*.
void criteria8and9() {
    std::mt19937_64 rng(1008);
    PipelineConfig pu{true, true, 0};
    Session s(2000000, 2, 200000);
    ExprId universal = s.store.star(s.store.union2(letterId(0), letterId(1)));
    int64_t liftedSum = 0, nUniversal = 0, skipped = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        PlainPtr e = randomPlain(rng, 8192, 2);
        PlainPtr l = lift(*e);
        // Lifted size is measured after normalization, which is how every
        // lifted expression actually enters the background.
        ExprId ln;
        try {
            ln = s.store.normalize(*l);
        } catch (const IdentifiersExhausted&) {
            s.gc(std::vector<ExprId>{universal});
            ln = s.store.normalize(*l);
        }
        liftedSum += s.store.size(ln);
        try {
            ExprId r = s.simplifyId(pu, ln);
            if (r == universal) ++nUniversal;
        } catch (const IdentifiersExhausted&) {
            // Pipeline ran out of identifiers on this input: fall back to
            // lift + normalize alone, which can only miss universals the
            // full pipeline would also have found.
            ++skipped;
            s.gc(std::vector<ExprId>{universal});
            if (s.store.normalize(*l) == universal) ++nUniversal;
        }
        if (i % 400 == 399) s.gc(std::vector<ExprId>{universal});
    }
    double avgLift = double(liftedSum) / n;
    double share = double(nUniversal) / n;
    report(8, avgLift >= 60.0 && avgLift <= 85.0, true,
           "average lifted (normalized) size of size-8K inputs in [60,85]",
           "avg " + std::to_string(avgLift));
    report(9, share >= 0.22 && share <= 0.35, true,
           "share of size-8K inputs simplified to (a+b)* in [22%,35%]",
           "share " + std::to_string(share * 100) + "% (" + std::to_string(skipped) +
               " by lift+normalize only)");
}

// 10: list structure against a reference model, and the background audit
// under random operation sequences.
void criterion10() {
    bool ok = true;
    std::string detail;
    try {
        // MultiList vs vector-of-sets model.
        std::mt19937_64 rng(1010);
        const int nLists = 8, range = 300;
        MultiList ml(nLists, range);
        std::vector<std::set<int32_t>> model(nLists);
        for (int op = 0; op < 100000; ++op) {
            int32_t v = static_cast<int32_t>(rng() % range);
            int l = static_cast<int>(rng() % nLists);
            switch (rng() % 3) {
                case 0: {
                    bool fresh = true;
                    for (auto& st : model) fresh = fresh && !st.count(v);
                    bool did = ml.add(l, v);
                    if (did != fresh) throw InvariantViolation("add disagreement");
                    if (did) model[l].insert(v);
                    break;
                }
                case 1: {
                    bool present = false;
                    for (auto& st : model) present = present || st.count(v);
                    bool did = ml.remove(v);
                    if (did != present) throw InvariantViolation("remove disagreement");
                    for (auto& st : model) st.erase(v);
                    break;
                }
                default: {
                    bool present = false;
                    for (auto& st : model) present = present || st.count(v);
                    if (ml.contains(v) != present) throw InvariantViolation("contains disagreement");
                    break;
                }
            }
            if (op % 10000 == 0)
                for (int k = 0; k < nLists; ++k) {
                    std::set<int32_t> seen;
                    ml.forEach(k, [&](int32_t x) { seen.insert(x); });
                    if (seen != model[k]) throw InvariantViolation("walk disagreement");
                }
        }

        // Background audit under 10,000 random operations.
        std::mt19937_64 rng2(1011);
        ExprStore store(40000, 2);
        Background bg(store, 4000);
        std::vector<ExprId> s;
        ExprId cur = store.concat2(letterId(0), letterId(1));
        for (int i = 0; i < 30; ++i) {
            s.push_back(cur);
            cur = store.concat2(letterId(0), cur);
        }
        for (int op = 0; op < 10000; ++op) {
            switch (rng2() % 5) {
                case 0:
                case 1: {
                    ExprId left = bg.rep(s[rng2() % s.size()]);
                    RightPart t{0, bg.rep(s[rng2() % s.size()]), bg.rep(s[rng2() % s.size()])};
                    bg.addEq(left, t);
                    bg.reduce();
                    break;
                }
                case 2: {
                    if (bg.eqCount() == 0) break;
                    std::vector<EqId> all;
                    bg.forEachEq([&](int32_t eq) { all.push_back(eq); });
                    bg.removeEq(all[rng2() % all.size()]);
                    break;
                }
                default:
                    bg.unify(s[rng2() % s.size()], s[rng2() % s.size()]);
            }
            if (op % 250 == 0) bg.audit();
        }
        bg.audit();
    } catch (const std::exception& ex) {
        ok = false;
        detail = ex.what();
    }
    report(10, ok, false, "list model check (1e5 ops) and background audit (1e4 ops)", detail);
}

// 11: minimization is sound against both the bisimulation oracle and the
// brute-force language oracle.
void criterion11() {
    std::mt19937_64 rng(1012);
    ExprStore store(1000000, 2);
    Background bg(store, 500000);
    DerivEngine deriv(store);
    int64_t bad = 0;
    for (int i = 0; i < 500; ++i) {
        ExprId e = store.normalize(*randomPlain(rng, 1 + static_cast<int64_t>(rng() % 12), 2));
        auto before = langUpTo(store, e, 8);
        deriv.buildDfaB(bg, e, true);
        Mdfa m = minimize(bg, e);
        if (!equivalent(bg, e, m.start)) ++bad;
        if (langUpTo(store, bg.rep(e), 8) != before) ++bad;
    }
    report(11, bad == 0, false,
           "500 inputs: minimize output bisimilar to input and language-identical at depth 8",
           std::to_string(bad) + " mismatches");
}

// Scaling smoke test: normalization cost grows at most linearly-ish.
void scalingSmoke() {
    std::mt19937_64 rng(1013);
    auto corpusTime = [&](int64_t size) {
        std::vector<PlainPtr> corpus;
        for (int i = 0; i < 600; ++i) corpus.push_back(randomPlain(rng, size, 2));
        int64_t best = -1;
        for (int rep = 0; rep < 3; ++rep) {
            ExprStore store(3000000, 2);
            int64_t t0 = nowMs();
            for (const auto& e : corpus) store.normalize(*e);
            int64_t dt = nowMs() - t0;
            if (best < 0 || dt < best) best = dt;
        }
        return best;
    };
    int64_t t1k = corpusTime(1024);
    int64_t t2k = corpusTime(2048);
    bool ok = t2k <= 3 * std::max<int64_t>(t1k, 1);
    report(12, ok, false, "size-2K corpus normalizes within 3x the size-1K corpus",
           std::to_string(t1k) + "ms vs " + std::to_string(t2k) + "ms");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criteria8and9();
    criterion10();
    criterion11();
    scalingSmoke();
    std::printf("%s\n", failedHard ? "ACCEPTANCE: FAIL" : "ACCEPTANCE: PASS");
    return failedHard ? 1 : 0;
}
