#include "rl/generate.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace rl {

namespace {

// Per-alphabet tables for uniform sampling over all expressions of a given
// size whose leaves are letters (no 0/1 leaves).  logCount[s] is the log of
// the number of such expressions of size exactly s; logSplit[s] is the log
// of the summed products count(s1)*count(s-1-s1) over all binary splits.
// Counts grow super-exponentially, so everything is kept in log space.
struct CountTable {
    std::vector<double> logCount;  // logCount[0] = -inf (no size-0 expression)
    std::vector<double> logSplit;

    static double logAdd(double a, double b) {
        if (a < b) std::swap(a, b);
        if (b == -std::numeric_limits<double>::infinity()) return a;
        return a + std::log1p(std::exp(b - a));
    }

    void grow(int nl, int64_t maxSize) {
        const double ninf = -std::numeric_limits<double>::infinity();
        if (logCount.empty()) {
            logCount = {ninf, std::log(static_cast<double>(nl))};
            logSplit = {ninf, ninf};
        }
        for (int64_t s = static_cast<int64_t>(logCount.size()); s <= maxSize; ++s) {
            double split = ninf;
            for (int64_t s1 = 1; s1 <= s - 2; ++s1)
                split = logAdd(split, logCount[s1] + logCount[s - 1 - s1]);
            logSplit.push_back(split);
            // star of size s-1, plus a union and a concatenation per split
            logCount.push_back(logAdd(logCount[s - 1], std::log(2.0) + split));
        }
    }
};

CountTable& tableFor(int nl, int64_t size) {
    thread_local std::map<int, CountTable> cache;
    CountTable& t = cache[nl];
    t.grow(nl, size);
    return t;
}

PlainPtr samplePlain(std::mt19937_64& rng, int64_t size, int nl, const CountTable& t) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (size == 1) return PlainExpr::ltr(std::uniform_int_distribution<int>(0, nl - 1)(rng));
    if (size == 2) return PlainExpr::star(samplePlain(rng, 1, nl, t));
    double r = unit(rng);
    if (r < std::exp(t.logCount[size - 1] - t.logCount[size]))
        return PlainExpr::star(samplePlain(rng, size - 1, nl, t));
    bool isUnion = static_cast<bool>(rng() & 1);
    // Split sizes proportionally to count(s1)*count(size-1-s1).  That weight
    // is largest at the extreme splits, so scan candidates from both ends.
    double target = unit(rng), acc = 0.0;
    int64_t s1 = 1;
    for (int64_t k = 0; k <= size - 3; ++k) {
        s1 = (k & 1) ? size - 2 - k / 2 : 1 + k / 2;
        acc += std::exp(t.logCount[s1] + t.logCount[size - 1 - s1] - t.logSplit[size]);
        if (target <= acc) break;
    }
    PlainPtr a = samplePlain(rng, s1, nl, t);
    PlainPtr b = samplePlain(rng, size - 1 - s1, nl, t);
    return isUnion ? PlainExpr::alt(std::move(a), std::move(b))
                   : PlainExpr::cat(std::move(a), std::move(b));
}

}  // namespace

PlainPtr randomPlain(std::mt19937_64& rng, int64_t size, int nl) {
    if (size < 0) throw UsageError("randomPlain: negative size");
    if (nl < 1 || nl > 26) throw UsageError("randomPlain: alphabet size out of range");
    if (size == 0)
        return (rng() & 1) ? PlainExpr::one() : PlainExpr::zero();
    return samplePlain(rng, size, nl, tableFor(nl, size));
}

bool equalPlain(const PlainExpr& a, const PlainExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprType::Zero:
        case ExprType::One: return true;
        case ExprType::Letter: return a.letter == b.letter;
        case ExprType::Star: return equalPlain(*a.left, *b.left);
        default: return equalPlain(*a.left, *b.left) && equalPlain(*a.right, *b.right);
    }
}

namespace {

// A rewrite instance: where (node path, 0 = left/child, 1 = right) plus what
// to do there.
struct Site {
    std::vector<int> path;
    int rule;
};

enum Rule {
    // contracting / reassociating
    rIdemDown,        // A+A -> A
    rZeroPlusLeft,    // 0+E -> E
    rZeroPlusRight,   // E+0 -> E
    rZeroCatAny,      // 0.E or E.0 -> 0
    rOneCatLeft,      // 1.E -> E
    rOneCatRight,     // E.1 -> E
    rPlusAssocR,      // (A+B)+C -> A+(B+C)
    rPlusAssocL,      // A+(B+C) -> (A+B)+C
    rPlusComm,        // A+B -> B+A
    rCatAssocR,       // (A.B).C -> A.(B.C)
    rCatAssocL,       // A.(B.C) -> (A.B).C
    rStarZeroOne,     // 0* or 1* -> 1
    rStarStarDown,    // E** -> E*
    // expanding
    rIdemUp,          // E -> E+E
    rZeroPlusUpL,     // E -> 0+E
    rZeroPlusUpR,     // E -> E+0
    rZeroCatUpL,      // 0 -> 0.R (R random)
    rZeroCatUpR,      // 0 -> R.0
    rOneCatUpL,       // E -> 1.E
    rOneCatUpR,       // E -> E.1
    rOneStarUp,       // 1 -> 0* or 1*
    rStarStarUp,      // E* -> E**
};

void collect(const PlainExpr& e, std::vector<int>& path, std::vector<Site>& out) {
    auto site = [&](int rule) { out.push_back({path, rule}); };
    // Expanding rules apply everywhere.
    site(rIdemUp);
    site(rZeroPlusUpL);
    site(rZeroPlusUpR);
    site(rOneCatUpL);
    site(rOneCatUpR);
    switch (e.kind) {
        case ExprType::Zero:
            site(rZeroCatUpL);
            site(rZeroCatUpR);
            break;
        case ExprType::One:
            site(rOneStarUp);
            break;
        case ExprType::Letter:
            break;
        case ExprType::Union:
            if (equalPlain(*e.left, *e.right)) site(rIdemDown);
            if (e.left->kind == ExprType::Zero) site(rZeroPlusLeft);
            if (e.right->kind == ExprType::Zero) site(rZeroPlusRight);
            if (e.left->kind == ExprType::Union) site(rPlusAssocR);
            if (e.right->kind == ExprType::Union) site(rPlusAssocL);
            site(rPlusComm);
            break;
        case ExprType::Concat:
            if (e.left->kind == ExprType::Zero || e.right->kind == ExprType::Zero)
                site(rZeroCatAny);
            if (e.left->kind == ExprType::One) site(rOneCatLeft);
            if (e.right->kind == ExprType::One) site(rOneCatRight);
            if (e.left->kind == ExprType::Concat) site(rCatAssocR);
            if (e.right->kind == ExprType::Concat) site(rCatAssocL);
            break;
        case ExprType::Star:
            if (e.left->kind == ExprType::Zero || e.left->kind == ExprType::One)
                site(rStarZeroOne);
            if (e.left->kind == ExprType::Star) site(rStarStarDown);
            site(rStarStarUp);
            break;
    }
    if (e.kind == ExprType::Union || e.kind == ExprType::Concat || e.kind == ExprType::Star) {
        path.push_back(0);
        collect(*e.left, path, out);
        path.pop_back();
        if (e.right) {
            path.push_back(1);
            collect(*e.right, path, out);
            path.pop_back();
        }
    }
}

PlainPtr applyAt(const PlainExpr& e, const std::vector<int>& path, size_t depth, int rule,
                 std::mt19937_64& rng, int nl) {
    if (depth < path.size()) {
        PlainPtr left = path[depth] == 0 ? applyAt(*e.left, path, depth + 1, rule, rng, nl)
                                         : clonePlain(*e.left);
        PlainPtr right;
        if (e.right)
            right = path[depth] == 1 ? applyAt(*e.right, path, depth + 1, rule, rng, nl)
                                     : clonePlain(*e.right);
        auto n = std::make_unique<PlainExpr>();
        n->kind = e.kind;
        n->letter = e.letter;
        n->left = std::move(left);
        n->right = std::move(right);
        return n;
    }
    auto C = [&](const PlainExpr& x) { return clonePlain(x); };
    switch (rule) {
        case rIdemDown: return C(*e.left);
        case rZeroPlusLeft: return C(*e.right);
        case rZeroPlusRight: return C(*e.left);
        case rZeroCatAny: return PlainExpr::zero();
        case rOneCatLeft: return C(*e.right);
        case rOneCatRight: return C(*e.left);
        case rPlusAssocR:
            return PlainExpr::alt(C(*e.left->left), PlainExpr::alt(C(*e.left->right), C(*e.right)));
        case rPlusAssocL:
            return PlainExpr::alt(PlainExpr::alt(C(*e.left), C(*e.right->left)), C(*e.right->right));
        case rPlusComm: return PlainExpr::alt(C(*e.right), C(*e.left));
        case rCatAssocR:
            return PlainExpr::cat(C(*e.left->left), PlainExpr::cat(C(*e.left->right), C(*e.right)));
        case rCatAssocL:
            return PlainExpr::cat(PlainExpr::cat(C(*e.left), C(*e.right->left)), C(*e.right->right));
        case rStarZeroOne: return PlainExpr::one();
        case rStarStarDown: return C(*e.left);
        case rIdemUp: return PlainExpr::alt(C(e), C(e));
        case rZeroPlusUpL: return PlainExpr::alt(PlainExpr::zero(), C(e));
        case rZeroPlusUpR: return PlainExpr::alt(C(e), PlainExpr::zero());
        case rZeroCatUpL: return PlainExpr::cat(PlainExpr::zero(), randomPlain(rng, 2, nl));
        case rZeroCatUpR: return PlainExpr::cat(randomPlain(rng, 2, nl), PlainExpr::zero());
        case rOneCatUpL: return PlainExpr::cat(PlainExpr::one(), C(e));
        case rOneCatUpR: return PlainExpr::cat(C(e), PlainExpr::one());
        case rOneStarUp:
            return PlainExpr::star((rng() & 1) ? PlainExpr::zero() : PlainExpr::one());
        case rStarStarUp: return PlainExpr::star(C(e));
    }
    throw UsageError("applyCongruenceRewrite: bad rule");
}

}  // namespace

PlainPtr applyCongruenceRewrite(const PlainExpr& e, std::mt19937_64& rng, int nl) {
    std::vector<Site> sites;
    std::vector<int> path;
    collect(e, path, sites);
    const Site& s = sites[std::uniform_int_distribution<size_t>(0, sites.size() - 1)(rng)];
    return applyAt(e, s.path, 0, s.rule, rng, nl);
}

}  // namespace rl
