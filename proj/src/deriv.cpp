#include "rl/deriv.hpp"

#include <deque>
#include <unordered_set>

namespace rl {

ExprId DerivEngine::derivative(ExprId e, int x) {
    if (x < 0 || x >= store_.nl()) throw UsageError("derivative: letter out of range");
    if (isAtom(e)) {
        if (isLetterAtom(e) && letterOf(e) == x) return kOne;
        return kZero;
    }
    uint64_t key = (static_cast<uint64_t>(e) << 5) | static_cast<uint64_t>(x);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ExprId result;
    switch (store_.type(e)) {
        case ExprType::Union: {
            std::vector<ExprId> ds;
            auto cs = store_.children(e);
            ds.reserve(cs.size());
            for (ExprId c : cs) ds.push_back(derivative(c, x));
            result = store_.unionN(ds);
            break;
        }
        case ExprType::Concat: {
            ExprId c0 = store_.children(e)[0];
            ExprId c1 = store_.children(e)[1];
            ExprId left = store_.concat2(derivative(c0, x), c1);
            result = store_.nullable(c0) ? store_.union2(left, derivative(c1, x)) : left;
            break;
        }
        case ExprType::Star:
            result = store_.concat2(derivative(store_.children(e)[0], x), e);
            break;
        default:
            throw UsageError("derivative: bad node");
    }
    memo_.emplace(key, result);
    return result;
}

std::vector<DerivRow> DerivEngine::buildDfaE(ExprId e) {
    std::vector<DerivRow> rows;
    std::deque<ExprId> queue{e};
    std::unordered_set<ExprId> seen;
    while (!queue.empty()) {
        ExprId d = queue.front();
        queue.pop_front();
        if (!seen.insert(d).second) continue;
        ++derivCount_;
        DerivRow row{d, store_.nullable(d) ? 1 : 0, {}};
        row.next.reserve(store_.nl());
        for (int x = 0; x < store_.nl(); ++x) {
            ExprId dx = derivative(d, x);
            row.next.push_back(dx);
            queue.push_back(dx);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ExprId DerivEngine::buildDfaB(Background& bg, ExprId e, bool checkSeen) {
    std::deque<ExprId> queue{e};
    std::unordered_set<ExprId> seen;
    int nl = store_.nl();
    while (!queue.empty()) {
        ExprId d = queue.front();
        queue.pop_front();
        if (!seen.insert(d).second) continue;
        ExprId r = bg.rep(d);
        if (isAtom(r)) continue;  // implicit equation
        if (checkSeen && bg.hasEquation(r)) continue;
        ++derivCount_;
        RightPart t(nl + 1);
        t[0] = store_.nullable(d) ? 1 : 0;
        for (int x = 0; x < nl; ++x) {
            ExprId dx = derivative(d, x);
            t[x + 1] = bg.rep(dx);
            queue.push_back(dx);
        }
        bg.addEq(r, t);
        bg.reduce();
    }
    return bg.rep(e);
}

}  // namespace rl
