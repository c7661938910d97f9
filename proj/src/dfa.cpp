#include "rl/dfa.hpp"

#include <algorithm>
#include <deque>

namespace rl {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

inline uint64_t fnvWord(uint64_t h, uint32_t w) {
    for (int k = 0; k < 4; ++k) h = (h ^ static_cast<uint8_t>(w >> (8 * k))) * kFnvPrime;
    return h;
}

RightPart rowFor(Background& bg, ExprId s) {
    if (isAtom(s)) return Background::atomRow(s, bg.nl());
    EqId eq = bg.equationOf(s);
    if (eq == kNil) throw UsageError("automaton state without an equation");
    return bg.rowOf(eq);
}

}  // namespace

std::string Mdfa::dump() const {
    // Atoms print by themselves; proper states by their BFS number.
    std::unordered_map<ExprId, int> number;
    for (ExprId s : states)
        if (!isAtom(s)) number.emplace(s, static_cast<int>(number.size()));
    auto name = [&](ExprId s) -> std::string {
        if (s == kZero) return "0";
        if (s == kOne) return "1";
        if (isLetterAtom(s)) return std::string(1, static_cast<char>('a' + letterOf(s)));
        return "state" + std::to_string(number.at(s));
    };
    std::string out;
    for (size_t i = 0; i < states.size(); ++i) {
        ExprId s = states[i];
        if (isAtom(s) && !(states.size() == 1 && s == start)) continue;
        const RightPart& t = rows[i];
        out += name(s);
        out += ": o=";
        out += t[0] ? '1' : '0';
        for (int x = 0; x < nl; ++x) {
            out += ' ';
            out += static_cast<char>('a' + x);
            out += "->";
            out += name(t[x + 1]);
        }
        out += '\n';
    }
    return out;
}

Mdfa mdfaOf(Background& bg, ExprId e) {
    Mdfa m;
    m.start = bg.rep(e);
    m.nl = bg.nl();
    std::deque<ExprId> queue{m.start};
    std::unordered_set<ExprId> seen;
    while (!queue.empty()) {
        ExprId s = queue.front();
        queue.pop_front();
        if (!seen.insert(s).second) continue;
        RightPart t = rowFor(bg, s);
        for (int x = 0; x < m.nl; ++x) queue.push_back(t[x + 1]);
        m.states.push_back(s);
        m.rows.push_back(std::move(t));
    }
    return m;
}

std::vector<std::vector<ExprId>> equivClasses(const std::map<ExprId, RightPart>& rows, int nl) {
    // Block labels: atoms are pinned to the negative labels -(atom+1); other
    // states start split by acceptance and are refined until stable.
    std::map<ExprId, int64_t> block;
    for (const auto& [s, t] : rows) block[s] = isAtom(s) ? -(s + 1) : t[0];
    auto blockOf = [&](ExprId s) -> int64_t {
        auto it = block.find(s);
        if (it != block.end()) return it->second;
        if (!isAtom(s)) throw UsageError("equivClasses: target state has no row");
        return -(s + 1);
    };
    size_t blocks = 0;
    while (true) {
        std::map<std::vector<int64_t>, int64_t> fresh;
        std::map<ExprId, int64_t> next;
        for (const auto& [s, t] : rows) {
            if (isAtom(s)) {
                next[s] = -(s + 1);
                continue;
            }
            std::vector<int64_t> sig{block[s]};
            for (int x = 0; x < nl; ++x) sig.push_back(blockOf(t[x + 1]));
            auto [it, inserted] = fresh.emplace(sig, static_cast<int64_t>(fresh.size()));
            next[s] = it->second;
        }
        size_t count = fresh.size();
        for (const auto& [s, b] : next)
            if (b < 0) ++count;
        block = std::move(next);
        if (count == blocks) break;
        blocks = count;
    }
    std::map<int64_t, std::vector<ExprId>> grouped;
    for (const auto& [s, b] : block) grouped[b].push_back(s);
    std::vector<std::vector<ExprId>> out;
    out.reserve(grouped.size());
    for (auto& [b, ss] : grouped) out.push_back(std::move(ss));
    return out;
}

Mdfa minimize(Background& bg, ExprId e) {
    ExprId r = bg.rep(e);
    Mdfa m = mdfaOf(bg, r);
    std::map<ExprId, RightPart> rows;
    for (size_t i = 0; i < m.states.size(); ++i) rows[m.states[i]] = m.rows[i];
    for (const auto& cls : equivClasses(rows, m.nl)) {
        std::vector<ExprId> members;
        for (ExprId s : cls)
            if (!isAtom(s)) members.push_back(s);
        if (members.size() < 2) continue;
        ExprId keep = members[0];
        auto& store = bg.store();
        for (ExprId s : members)
            if (store.size(s) < store.size(keep) || (store.size(s) == store.size(keep) && s < keep))
                keep = s;
        for (ExprId s : members)
            if (s != keep) bg.unify(keep, s);
    }
    return mdfaOf(bg, bg.rep(e));
}

bool equivalent(Background& bg, ExprId a, ExprId b) {
    a = bg.rep(a);
    b = bg.rep(b);
    if (a == b) return true;
    std::deque<std::pair<ExprId, ExprId>> queue{{a, b}};
    std::unordered_set<uint64_t> seen;
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        x = bg.rep(x);
        y = bg.rep(y);
        if (x == y) continue;
        uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(x)) << 32) |
                       static_cast<uint32_t>(y);
        if (!seen.insert(key).second) continue;
        RightPart tx = rowFor(bg, x);
        RightPart ty = rowFor(bg, y);
        if (tx[0] != ty[0]) return false;
        for (int k = 0; k < bg.nl(); ++k) queue.push_back({tx[k + 1], ty[k + 1]});
    }
    return true;
}

uint64_t shapeHash(const Mdfa& m) {
    std::unordered_map<ExprId, uint32_t> number;
    for (ExprId s : m.states)
        if (!isAtom(s)) number.emplace(s, kAtomCount + static_cast<uint32_t>(number.size()));
    auto code = [&](ExprId s) -> uint32_t {
        return isAtom(s) ? static_cast<uint32_t>(s) : number.at(s);
    };
    uint64_t h = fnvWord(kFnvOffset, static_cast<uint32_t>(m.nl));
    for (size_t i = 0; i < m.states.size(); ++i) {
        const RightPart& t = m.rows[i];
        h = fnvWord(h, code(m.states[i]));
        h = fnvWord(h, static_cast<uint32_t>(t[0]));
        for (int x = 0; x < m.nl; ++x) h = fnvWord(h, code(t[x + 1]));
    }
    return h;
}

ExprId GlobalIndex::indexState(Background& bg, ExprId state) {
    ExprId r = bg.rep(state);
    if (isAtom(r)) return r;
    if (members_.count(r)) return r;
    return probe(bg, r);
}

ExprId GlobalIndex::probe(Background& bg, ExprId r) {
    Mdfa sub = mdfaOf(bg, r);
    uint64_t h = shapeHash(sub);
    auto& bucket = buckets_[h];
    for (auto it = bucket.begin(); it != bucket.end();) {
        ExprId cr = bg.rep(*it);
        if (cr != *it) {
            // The entry lost representative status; refresh it in place.
            members_.erase(*it);
            if (members_.count(cr)) {
                it = bucket.erase(it);
                continue;
            }
            *it = cr;
            members_.insert(cr);
        }
        if (cr == r) return r;
        if (equivalent(bg, cr, r)) {
            bg.unify(cr, r);
            ExprId nr = bg.rep(cr);
            if (nr != cr) {
                members_.erase(cr);
                members_.insert(nr);
                *it = nr;
            }
            return nr;
        }
        ++it;
    }
    bucket.push_back(r);
    members_.insert(r);
    return r;
}

ExprId GlobalIndex::unifyInto(Background& bg, const Mdfa& m) {
    for (ExprId s : m.states) indexState(bg, s);
    return bg.rep(m.start);
}

void GlobalIndex::purgeFreed(const ExprStore& store) {
    for (auto& [h, bucket] : buckets_) {
        bucket.erase(std::remove_if(bucket.begin(), bucket.end(),
                                    [&](ExprId e) {
                                        if (store.inUse(e)) return false;
                                        members_.erase(e);
                                        return true;
                                    }),
                     bucket.end());
    }
}

}  // namespace rl
