#include "rl/expr.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace rl {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

inline uint64_t fnvByte(uint64_t h, uint8_t b) { return (h ^ b) * kFnvPrime; }

inline uint64_t fnvWord(uint64_t h, uint32_t w) {
    h = fnvByte(h, static_cast<uint8_t>(w));
    h = fnvByte(h, static_cast<uint8_t>(w >> 8));
    h = fnvByte(h, static_cast<uint8_t>(w >> 16));
    h = fnvByte(h, static_cast<uint8_t>(w >> 24));
    return h;
}

}  // namespace

ExprStore::ExprStore(int32_t capacity, int nl)
    : nl_(nl),
      pool_(capacity),
      nBuckets_(std::bit_ceil(static_cast<uint64_t>(std::max<int32_t>(capacity / 2, 64)))),
      hashTable_(static_cast<int32_t>(nBuckets_), capacity),
      type_(capacity, ExprType::Zero),
      children_(capacity),
      code_(capacity, 0),
      size_(capacity, 0),
      nullable_(capacity, 0) {
    if (capacity < kAtomCount) throw UsageError("ExprStore: capacity below atom count");
    if (nl < 1 || nl > 26) throw UsageError("ExprStore: alphabet size out of range");
    // Atoms occupy the fixed identifiers 0..27 and live in the hash table
    // like everything else.
    for (ExprId e = 0; e < kAtomCount; ++e) {
        pool_.acquire(e);
        ExprType t = e == kZero ? ExprType::Zero : e == kOne ? ExprType::One : ExprType::Letter;
        type_[e] = t;
        code_[e] = codeOf(t, e < 2 ? std::span<const ExprId>{} : std::span<const ExprId>{&e, 1});
        size_[e] = e < 2 ? 0 : 1;
        nullable_[e] = (e == kOne);
        hashTable_.add(bucketOf(code_[e]), e);
    }
}

uint64_t ExprStore::codeOf(ExprType t, std::span<const ExprId> children) const {
    uint64_t h = fnvByte(kFnvOffset, static_cast<uint8_t>(t));
    for (ExprId c : children) h = fnvWord(h, static_cast<uint32_t>(c));
    return h;
}

void ExprStore::validate(ExprType t, std::span<const ExprId> children) const {
    switch (t) {
        case ExprType::Union:
            if (children.size() < 2) throw UsageError("intern: union needs >= 2 children");
            for (size_t k = 0; k < children.size(); ++k) {
                ExprId c = children[k];
                if (c == kZero || type(c) == ExprType::Union)
                    throw UsageError("intern: union child may not be 0 or a union");
                if (k > 0 && children[k - 1] >= c)
                    throw UsageError("intern: union children must strictly ascend");
            }
            break;
        case ExprType::Concat:
            if (children.size() != 2) throw UsageError("intern: concatenation needs 2 children");
            for (ExprId c : children)
                if (c == kZero || c == kOne)
                    throw UsageError("intern: concatenation child may not be 0 or 1");
            if (type(children[0]) == ExprType::Concat)
                throw UsageError("intern: left factor may not be a concatenation");
            break;
        case ExprType::Star:
            if (children.size() != 1) throw UsageError("intern: star needs 1 child");
            if (children[0] < 2) throw UsageError("intern: star child may not be 0 or 1");
            if (type(children[0]) == ExprType::Star)
                throw UsageError("intern: star child may not be a star");
            break;
        default:
            throw UsageError("intern: atoms are built in");
    }
}

ExprId ExprStore::intern(ExprType t, std::vector<ExprId> children) {
    validate(t, children);
    uint64_t code = codeOf(t, children);
    int32_t bucket = bucketOf(code);
    if (hashTable_.empty(bucket)) {
        ++stats_.searchesEmpty;
    } else {
        ++stats_.searchesNonEmpty;
        for (int32_t e = hashTable_.first(bucket); e != kNil; e = hashTable_.next(e)) {
            ++stats_.iterations;
            if (code_[e] != code || type_[e] != t) continue;
            if (children_[e] == children) {
                ++stats_.dejaVu;
                return e;
            }
        }
    }
    ExprId e = pool_.acquire();
    type_[e] = t;
    code_[e] = code;
    switch (t) {
        case ExprType::Union: {
            int64_t s = static_cast<int64_t>(children.size()) - 1;
            uint8_t n = 0;
            for (ExprId c : children) {
                s += size_[c];
                n |= nullable_[c];
            }
            size_[e] = s;
            nullable_[e] = n;
            break;
        }
        case ExprType::Concat:
            size_[e] = size_[children[0]] + size_[children[1]] + 1;
            nullable_[e] = nullable_[children[0]] & nullable_[children[1]];
            break;
        case ExprType::Star:
            size_[e] = size_[children[0]] + 1;
            nullable_[e] = 1;
            break;
        default:
            break;
    }
    children_[e] = std::move(children);
    hashTable_.add(bucket, e);
    return e;
}

void ExprStore::terms(ExprId e, std::vector<ExprId>& out) const {
    check(e);
    if (e == kZero) return;
    if (type_[e] == ExprType::Union)
        out.insert(out.end(), children_[e].begin(), children_[e].end());
    else
        out.push_back(e);
}

void ExprStore::factors(ExprId e, std::vector<ExprId>& out) const {
    check(e);
    while (type_[e] == ExprType::Concat) {
        out.push_back(children_[e][0]);
        e = children_[e][1];
    }
    out.push_back(e);
}

ExprId ExprStore::union2(ExprId a, ExprId b) {
    check(a);
    check(b);
    if (a == kZero) return b;
    if (b == kZero) return a;
    if (a == b) return a;
    std::span<const ExprId> ta = type_[a] == ExprType::Union ? std::span<const ExprId>(children_[a])
                                                             : std::span<const ExprId>(&a, 1);
    std::span<const ExprId> tb = type_[b] == ExprType::Union ? std::span<const ExprId>(children_[b])
                                                             : std::span<const ExprId>(&b, 1);
    std::vector<ExprId> merged;
    merged.reserve(ta.size() + tb.size());
    size_t i = 0, j = 0;
    while (i < ta.size() && j < tb.size()) {
        if (ta[i] < tb[j]) merged.push_back(ta[i++]);
        else if (tb[j] < ta[i]) merged.push_back(tb[j++]);
        else {
            merged.push_back(ta[i++]);
            ++j;
        }
    }
    while (i < ta.size()) merged.push_back(ta[i++]);
    while (j < tb.size()) merged.push_back(tb[j++]);
    if (merged.size() == 1) return merged[0];
    return intern(ExprType::Union, std::move(merged));
}

ExprId ExprStore::concat2(ExprId a, ExprId b) {
    check(a);
    check(b);
    if (a == kZero || b == kZero) return kZero;
    if (a == kOne) return b;
    if (b == kOne) return a;
    // Right-nest: (f1 f2 ... fk) . b becomes f1 . (f2 . (... . b)).
    std::vector<ExprId> fs;
    factors(a, fs);
    ExprId cur = b;
    for (size_t k = fs.size(); k-- > 0;) cur = intern(ExprType::Concat, {fs[k], cur});
    return cur;
}

ExprId ExprStore::star(ExprId e) {
    check(e);
    if (e == kZero || e == kOne) return kOne;
    if (type_[e] == ExprType::Star) return e;
    return intern(ExprType::Star, {e});
}

ExprId ExprStore::unionN(std::span<const ExprId> es) {
    std::vector<ExprId> all;
    for (ExprId e : es) {
        check(e);
        if (e == kZero) continue;
        if (type_[e] == ExprType::Union)
            all.insert(all.end(), children_[e].begin(), children_[e].end());
        else
            all.push_back(e);
    }
    if (all.empty()) return kZero;
    // Insertion sort for short lists, std::sort beyond.
    if (all.size() < 16) {
        for (size_t i = 1; i < all.size(); ++i) {
            ExprId v = all[i];
            size_t j = i;
            while (j > 0 && all[j - 1] > v) {
                all[j] = all[j - 1];
                --j;
            }
            all[j] = v;
        }
    } else {
        std::sort(all.begin(), all.end());
    }
    all.erase(std::unique(all.begin(), all.end()), all.end());
    if (all.size() == 1) return all[0];
    return intern(ExprType::Union, std::move(all));
}

ExprId ExprStore::concatN(std::span<const ExprId> es) {
    if (es.empty()) return kOne;
    ExprId cur = es.back();
    check(cur);
    for (size_t k = es.size() - 1; k-- > 0;) cur = concat2(es[k], cur);
    return cur;
}

ExprId ExprStore::normalize(const PlainExpr& e, bool nary) {
    switch (e.kind) {
        case ExprType::Zero: return kZero;
        case ExprType::One: return kOne;
        case ExprType::Letter:
            if (e.letter < 0 || e.letter >= nl_)
                throw UsageError("normalize: letter outside the configured alphabet");
            return letterId(e.letter);
        case ExprType::Star: return star(normalize(*e.left, nary));
        case ExprType::Union: {
            if (!nary) return union2(normalize(*e.left, nary), normalize(*e.right, nary));
            std::vector<const PlainExpr*> leaves;
            std::vector<const PlainExpr*> stack{&e};
            while (!stack.empty()) {
                const PlainExpr* n = stack.back();
                stack.pop_back();
                if (n->kind == ExprType::Union) {
                    stack.push_back(n->right.get());
                    stack.push_back(n->left.get());
                } else {
                    leaves.push_back(n);
                }
            }
            std::vector<ExprId> ids;
            ids.reserve(leaves.size());
            for (const PlainExpr* n : leaves) ids.push_back(normalize(*n, nary));
            return unionN(ids);
        }
        case ExprType::Concat: {
            if (!nary) return concat2(normalize(*e.left, nary), normalize(*e.right, nary));
            std::vector<const PlainExpr*> leaves;
            std::vector<const PlainExpr*> stack{&e};
            while (!stack.empty()) {
                const PlainExpr* n = stack.back();
                stack.pop_back();
                if (n->kind == ExprType::Concat) {
                    stack.push_back(n->right.get());
                    stack.push_back(n->left.get());
                } else {
                    leaves.push_back(n);
                }
            }
            std::vector<ExprId> ids;
            ids.reserve(leaves.size());
            for (const PlainExpr* n : leaves) ids.push_back(normalize(*n, nary));
            return concatN(ids);
        }
    }
    throw UsageError("normalize: bad node");
}

std::string ExprStore::print(ExprId e) const {
    check(e);
    std::string out;
    auto emit = [&](auto&& self, ExprId x) -> void {
        auto wrapped = [&](ExprId c, bool parens) {
            if (parens) out.push_back('(');
            self(self, c);
            if (parens) out.push_back(')');
        };
        switch (type_[x]) {
            case ExprType::Zero:
                out.push_back('0');
                break;
            case ExprType::One:
                out.push_back('1');
                break;
            case ExprType::Letter:
                out.push_back(static_cast<char>('a' + letterOf(x)));
                break;
            case ExprType::Union:
                for (size_t k = 0; k < children_[x].size(); ++k) {
                    if (k) out.push_back('+');
                    self(self, children_[x][k]);
                }
                break;
            case ExprType::Concat:
                for (ExprId c : children_[x]) wrapped(c, type_[c] == ExprType::Union);
                break;
            case ExprType::Star: {
                ExprId c = children_[x][0];
                wrapped(c, type_[c] == ExprType::Union || type_[c] == ExprType::Concat);
                out.push_back('*');
                break;
            }
        }
    };
    emit(emit, e);
    return out;
}

void ExprStore::release(ExprId e) {
    check(e);
    if (isAtom(e)) throw UsageError("ExprStore: atoms are never released");
    hashTable_.remove(e);
    children_[e].clear();
    children_[e].shrink_to_fit();
    size_[e] = 0;
    nullable_[e] = 0;
    code_[e] = 0;
    pool_.release(e);
}

void ExprStore::audit() const {
    pool_.forEachInUse([&](int32_t e) {
        if (code_[e] != codeOf(type_[e], isLetterAtom(static_cast<ExprId>(e))
                                             ? std::span<const ExprId>(&e, 1)
                                             : std::span<const ExprId>(children_[e])))
            throw InvariantViolation("ExprStore audit: stale hash code");
        if (!hashTable_.contains(e)) throw InvariantViolation("ExprStore audit: not in hash table");
        bool found = false;
        for (int32_t v = hashTable_.first(bucketOf(code_[e])); v != kNil; v = hashTable_.next(v))
            if (v == e) {
                found = true;
                break;
            }
        if (!found) throw InvariantViolation("ExprStore audit: wrong bucket");
        if (!isAtom(e)) {
            validate(type_[e], children_[e]);
            for (ExprId c : children_[e])
                if (!pool_.inUse(c)) throw InvariantViolation("ExprStore audit: dangling child");
        }
    });
}

}  // namespace rl
