#include "rl/oracle.hpp"

namespace rl {

namespace {

using Lang = std::set<std::string>;

Lang concatLangs(const Lang& a, const Lang& b, int maxLen) {
    Lang out;
    for (const auto& u : a)
        for (const auto& v : b)
            if (u.size() + v.size() <= static_cast<size_t>(maxLen)) out.insert(u + v);
    return out;
}

Lang starLang(const Lang& a, int maxLen) {
    Lang out{""};
    while (true) {
        Lang grown = out;
        for (const auto& w : concatLangs(out, a, maxLen)) grown.insert(w);
        if (grown == out) return out;
        out = std::move(grown);
    }
}

}  // namespace

std::set<std::string> langUpTo(const PlainExpr& e, int maxLen, int nl) {
    switch (e.kind) {
        case ExprType::Zero: return {};
        case ExprType::One: return {""};
        case ExprType::Letter:
            if (e.letter >= nl) throw UsageError("langUpTo: letter outside alphabet");
            if (maxLen < 1) return {};
            return {std::string(1, static_cast<char>('a' + e.letter))};
        case ExprType::Union: {
            Lang out = langUpTo(*e.left, maxLen, nl);
            for (const auto& w : langUpTo(*e.right, maxLen, nl)) out.insert(w);
            return out;
        }
        case ExprType::Concat:
            return concatLangs(langUpTo(*e.left, maxLen, nl), langUpTo(*e.right, maxLen, nl),
                               maxLen);
        case ExprType::Star: return starLang(langUpTo(*e.left, maxLen, nl), maxLen);
    }
    throw UsageError("langUpTo: bad node");
}

std::set<std::string> langUpTo(const ExprStore& store, ExprId e, int maxLen) {
    switch (store.type(e)) {
        case ExprType::Zero: return {};
        case ExprType::One: return {""};
        case ExprType::Letter: {
            if (maxLen < 1) return {};
            return {std::string(1, static_cast<char>('a' + letterOf(e)))};
        }
        case ExprType::Union: {
            Lang out;
            for (ExprId c : store.children(e))
                for (const auto& w : langUpTo(store, c, maxLen)) out.insert(w);
            return out;
        }
        case ExprType::Concat:
            return concatLangs(langUpTo(store, store.children(e)[0], maxLen),
                               langUpTo(store, store.children(e)[1], maxLen), maxLen);
        case ExprType::Star: return starLang(langUpTo(store, store.children(e)[0], maxLen), maxLen);
    }
    throw UsageError("langUpTo: bad node");
}

}  // namespace rl
