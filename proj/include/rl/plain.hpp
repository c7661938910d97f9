#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rl/errors.hpp"

namespace rl {

enum class ExprType : uint8_t { Zero, One, Letter, Union, Concat, Star };

// Unrestricted syntax tree, as read from text.  Union/Concat are binary here;
// flattening happens during normalization.
struct PlainExpr;
using PlainPtr = std::unique_ptr<PlainExpr>;

struct PlainExpr {
    ExprType kind;
    int letter = -1;  // 0-based, Letter only
    PlainPtr left;    // Union/Concat left, Star child
    PlainPtr right;   // Union/Concat right

    static PlainPtr zero() { return make(ExprType::Zero); }
    static PlainPtr one() { return make(ExprType::One); }
    static PlainPtr ltr(int x) {
        auto e = make(ExprType::Letter);
        e->letter = x;
        return e;
    }
    static PlainPtr alt(PlainPtr a, PlainPtr b) { return make2(ExprType::Union, std::move(a), std::move(b)); }
    static PlainPtr cat(PlainPtr a, PlainPtr b) { return make2(ExprType::Concat, std::move(a), std::move(b)); }
    static PlainPtr star(PlainPtr a) {
        auto e = make(ExprType::Star);
        e->left = std::move(a);
        return e;
    }

private:
    static PlainPtr make(ExprType t) {
        auto e = std::make_unique<PlainExpr>();
        e->kind = t;
        return e;
    }
    static PlainPtr make2(ExprType t, PlainPtr a, PlainPtr b) {
        auto e = make(t);
        e->left = std::move(a);
        e->right = std::move(b);
        return e;
    }
};

struct ParseError : std::runtime_error {
    size_t column;
    ParseError(const std::string& what, size_t col)
        : std::runtime_error(what + " (column " + std::to_string(col + 1) + ")"), column(col) {}
};

// Grammar: expr := term ('+' term)* ; term := factor+ ; factor := base '*'* ;
// base := '0' | '1' | 'a'..'z' | '(' expr ')'.  Star binds tightest, then
// juxtaposition, then '+'.  Whitespace is insignificant.
PlainPtr parsePlain(const std::string& text);

// Prints with minimal parentheses; parsePlain(printPlain(e)) re-reads to the
// same tree shape.
std::string printPlain(const PlainExpr& e);

PlainPtr clonePlain(const PlainExpr& e);

// Letter occurrences plus operator count; 0 and 1 are free.
int64_t plainSize(const PlainExpr& e);

// One bit per letter.
struct PlainInfo {
    uint32_t letters = 0;   // letters occurring in the expression (syntactic)
    uint32_t oneWords = 0;  // letters x such that the word "x" is in the language
    bool nullable = false;
};

PlainInfo plainInfo(const PlainExpr& e);

// Bottom-up simplification with three rules.  Writing U(S) for the
// letter-sum star (x1+...+xk)* over a set S:
//   1. E* -> U(letters(E))          when letters(E) == oneWords(E)
//   2. E.U(S), U(S).E -> U(S)       when E nullable and letters(E) within S
//   3. E+U(S), U(S)+E -> U(S)       when letters(E) within S
// The produced letter sums list letters in ascending order, right
// associated; U over the empty set degenerates to 1.
PlainPtr lift(const PlainExpr& e);

}  // namespace rl
