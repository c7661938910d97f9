#include "rl/plain.hpp"

#include <cctype>

namespace rl {

namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    int peek() {
        skip();
        return i < s.size() ? static_cast<unsigned char>(s[i]) : -1;
    }

    bool startsBase() {
        int c = peek();
        return c == '0' || c == '1' || c == '(' || (c >= 'a' && c <= 'z');
    }

    PlainPtr expr() {
        std::vector<PlainPtr> alts;
        alts.push_back(term());
        while (peek() == '+') {
            ++i;
            alts.push_back(term());
        }
        // '+' chains read right-associated.
        PlainPtr e = std::move(alts.back());
        for (size_t k = alts.size() - 1; k-- > 0;) e = PlainExpr::alt(std::move(alts[k]), std::move(e));
        return e;
    }

    PlainPtr term() {
        std::vector<PlainPtr> fs;
        if (!startsBase()) throw ParseError("expected '0', '1', a letter or '('", i);
        while (startsBase()) fs.push_back(factor());
        PlainPtr e = std::move(fs.back());
        for (size_t k = fs.size() - 1; k-- > 0;) e = PlainExpr::cat(std::move(fs[k]), std::move(e));
        return e;
    }

    PlainPtr factor() {
        PlainPtr b = base();
        while (peek() == '*') {
            ++i;
            b = PlainExpr::star(std::move(b));
        }
        return b;
    }

    PlainPtr base() {
        int c = peek();
        if (c == '0') {
            ++i;
            return PlainExpr::zero();
        }
        if (c == '1') {
            ++i;
            return PlainExpr::one();
        }
        if (c >= 'a' && c <= 'z') {
            ++i;
            return PlainExpr::ltr(c - 'a');
        }
        if (c == '(') {
            ++i;
            PlainPtr e = expr();
            if (peek() != ')') throw ParseError("expected ')'", i);
            ++i;
            return e;
        }
        throw ParseError("expected '0', '1', a letter or '('", i);
    }
};

void printInto(const PlainExpr& e, std::string& out) {
    auto child = [&out](const PlainExpr& c, bool parens) {
        if (parens) out.push_back('(');
        printInto(c, out);
        if (parens) out.push_back(')');
    };
    switch (e.kind) {
        case ExprType::Zero:
            out.push_back('0');
            break;
        case ExprType::One:
            out.push_back('1');
            break;
        case ExprType::Letter:
            out.push_back(static_cast<char>('a' + e.letter));
            break;
        case ExprType::Union:
            // A union on the left would re-read right-associated.
            child(*e.left, e.left->kind == ExprType::Union);
            out.push_back('+');
            printInto(*e.right, out);
            break;
        case ExprType::Concat:
            child(*e.left, e.left->kind == ExprType::Union || e.left->kind == ExprType::Concat);
            child(*e.right, e.right->kind == ExprType::Union);
            break;
        case ExprType::Star:
            child(*e.left, e.left->kind == ExprType::Union || e.left->kind == ExprType::Concat);
            out.push_back('*');
            break;
    }
}

}  // namespace

PlainPtr parsePlain(const std::string& text) {
    Parser p(text);
    PlainPtr e = p.expr();
    if (p.peek() != -1) throw ParseError("trailing input", p.i);
    return e;
}

std::string printPlain(const PlainExpr& e) {
    std::string out;
    printInto(e, out);
    return out;
}

PlainPtr clonePlain(const PlainExpr& e) {
    switch (e.kind) {
        case ExprType::Zero: return PlainExpr::zero();
        case ExprType::One: return PlainExpr::one();
        case ExprType::Letter: return PlainExpr::ltr(e.letter);
        case ExprType::Union: return PlainExpr::alt(clonePlain(*e.left), clonePlain(*e.right));
        case ExprType::Concat: return PlainExpr::cat(clonePlain(*e.left), clonePlain(*e.right));
        case ExprType::Star: return PlainExpr::star(clonePlain(*e.left));
    }
    throw UsageError("clonePlain: bad node");
}

int64_t plainSize(const PlainExpr& e) {
    switch (e.kind) {
        case ExprType::Zero:
        case ExprType::One: return 0;
        case ExprType::Letter: return 1;
        case ExprType::Union:
        case ExprType::Concat: return plainSize(*e.left) + plainSize(*e.right) + 1;
        case ExprType::Star: return plainSize(*e.left) + 1;
    }
    throw UsageError("plainSize: bad node");
}

PlainInfo plainInfo(const PlainExpr& e) {
    PlainInfo r;
    switch (e.kind) {
        case ExprType::Zero:
            break;
        case ExprType::One:
            r.nullable = true;
            break;
        case ExprType::Letter:
            r.letters = r.oneWords = 1u << e.letter;
            break;
        case ExprType::Union: {
            PlainInfo a = plainInfo(*e.left), b = plainInfo(*e.right);
            r.letters = a.letters | b.letters;
            r.oneWords = a.oneWords | b.oneWords;
            r.nullable = a.nullable || b.nullable;
            break;
        }
        case ExprType::Concat: {
            PlainInfo a = plainInfo(*e.left), b = plainInfo(*e.right);
            r.letters = a.letters | b.letters;
            r.oneWords = (b.nullable ? a.oneWords : 0) | (a.nullable ? b.oneWords : 0);
            r.nullable = a.nullable && b.nullable;
            break;
        }
        case ExprType::Star: {
            PlainInfo a = plainInfo(*e.left);
            r.letters = a.letters;
            r.oneWords = a.oneWords;  // a one-letter word of E* is one of E
            r.nullable = true;
            break;
        }
    }
    return r;
}

namespace {

struct LiftRes {
    PlainPtr e;
    PlainInfo info;
    uint32_t uSet = 0;  // nonzero iff e is a letter-sum star over this set
};

LiftRes makeUniversal(uint32_t set) {
    LiftRes r;
    if (set == 0) {
        r.e = PlainExpr::one();
        r.info.nullable = true;
        return r;
    }
    PlainPtr sum;
    for (int x = 25; x >= 0; --x) {
        if (!(set & (1u << x))) continue;
        sum = sum ? PlainExpr::alt(PlainExpr::ltr(x), std::move(sum)) : PlainExpr::ltr(x);
    }
    r.e = PlainExpr::star(std::move(sum));
    r.info.letters = r.info.oneWords = set;
    r.info.nullable = true;
    r.uSet = set;
    return r;
}

LiftRes liftRec(const PlainExpr& e) {
    LiftRes r;
    switch (e.kind) {
        case ExprType::Zero:
        case ExprType::One:
        case ExprType::Letter:
            r.e = clonePlain(e);
            r.info = plainInfo(e);
            return r;
        case ExprType::Star: {
            LiftRes c = liftRec(*e.left);
            if (c.info.letters == c.info.oneWords) return makeUniversal(c.info.letters);
            r.info.letters = c.info.letters;
            r.info.oneWords = c.info.oneWords;
            r.info.nullable = true;
            r.e = PlainExpr::star(std::move(c.e));
            return r;
        }
        case ExprType::Concat: {
            LiftRes a = liftRec(*e.left), b = liftRec(*e.right);
            if (b.uSet && a.info.nullable && (a.info.letters & ~b.uSet) == 0) return b;
            if (a.uSet && b.info.nullable && (b.info.letters & ~a.uSet) == 0) return a;
            r.info.letters = a.info.letters | b.info.letters;
            r.info.oneWords =
                (b.info.nullable ? a.info.oneWords : 0) | (a.info.nullable ? b.info.oneWords : 0);
            r.info.nullable = a.info.nullable && b.info.nullable;
            r.e = PlainExpr::cat(std::move(a.e), std::move(b.e));
            return r;
        }
        case ExprType::Union: {
            LiftRes a = liftRec(*e.left), b = liftRec(*e.right);
            if (b.uSet && (a.info.letters & ~b.uSet) == 0) return b;
            if (a.uSet && (b.info.letters & ~a.uSet) == 0) return a;
            r.info.letters = a.info.letters | b.info.letters;
            r.info.oneWords = a.info.oneWords | b.info.oneWords;
            r.info.nullable = a.info.nullable || b.info.nullable;
            r.e = PlainExpr::alt(std::move(a.e), std::move(b.e));
            return r;
        }
    }
    throw UsageError("lift: bad node");
}

}  // namespace

PlainPtr lift(const PlainExpr& e) { return liftRec(e).e; }

}  // namespace rl
