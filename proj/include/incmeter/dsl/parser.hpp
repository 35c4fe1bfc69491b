#pragma once

#include "incmeter/core/error.hpp"
#include "incmeter/core/schema.hpp"
#include "incmeter/core/value.hpp"
#include "incmeter/dsl/ast.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace incmeter {

namespace dsl {

enum class Tok { ident, integer, rational, text, date, colon, comma, lparen, rparen, arrow, bar, amp, op, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    CmpOp op = CmpOp::eq;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (detail::is_ident_start(c)) {
                std::size_t b = pos_;
                while (pos_ < src_.size() && detail::is_ident_char(src_[pos_])) advance();
                t.kind = Tok::ident;
                t.text = std::string(src_.substr(b, pos_ - b));
            } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && next_is_digit())) {
                number(t);
            } else if (c == '"' || c == '\'') {
                string_literal(t, c);
            } else {
                punct(t);
            }
            out.push_back(std::move(t));
        }
    }

private:
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }
    bool next_is_digit() const { return std::isdigit(static_cast<unsigned char>(peek(1))); }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string digits() {
        std::size_t b = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        return std::string(src_.substr(b, pos_ - b));
    }

    // 12, -12, 3/4, -0.25, 2018-12-13
    void number(Token& t) {
        std::string s;
        if (peek() == '-') {
            s += '-';
            advance();
        }
        s += digits();
        if (s[0] != '-' && s.size() == 4 && peek() == '-' && next_is_digit()) {
            s += '-';
            advance();
            s += digits();
            if (peek() != '-') throw ParseError("malformed date literal", t.line, t.column);
            s += '-';
            advance();
            s += digits();
            Date d;
            if (!Date::parse(s, d)) throw ParseError("invalid date '" + s + "'", t.line, t.column);
            t.kind = Tok::date;
            t.text = s;
            return;
        }
        if (peek() == '/' && next_is_digit()) {
            s += '/';
            advance();
            s += digits();
            t.kind = Tok::rational;
        } else if (peek() == '.' && next_is_digit()) {
            s += '.';
            advance();
            s += digits();
            t.kind = Tok::rational;
        } else {
            t.kind = Tok::integer;
        }
        if (t.kind == Tok::rational) {
            try {
                Value::parse_rational(s);
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), t.line, t.column);
            }
        }
        if (detail::is_ident_char(peek())) throw ParseError("malformed number", t.line, t.column);
        t.text = s;
    }

    void string_literal(Token& t, char quote) {
        advance();
        std::string s;
        for (;;) {
            if (pos_ >= src_.size()) throw ParseError("unterminated string literal", t.line, t.column);
            char c = src_[pos_];
            if (c == quote) {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size()) throw ParseError("unterminated string literal", t.line, t.column);
                char e = src_[pos_];
                if (e == 'n') s += '\n';
                else if (e == 't') s += '\t';
                else s += e;
                advance();
                continue;
            }
            if (c == '\n') throw ParseError("newline in string literal", t.line, t.column);
            s += c;
            advance();
        }
        t.kind = Tok::text;
        t.text = std::move(s);
    }

    void punct(Token& t) {
        char c = peek(), d = peek(1);
        auto take = [&](Tok k, std::size_t n, std::string text) {
            for (std::size_t i = 0; i < n; ++i) advance();
            t.kind = k;
            t.text = std::move(text);
        };
        auto take_op = [&](CmpOp op, std::size_t n) {
            take(Tok::op, n, std::string(op_symbol(op)));
            t.op = op;
        };
        switch (c) {
        case ':': return take(Tok::colon, 1, ":");
        case ',': return take(Tok::comma, 1, ",");
        case '(': return take(Tok::lparen, 1, "(");
        case ')': return take(Tok::rparen, 1, ")");
        case '|': return take(Tok::bar, 1, "|");
        case '&': return take(Tok::amp, 1, "&");
        case '-':
            if (d == '>') return take(Tok::arrow, 2, "->");
            break;
        case '=': return take_op(CmpOp::eq, 1);
        case '!':
            if (d == '=') return take_op(CmpOp::ne, 2);
            break;
        case '<':
            if (d == '=') return take_op(CmpOp::le, 2);
            if (d == '>') return take_op(CmpOp::ne, 2);
            return take_op(CmpOp::lt, 1);
        case '>':
            if (d == '=') return take_op(CmpOp::ge, 2);
            return take_op(CmpOp::gt, 1);
        default: break;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, const Schema& schema) : toks_(std::move(toks)), schema_(schema) {}

    ConstraintSet run() {
        ConstraintSet out;
        while (cur().kind != Tok::end) {
            const Token start = cur();
            DenialConstraint c = decl();
            if (out.find(c.name)) throw ParseError("constraint " + c.name + " declared twice", start.line, start.column);
            try {
                out.add(validate_constraint(std::move(c), schema_));
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), start.line, start.column);
            }
        }
        return out;
    }

private:
    const Token& cur() const { return toks_[i_]; }
    const Token& ahead(std::size_t n) const { return toks_[std::min(i_ + n, toks_.size() - 1)]; }

    [[noreturn]] void error(const std::string& msg) const { throw ParseError(msg, cur().line, cur().column); }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::end: return "end of input";
        case Tok::text: return "string literal";
        default: return "'" + t.text + "'";
        }
    }

    const Token& expect(Tok k, const char* what) {
        if (cur().kind != k) error(std::string("expected ") + what + ", found " + describe(cur()));
        return toks_[i_++];
    }

    bool accept(Tok k) {
        if (cur().kind != k) return false;
        ++i_;
        return true;
    }

    std::string ident(const char* what) { return expect(Tok::ident, what).text; }

    DenialConstraint decl() {
        if (cur().kind != Tok::ident) error("expected 'denial', 'fd' or 'nd', found " + describe(cur()));
        std::string kw = cur().text;
        if (kw == "denial") {
            ++i_;
            return denial();
        }
        if (kw == "fd" || kw == "nd") {
            ++i_;
            return dependency(kw == "nd");
        }
        error("expected 'denial', 'fd' or 'nd', found " + describe(cur()));
    }

    DenialConstraint denial() {
        DenialConstraint c;
        c.name = ident("constraint name");
        expect(Tok::colon, "':'");
        do {
            c.atoms.push_back(atom());
        } while (accept(Tok::comma));
        expect(Tok::arrow, "'->'");
        if (starts_comparison()) {
            do {
                c.phi.push_back(conjunction());
            } while (accept(Tok::bar));
        }
        return c;
    }

    // A comparison starts with a term followed by an operator; a bare identifier followed
    // by anything else begins the next declaration.
    bool starts_comparison() const {
        switch (cur().kind) {
        case Tok::integer:
        case Tok::rational:
        case Tok::text:
        case Tok::date: return true;
        case Tok::ident: return ahead(1).kind == Tok::op;
        default: return false;
        }
    }

    Conjunction conjunction() {
        Conjunction conj;
        do {
            Comparison cmp;
            cmp.left = term();
            const Token& op = expect(Tok::op, "comparison operator");
            cmp.op = op.op;
            cmp.right = term();
            conj.push_back(std::move(cmp));
        } while (accept(Tok::amp));
        return conj;
    }

    RelationAtom atom() {
        RelationAtom a;
        a.relation = ident("relation name");
        expect(Tok::lparen, "'('");
        do {
            a.args.push_back(term());
        } while (accept(Tok::comma));
        expect(Tok::rparen, "')'");
        return a;
    }

    Term term() {
        const Token& t = cur();
        switch (t.kind) {
        case Tok::ident: ++i_; return Variable{t.text};
        case Tok::integer: ++i_; return Value::parse(t.text, Kind::integer);
        case Tok::rational: ++i_; return Value::parse(t.text, Kind::rational);
        case Tok::text: ++i_; return Value::text(t.text);
        case Tok::date: ++i_; return Value::parse(t.text, Kind::date);
        default: error("expected a variable or constant, found " + describe(t));
        }
    }

    DenialConstraint dependency(bool numerical) {
        const Token start = toks_[i_ - 1];
        std::string name = ident("constraint name");
        expect(Tok::colon, "':'");
        const Token& rel_tok = cur();
        std::string rel = ident("relation name");
        auto ri = schema_.index_of(rel);
        if (!ri) throw ParseError("unknown relation " + rel, rel_tok.line, rel_tok.column);
        expect(Tok::colon, "':'");
        std::vector<std::string> lhs;
        do {
            lhs.push_back(ident("attribute name"));
        } while (accept(Tok::comma));
        expect(Tok::arrow, "'->'");
        std::size_t bound = 1;
        if (numerical) {
            const Token& b = expect(Tok::integer, "numerical bound");
            if (b.text.size() > 6 || b.text[0] == '-') throw ParseError("numerical bound out of range", b.line, b.column);
            bound = std::stoul(b.text);
        }
        std::string rhs = ident("attribute name");
        try {
            const auto& scheme = schema_.relation(*ri);
            return numerical ? desugar_nd(name, scheme, lhs, rhs, bound) : desugar_fd(name, scheme, lhs, rhs);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), start.line, start.column);
        }
    }

    std::vector<Token> toks_;
    const Schema& schema_;
    std::size_t i_ = 0;
};

} // namespace dsl

/// Parses a constraint file against a schema. FD and ND declarations are expanded into
/// denial constraints. All errors are ParseError with a line and column.
inline ConstraintSet parse_constraints(std::string_view text, const Schema& schema) {
    return dsl::Parser(dsl::Lexer(text).run(), schema).run();
}

} // namespace incmeter
