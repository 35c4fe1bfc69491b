#pragma once

#include "incmeter/core/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

namespace incmeter {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Attribute domains. Order comparisons only make sense within one kind.
enum class Kind : std::uint8_t { integer, rational, text, date };

inline std::string_view kind_name(Kind k) {
    switch (k) {
    case Kind::integer: return "int";
    case Kind::rational: return "rational";
    case Kind::text: return "text";
    case Kind::date: return "date";
    }
    return "?";
}

inline Kind parse_kind(std::string_view s) {
    if (s == "int" || s == "integer") return Kind::integer;
    if (s == "rational") return Kind::rational;
    if (s == "text" || s == "string") return Kind::text;
    if (s == "date") return Kind::date;
    throw ValidationError("unknown attribute type '" + std::string(s) + "'");
}

/// ISO-8601 calendar date, no time component.
struct Date {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    friend auto operator<=>(const Date&, const Date&) = default;
    friend bool operator==(const Date&, const Date&) = default;

    static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

    static unsigned days_in_month(int y, unsigned m) {
        static constexpr unsigned table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        return (m == 2 && is_leap(y)) ? 29 : table[m - 1];
    }

    /// Parses `YYYY-MM-DD`; returns false on any malformed or out-of-range component.
    static bool parse(std::string_view s, Date& out) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
        int y = 0;
        unsigned m = 0, d = 0;
        auto digits = [](std::string_view part, auto& v) {
            auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
            return ec == std::errc{} && p == part.data() + part.size();
        };
        if (!digits(s.substr(0, 4), y) || !digits(s.substr(5, 2), m) || !digits(s.substr(8, 2), d))
            return false;
        if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return false;
        out = Date{y, m, d};
        return true;
    }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
        return buf;
    }
};

/// Comparison operators usable in denial-constraint conditions.
enum class CmpOp : std::uint8_t { eq, ne, lt, le, gt, ge };

inline std::string_view op_symbol(CmpOp op) {
    switch (op) {
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "!=";
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
    }
    return "?";
}

inline bool is_order_op(CmpOp op) { return op != CmpOp::eq && op != CmpOp::ne; }

/// A typed scalar. Integers and rationals are exact.
class Value {
public:
    using Storage = std::variant<Integer, Rational, std::string, Date>;

    Value() : v_(Integer(0)) {}
    explicit Value(Integer i) : v_(std::move(i)) {}
    explicit Value(Rational r) : v_(std::move(r)) {}
    explicit Value(std::string s) : v_(std::move(s)) {}
    explicit Value(Date d) : v_(d) {}

    static Value integer(long long i) { return Value(Integer(i)); }
    static Value rational(long long num, long long den) { return Value(Rational(num, den)); }
    static Value text(std::string s) { return Value(std::move(s)); }
    static Value date(int y, unsigned m, unsigned d) { return Value(Date{y, m, d}); }

    Kind kind() const { return static_cast<Kind>(v_.index()); }

    const Integer& as_integer() const { return std::get<Integer>(v_); }
    const Rational& as_rational() const { return std::get<Rational>(v_); }
    const std::string& as_text() const { return std::get<std::string>(v_); }
    const Date& as_date() const { return std::get<Date>(v_); }
    const Storage& storage() const { return v_; }

    /// Same value converted to `target`; only integer to rational widening is allowed.
    Value coerced_to(Kind target) const {
        if (kind() == target) return *this;
        if (kind() == Kind::integer && target == Kind::rational) return Value(Rational(as_integer()));
        throw TypeError("cannot use a " + std::string(kind_name(kind())) + " value where " +
                        std::string(kind_name(target)) + " is expected");
    }

    /// Parses the textual form of a value of the given kind (CSV cells, literals).
    static Value parse(std::string_view text, Kind k) {
        switch (k) {
        case Kind::integer: {
            if (!is_integer_literal(text))
                throw ValidationError("'" + std::string(text) + "' is not an integer");
            return Value(Integer(std::string(text)));
        }
        case Kind::rational: return Value(parse_rational(text));
        case Kind::text: return Value(std::string(text));
        case Kind::date: {
            Date d;
            if (!Date::parse(text, d)) throw ValidationError("'" + std::string(text) + "' is not a YYYY-MM-DD date");
            return Value(d);
        }
        }
        throw ValidationError("unknown kind");
    }

    static bool is_integer_literal(std::string_view s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    }

    /// Accepts `n`, `p/q` and decimal `a.b` forms.
    static Rational parse_rational(std::string_view s) {
        auto bad = [&] { return ValidationError("'" + std::string(s) + "' is not a rational number"); };
        if (auto slash = s.find('/'); slash != std::string_view::npos) {
            auto num = s.substr(0, slash), den = s.substr(slash + 1);
            if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') throw bad();
            Integer d(std::string{den});
            if (d == 0) throw bad();
            return Rational(Integer(std::string{num}), d);
        }
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            auto whole = s.substr(0, dot), frac = s.substr(dot + 1);
            if (frac.empty() || !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+') throw bad();
            bool negative = !whole.empty() && whole[0] == '-';
            std::string_view digits = whole;
            if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
            if (!digits.empty() && !is_integer_literal(digits)) throw bad();
            Integer scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            Integer w = digits.empty() ? Integer(0) : Integer(std::string{digits});
            Rational r = Rational(w) + Rational(Integer(std::string{frac}), scale);
            return negative ? Rational(-r) : r;
        }
        if (!is_integer_literal(s)) throw bad();
        return Rational(Integer(std::string{s}));
    }

    /// Canonical text; `p/q` for rationals (always with a denominator, so the kind survives re-parsing).
    std::string str() const {
        switch (kind()) {
        case Kind::integer: return as_integer().str();
        case Kind::rational: {
            const auto& r = as_rational();
            return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
        }
        case Kind::text: return as_text();
        case Kind::date: return as_date().str();
        }
        return {};
    }

    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

    /// Total order used for containers: kind first, then value.
    friend bool operator<(const Value& a, const Value& b) {
        if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
        return std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                return x < std::get<T>(b.v_);
            },
            a.v_);
    }

    std::size_t hash() const {
        std::size_t seed = v_.index() * 0x9e3779b97f4a7c15ULL;
        std::size_t h = std::visit(
            [](const auto& x) -> std::size_t {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Integer> || std::is_same_v<T, Rational>) {
                    return boost::multiprecision::hash_value(x);
                } else if constexpr (std::is_same_v<T, std::string>) {
                    return std::hash<std::string>{}(x);
                } else {
                    return std::hash<long long>{}(static_cast<long long>(x.year) * 10000 + x.month * 100 + x.day);
                }
            },
            v_);
        return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    }

private:
    Storage v_;
};

inline std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.str(); }

/// Evaluates `a op b`. Equality across kinds is false; ordering across kinds throws TypeError.
inline bool compare(const Value& a, const Value& b, CmpOp op) {
    if (a.kind() != b.kind()) {
        if (op == CmpOp::eq) return false;
        if (op == CmpOp::ne) return true;
        throw TypeError("cannot order " + std::string(kind_name(a.kind())) + " against " +
                        std::string(kind_name(b.kind())));
    }
    switch (op) {
    case CmpOp::eq: return a == b;
    case CmpOp::ne: return !(a == b);
    case CmpOp::lt: return a < b;
    case CmpOp::le: return !(b < a);
    case CmpOp::gt: return b < a;
    case CmpOp::ge: return !(a < b);
    }
    return false;
}

struct ValueHash {
    std::size_t operator()(const Value& v) const { return v.hash(); }
};

} // namespace incmeter
