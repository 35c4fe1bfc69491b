#pragma once

#include "incmeter/core/error.hpp"
#include "incmeter/core/value.hpp"

#include <compare>
#include <optional>
#include <ostream>
#include <string>

namespace incmeter {

/// Non-negative exact rational extended with a greatest element, infinity.
class MeasureValue {
public:
    MeasureValue() = default;
    MeasureValue(long long n) : value_(Rational(n)) { check(); }
    explicit MeasureValue(Rational r) : value_(std::move(r)) { check(); }
    MeasureValue(long long num, long long den) : value_(Rational(num, den)) { check(); }

    static MeasureValue infinity() {
        MeasureValue v;
        v.value_.reset();
        return v;
    }

    bool is_infinite() const { return !value_.has_value(); }
    const Rational& rational() const { return *value_; }

    Integer numerator() const { return boost::multiprecision::numerator(*value_); }
    Integer denominator() const { return boost::multiprecision::denominator(*value_); }

    friend MeasureValue operator+(const MeasureValue& a, const MeasureValue& b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return MeasureValue(*a.value_ + *b.value_);
    }

    /// Truncated subtraction; infinity minus a finite value stays infinite.
    friend MeasureValue operator-(const MeasureValue& a, const MeasureValue& b) {
        if (b.is_infinite()) throw Error("cannot subtract infinity");
        if (a.is_infinite()) return infinity();
        Rational r = *a.value_ - *b.value_;
        if (r < 0) throw Error("measure arithmetic went negative");
        return MeasureValue(std::move(r));
    }

    friend bool operator==(const MeasureValue& a, const MeasureValue& b) { return a.value_ == b.value_; }

    friend std::strong_ordering operator<=>(const MeasureValue& a, const MeasureValue& b) {
        if (a.is_infinite() || b.is_infinite()) {
            if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
            return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        if (*a.value_ < *b.value_) return std::strong_ordering::less;
        if (*b.value_ < *a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// `inf`, `n` or `p/q`.
    std::string str() const {
        if (is_infinite()) return "inf";
        if (denominator() == 1) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

    /// Parses `inf`, an integer, `p/q` or a decimal literal.
    static MeasureValue parse(std::string_view s) {
        if (s == "inf" || s == "infinity") return infinity();
        Rational r = Value::parse_rational(s);
        if (r < 0) throw ValidationError("measure values are non-negative");
        return MeasureValue(std::move(r));
    }

private:
    void check() const {
        if (value_ && *value_ < 0) throw Error("negative measure value");
    }

    std::optional<Rational> value_ = Rational(0);
};

inline std::ostream& operator<<(std::ostream& os, const MeasureValue& v) { return os << v.str(); }

} // namespace incmeter
