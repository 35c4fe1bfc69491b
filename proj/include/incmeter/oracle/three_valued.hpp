#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>

namespace incmeter {

/// Priest's three-valued logic. F < B < T; conjunction is min, disjunction is max.
enum class Truth : std::uint8_t { F = 0, B = 1, T = 2 };

inline Truth operator!(Truth a) {
    switch (a) {
    case Truth::T: return Truth::F;
    case Truth::F: return Truth::T;
    case Truth::B: return Truth::B;
    }
    return Truth::B;
}

inline Truth operator&&(Truth a, Truth b) { return std::min(a, b); }
inline Truth operator||(Truth a, Truth b) { return std::max(a, b); }

/// A model value: anything but F.
inline bool designated(Truth a) { return a != Truth::F; }

inline std::string_view truth_name(Truth a) {
    switch (a) {
    case Truth::T: return "T";
    case Truth::B: return "B";
    case Truth::F: return "F";
    }
    return "?";
}

} // namespace incmeter
