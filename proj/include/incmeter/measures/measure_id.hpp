#pragma once

#include "incmeter/core/error.hpp"

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace incmeter {

enum class Family : std::uint8_t { propositional, database };

enum class MeasureName : std::uint8_t { B, M, sharp, P, A, H, nc, hs, C, eta };

inline constexpr std::array<MeasureName, 10> all_measure_names = {
    MeasureName::B, MeasureName::M, MeasureName::sharp, MeasureName::P, MeasureName::A,
    MeasureName::H, MeasureName::nc, MeasureName::hs, MeasureName::C, MeasureName::eta};

/// `IB IM Isharp IP IA IH Inc Ihs IC Ieta`
inline std::string_view measure_token(MeasureName n) {
    static constexpr std::array<std::string_view, 10> tokens = {"IB", "IM", "Isharp", "IP", "IA",
                                                                "IH", "Inc", "Ihs", "IC", "Ieta"};
    return tokens[static_cast<std::size_t>(n)];
}

struct MeasureId {
    Family family = Family::database;
    MeasureName name = MeasureName::B;

    friend auto operator<=>(const MeasureId&, const MeasureId&) = default;

    /// `prop:IB`, `db:Ieta`, ...
    std::string str() const {
        return std::string(family == Family::propositional ? "prop:" : "db:") + std::string(measure_token(name));
    }

    static MeasureId parse(std::string_view s) {
        MeasureId id;
        if (s.starts_with("prop:")) {
            id.family = Family::propositional;
            s.remove_prefix(5);
        } else if (s.starts_with("db:")) {
            id.family = Family::database;
            s.remove_prefix(3);
        } else {
            throw ValidationError("measure '" + std::string(s) + "' needs a prop: or db: prefix");
        }
        for (auto n : all_measure_names)
            if (measure_token(n) == s) {
                id.name = n;
                return id;
            }
        throw ValidationError("unknown measure '" + std::string(s) + "'");
    }
};

inline std::vector<MeasureId> all_measures(Family f) {
    std::vector<MeasureId> out;
    for (auto n : all_measure_names) out.push_back(MeasureId{f, n});
    return out;
}

inline std::vector<MeasureId> all_measures() {
    auto out = all_measures(Family::propositional);
    for (auto id : all_measures(Family::database)) out.push_back(id);
    return out;
}

} // namespace incmeter
