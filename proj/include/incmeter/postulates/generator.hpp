#pragma once

#include "incmeter/core/database.hpp"
#include "incmeter/core/schema.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/dsl/parser.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace incmeter {

/// splitmix64 step; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    return mix_seed(mix_seed(mix_seed(seed ^ mix_seed(a)) ^ b) ^ c);
}

/// Small random instances over R(A, B, C) and S(A, B) with integer values in 0..2.
/// Constraints are unary denials, FDs and ternary NDs. Deterministic given the seed.
class InstanceGen {
public:
    struct Limits {
        std::size_t max_tuples = 8;
        std::size_t max_constraints = 3;
        int max_value = 2;
    };

    explicit InstanceGen(std::uint64_t seed, Limits limits) : rng_(seed), limits_(limits) {}
    explicit InstanceGen(std::uint64_t seed) : InstanceGen(seed, Limits{}) {}

    static const Schema& schema() {
        static const Schema s = parse_schema("relation R(A: int, B: int, C: int)\nrelation S(A: int, B: int)\n");
        return s;
    }

    std::mt19937_64& rng() { return rng_; }
    const Limits& limits() const { return limits_; }

    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    Tuple tuple() {
        std::size_t rel = coin(0.7) ? 0 : 1;
        Tuple t{rel, {}};
        for (std::size_t i = 0; i < schema().relation(rel).arity(); ++i)
            t.values.push_back(Value::integer(static_cast<long long>(uniform(0, limits_.max_value))));
        return t;
    }

    Database database(std::size_t max_tuples) {
        std::size_t n = uniform(0, max_tuples);
        if (n < 2 && coin(0.8)) n = uniform(2, std::max<std::size_t>(2, max_tuples));
        std::vector<std::vector<Tuple>> grouped(schema().size());
        for (std::size_t i = 0; i < n; ++i) {
            Tuple t = tuple();
            grouped[t.relation].push_back(std::move(t));
        }
        return Database::from_groups(schema(), std::move(grouped));
    }

    Database database() { return database(limits_.max_tuples); }

    std::string constraint_text(const std::string& name) {
        static const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
        std::size_t kind = uniform(0, 2);
        std::size_t rel = coin(0.7) ? 0 : 1;
        const auto& scheme = schema().relation(rel);
        std::size_t arity = scheme.arity();
        auto attr = [&](std::size_t i) { return scheme.attribute(i).name; };
        if (kind == 0) {
            std::string atom = scheme.name() + "(";
            for (std::size_t i = 0; i < arity; ++i) atom += (i ? ", x" : "x") + std::to_string(i + 1);
            atom += ")";
            auto comparison = [&] {
                std::size_t l = uniform(1, arity);
                std::string rhs = coin(0.6) ? std::to_string(uniform(0, limits_.max_value))
                                            : "x" + std::to_string((l + uniform(0, arity - 2)) % arity + 1);
                return "x" + std::to_string(l) + " " + ops[uniform(0, 5)] + " " + rhs;
            };
            std::string phi = comparison();
            if (coin(0.25)) phi += " | " + comparison();
            if (coin(0.15)) phi += " & " + comparison();
            return "denial " + name + ": " + atom + " -> " + phi;
        }
        std::size_t lhs = uniform(0, arity - 1);
        std::size_t rhs = (lhs + uniform(1, arity - 1)) % arity;
        std::string lhs_attrs = attr(lhs);
        if (arity == 3 && coin(0.2)) {
            std::size_t other = 3 - lhs - rhs;
            lhs_attrs = attr(std::min(lhs, other)) + ", " + attr(std::max(lhs, other));
        }
        if (kind == 1) return "fd " + name + ": " + scheme.name() + ": " + lhs_attrs + " -> " + attr(rhs);
        return "nd " + name + ": " + scheme.name() + ": " + lhs_attrs + " -> 2 " + attr(rhs);
    }

    /// Up to the configured number of constraints, named `<prefix>1`, `<prefix>2`, ...
    ConstraintSet constraints(const std::string& prefix = "c") {
        std::size_t n = uniform(1, limits_.max_constraints);
        std::string text;
        for (std::size_t i = 0; i < n; ++i) text += constraint_text(prefix + std::to_string(i + 1)) + "\n";
        return parse_constraints(text, schema());
    }

    DenialConstraint constraint(const std::string& name) {
        return parse_constraints(constraint_text(name), schema())[0];
    }

private:
    std::mt19937_64 rng_;
    Limits limits_;
};

} // namespace incmeter
