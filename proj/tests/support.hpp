#pragma once

#include "incmeter/incmeter.hpp"

#include <random>
#include <string>

namespace incmeter::fixtures {

inline fs::path source_dir() { return fs::path(INCMETER_SOURCE_DIR); }
inline fs::path sample(const std::string& name) { return source_dir() / "samples" / name / "manifest.txt"; }
inline Instance load_sample(const std::string& name) { return load_instance(sample(name)); }

/// Schema used by the parser round-trip generator: one relation per kind mix.
inline const Schema& ast_schema() {
    static const Schema s = parse_schema(
        "relation T(I: int, Q: rational, S: text, D: date)\n"
        "relation U(I: int, J: int)\n"
        "relation V(S: text)\n");
    return s;
}

/// Random well-typed denial constraints over ast_schema(). Constants cover negative
/// numbers, fractions, escaped text and dates.
class RandomAst {
public:
    explicit RandomAst(std::uint64_t seed) : rng_(seed) {}

    ConstraintSet constraint_set() {
        ConstraintSet cs;
        std::size_t n = pick(1, 4);
        for (std::size_t i = 0; i < n; ++i) cs.add(constraint("k" + std::to_string(i) + name_suffix()));
        return cs;
    }

    DenialConstraint constraint(const std::string& name) {
        const Schema& schema = ast_schema();
        DenialConstraint c;
        c.name = name;
        std::vector<std::pair<std::string, Kind>> vars;
        std::size_t atoms = pick(1, 3);
        for (std::size_t a = 0; a < atoms; ++a) {
            const auto& scheme = schema.relation(pick(0, schema.size() - 1));
            RelationAtom atom{scheme.name(), {}};
            for (const auto& attr : scheme.attributes()) {
                std::vector<std::string> same;
                for (const auto& [v, k] : vars)
                    if (k == attr.type) same.push_back(v);
                std::size_t roll = pick(0, 9);
                if (roll < 2) {
                    atom.args.push_back(constant(attr.type));
                } else if (roll < 5 && !same.empty()) {
                    atom.args.push_back(Variable{same[pick(0, same.size() - 1)]});
                } else {
                    std::string v = var_name(vars.size());
                    vars.emplace_back(v, attr.type);
                    atom.args.push_back(Variable{v});
                }
            }
            c.atoms.push_back(std::move(atom));
        }
        std::size_t disjuncts = pick(0, 3);
        for (std::size_t d = 0; d < disjuncts && !vars.empty(); ++d) {
            Conjunction conj;
            std::size_t k = pick(1, 3);
            for (std::size_t i = 0; i < k; ++i) {
                auto [lv, kind] = vars[pick(0, vars.size() - 1)];
                Term right = constant(kind);
                std::vector<std::string> same;
                for (const auto& [v, k2] : vars)
                    if (k2 == kind) same.push_back(v);
                if (pick(0, 1)) right = Variable{same[pick(0, same.size() - 1)]};
                Term left = Variable{lv};
                if (pick(0, 4) == 0) std::swap(left, right);
                conj.push_back(Comparison{left, static_cast<CmpOp>(pick(0, 5)), right});
            }
            c.phi.push_back(std::move(conj));
        }
        return c;
    }

private:
    std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    std::string var_name(std::size_t i) {
        static const char* stems[] = {"x", "y", "v", "tmp", "a_"};
        return std::string(stems[pick(0, 4)]) + std::to_string(i);
    }

    std::string name_suffix() {
        static const char* s[] = {"", "_fd", "x", "Rule"};
        return s[pick(0, 3)];
    }

    Value constant(Kind k) {
        long long n = static_cast<long long>(pick(0, 40)) - 20;
        switch (k) {
        case Kind::integer: return Value::integer(n);
        case Kind::rational: return Value::rational(n, static_cast<long long>(pick(1, 7)));
        case Kind::text: {
            static const char* texts[] = {"", "Alex", "O'Neil", "say \"hi\"", "back\\slash", "a, b", "x -> y", "ünï"};
            return Value::text(texts[pick(0, 7)]);
        }
        case Kind::date: return Value::date(static_cast<int>(1990 + pick(0, 40)), static_cast<unsigned>(pick(1, 12)),
                                            static_cast<unsigned>(pick(1, 28)));
        }
        return Value::integer(0);
    }

    std::mt19937_64 rng_;
};

} // namespace incmeter::fixtures
