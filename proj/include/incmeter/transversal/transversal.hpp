#pragma once

#include "incmeter/core/measure_value.hpp"
#include "incmeter/transversal/bitset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace incmeter {

template <typename V>
using VertexSet = std::vector<V>;

/// Sorts every edge, drops duplicates and every edge that strictly contains another.
/// Result is in lexicographic order.
template <typename V>
std::vector<VertexSet<V>> minimize_antichain(std::vector<VertexSet<V>> edges) {
    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::set<VertexSet<V>> accepted;
    std::vector<VertexSet<V>> out;
    for (auto& e : edges) {
        bool dominated = false;
        if (e.size() <= 12) {
            // Probe every proper nonempty subset (and the empty set).
            std::size_t n = e.size();
            VertexSet<V> sub;
            for (std::uint32_t mask = 0; mask + 1 < (std::uint32_t(1) << n) && !dominated; ++mask) {
                sub.clear();
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1) sub.push_back(e[i]);
                dominated = accepted.count(sub) > 0;
            }
        } else {
            for (const auto& a : out) {
                if (a.size() >= e.size()) break;
                if (std::includes(e.begin(), e.end(), a.begin(), a.end())) {
                    dominated = true;
                    break;
                }
            }
        }
        if (!dominated) {
            accepted.insert(e);
            out.push_back(std::move(e));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

/// Edges re-expressed over dense indices 0..n-1.
template <typename V>
struct DenseHypergraph {
    std::vector<V> vertices;
    std::vector<Bits> edges;

    DenseHypergraph(const std::vector<V>& universe, const std::vector<VertexSet<V>>& es) {
        vertices = universe;
        for (const auto& e : es) vertices.insert(vertices.end(), e.begin(), e.end());
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        for (const auto& e : es) edges.push_back(to_bits(e));
    }

    std::size_t index(const V& v) const {
        return static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
    }

    Bits to_bits(const VertexSet<V>& s) const {
        Bits b(vertices.size());
        for (const auto& v : s) b.set(index(v));
        return b;
    }

    VertexSet<V> from_bits(const Bits& b) const {
        VertexSet<V> out;
        b.for_each([&](std::size_t i) { out.push_back(vertices[i]); });
        return out;
    }
};

class HittingSetSearch {
public:
    HittingSetSearch(std::size_t n, std::vector<Bits> edges) : n_(n), edges_(std::move(edges)) {}

    /// Minimum hitting set of all edges; nullopt if some edge is empty.
    std::optional<Bits> solve() {
        for (const auto& e : edges_)
            if (e.none()) return std::nullopt;
        best_ = Bits(n_);
        for (std::size_t i = 0; i < n_; ++i) best_.set(i);
        best_size_ = greedy_upper_bound();
        Bits chosen(n_), banned(n_);
        std::vector<std::size_t> open(edges_.size());
        std::iota(open.begin(), open.end(), 0);
        search(chosen, 0, banned, open);
        return best_;
    }

private:
    std::size_t greedy_upper_bound() {
        Bits chosen(n_);
        std::vector<char> hit(edges_.size(), 0);
        std::size_t left = edges_.size();
        while (left) {
            std::vector<std::size_t> degree(n_, 0);
            for (std::size_t e = 0; e < edges_.size(); ++e)
                if (!hit[e]) edges_[e].for_each([&](std::size_t v) { ++degree[v]; });
            std::size_t v = static_cast<std::size_t>(std::max_element(degree.begin(), degree.end()) - degree.begin());
            chosen.set(v);
            for (std::size_t e = 0; e < edges_.size(); ++e)
                if (!hit[e] && edges_[e].test(v)) {
                    hit[e] = 1;
                    --left;
                }
        }
        best_ = chosen;
        return chosen.count();
    }

    // Greedy packing of pairwise-disjoint open edges: each needs its own vertex.
    std::size_t lower_bound(const std::vector<std::size_t>& open, const Bits& banned) const {
        std::vector<std::size_t> order = open;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            Bits ea = edges_[a], eb = edges_[b];
            ea.subtract(banned);
            eb.subtract(banned);
            return ea.count() < eb.count();
        });
        Bits used(n_);
        std::size_t lb = 0;
        for (std::size_t e : order) {
            Bits avail = edges_[e];
            avail.subtract(banned);
            if (!avail.intersects(used)) {
                used |= avail;
                ++lb;
            }
        }
        return lb;
    }

    void search(Bits& chosen, std::size_t size, Bits& banned, const std::vector<std::size_t>& open) {
        if (open.empty()) {
            if (size < best_size_) {
                best_size_ = size;
                best_ = chosen;
            }
            return;
        }
        if (size + lower_bound(open, banned) >= best_size_) return;

        std::vector<std::size_t> degree(n_, 0);
        for (std::size_t e : open) {
            Bits avail = edges_[e];
            avail.subtract(banned);
            if (avail.none()) return;
            avail.for_each([&](std::size_t v) { ++degree[v]; });
        }
        std::size_t v = static_cast<std::size_t>(std::max_element(degree.begin(), degree.end()) - degree.begin());

        std::vector<std::size_t> rest;
        for (std::size_t e : open)
            if (!edges_[e].test(v)) rest.push_back(e);
        chosen.set(v);
        search(chosen, size + 1, banned, rest);
        chosen.reset(v);

        banned.set(v);
        search(chosen, size, banned, open);
        banned.reset(v);
    }

    std::size_t n_;
    std::vector<Bits> edges_;
    Bits best_;
    std::size_t best_size_ = 0;
};

/// Splits edges into connected components (edges sharing a vertex).
inline std::vector<std::vector<std::size_t>> edge_components(std::size_t n, const std::vector<Bits>& edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges) {
        auto m = e.members();
        for (std::size_t i = 1; i < m.size(); ++i) parent[find(m[i])] = find(m[0]);
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto m = edges[i].members();
        groups[m.empty() ? n + i : find(m[0])].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [_, g] : groups) out.push_back(std::move(g));
    return out;
}

} // namespace detail

/// A minimum-cardinality hitting set, or nullopt when an edge is empty.
template <typename V>
std::optional<VertexSet<V>> min_hitting_set(const std::vector<VertexSet<V>>& edges) {
    detail::DenseHypergraph<V> h({}, edges);
    std::size_t n = h.vertices.size();
    Bits total(n);
    for (const auto& comp : detail::edge_components(n, h.edges)) {
        std::vector<Bits> part;
        for (std::size_t i : comp) part.push_back(h.edges[i]);
        auto hs = detail::HittingSetSearch(n, std::move(part)).solve();
        if (!hs) return std::nullopt;
        total |= *hs;
    }
    return h.from_bits(total);
}

template <typename V>
MeasureValue min_hitting_set_size(const std::vector<VertexSet<V>>& edges) {
    auto hs = min_hitting_set(edges);
    if (!hs) return MeasureValue::infinity();
    return MeasureValue(static_cast<long long>(hs->size()));
}

/// All inclusion-minimal hitting sets by incremental edge incorporation, in lexicographic
/// order. No edges gives {{}}; an empty edge gives {}.
template <typename V>
std::vector<VertexSet<V>> minimal_transversals(const std::vector<VertexSet<V>>& input) {
    auto edges_v = minimize_antichain(input);
    detail::DenseHypergraph<V> h({}, edges_v);
    std::size_t n = h.vertices.size();
    std::vector<Bits> current{Bits(n)};
    for (const auto& e : h.edges) {
        if (e.none()) return {};
        std::vector<Bits> keep, grown;
        for (auto& t : current) {
            if (t.intersects(e)) {
                keep.push_back(std::move(t));
                continue;
            }
            e.for_each([&](std::size_t v) {
                Bits g = t;
                g.set(v);
                grown.push_back(std::move(g));
            });
        }
        std::sort(grown.begin(), grown.end());
        grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
        std::vector<Bits> next = keep;
        for (std::size_t i = 0; i < grown.size(); ++i) {
            bool minimal = true;
            for (const auto& k : keep)
                if (k.subset_of(grown[i])) {
                    minimal = false;
                    break;
                }
            for (std::size_t j = 0; minimal && j < grown.size(); ++j)
                if (j != i && grown[j].subset_of(grown[i]) && !(grown[j] == grown[i])) minimal = false;
            if (minimal) next.push_back(grown[i]);
        }
        current = std::move(next);
    }
    std::vector<VertexSet<V>> out;
    for (const auto& t : current) out.push_back(h.from_bits(t));
    std::sort(out.begin(), out.end());
    return out;
}

/// Maximal subsets of `universe` containing no edge of `mi`: complements of the minimal
/// transversals. Lexicographic order.
template <typename V>
std::vector<VertexSet<V>> maximal_consistent_subsets(const std::vector<V>& universe,
                                                     const std::vector<VertexSet<V>>& mi) {
    std::vector<V> uni = universe;
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    std::vector<VertexSet<V>> out;
    for (const auto& t : minimal_transversals(mi)) {
        VertexSet<V> c;
        std::set_difference(uni.begin(), uni.end(), t.begin(), t.end(), std::back_inserter(c));
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

class SetCoverSearch {
public:
    SetCoverSearch(std::size_t n, std::vector<Bits> sets) : n_(n), sets_(std::move(sets)) {}

    std::optional<std::vector<std::size_t>> solve() {
        Bits all(n_);
        for (std::size_t i = 0; i < n_; ++i) all.set(i);
        Bits covered(n_);
        for (const auto& s : sets_) covered |= s;
        if (!(covered == all)) return std::nullopt;
        if (n_ == 0) return std::vector<std::size_t>{};
        for (const auto& s : sets_) max_size_ = std::max(max_size_, s.count());

        greedy(all);
        std::vector<std::size_t> picked;
        search(Bits(n_), all, picked);
        return best_;
    }

private:
    void greedy(const Bits& all) {
        Bits covered(n_);
        std::vector<std::size_t> picked;
        while (!(covered == all)) {
            std::size_t best = 0, gain = 0;
            for (std::size_t i = 0; i < sets_.size(); ++i) {
                Bits g = sets_[i];
                g.subtract(covered);
                if (g.count() > gain) {
                    gain = g.count();
                    best = i;
                }
            }
            picked.push_back(best);
            covered |= sets_[best];
        }
        best_ = picked;
    }

    void search(Bits covered, const Bits& all, std::vector<std::size_t>& picked) {
        if (covered == all) {
            if (picked.size() < best_.size()) best_ = picked;
            return;
        }
        Bits open = all;
        open.subtract(covered);
        std::size_t remaining = open.count();
        if (picked.size() + (remaining + max_size_ - 1) / max_size_ >= best_.size()) return;

        // Branch on the uncovered element with the fewest candidate sets.
        std::size_t pivot = 0, fewest = sets_.size() + 1;
        open.for_each([&](std::size_t e) {
            std::size_t c = 0;
            for (const auto& s : sets_) c += s.test(e);
            if (c < fewest) {
                fewest = c;
                pivot = e;
            }
        });
        std::vector<std::pair<std::size_t, std::size_t>> options;
        for (std::size_t i = 0; i < sets_.size(); ++i)
            if (sets_[i].test(pivot)) {
                Bits g = sets_[i];
                g.subtract(covered);
                options.emplace_back(g.count(), i);
            }
        std::sort(options.begin(), options.end(), [](auto a, auto b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        for (auto [_, i] : options) {
            Bits next = covered;
            next |= sets_[i];
            picked.push_back(i);
            search(next, all, picked);
            picked.pop_back();
        }
    }

    std::size_t n_;
    std::vector<Bits> sets_;
    std::size_t max_size_ = 1;
    std::vector<std::size_t> best_;
};

} // namespace detail

/// Indices into `candidates` of a minimum cover of `universe`; nullopt if impossible.
template <typename V>
std::optional<std::vector<std::size_t>> min_cover(const std::vector<V>& universe,
                                                  const std::vector<VertexSet<V>>& candidates) {
    detail::DenseHypergraph<V> h(universe, {});
    std::vector<Bits> sets;
    for (const auto& c : candidates) {
        Bits b(h.vertices.size());
        for (const auto& v : c) {
            auto it = std::lower_bound(h.vertices.begin(), h.vertices.end(), v);
            if (it != h.vertices.end() && *it == v) b.set(static_cast<std::size_t>(it - h.vertices.begin()));
        }
        sets.push_back(std::move(b));
    }
    return detail::SetCoverSearch(h.vertices.size(), std::move(sets)).solve();
}

/// Minimum number of candidate sets whose union is `universe`; infinity if impossible.
template <typename V>
MeasureValue min_cover_by_sets(const std::vector<V>& universe, const std::vector<VertexSet<V>>& candidates) {
    auto c = min_cover(universe, candidates);
    if (!c) return MeasureValue::infinity();
    return MeasureValue(static_cast<long long>(c->size()));
}

} // namespace incmeter
