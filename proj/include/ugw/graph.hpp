#pragma once

// Sparse random graphs: Erdos-Renyi G(n, c/n) and the configuration model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ugw/degree.hpp"
#include "ugw/error.hpp"
#include "ugw/rng.hpp"

namespace ugw {

using Vertex = std::uint32_t;

/// Undirected (multi)graph stored as sorted neighbor lists. A self-loop at v
/// appears twice in adj(v), so adjacency-matrix entries equal list counts.
class SparseGraph {
public:
    SparseGraph() = default;

    /// Builds from an edge list; `simple` erases loops and merges parallel edges.
    SparseGraph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges, bool simple)
        : adjacency_(n), simple_(simple) {
        for (auto [u, v] : edges) {
            if (u >= n || v >= n) throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
            if (simple && u == v) continue;
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& nb : adjacency_) {
            std::sort(nb.begin(), nb.end());
            if (simple) nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        std::size_t half_degrees = 0;
        for (const auto& nb : adjacency_) half_degrees += nb.size();
        edge_count_ = half_degrees / 2;
    }

    std::size_t n() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    bool simple() const noexcept { return simple_; }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
    std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

    std::size_t max_degree() const noexcept {
        std::size_t m = 0;
        for (const auto& nb : adjacency_) m = std::max(m, nb.size());
        return m;
    }

    /// Adjacency-matrix entry A_uv.
    std::size_t multiplicity(Vertex u, Vertex v) const {
        const auto& nb = adjacency_.at(u);
        const auto [lo, hi] = std::equal_range(nb.begin(), nb.end(), v);
        return static_cast<std::size_t>(hi - lo);
    }

    double trace() const {
        double tr = 0.0;
        for (Vertex v = 0; v < n(); ++v) tr += static_cast<double>(multiplicity(v, v));
        return tr;
    }

    /// Sum of squared adjacency entries.
    double frobenius_squared() const {
        double f = 0.0;
        for (Vertex v = 0; v < n(); ++v) {
            const auto& nb = adjacency_[v];
            for (std::size_t i = 0; i < nb.size();) {
                std::size_t j = i;
                while (j < nb.size() && nb[j] == nb[i]) ++j;
                const double m = static_cast<double>(j - i);
                f += m * m;
                i = j;
            }
        }
        return f;
    }

    bool is_symmetric() const {
        for (Vertex v = 0; v < n(); ++v)
            for (Vertex u : adjacency_[v])
                if (multiplicity(u, v) != multiplicity(v, u)) return false;
        return true;
    }

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
    bool simple_ = true;
};

/// G(n, p) with p = c / n, by geometric skipping over the pairs (v > w).
inline SparseGraph sample_er(std::size_t n, double c, std::uint64_t seed) {
    if (!(c >= 0.0) || (n > 0 && c > static_cast<double>(n)))
        throw Error(ErrorKind::InvalidArgument, "ER mean degree must lie in [0, n]");
    if (n > std::numeric_limits<Vertex>::max()) throw Error(ErrorKind::InvalidArgument, "n too large");
    std::vector<std::pair<Vertex, Vertex>> edges;
    const double p = n == 0 ? 0.0 : c / static_cast<double>(n);
    if (p >= 1.0) {
        for (Vertex v = 1; v < n; ++v)
            for (Vertex w = 0; w < v; ++w) edges.emplace_back(v, w);
        return SparseGraph(n, edges, true);
    }
    if (p > 0.0) {
        edges.reserve(static_cast<std::size_t>(c * static_cast<double>(n) / 2.0 * 1.1) + 16);
        auto rng = Stream::keyed(seed, StreamTag::Graph, 0, 0);
        const double log_q = std::log1p(-p);
        std::int64_t v = 1;
        std::int64_t w = -1;
        const auto nn = static_cast<std::int64_t>(n);
        while (v < nn) {
            const double skip = std::floor(std::log(rng.uniform_pos()) / log_q);
            w += 1 + static_cast<std::int64_t>(std::min(skip, 9e15));
            while (w >= v && v < nn) {
                w -= v;
                ++v;
            }
            if (v < nn) edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(w));
        }
    }
    return SparseGraph(n, edges, true);
}

/// Configuration model: n i.i.d. degrees, the last redrawn until the degree sum
/// is even, then a uniform stub pairing. `simple` gives the erased variant.
inline SparseGraph sample_config_model(const DegreeDistribution& dist, std::size_t n, std::uint64_t seed,
                                       bool simple) {
    if (n > std::numeric_limits<Vertex>::max()) throw Error(ErrorKind::InvalidArgument, "n too large");
    std::vector<std::uint64_t> degrees(n);
    std::uint64_t total = 0;
    for (std::size_t v = 0; v < n; ++v) {
        auto rng = Stream::keyed(seed, StreamTag::Graph, 1, static_cast<std::uint32_t>(v));
        degrees[v] = dist.sample(rng);
        total += degrees[v];
    }
    if (n > 0 && total % 2 == 1) {
        auto rng = Stream::keyed(seed, StreamTag::Graph, 2, 0);
        constexpr int kMaxRedraws = 10000;
        int attempt = 0;
        for (; attempt < kMaxRedraws; ++attempt) {
            const auto d = dist.sample(rng);
            if ((total - degrees[n - 1] + d) % 2 == 0) {
                total = total - degrees[n - 1] + d;
                degrees[n - 1] = d;
                break;
            }
        }
        if (attempt == kMaxRedraws)
            throw Error(ErrorKind::InvalidArgument,
                        "could not make the degree sum even for " + dist.to_string() + " with n = " + std::to_string(n));
    }
    for (std::size_t v = 0; v < n; ++v)
        if (degrees[v] >= n)
            throw Error(ErrorKind::DegreeExceedsN, "vertex " + std::to_string(v) + " drew degree " +
                                                       std::to_string(degrees[v]) + " >= n = " + std::to_string(n));
    std::vector<Vertex> stubs;
    stubs.reserve(total);
    for (std::size_t v = 0; v < n; ++v) stubs.insert(stubs.end(), degrees[v], static_cast<Vertex>(v));
    auto rng = Stream::keyed(seed, StreamTag::Graph, 3, 0);
    for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);
    return SparseGraph(n, edges, simple);
}

}  // namespace ugw
