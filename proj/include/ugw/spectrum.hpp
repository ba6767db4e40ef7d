#pragma once

// Spectra, kernel dimension and reference densities for finite graphs.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "ugw/error.hpp"
#include "ugw/graph.hpp"
#include "ugw/modp.hpp"
#include "ugw/rng.hpp"

namespace ugw {

inline constexpr std::size_t kDefaultEigenCap = 4096;

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    std::size_t n = 0;
    double trace_residual = 0.0;      // |sum lambda - tr A|
    double frobenius_residual = 0.0;  // |sum lambda^2 - ||A||_F^2|
    double solver_residual() const noexcept { return std::max(trace_residual, frobenius_residual); }
};

/// Eigenvalues of the adjacency matrix by Householder tridiagonalization and
/// implicit QR (Eigen's SelfAdjointEigenSolver). Throws CapExceeded above `cap`
/// and NoConvergence if the trace or Frobenius identities fail.
inline SpectrumResult eigenvalues(const SparseGraph& g, std::size_t cap = kDefaultEigenCap) {
    const std::size_t n = g.n();
    if (n > cap)
        throw Error(ErrorKind::CapExceeded,
                    "dense eigensolver cap is " + std::to_string(cap) + ", graph has n = " + std::to_string(n));
    SpectrumResult out;
    out.n = n;
    if (n == 0) return out;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Vertex v = 0; v < n; ++v)
        for (Vertex u : g.neighbors(v)) a(v, u) += 1.0;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "symmetric eigensolver failed");
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    double sum = 0.0, sum_sq = 0.0;
    for (double l : out.eigenvalues) {
        sum += l;
        sum_sq += l * l;
    }
    out.trace_residual = std::abs(sum - g.trace());
    out.frobenius_residual = std::abs(sum_sq - g.frobenius_squared());
    const double dn = static_cast<double>(n);
    if (out.trace_residual > dn * 1e-8 || out.frobenius_residual > dn * 1e-6)
        throw Error(ErrorKind::NoConvergence, "spectrum fails trace/Frobenius check (residuals " +
                                                  detail::format_real(out.trace_residual) + ", " +
                                                  detail::format_real(out.frobenius_residual) + ")");
    return out;
}

// ---------------------------------------------------------------------------
// Nullity

enum class NullityMethod { RankModPrime, SvdThreshold };

inline const char* to_string(NullityMethod m) noexcept {
    return m == NullityMethod::RankModPrime ? "RankModPrime" : "SvdThreshold";
}

struct NullityResult {
    std::size_t nullity = 0;
    NullityMethod method = NullityMethod::RankModPrime;
    std::uint64_t prime = 0;  // RankModPrime only
    double tol = 0.0;         // SvdThreshold only
    std::size_t n = 0;
    /// Vertices left after leaf removal (RankModPrime only).
    std::size_t core_size = 0;
};

namespace detail {

/// Rank of a dense square matrix over GF(p), entries already reduced.
/// Row updates use r_j <- a r_j - b r_i in Montgomery form; the implied
/// nonzero row scalings leave the rank unchanged, so no inverses are needed.
inline std::size_t dense_rank_mod(std::vector<std::uint64_t> a, std::size_t m, const modp::Montgomery& mont) {
    std::size_t rank = 0;
    std::vector<std::size_t> support;
    for (std::size_t col = 0; col < m && rank < m; ++col) {
        std::size_t pivot = rank;
        while (pivot < m && a[pivot * m + col] == 0) ++pivot;
        if (pivot == m) continue;
        if (pivot != rank)
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot * m),
                             a.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * m),
                             a.begin() + static_cast<std::ptrdiff_t>(rank * m));
        const std::uint64_t* prow = &a[rank * m];
        support.clear();
        for (std::size_t k = col + 1; k < m; ++k)
            if (prow[k] != 0) support.push_back(k);
        const std::uint64_t pv = prow[col];
        for (std::size_t r = rank + 1; r < m; ++r) {
            std::uint64_t* row = &a[r * m];
            const std::uint64_t f = row[col];
            if (f == 0) continue;
            row[col] = 0;
            // Entries outside the pivot support are only scaled.
            std::size_t s = 0;
            for (std::size_t k = col + 1; k < m; ++k) {
                const std::uint64_t scaled = row[k] == 0 ? 0 : mont.mul(pv, row[k]);
                if (s < support.size() && support[s] == k) {
                    row[k] = mont.sub(scaled, mont.mul(f, prow[k]));
                    ++s;
                } else {
                    row[k] = scaled;
                }
            }
        }
        ++rank;
    }
    return rank;
}

/// Leaf removal: a degree-one vertex v and its neighbor u together carry rank
/// two, and isolated vertices carry none. Returns the number of isolated
/// vertices removed and leaves the remaining core flagged in `alive`.
inline std::size_t strip_leaves(const SparseGraph& g, std::vector<char>& alive) {
    const std::size_t n = g.n();
    alive.assign(n, 1);
    std::vector<std::size_t> deg(n);  // distinct alive neighbors, self included for loops
    std::vector<std::vector<Vertex>> distinct(n);
    for (Vertex v = 0; v < n; ++v) {
        const auto& nb = g.neighbors(v);
        std::unique_copy(nb.begin(), nb.end(), std::back_inserter(distinct[v]));
        deg[v] = distinct[v].size();
    }
    std::queue<Vertex> pending;
    for (Vertex v = 0; v < n; ++v)
        if (deg[v] <= 1) pending.push(v);
    std::size_t isolated = 0;
    const auto remove = [&](Vertex x) {
        alive[x] = 0;
        for (Vertex w : distinct[x]) {
            if (w == x || !alive[w]) continue;
            if (--deg[w] <= 1) pending.push(w);
        }
    };
    while (!pending.empty()) {
        const Vertex v = pending.front();
        pending.pop();
        if (!alive[v]) continue;
        if (deg[v] == 0) {
            alive[v] = 0;
            ++isolated;
            continue;
        }
        if (deg[v] != 1) continue;
        Vertex u = v;
        for (Vertex w : distinct[v])
            if (alive[w]) u = w;
        if (u == v) continue;  // a lone self-loop is a nonzero diagonal entry
        alive[v] = 0;
        remove(u);
    }
    return isolated;
}

}  // namespace detail

/// n - rank(A) over GF(p) for a random prime p in [2^60, 2^61). Never below the
/// rational nullity, and equal to it unless p divides a nonzero minor.
inline NullityResult nullity_mod_prime(const SparseGraph& g, std::uint64_t seed) {
    auto rng = Stream::keyed(seed, StreamTag::Prime, 0, 0);
    const auto p = modp::random_prime(rng);
    NullityResult out;
    out.method = NullityMethod::RankModPrime;
    out.prime = p;
    out.n = g.n();
    std::vector<char> alive;
    const std::size_t isolated = detail::strip_leaves(g, alive);
    std::vector<std::size_t> index(g.n(), 0);
    std::size_t m = 0;
    for (Vertex v = 0; v < g.n(); ++v)
        if (alive[v]) index[v] = m++;
    out.core_size = m;
    std::vector<std::uint64_t> a(m * m, 0);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (!alive[v]) continue;
        for (Vertex u : g.neighbors(v))
            if (alive[u]) a[index[v] * m + index[u]] += 1;
    }
    const modp::Montgomery mont(p);
    const std::size_t core_rank = detail::dense_rank_mod(std::move(a), m, mont);
    out.nullity = isolated + (m - core_rank);
    return out;
}

inline double default_svd_tol(std::size_t n) { return 1e-8 * static_cast<double>(n); }

/// Number of eigenvalues with |lambda| < tol.
inline NullityResult nullity_from_spectrum(const SpectrumResult& spec, double tol) {
    NullityResult out;
    out.method = NullityMethod::SvdThreshold;
    out.tol = tol;
    out.n = spec.n;
    out.nullity = static_cast<std::size_t>(std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                                                         [&](double l) { return std::abs(l) < tol; }));
    return out;
}

inline NullityResult nullity(const SparseGraph& g, NullityMethod method, std::uint64_t seed = 1,
                             double tol = -1.0) {
    if (method == NullityMethod::RankModPrime) return nullity_mod_prime(g, seed);
    return nullity_from_spectrum(eigenvalues(g), tol > 0.0 ? tol : default_svd_tol(g.n()));
}

struct CrossCheckedNullity {
    NullityResult authoritative;  // RankModPrime
    NullityResult threshold;      // SvdThreshold
    bool agree = false;
    int primes_tried = 0;
};

/// Runs both methods; on disagreement retries with a second prime. The modular
/// result stays authoritative.
inline CrossCheckedNullity nullity_cross_checked(const SparseGraph& g, const SpectrumResult& spec,
                                                 std::uint64_t seed) {
    CrossCheckedNullity out;
    out.threshold = nullity_from_spectrum(spec, default_svd_tol(g.n()));
    out.authoritative = nullity_mod_prime(g, seed);
    out.primes_tried = 1;
    if (out.authoritative.nullity != out.threshold.nullity) {
        const auto second = nullity_mod_prime(g, seed ^ 0x5bd1e995u);
        out.primes_tried = 2;
        if (second.nullity < out.authoritative.nullity) out.authoritative = second;
    }
    out.agree = out.authoritative.nullity == out.threshold.nullity;
    return out;
}

// ---------------------------------------------------------------------------
// Window mass and reference laws

/// (#{|lambda| <= eps} - nullity) / (2 eps n): the mass near zero outside the atom.
inline double window_mass(const SpectrumResult& spec, const NullityResult& nul, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "window_mass needs eps > 0");
    if (spec.n == 0) return 0.0;
    const auto inside = std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                                      [&](double l) { return std::abs(l) <= eps; });
    return (static_cast<double>(inside) - static_cast<double>(nul.nullity)) /
           (2.0 * eps * static_cast<double>(spec.n));
}

inline double kesten_mckay_edge(int d) { return 2.0 * std::sqrt(static_cast<double>(d - 1)); }

/// Spectral density of the infinite d-regular tree.
inline double kesten_mckay_density(int d, double lambda) {
    if (d < 2) throw Error(ErrorKind::InvalidArgument, "Kesten-McKay needs d >= 2");
    const double dd = static_cast<double>(d);
    const double r2 = 4.0 * (dd - 1.0);
    if (lambda * lambda >= r2) return 0.0;
    return dd * std::sqrt(r2 - lambda * lambda) / (2.0 * std::numbers::pi * (dd * dd - lambda * lambda));
}

/// CDF of the Kesten-McKay law. Substituting lambda = R sin(theta) removes the
/// square-root edge, leaving a smooth integrand for Simpson's rule.
inline double kesten_mckay_cdf(int d, double x, int panels = 2000) {
    if (d < 2) throw Error(ErrorKind::InvalidArgument, "Kesten-McKay needs d >= 2");
    const double r = kesten_mckay_edge(d);
    if (x <= -r) return 0.0;
    if (x >= r) return 1.0;
    if (d == 2) return 0.5 + std::asin(x / r) / std::numbers::pi;  // arcsine law
    const double dd = static_cast<double>(d);
    const auto integrand = [&](double theta) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        return dd * r * r * c * c / (2.0 * std::numbers::pi * (dd * dd - r * r * s * s));
    };
    const double a = -std::numbers::pi / 2.0;
    const double b = std::asin(x / r);
    const int n = panels % 2 == 0 ? panels : panels + 1;
    const double h = (b - a) / n;
    double sum = integrand(a) + integrand(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(a + i * h);
    return std::clamp(sum * h / 3.0, 0.0, 1.0);
}

/// Kolmogorov-Smirnov distance between the empirical law of `spec` and a
/// reference CDF (right-continuous; left limits are taken just below each
/// eigenvalue).
inline double empirical_cdf_distance(const SpectrumResult& spec, const std::function<double(double)>& reference_cdf) {
    const auto& ev = spec.eigenvalues;
    if (ev.empty()) return 0.0;
    const double n = static_cast<double>(ev.size());
    double sup = 0.0;
    std::size_t i = 0;
    while (i < ev.size()) {
        std::size_t j = i;
        while (j < ev.size() && ev[j] == ev[i]) ++j;
        const double left = reference_cdf(std::nextafter(ev[i], -std::numeric_limits<double>::infinity()));
        const double right = reference_cdf(ev[i]);
        sup = std::max(sup, std::abs(static_cast<double>(i) / n - left));
        sup = std::max(sup, std::abs(static_cast<double>(j) / n - right));
        i = j;
    }
    return sup;
}

/// Empirical CDF of a spectrum as a callable.
inline std::function<double(double)> empirical_cdf(const SpectrumResult& spec) {
    return [ev = spec.eigenvalues](double x) {
        const auto k = std::upper_bound(ev.begin(), ev.end(), x) - ev.begin();
        return ev.empty() ? 0.0 : static_cast<double>(k) / static_cast<double>(ev.size());
    };
}

}  // namespace ugw
