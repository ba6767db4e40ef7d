#pragma once

// Deterministic analysis of the atom at zero of unimodular Galton-Watson
// spectra: the function M, its critical points, and the classifier for
// extended states at zero.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ugw/degree.hpp"
#include "ugw/error.hpp"

namespace ugw {

/// M(z) = phi(z) + (1 - z) phi'(z) + phi(1 - phihat(z)) - 1 on [0, 1], with
/// derivatives. Holds the degree law and its size-biased law.
class MFunction {
public:
    explicit MFunction(const DegreeDistribution& dist)
        : degree_(dist), offspring_(size_biased(dist)), mean_(dist.mean()) {}

    const DegreeDistribution& degree() const noexcept { return degree_; }
    const OffspringDistribution& offspring() const noexcept { return offspring_; }

    double value(double z) const {
        check(z);
        return degree_.phi(z) + (1.0 - z) * degree_.phi_prime(z) +
               degree_.phi(1.0 - offspring_.phi(z)) - 1.0;
    }

    /// phi'(1) phihat'(z) [1 - z - phihat(1 - phihat(z))].
    double prime(double z) const {
        check(z);
        return mean_ * offspring_.phi_prime(z) * bracket(z);
    }

    double second(double z) const {
        check(z);
        const double w = 1.0 - offspring_.phi(z);
        const double d1 = offspring_.phi_prime(z);
        const double bracket_prime = -1.0 + offspring_.phi_prime(w) * d1;
        return mean_ * (offspring_.phi_second(z) * bracket(z) + d1 * bracket_prime);
    }

    /// Vanishes exactly at the fixed points of z -> 1 - phihat(1 - phihat(z)).
    double bracket(double z) const { return 1.0 - z - offspring_.phi(1.0 - offspring_.phi(z)); }

    /// z -> 1 - phihat(1 - phihat(z)), increasing on [0, 1].
    double double_map(double z) const { return 1.0 - offspring_.phi(1.0 - offspring_.phi(z)); }

    /// z -> 1 - phihat(z), decreasing; swaps the fixed points of double_map.
    double flip(double z) const { return 1.0 - offspring_.phi(z); }

private:
    static void check(double z) {
        if (!(z >= 0.0 && z <= 1.0))
            throw Error(ErrorKind::Domain, "M evaluated at " + detail::format_real(z));
    }

    DegreeDistribution degree_;
    OffspringDistribution offspring_;
    double mean_;
};

inline double M(const DegreeDistribution& dist, double z) { return MFunction(dist).value(z); }
inline double M_prime(const DegreeDistribution& dist, double z) { return MFunction(dist).prime(z); }
inline double M_second(const DegreeDistribution& dist, double z) { return MFunction(dist).second(z); }

namespace detail {

/// Bisection for a sign change of f on [lo, hi], run to machine precision
/// (the bracket stops shrinking) or until hi - lo <= tol.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 0.0) {
    double f_lo = f(lo);
    if (f_lo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Maximizer of a unimodal f on [lo, hi] by golden-section search.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    const double lo0 = lo;
    const double hi0 = hi;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 300 && hi - lo > tol; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    // The endpoints are candidates too: maxima of M sit on the boundary for
    // regular degree laws.
    double best = 0.5 * (lo + hi);
    double f_best = f(best);
    for (double x : {lo, hi, lo0, hi0}) {
        const double fx = f(x);
        if (fx > f_best || (fx == f_best && (x == lo0 || x == hi0))) {
            best = x;
            f_best = fx;
        }
    }
    return best;
}

/// All roots of f on [lo, hi] from a uniform sign-change scan plus bisection.
template <typename F>
std::vector<double> scan_roots(F&& f, double lo, double hi, std::size_t cells, double tol,
                              double merge) {
    std::vector<double> roots;
    const double width = (hi - lo) / static_cast<double>(cells);
    double a = lo;
    double fa = f(a);
    for (std::size_t i = 1; i <= cells; ++i) {
        const double b = i == cells ? hi : lo + width * static_cast<double>(i);
        const double fb = f(b);
        if (fa == 0.0) {
            roots.push_back(a);
        } else if ((fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0)) {
            roots.push_back(bisect(f, a, b, tol));
        }
        a = b;
        fa = fb;
    }
    if (fa == 0.0) roots.push_back(hi);
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || r - merged.back() > merge) merged.push_back(r);
    }
    return merged;
}

}  // namespace detail

/// The unique z* in (0,1) with z* = 1 - phihat(z*).
inline double solve_z_star(const MFunction& m) {
    if (!m.degree().non_degenerate())
        throw Error(ErrorKind::Degenerate, "pi_0 + pi_1 = 1 has no z*");
    return detail::bisect([&](double z) { return m.flip(z) - z; }, 0.0, 1.0, 1e-15);
}

inline double solve_z_star(const DegreeDistribution& dist) { return solve_z_star(MFunction(dist)); }

struct ArgmaxOptions {
    std::size_t grid_n = 10000;
    double refine_tol = 1e-10;
    double value_tol = 1e-10;
    double merge_radius = 1e-7;
};

/// Sorted maximizers of M on [0, 1].
inline std::vector<double> argmax_M(const MFunction& m, const ArgmaxOptions& opt = {}) {
    const std::size_t n = std::max<std::size_t>(opt.grid_n, 1000);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = m.value(static_cast<double>(i) / n);

    // Refine every grid-local maximum before comparing values: two genuinely
    // equal maxima can differ by far more than value_tol on the grid.
    std::vector<std::pair<double, double>> candidates;  // (z, M(z))
    const auto f = [&](double z) { return m.value(z); };
    for (std::size_t i = 0; i <= n; ++i) {
        const bool left_ok = i == 0 || values[i] >= values[i - 1];
        const bool right_ok = i == n || values[i] >= values[i + 1];
        if (!left_ok || !right_ok) continue;
        if (i > 0 && i < n && values[i] == values[i - 1]) continue;  // interior of a flat run
        const double lo = static_cast<double>(i == 0 ? 0 : i - 1) / n;
        const double hi = static_cast<double>(i == n ? n : i + 1) / n;
        double z = detail::golden_max(f, lo, hi, opt.refine_tol);
        // Golden-section only resolves the location to ~sqrt(eps). Polish with
        // the sign of M', which is the sign of the bracket on (0, 1].
        const double b_lo = m.bracket(lo);
        const double b_hi = m.bracket(hi);
        if (b_lo > 0.0 && b_hi < 0.0) {
            z = detail::bisect([&](double x) { return m.bracket(x); }, lo, hi);
        } else if (lo == 0.0 && b_lo <= 0.0 && b_hi <= 0.0) {
            z = 0.0;
        } else if (hi == 1.0 && b_lo >= 0.0 && b_hi >= 0.0) {
            z = 1.0;
        }
        candidates.emplace_back(z, m.value(z));
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [z, v] : candidates) best = std::max(best, v);
    std::vector<double> kept;
    for (const auto& [z, v] : candidates) {
        if (v >= best - opt.value_tol) kept.push_back(z);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<double> merged;
    for (double z : kept) {
        if (merged.empty() || z - merged.back() > opt.merge_radius) merged.push_back(z);
    }
    return merged;
}

inline std::vector<double> argmax_M(const DegreeDistribution& dist, std::size_t grid_n,
                                    double refine_tol) {
    ArgmaxOptions opt;
    opt.grid_n = grid_n;
    opt.refine_tol = refine_tol;
    return argmax_M(MFunction(dist), opt);
}

/// All solutions of z = 1 - phihat(1 - phihat(z)) in [0, 1].
inline std::vector<double> fixed_points(const MFunction& m, std::size_t cells = 10000) {
    return detail::scan_roots([&](double z) { return m.double_map(z) - z; }, 0.0, 1.0, cells,
                              0.0, 1e-9);
}

constexpr double kBoundaryLayer = 1e-4;

/// Largest fixed point of the double map, located by scanning (z*, 1].
/// Roots within kBoundaryLayer (relative to 1 - z*) of z* are not resolved
/// and report z*.
inline double largest_fixed_point(const MFunction& m, double z_star, std::size_t cells = 10000) {
    const auto h = [&](double z) { return m.double_map(z) - z; };
    const double width = (1.0 - z_star) / static_cast<double>(cells);
    double result = z_star;
    double a = z_star + width;
    double ha = h(a);
    for (std::size_t i = 2; i <= cells; ++i) {
        const double b = i == cells ? 1.0 : z_star + width * static_cast<double>(i);
        const double hb = h(b);
        if (ha > 0.0 && hb <= 0.0) result = detail::bisect(h, a, b);
        a = b;
        ha = hb;
    }
    return result;
}

enum class Verdict { NoExtendedStatesL2, ExtendedStates, CriticalUnknown, DegenerateAtomic };

inline const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::NoExtendedStatesL2: return "NoExtendedStatesL2";
        case Verdict::ExtendedStates: return "ExtendedStates";
        case Verdict::CriticalUnknown: return "CriticalUnknown";
        case Verdict::DegenerateAtomic: return "DegenerateAtomic";
    }
    return "?";
}

struct ClassifyTolerances {
    double value_tol = 1e-10;
    double merge_radius = 1e-7;
    double refine_tol = 1e-10;
    double z_hat_tol = 1e-8;
    double tol_ii = 1e-6;
    double boundary_layer = kBoundaryLayer;
    std::size_t grid_n = 10000;
};

/// Fields that do not apply (degenerate laws) hold NaN.
struct ClassificationReport {
    std::string distribution;
    double z_star = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> argmax_set;
    double atom_mass = 0.0;
    double phi_hat_prime_at_zstar = std::numeric_limits<double>::quiet_NaN();
    double M_second_at_zstar = std::numeric_limits<double>::quiet_NaN();
    bool condition_i = false;
    bool condition_ii = false;
    Verdict verdict = Verdict::CriticalUnknown;
    ClassifyTolerances tolerances_used;
    // Diagnostics: the two routes to condition (i).
    double z_hat = std::numeric_limits<double>::quiet_NaN();
    bool condition_i_argmax = false;
    bool condition_i_fixed_point = false;
    std::string diagnostic;
};

inline ClassificationReport classify(const DegreeDistribution& dist,
                                     const ClassifyTolerances& tol = {}) {
    ClassificationReport r;
    r.distribution = dist.to_string();
    r.tolerances_used = tol;
    if (!dist.non_degenerate()) {
        r.verdict = Verdict::DegenerateAtomic;
        r.atom_mass = dist.pmf(0);
        r.condition_i = true;
        r.condition_ii = true;
        r.diagnostic = "pi_0 + pi_1 = 1: isolated vertices and edges only";
        return r;
    }
    const MFunction m(dist);
    r.z_star = solve_z_star(m);
    r.phi_hat_prime_at_zstar = m.offspring().phi_prime(r.z_star);
    r.M_second_at_zstar = m.second(r.z_star);

    ArgmaxOptions opt;
    opt.grid_n = tol.grid_n;
    opt.refine_tol = tol.refine_tol;
    opt.value_tol = tol.value_tol;
    opt.merge_radius = tol.merge_radius;
    r.argmax_set = argmax_M(m, opt);
    double best = -std::numeric_limits<double>::infinity();
    for (double z : r.argmax_set) best = std::max(best, m.value(z));
    r.atom_mass = std::clamp(best, 0.0, 1.0);

    r.z_hat = largest_fixed_point(m, r.z_star);
    r.condition_i_fixed_point = std::abs(r.z_hat - r.z_star) <= tol.z_hat_tol;
    r.condition_i_argmax =
        r.argmax_set.size() == 1 && std::abs(r.argmax_set.front() - r.z_star) <= tol.merge_radius;
    r.condition_i = r.condition_i_fixed_point;
    r.condition_ii = std::abs(r.phi_hat_prime_at_zstar - 1.0) > tol.tol_ii;

    const bool routes_agree = r.condition_i_argmax == r.condition_i_fixed_point;
    if (!routes_agree) {
        r.verdict = Verdict::CriticalUnknown;
        r.diagnostic = "condition (i) routes disagree: argmax scan says " +
                       std::string(r.condition_i_argmax ? "argmax = {z*}" : "argmax != {z*}") +
                       ", largest fixed point says " +
                       std::string(r.condition_i_fixed_point ? "z_hat = z*" : "z_hat > z*");
    } else if (!r.condition_i) {
        r.verdict = Verdict::ExtendedStates;
    } else if (r.condition_ii) {
        r.verdict = Verdict::NoExtendedStatesL2;
    } else {
        r.verdict = Verdict::CriticalUnknown;
    }
    if (r.condition_i && !r.condition_ii) {
        if (!r.diagnostic.empty()) r.diagnostic += "; ";
        r.diagnostic += "phihat'(z*) = 1 within tol_ii";
    }
    return r;
}

/// All q in (0,1) with q = exp(-c exp(-c q)).
inline std::vector<double> bg_locus(double c) {
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "bg_locus needs c > 0");
    const auto f = [c](double q) { return std::exp(-c * std::exp(-c * q)) - q; };
    auto roots = detail::scan_roots(f, 0.0, 1.0, 10000, 1e-15, 1e-9);
    std::erase_if(roots, [](double q) { return q <= 0.0 || q >= 1.0; });
    return roots;
}

/// q + exp(-cq) + cq exp(-cq) - 1 at the smallest locus point.
inline double bg_atom(double c) {
    const auto locus = bg_locus(c);
    if (locus.empty()) throw Error(ErrorKind::NoConvergence, "empty locus");
    const double q = locus.front();
    const double e = std::exp(-c * q);
    return q + e + c * q * e - 1.0;
}

struct CategoryTriple {
    double plus = 0.0;
    double minus = 0.0;
    double star = 0.0;
};

struct CategoryProbabilities {
    CategoryTriple under_root_law;       // (p_plus, p_minus, p_star)
    CategoryTriple under_offspring_law;  // (a_plus, a_minus, a_star)
    double z_hat = 1.0;                  // offspring-law probability of alpha = 0
    std::size_t iterations = 0;
};

/// Limit of z -> 1 - phihat(1 - phihat(z)) iterated from z = 1.
inline CategoryProbabilities category_probabilities(const MFunction& m,
                                                    std::size_t max_iterations = 100000) {
    if (!m.degree().non_degenerate())
        throw Error(ErrorKind::Degenerate, "category probabilities need pi_0 + pi_1 < 1");
    CategoryProbabilities out;
    double z = 1.0;
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
        const double next = m.double_map(z);
        const double step = std::abs(next - z);
        z = next;
        if (step < 1e-13) break;
    }
    if (it == max_iterations)
        throw Error(ErrorKind::NoConvergence, "z_hat iteration did not settle in " +
                                                  std::to_string(max_iterations) + " steps");
    out.iterations = it + 1;
    out.z_hat = z;
    const auto& off = m.offspring();
    const auto& deg = m.degree();
    auto& a = out.under_offspring_law;
    a.minus = 1.0 - off.phi(z);
    a.plus = off.phi(a.minus);
    a.star = std::max(0.0, 1.0 - a.plus - a.minus);
    auto& p = out.under_root_law;
    p.plus = deg.phi(a.minus);
    p.minus = 1.0 - deg.phi(1.0 - a.plus);
    p.star = std::max(0.0, 1.0 - p.plus - p.minus);
    return out;
}

inline CategoryProbabilities category_probabilities(const DegreeDistribution& dist) {
    return category_probabilities(MFunction(dist));
}

}  // namespace ugw
