#pragma once

// Independent reference computations used only by the test suites. Nothing
// here calls into the library's solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Newton iteration for q = exp(-c q), the smallest root of the
/// double-exponential locus equation whenever c <= e.
inline double newton_exp_fixed_point(double c) {
    double q = 0.5;
    for (int i = 0; i < 100; ++i) {
        const double f = q - std::exp(-c * q);
        const double df = 1.0 + c * std::exp(-c * q);
        const double next = q - f / df;
        if (std::abs(next - q) < 1e-16) return next;
        q = next;
    }
    return q;
}

/// Atomic mass 2q + q^2 - 1 for c = 1, where q = exp(-q).
inline double poisson1_atom() {
    const double q = newton_exp_fixed_point(1.0);
    return 2.0 * q + q * q - 1.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Brute-force maximum of f on a uniform grid of n + 1 points in [a, b].
inline double grid_max(const std::function<double(double)>& f, double a, double b, int n) {
    double best = -INFINITY;
    for (int i = 0; i <= n; ++i) best = std::max(best, f(a + (b - a) * i / n));
    return best;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

/// Kesten-McKay density for degree d, written out independently.
inline double kesten_mckay(int d, double x) {
    const double edge2 = 4.0 * (d - 1);
    if (x * x >= edge2) return 0.0;
    return d * std::sqrt(edge2 - x * x) / (2.0 * M_PI * (d * d - x * x));
}

/// Eigenvalues of a small dense symmetric matrix by cyclic Jacobi rotations.
struct EigenSystem {
    std::vector<double> values;
    /// vectors[i][k] is component i of the eigenvector for values[k].
    std::vector<std::vector<double>> vectors;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix; values unsorted.
inline EigenSystem jacobi_eigensystem(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    EigenSystem out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a[i][i];
    out.vectors = std::move(v);
    return out;
}

inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    auto ev = jacobi_eigensystem(std::move(a)).values;
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace oracle
