#pragma once

// Degree distributions, their size-biased companions and generating functions.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ugw/error.hpp"
#include "ugw/rng.hpp"

namespace ugw {

namespace law {

struct Poisson {
    double mean;
};

struct Dirac {
    std::uint32_t degree;
};

/// Failures before the r-th success. r = 1 is the geometric law on {0, 1, ...}.
struct NegativeBinomial {
    std::uint32_t r;
    double p;
};

struct FinitePmf {
    std::vector<double> weights;  // weights[k] = P(K = k)
};

using Kind = std::variant<Poisson, Dirac, NegativeBinomial, FinitePmf>;

}  // namespace law

namespace detail {

inline double parse_real(std::string_view token, std::string_view context) {
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw Error(ErrorKind::Parse, "bad number '" + std::string(token) + "' in '" +
                                          std::string(context) + "'");
    }
    return value;
}

inline std::uint64_t parse_natural(std::string_view token, std::string_view context) {
    std::uint64_t value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last) {
        throw Error(ErrorKind::Parse, "bad integer '" + std::string(token) + "' in '" +
                                          std::string(context) + "'");
    }
    return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline std::string format_real(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline double poisson_pmf(double mean, std::uint64_t k) {
    const double kd = static_cast<double>(k);
    return std::exp(-mean + kd * std::log(mean) - std::lgamma(kd + 1.0));
}

// Small means by sequential inversion; larger means as a sum of independent
// Poisson pieces, which keeps exp(-mean) far from underflow.
inline std::uint64_t sample_poisson(double mean, Stream& rng) {
    constexpr double kPiece = 30.0;
    std::uint64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double lambda = std::min(remaining, kPiece);
        remaining -= lambda;
        double u = rng.uniform();
        double term = std::exp(-lambda);
        std::uint64_t k = 0;
        double cdf = term;
        while (u >= cdf) {
            ++k;
            term *= lambda / static_cast<double>(k);
            const double next = cdf + term;
            if (next == cdf) {  // tail exhausted in double precision; redraw
                u = rng.uniform();
                k = 0;
                term = std::exp(-lambda);
                cdf = term;
                continue;
            }
            cdf = next;
        }
        total += k;
    }
    return total;
}

inline std::uint64_t sample_geometric(double p, Stream& rng) {
    if (p >= 1.0) return 0;
    const double draw = std::floor(std::log(rng.uniform_pos()) / std::log1p(-p));
    return static_cast<std::uint64_t>(draw);
}

}  // namespace detail

/// A probability law on the naturals with closed-form generating function.
/// Shared representation of degree and offspring laws; immutable.
class DiscreteLaw {
public:
    explicit DiscreteLaw(law::Kind kind) : kind_(std::move(kind)) {
        validate_and_normalize();
        mean_ = compute_mean();
        if (std::holds_alternative<law::FinitePmf>(kind_)) build_cdf();
    }

    const law::Kind& kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }

    double pmf(std::uint64_t k) const {
        return std::visit(
            [k](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, law::Poisson>) {
                    return detail::poisson_pmf(d.mean, k);
                } else if constexpr (std::is_same_v<T, law::Dirac>) {
                    return k == d.degree ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, law::NegativeBinomial>) {
                    const double kd = static_cast<double>(k);
                    const double r = d.r;
                    const double log_binom =
                        std::lgamma(kd + r) - std::lgamma(kd + 1.0) - std::lgamma(r);
                    return std::exp(log_binom + r * std::log(d.p) + kd * std::log1p(-d.p));
                } else {
                    return k < d.weights.size() ? d.weights[k] : 0.0;
                }
            },
            kind_);
    }

    /// Generating function and its first two derivatives at z in [0, 1].
    double phi(double z) const { return gf(z, 0); }
    double phi_prime(double z) const { return gf(z, 1); }
    double phi_second(double z) const { return gf(z, 2); }

    /// Largest k with positive mass, or max() for unbounded support.
    std::uint64_t support_max() const {
        return std::visit(
            [](const auto& d) -> std::uint64_t {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, law::Dirac>) {
                    return d.degree;
                } else if constexpr (std::is_same_v<T, law::FinitePmf>) {
                    return d.weights.size() - 1;
                } else {
                    return std::numeric_limits<std::uint64_t>::max();
                }
            },
            kind_);
    }

    std::uint64_t sample(Stream& rng) const {
        return std::visit(
            [&](const auto& d) -> std::uint64_t {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, law::Poisson>) {
                    return detail::sample_poisson(d.mean, rng);
                } else if constexpr (std::is_same_v<T, law::Dirac>) {
                    return d.degree;
                } else if constexpr (std::is_same_v<T, law::NegativeBinomial>) {
                    std::uint64_t k = 0;
                    for (std::uint32_t i = 0; i < d.r; ++i) k += detail::sample_geometric(d.p, rng);
                    return k;
                } else {
                    const double u = rng.uniform() * cdf_.back();
                    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
                    const auto k = static_cast<std::uint64_t>(it - cdf_.begin());
                    return std::min<std::uint64_t>(k, cdf_.size() - 1);
                }
            },
            kind_);
    }

    /// Round-trips through the CLI grammar.
    std::string to_string() const {
        return std::visit(
            [](const auto& d) -> std::string {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, law::Poisson>) {
                    return "poisson:" + detail::format_real(d.mean);
                } else if constexpr (std::is_same_v<T, law::Dirac>) {
                    return "dirac:" + std::to_string(d.degree);
                } else if constexpr (std::is_same_v<T, law::NegativeBinomial>) {
                    if (d.r == 1) return "geometric:" + detail::format_real(d.p);
                    return "negbin:" + std::to_string(d.r) + "," + detail::format_real(d.p);
                } else {
                    std::string out = "pmf:";
                    bool first = true;
                    for (std::size_t k = 0; k < d.weights.size(); ++k) {
                        if (d.weights[k] == 0.0) continue;
                        if (!first) out += ",";
                        out += std::to_string(k) + "=" + detail::format_real(d.weights[k]);
                        first = false;
                    }
                    return out;
                }
            },
            kind_);
    }

private:
    void validate_and_normalize() {
        std::visit(
            [](auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, law::Poisson>) {
                    if (!(d.mean > 0.0) || !std::isfinite(d.mean))
                        throw Error(ErrorKind::InvalidArgument, "Poisson mean must be > 0");
                } else if constexpr (std::is_same_v<T, law::NegativeBinomial>) {
                    if (!(d.p > 0.0 && d.p < 1.0))
                        throw Error(ErrorKind::InvalidArgument, "success probability must lie in (0,1)");
                    if (d.r == 0) throw Error(ErrorKind::InvalidArgument, "negbin r must be >= 1");
                } else if constexpr (std::is_same_v<T, law::FinitePmf>) {
                    auto& w = d.weights;
                    if (w.empty()) throw Error(ErrorKind::InvalidArgument, "empty pmf");
                    for (double x : w) {
                        if (!(x >= 0.0) || !std::isfinite(x))
                            throw Error(ErrorKind::InvalidArgument, "pmf weights must be nonnegative");
                    }
                    const double total = std::accumulate(w.begin(), w.end(), 0.0);
                    if (std::abs(total - 1.0) > 1e-9)
                        throw Error(ErrorKind::InvalidArgument,
                                    "pmf weights sum to " + detail::format_real(total));
                    for (double& x : w) x /= total;
                    while (w.size() > 1 && w.back() == 0.0) w.pop_back();
                }
            },
            kind_);
    }

    double compute_mean() const {
        return std::visit(
            [](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, law::Poisson>) {
                    return d.mean;
                } else if constexpr (std::is_same_v<T, law::Dirac>) {
                    return d.degree;
                } else if constexpr (std::is_same_v<T, law::NegativeBinomial>) {
                    return d.r * (1.0 - d.p) / d.p;
                } else {
                    double m = 0.0;
                    for (std::size_t k = 0; k < d.weights.size(); ++k) m += k * d.weights[k];
                    return m;
                }
            },
            kind_);
    }

    void build_cdf() {
        const auto& w = std::get<law::FinitePmf>(kind_).weights;
        cdf_.resize(w.size());
        std::partial_sum(w.begin(), w.end(), cdf_.begin());
    }

    double gf(double z, int order) const {
        if (!(z >= 0.0 && z <= 1.0))
            throw Error(ErrorKind::Domain, "generating function argument " +
                                               detail::format_real(z) + " outside [0,1]");
        return std::visit(
            [z, order](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, law::Poisson>) {
                    return std::pow(d.mean, order) * std::exp(d.mean * (z - 1.0));
                } else if constexpr (std::is_same_v<T, law::Dirac>) {
                    const double n = d.degree;
                    if (d.degree < static_cast<std::uint32_t>(order)) return 0.0;
                    double falling = 1.0;
                    for (int i = 0; i < order; ++i) falling *= n - i;
                    return falling * std::pow(z, n - order);
                } else if constexpr (std::is_same_v<T, law::NegativeBinomial>) {
                    const double q = 1.0 - d.p;
                    const double g = d.p / (1.0 - q * z);
                    double rising = 1.0;
                    for (int i = 0; i < order; ++i) rising *= d.r + i;
                    return rising * std::pow(q / d.p, order) * std::pow(g, d.r + order);
                } else {
                    // Horner on the order-th derivative of the polynomial.
                    const auto& w = d.weights;
                    const auto n = w.size();
                    if (n <= static_cast<std::size_t>(order)) return 0.0;
                    double acc = 0.0;
                    for (std::size_t k = n; k-- > static_cast<std::size_t>(order);) {
                        double falling = 1.0;
                        for (int i = 0; i < order; ++i) falling *= static_cast<double>(k - i);
                        acc = acc * z + falling * w[k];
                    }
                    return acc;
                }
            },
            kind_);
    }

    law::Kind kind_;
    double mean_ = 0.0;
    std::vector<double> cdf_;
};

/// Size-biased offspring law of a degree distribution.
class OffspringDistribution : public DiscreteLaw {
public:
    explicit OffspringDistribution(law::Kind kind) : DiscreteLaw(std::move(kind)) {}
};

/// Degree law of the root of a unimodular Galton-Watson tree.
class DegreeDistribution : public DiscreteLaw {
public:
    explicit DegreeDistribution(law::Kind kind) : DiscreteLaw(std::move(kind)) {}

    static DegreeDistribution poisson(double mean) { return DegreeDistribution(law::Poisson{mean}); }
    static DegreeDistribution dirac(std::uint32_t d) { return DegreeDistribution(law::Dirac{d}); }
    static DegreeDistribution geometric(double p) {
        return DegreeDistribution(law::NegativeBinomial{1, p});
    }
    static DegreeDistribution finite(std::vector<double> weights) {
        return DegreeDistribution(law::FinitePmf{std::move(weights)});
    }

    /// pi_0 + pi_1 < 1, the standing non-degeneracy assumption.
    bool non_degenerate() const { return pmf_mass_01() < 1.0 - 1e-15; }

    double pmf_mass_01() const { return pmf(0) + pmf(1); }

    /// Parses "poisson:2.0", "dirac:3", "geometric:0.5", "negbin:2,0.5",
    /// "pmf:0=0.2,1=0.3,3=0.5".
    static DegreeDistribution parse(std::string_view text) {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos)
            throw Error(ErrorKind::Parse, "missing ':' in distribution '" + std::string(text) + "'");
        const auto name = text.substr(0, colon);
        const auto body = text.substr(colon + 1);
        try {
            if (name == "poisson") return poisson(detail::parse_real(body, text));
            if (name == "dirac") {
                const auto d = detail::parse_natural(body, text);
                if (d > std::numeric_limits<std::uint32_t>::max())
                    throw Error(ErrorKind::Parse, "degree '" + std::string(body) + "' too large");
                return dirac(static_cast<std::uint32_t>(d));
            }
            if (name == "geometric") return geometric(detail::parse_real(body, text));
            if (name == "negbin") {
                const auto parts = detail::split(body, ',');
                if (parts.size() != 2)
                    throw Error(ErrorKind::Parse, "negbin expects 'r,p' in '" + std::string(text) + "'");
                const auto r = detail::parse_natural(parts[0], text);
                if (r == 0 || r > 1000)
                    throw Error(ErrorKind::Parse, "negbin r '" + std::string(parts[0]) + "' out of range");
                return DegreeDistribution(law::NegativeBinomial{static_cast<std::uint32_t>(r),
                                                                detail::parse_real(parts[1], text)});
            }
            if (name == "pmf") {
                std::vector<double> w;
                for (auto entry : detail::split(body, ',')) {
                    const auto eq = entry.find('=');
                    if (eq == std::string_view::npos)
                        throw Error(ErrorKind::Parse, "pmf entry '" + std::string(entry) + "' lacks '='");
                    const auto k = detail::parse_natural(entry.substr(0, eq), text);
                    if (k > 1'000'000)
                        throw Error(ErrorKind::Parse, "pmf degree '" + std::string(entry.substr(0, eq)) +
                                                          "' too large");
                    const double p = detail::parse_real(entry.substr(eq + 1), text);
                    if (w.size() <= k) w.resize(k + 1, 0.0);
                    if (w[k] != 0.0)
                        throw Error(ErrorKind::Parse, "duplicate pmf degree '" +
                                                          std::string(entry.substr(0, eq)) + "'");
                    w[k] = p;
                }
                return finite(std::move(w));
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Parse) throw;
            throw Error(ErrorKind::Parse, std::string(e.what()) + " in '" + std::string(text) + "'");
        }
        throw Error(ErrorKind::Parse, "unknown distribution '" + std::string(name) + "'");
    }
};

/// pi-hat_k = (k+1) pi_{k+1} / mean.
inline OffspringDistribution size_biased(const DegreeDistribution& dist) {
    if (!(dist.mean() > 0.0)) throw Error(ErrorKind::ZeroMean, "cannot size-bias a zero-mean law");
    return std::visit(
        [&](const auto& d) -> OffspringDistribution {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, law::Poisson>) {
                return OffspringDistribution(d);
            } else if constexpr (std::is_same_v<T, law::Dirac>) {
                return OffspringDistribution(law::Dirac{d.degree - 1});
            } else if constexpr (std::is_same_v<T, law::NegativeBinomial>) {
                return OffspringDistribution(law::NegativeBinomial{d.r + 1, d.p});
            } else {
                std::vector<double> w(d.weights.size() - 1);
                for (std::size_t k = 0; k < w.size(); ++k)
                    w[k] = static_cast<double>(k + 1) * d.weights[k + 1] / dist.mean();
                return OffspringDistribution(law::FinitePmf{std::move(w)});
            }
        },
        dist.kind());
}

inline double pmf(const DiscreteLaw& dist, std::uint64_t k) { return dist.pmf(k); }
inline double phi(const DiscreteLaw& dist, double z) { return dist.phi(z); }
inline double phi_prime(const DiscreteLaw& dist, double z) { return dist.phi_prime(z); }
inline std::uint64_t sample(const DiscreteLaw& dist, Stream& rng) { return dist.sample(rng); }

}  // namespace ugw
