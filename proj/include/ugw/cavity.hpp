#pragma once

// Population dynamics for the cavity recursions on unimodular
// Galton-Watson trees.
//
//   s_o(t) = 1 / (t + sum_x s_x(t))          on the imaginary axis, t > 0
//   alpha_o = 1 / (1 + sum_x beta_x)         at t = 0, carried as
//   beta_o  = 1 / sum_x alpha_x              tagged extended reals
//
// A pool is an i.i.d. sample representing the law of the cavity quantity
// under the offspring law. Each step resamples children with replacement from
// the previous, frozen pool. Every sample's randomness is keyed on
// (seed, generation, index), so pools are bit-identical for any worker count.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ugw/degree.hpp"
#include "ugw/error.hpp"
#include "ugw/limit_theory.hpp"
#include "ugw/parallel.hpp"
#include "ugw/rng.hpp"
#include "ugw/stats.hpp"

namespace ugw {

enum class Category : std::uint8_t { Plus = 0, Minus = 1, Star = 2 };

inline const char* to_string(Category c) noexcept {
    switch (c) {
        case Category::Plus: return "Plus";
        case Category::Minus: return "Minus";
        case Category::Star: return "Star";
    }
    return "?";
}

/// alpha > 0 (Plus, beta infinite), beta < infinity (Minus, alpha zero), or
/// alpha = 0 with beta infinite (Star). No floating infinities are stored.
class ExtendedRealPair {
public:
    ExtendedRealPair() = default;

    static ExtendedRealPair plus(double alpha) { return {Category::Plus, alpha}; }
    static ExtendedRealPair minus(double beta) { return {Category::Minus, beta}; }
    static ExtendedRealPair star() { return {Category::Star, 0.0}; }

    Category category() const noexcept { return category_; }
    bool is_plus() const noexcept { return category_ == Category::Plus; }
    bool is_minus() const noexcept { return category_ == Category::Minus; }
    bool is_star() const noexcept { return category_ == Category::Star; }

    /// Zero unless Plus.
    double alpha() const noexcept { return is_plus() ? payload_ : 0.0; }
    /// Meaningful only when Minus.
    double beta() const noexcept { return payload_; }
    double payload() const noexcept { return payload_; }

    friend bool operator==(const ExtendedRealPair&, const ExtendedRealPair&) = default;

private:
    ExtendedRealPair(Category c, double v) : category_(c), payload_(v) {}

    Category category_ = Category::Star;
    double payload_ = 0.0;
};

enum class LawTag : std::uint8_t { OffspringLaw = 0, RootLaw = 1 };

struct CategoryFrequencies {
    double plus = 0.0;
    double minus = 0.0;
    double star = 0.0;
};

/// A population snapshot. Stieltjes pools fill `s` (t > 0), extended-real
/// pools fill `pairs` (t = 0), joint pools fill both from shared genealogies.
struct CavityPool {
    std::vector<double> s;
    std::vector<ExtendedRealPair> pairs;
    LawTag law_tag = LawTag::OffspringLaw;
    double t = 0.0;
    std::uint64_t generation = 0;
    std::uint64_t seed = 0;
    /// Category frequencies after each generation; not serialized.
    std::vector<CategoryFrequencies> frequency_history;

    std::size_t size() const noexcept { return s.empty() ? pairs.size() : s.size(); }
    bool has_stieltjes() const noexcept { return !s.empty(); }
    bool has_pairs() const noexcept { return !pairs.empty(); }

    static CavityPool stieltjes(std::size_t n, double t, std::uint64_t seed) {
        if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "Stieltjes pool needs t > 0");
        CavityPool p;
        p.s.assign(n, 1.0 / t);
        p.t = t;
        p.seed = seed;
        return p;
    }

    /// All Star: the undetermined state. Categories then fill in monotonically,
    /// tracking the iteration of z -> 1 - phihat(1 - phihat(z)) from z = 1.
    static CavityPool alpha_beta(std::size_t n, std::uint64_t seed) {
        CavityPool p;
        p.pairs.assign(n, ExtendedRealPair::star());
        p.seed = seed;
        return p;
    }
};

inline constexpr std::uint64_t kMaxChildren = 1'000'000;

namespace detail {

inline std::uint64_t draw_children(const DiscreteLaw& law, Stream& rng) {
    const auto k = law.sample(rng);
    if (k > kMaxChildren)
        throw Error(ErrorKind::InvalidArgument, "child count " + std::to_string(k) + " exceeds cap");
    return k;
}

/// Aggregates over children of the extended-real recursion.
struct ChildSummary {
    std::uint64_t n_plus = 0;
    std::uint64_t n_minus = 0;
    std::uint64_t n_star = 0;
    double sum_alpha = 0.0;  // over Plus children
    double sum_beta = 0.0;   // over Minus children

    void add(const ExtendedRealPair& x) {
        switch (x.category()) {
            case Category::Plus:
                ++n_plus;
                sum_alpha += x.payload();
                break;
            case Category::Minus:
                ++n_minus;
                sum_beta += x.payload();
                break;
            case Category::Star: ++n_star; break;
        }
    }

    ExtendedRealPair combine() const {
        if (n_plus == 0 && n_star == 0) return ExtendedRealPair::plus(1.0 / (1.0 + sum_beta));
        if (n_plus >= 1) return ExtendedRealPair::minus(1.0 / sum_alpha);
        return ExtendedRealPair::star();
    }
};

inline CategoryFrequencies frequencies_of(const std::vector<ExtendedRealPair>& pairs) {
    CategoryFrequencies f;
    if (pairs.empty()) return f;
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& p : pairs) ++counts[static_cast<int>(p.category())];
    const double n = static_cast<double>(pairs.size());
    f.plus = counts[0] / n;
    f.minus = counts[1] / n;
    f.star = counts[2] / n;
    return f;
}

/// Offspring law of a degree law; a zero-mean law never produces children, so
/// its offspring law is never sampled and the empty law stands in.
inline OffspringDistribution offspring_or_empty(const DegreeDistribution& dist) {
    if (dist.mean() > 0.0) return size_biased(dist);
    return OffspringDistribution(law::Dirac{0});
}

inline std::uint32_t index32(std::size_t i) { return static_cast<std::uint32_t>(i); }

}  // namespace detail

/// One generation of s' = 1 / (t + sum of K resampled s), K ~ offspring.
inline CavityPool pd_step_stieltjes(const CavityPool& pool, const DiscreteLaw& offspring,
                                    const Workers& workers = Workers{}) {
    if (!pool.has_stieltjes() || !(pool.t > 0.0))
        throw Error(ErrorKind::InvalidArgument, "pd_step_stieltjes needs a t > 0 pool");
    CavityPool next;
    next.t = pool.t;
    next.seed = pool.seed;
    next.law_tag = LawTag::OffspringLaw;
    next.generation = pool.generation + 1;
    const std::size_t n = pool.s.size();
    next.s.resize(n);
    workers.for_each_index(n, [&](std::size_t i) {
        auto rng = Stream::keyed(pool.seed, StreamTag::StieltjesStep, next.generation, detail::index32(i));
        const auto k = detail::draw_children(offspring, rng);
        double sum = 0.0;
        for (std::uint64_t c = 0; c < k; ++c) sum += pool.s[rng.below(n)];
        next.s[i] = 1.0 / (pool.t + sum);
    });
    return next;
}

/// One generation of the extended-real recursion.
inline CavityPool pd_step_alphabeta(const CavityPool& pool, const DiscreteLaw& offspring,
                                    const Workers& workers = Workers{}) {
    if (!pool.has_pairs()) throw Error(ErrorKind::InvalidArgument, "pd_step_alphabeta needs a t = 0 pool");
    CavityPool next;
    next.t = 0.0;
    next.seed = pool.seed;
    next.law_tag = LawTag::OffspringLaw;
    next.generation = pool.generation + 1;
    const std::size_t n = pool.pairs.size();
    next.pairs.resize(n);
    workers.for_each_index(n, [&](std::size_t i) {
        auto rng = Stream::keyed(pool.seed, StreamTag::AlphaBetaStep, next.generation, detail::index32(i));
        const auto k = detail::draw_children(offspring, rng);
        detail::ChildSummary summary;
        for (std::uint64_t c = 0; c < k; ++c) summary.add(pool.pairs[rng.below(n)]);
        next.pairs[i] = summary.combine();
    });
    next.frequency_history = pool.frequency_history;
    next.frequency_history.push_back(detail::frequencies_of(next.pairs));
    return next;
}

/// One generation of both recursions on shared resampled genealogies, so each
/// sample carries (s_o(t), alpha_o) of the same tree.
inline CavityPool pd_step_joint(const CavityPool& pool, const DiscreteLaw& offspring,
                                const Workers& workers = Workers{}) {
    if (!pool.has_stieltjes() || !pool.has_pairs() || pool.s.size() != pool.pairs.size())
        throw Error(ErrorKind::InvalidArgument, "pd_step_joint needs a joint pool");
    CavityPool next;
    next.t = pool.t;
    next.seed = pool.seed;
    next.law_tag = LawTag::OffspringLaw;
    next.generation = pool.generation + 1;
    const std::size_t n = pool.s.size();
    next.s.resize(n);
    next.pairs.resize(n);
    workers.for_each_index(n, [&](std::size_t i) {
        auto rng = Stream::keyed(pool.seed, StreamTag::JointStep, next.generation, detail::index32(i));
        const auto k = detail::draw_children(offspring, rng);
        double sum = 0.0;
        detail::ChildSummary summary;
        for (std::uint64_t c = 0; c < k; ++c) {
            const auto j = rng.below(n);
            sum += pool.s[j];
            summary.add(pool.pairs[j]);
        }
        next.s[i] = 1.0 / (pool.t + sum);
        next.pairs[i] = summary.combine();
    });
    next.frequency_history = pool.frequency_history;
    next.frequency_history.push_back(detail::frequencies_of(next.pairs));
    return next;
}

inline CategoryFrequencies category_frequencies(const CavityPool& pool) {
    return detail::frequencies_of(pool.pairs);
}

/// A pool is converged when the category frequencies show no drift over the
/// last `window` generations: the means of its two halves agree within `tol`
/// for every category. Single generations fluctuate by about N^{-1/2} around
/// equilibrium, and above the threshold a slowly damped period-two mode adds
/// to that, so a per-generation band would reject settled pools.
inline bool pool_converged(const CavityPool& pool, std::size_t window = 20, double tol = 0.005) {
    const auto& h = pool.frequency_history;
    window = std::max<std::size_t>(window - window % 2, 2);
    if (h.size() < window) return false;
    const std::size_t begin = h.size() - window;
    const std::size_t half = window / 2;
    const auto stable = [&](double CategoryFrequencies::*field) {
        double early = 0.0, late = 0.0;
        for (std::size_t i = 0; i < half; ++i) {
            early += h[begin + i].*field;
            late += h[begin + half + i].*field;
        }
        return std::abs(early - late) / static_cast<double>(half) <= tol;
    };
    return stable(&CategoryFrequencies::plus) && stable(&CategoryFrequencies::minus) &&
           stable(&CategoryFrequencies::star);
}

// ---------------------------------------------------------------------------
// Stieltjes transform at t > 0

struct TransformOptions {
    std::size_t pool_size = 100000;
    std::size_t iterations = 300;
    std::uint64_t seed = 1;
    int bootstrap_replicates = 100;
};

struct TransformEstimate {
    double t = 0.0;
    double E_root = 0.0;
    double E_offspring = 0.0;
    double stderr_root = 0.0;
    double stderr_offspring = 0.0;
    std::vector<double> offspring_mean_history;
    CavityPool pool;
};

namespace detail {

/// Root-law pass: K ~ degree law, children from the pool. Returns s_o(t) per
/// draw and, for joint pools, alpha_o per draw.
struct RootPass {
    std::vector<double> s;
    std::vector<double> alpha;
};

inline RootPass root_pass(const CavityPool& pool, const DiscreteLaw& degree, std::size_t draws,
                          const Workers& workers) {
    RootPass out;
    out.s.resize(draws);
    const bool joint = pool.has_pairs();
    if (joint) out.alpha.resize(draws);
    const std::size_t n = pool.size();
    workers.for_each_index(draws, [&](std::size_t i) {
        auto rng = Stream::keyed(pool.seed, StreamTag::RootPass, pool.generation, index32(i));
        const auto k = draw_children(degree, rng);
        double sum = 0.0;
        ChildSummary summary;
        for (std::uint64_t c = 0; c < k; ++c) {
            const auto j = rng.below(n);
            sum += pool.s[j];
            if (joint) summary.add(pool.pairs[j]);
        }
        out.s[i] = 1.0 / (pool.t + sum);
        if (joint) out.alpha[i] = summary.combine().alpha();
    });
    return out;
}

/// Throws if the tail of `history` drifts monotonically by more than 3 stderr.
inline void check_drift(const std::vector<double>& history, double stderr_value, const std::string& what) {
    const std::size_t window = std::max<std::size_t>(3, history.size() / 5);
    if (history.size() < window + 1) return;
    const std::size_t begin = history.size() - window;
    bool up = true, down = true;
    for (std::size_t i = begin + 1; i < history.size(); ++i) {
        up = up && history[i] > history[i - 1];
        down = down && history[i] < history[i - 1];
    }
    const double drift = std::abs(history.back() - history[begin]);
    if ((up || down) && drift > 3.0 * stderr_value) {
        throw Error(ErrorKind::NoConvergence, what + ": pool mean drifted monotonically by " +
                                                  format_real(drift) + " over the last " +
                                                  std::to_string(window) + " generations");
    }
}

}  // namespace detail

/// E[s_o(t)] under the root law and the offspring law, by `iterations`
/// offspring-law steps from the all-1/t pool followed by one root-law pass.
/// `warm_start`, when given, replaces the initial pool (used by sweeps).
inline TransformEstimate estimate_transform(const DegreeDistribution& dist, double t,
                                            const TransformOptions& opt = {},
                                            const Workers& workers = Workers{},
                                            const CavityPool* warm_start = nullptr) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "estimate_transform needs t > 0");
    const auto offspring = detail::offspring_or_empty(dist);
    CavityPool pool;
    if (warm_start != nullptr) {
        pool = *warm_start;
        pool.t = t;
    } else {
        pool = CavityPool::stieltjes(opt.pool_size, t, opt.seed);
    }
    TransformEstimate est;
    est.t = t;
    est.offspring_mean_history.reserve(opt.iterations);
    for (std::size_t it = 0; it < opt.iterations; ++it) {
        pool = pool.has_pairs() ? pd_step_joint(pool, offspring, workers)
                                : pd_step_stieltjes(pool, offspring, workers);
        est.offspring_mean_history.push_back(stats::mean(pool.s));
    }
    est.E_offspring = stats::mean(pool.s);
    est.stderr_offspring = stats::standard_error(pool.s);
    const auto root = detail::root_pass(pool, dist, pool.size(), workers);
    est.E_root = stats::mean(root.s);
    est.stderr_root = stats::bootstrap_stderr(root.s, pool.seed ^ pool.generation, opt.bootstrap_replicates);
    detail::check_drift(est.offspring_mean_history, est.stderr_offspring,
                        "estimate_transform at t=" + detail::format_real(t));
    est.pool = std::move(pool);
    return est;
}

// ---------------------------------------------------------------------------
// Sweep of the atom-free transform s*(t) = s(t) - alpha / t

enum class Trend { DecayingToZero, Plateau, Inconclusive };

inline const char* to_string(Trend t) noexcept {
    switch (t) {
        case Trend::DecayingToZero: return "DecayingToZero";
        case Trend::Plateau: return "Plateau";
        case Trend::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct SweepOptions {
    std::size_t pool_size = 100000;
    /// Joint steps per t value (each t starts from the previous t's pool).
    std::size_t iterations = 300;
    /// Extended-real steps before the first t value.
    std::size_t alpha_beta_iterations = 300;
    /// Root passes averaged per t value, one after each of the final steps.
    std::size_t root_passes = 10;
    std::uint64_t seed = 1;
    int bootstrap_replicates = 100;
};

struct SweepRow {
    double t = 0.0;
    double mean_s_root = 0.0;
    double stderr_root = 0.0;
    double mean_s_offspring = 0.0;
    double stderr_offspring = 0.0;
    double t_times_mean = 0.0;
    double s_star_mean = 0.0;
    double stderr_s_star = 0.0;
    /// Mean of alpha_o over the root draws (pool estimate of the atom).
    double pool_atom = 0.0;
};

struct SweepResult {
    std::string distribution;
    std::vector<SweepRow> rows;
    Trend trend = Trend::Inconclusive;
    double atom_mass = 0.0;  // closed-form value from the classifier
    double plateau_value = std::numeric_limits<double>::quiet_NaN();
    SweepOptions options;
};

/// Decay: each step down the grid shrinks s* by at least 0.6x over the last
/// three steps. Plateau: the last ratio lies in [0.8, 1.25].
inline Trend classify_trend(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return Trend::Inconclusive;
    const std::size_t ratios = std::min<std::size_t>(3, n - 1);
    bool decaying = true;
    for (std::size_t i = n - ratios; i < n; ++i) {
        if (!(values[i - 1] > 0.0) || !(values[i] <= 0.6 * values[i - 1])) decaying = false;
    }
    if (decaying) return Trend::DecayingToZero;
    const double last = values[n - 1];
    const double prev = values[n - 2];
    if (last > 0.0 && prev > 0.0) {
        const double r = last / prev;
        if (r >= 0.8 && r <= 1.25) return Trend::Plateau;
    }
    return Trend::Inconclusive;
}

/// s*(t) along a decreasing t grid. Runs the joint recursion so that alpha_o
/// can be subtracted per sample: s* = E[s_o(t) - alpha_o / t]. The estimator has
/// the same expectation as E[s_o(t)] - mu({0}) / t but avoids the 1/t
/// amplification of the pool's atom error.
inline SweepResult s_star_sweep(const DegreeDistribution& dist, const std::vector<double>& t_grid,
                                const SweepOptions& opt = {}, const Workers& workers = Workers{}) {
    if (t_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 1e-5)) throw Error(ErrorKind::InvalidArgument, "t grid below 1e-5");
        if (i > 0 && !(t_grid[i] < t_grid[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "t grid must be strictly decreasing");
    }
    SweepResult result;
    result.distribution = dist.to_string();
    result.options = opt;
    result.atom_mass = classify(dist).atom_mass;

    const auto offspring = detail::offspring_or_empty(dist);
    auto pool = CavityPool::alpha_beta(opt.pool_size, opt.seed);
    for (std::size_t it = 0; it < opt.alpha_beta_iterations; ++it)
        pool = pd_step_alphabeta(pool, offspring, workers);
    pool.s.assign(opt.pool_size, 1.0 / t_grid.front());

    std::vector<double> s_star_values;
    for (double t : t_grid) {
        pool.t = t;
        std::vector<double> history;
        std::vector<double> root_s, root_star, root_alpha;
        const std::size_t passes = std::clamp<std::size_t>(opt.root_passes, 1, std::max<std::size_t>(opt.iterations, 1));
        for (std::size_t it = 0; it < opt.iterations; ++it) {
            pool = pd_step_joint(pool, offspring, workers);
            history.push_back(stats::mean(pool.s));
            if (it + passes >= opt.iterations) {
                const auto root = detail::root_pass(pool, dist, pool.size(), workers);
                for (std::size_t i = 0; i < root.s.size(); ++i) {
                    root_s.push_back(root.s[i]);
                    root_alpha.push_back(root.alpha[i]);
                    root_star.push_back(root.s[i] - root.alpha[i] / t);
                }
            }
        }
        if (opt.iterations == 0) {
            const auto root = detail::root_pass(pool, dist, pool.size(), workers);
            for (std::size_t i = 0; i < root.s.size(); ++i) {
                root_s.push_back(root.s[i]);
                root_alpha.push_back(root.alpha[i]);
                root_star.push_back(root.s[i] - root.alpha[i] / t);
            }
        }
        SweepRow row;
        row.t = t;
        row.mean_s_root = stats::mean(root_s);
        row.stderr_root = stats::bootstrap_stderr(root_s, opt.seed ^ pool.generation, opt.bootstrap_replicates);
        row.mean_s_offspring = stats::mean(pool.s);
        row.stderr_offspring = stats::standard_error(pool.s);
        row.t_times_mean = t * row.mean_s_root;
        row.s_star_mean = stats::mean(root_star);
        row.stderr_s_star =
            stats::bootstrap_stderr(root_star, opt.seed ^ (pool.generation << 1), opt.bootstrap_replicates);
        row.pool_atom = stats::mean(root_alpha);
        detail::check_drift(history, row.stderr_offspring, "s_star_sweep at t=" + detail::format_real(t));
        s_star_values.push_back(row.s_star_mean);
        result.rows.push_back(row);
    }
    result.trend = classify_trend(s_star_values);
    if (result.trend == Trend::Plateau) result.plateau_value = s_star_values.back();
    return result;
}

// ---------------------------------------------------------------------------
// Extended-real diagnostics at t = 0

struct AlphaBetaOptions {
    std::size_t pool_size = 100000;
    std::size_t iterations = 200;
    std::uint64_t seed = 1;
};

inline CavityPool run_alphabeta(const DegreeDistribution& dist, const AlphaBetaOptions& opt = {},
                                const Workers& workers = Workers{}) {
    const auto offspring = detail::offspring_or_empty(dist);
    auto pool = CavityPool::alpha_beta(opt.pool_size, opt.seed);
    for (std::size_t it = 0; it < opt.iterations; ++it) pool = pd_step_alphabeta(pool, offspring, workers);
    return pool;
}

struct HeavyTailEstimate {
    double estimate = 0.0;
    bool diverging = false;
    double plain_mean = 0.0;
    double top1_share = 0.0;
    double tail_index = std::numeric_limits<double>::quiet_NaN();
    double q50 = 0.0;
    double q90 = 0.0;
    double q99 = 0.0;
    double max = 0.0;
    std::size_t draws = 0;
    std::size_t infinite_draws = 0;
};

inline constexpr std::size_t kHeavyTailBatches = 32;

namespace detail {

inline HeavyTailEstimate summarize_heavy(std::vector<double> values) {
    HeavyTailEstimate h;
    h.draws = values.size();
    h.infinite_draws = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](double v) { return std::isinf(v); }));
    if (values.empty()) return h;
    if (h.infinite_draws > 0) {
        const double inf = std::numeric_limits<double>::infinity();
        h.estimate = h.plain_mean = h.max = inf;
        h.top1_share = 1.0;
        h.tail_index = 0.0;
        h.diverging = true;
        h.q50 = stats::quantile(values, 0.5);
        h.q90 = stats::quantile(values, 0.9);
        h.q99 = stats::quantile(values, 0.99);
        return h;
    }
    h.estimate = stats::median_of_means(values, kHeavyTailBatches);
    h.plain_mean = stats::mean(values);
    h.top1_share = stats::top_share(values, 0.01);
    h.tail_index = stats::hill_tail_index(stats::batch_maxima(values, kHeavyTailBatches), kHeavyTailBatches / 2);
    h.q50 = stats::quantile(values, 0.5);
    h.q90 = stats::quantile(values, 0.9);
    h.q99 = stats::quantile(values, 0.99);
    h.max = *std::max_element(values.begin(), values.end());
    h.diverging = h.top1_share > 0.5;
    return h;
}

inline void require_converged(const CavityPool& pool) {
    if (!pool.has_pairs())
        throw Error(ErrorKind::PoolNotConverged, "pool carries no extended-real samples");
    if (!pool_converged(pool))
        throw Error(ErrorKind::PoolNotConverged,
                    "category frequencies drift by more than 0.005 over the last 20 generations");
}

}  // namespace detail

/// Monte Carlo of E[beta*_o] through the three root terms
///   1{alpha_o = 0} beta_o + 1{N+ >= 2} beta_o
///   + 1{N+ >= 2} (sum beta_x 1{alpha_x = 0}) / (sum alpha_x 1{alpha_x > 0}).
/// A Star root or a Star child under N+ >= 2 makes the draw infinite.
inline HeavyTailEstimate beta_star_estimate(const DegreeDistribution& dist, const CavityPool& pool,
                                            std::size_t n_root_draws, std::uint64_t seed,
                                            const Workers& workers = Workers{}) {
    detail::require_converged(pool);
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = pool.pairs.size();
    const auto values = workers.map<double>(n_root_draws, [&](std::size_t i) {
        auto rng = Stream::keyed(seed, StreamTag::BetaStar, pool.generation, detail::index32(i));
        const auto k = detail::draw_children(dist, rng);
        detail::ChildSummary summary;
        for (std::uint64_t c = 0; c < k; ++c) summary.add(pool.pairs[rng.below(n)]);
        const auto root = summary.combine();
        double value = 0.0;
        if (root.is_star()) return inf;
        const double beta_o = root.is_minus() ? root.beta() : inf;
        if (root.is_minus()) value += beta_o;
        if (summary.n_plus >= 2) {
            if (summary.n_star > 0) return inf;
            value += beta_o + summary.sum_beta / summary.sum_alpha;
        }
        return value;
    });
    return detail::summarize_heavy(values);
}

/// Median-of-means of 1/alpha over the Plus samples of a t = 0 pool.
inline HeavyTailEstimate conditional_inverse_alpha(const CavityPool& pool) {
    detail::require_converged(pool);
    std::vector<double> values;
    for (const auto& p : pool.pairs)
        if (p.is_plus()) values.push_back(1.0 / p.alpha());
    return detail::summarize_heavy(std::move(values));
}

/// Empirical law of N+ (the number of Plus children) over `draws` vertices
/// whose child count follows `law`. Returns frequencies indexed by N+.
inline std::vector<double> plus_child_count_frequencies(const CavityPool& pool, const DiscreteLaw& law,
                                                        std::size_t draws, std::uint64_t seed) {
    if (!pool.has_pairs()) throw Error(ErrorKind::InvalidArgument, "needs a t = 0 pool");
    std::vector<double> freq;
    const std::size_t n = pool.pairs.size();
    for (std::size_t i = 0; i < draws; ++i) {
        auto rng = Stream::keyed(seed, StreamTag::Generic, pool.generation, detail::index32(i));
        const auto k = detail::draw_children(law, rng);
        std::size_t plus = 0;
        for (std::uint64_t c = 0; c < k; ++c) plus += pool.pairs[rng.below(n)].is_plus() ? 1 : 0;
        if (freq.size() <= plus) freq.resize(plus + 1, 0.0);
        freq[plus] += 1.0;
    }
    for (double& f : freq) f /= static_cast<double>(draws);
    return freq;
}

// ---------------------------------------------------------------------------
// Binary snapshots
//
//   u8  version (= 1)
//   u64 N
//   f64 t              (0 for extended-real pools)
//   u8  law_tag
//   u8  contents       bit 0: s values present, bit 1: extended-real pairs present
//   u64 generation
//   u64 seed
//   N x f64            s values, if present
//   N x (u8, f64)      (category, payload), if present
//
// Little-endian, IEEE-754 doubles.

inline constexpr std::uint8_t kSnapshotVersion = 1;

namespace detail {

template <typename T>
void put(std::ostream& os, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw Error(ErrorKind::Io, "truncated pool snapshot");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace detail

inline void write_snapshot(std::ostream& os, const CavityPool& pool) {
    detail::put<std::uint8_t>(os, kSnapshotVersion);
    detail::put<std::uint64_t>(os, pool.size());
    detail::put<double>(os, pool.t);
    detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(pool.law_tag));
    const std::uint8_t contents = (pool.has_stieltjes() ? 1 : 0) | (pool.has_pairs() ? 2 : 0);
    detail::put<std::uint8_t>(os, contents);
    detail::put<std::uint64_t>(os, pool.generation);
    detail::put<std::uint64_t>(os, pool.seed);
    for (double v : pool.s) detail::put<double>(os, v);
    for (const auto& p : pool.pairs) {
        detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(p.category()));
        detail::put<double>(os, p.payload());
    }
    if (!os) throw Error(ErrorKind::Io, "failed writing pool snapshot");
}

inline CavityPool read_snapshot(std::istream& is) {
    const auto version = detail::get<std::uint8_t>(is);
    if (version != kSnapshotVersion)
        throw Error(ErrorKind::Io, "unsupported snapshot version " + std::to_string(version));
    CavityPool pool;
    const auto n = detail::get<std::uint64_t>(is);
    if (n > (std::uint64_t{1} << 32)) throw Error(ErrorKind::Io, "snapshot size out of range");
    pool.t = detail::get<double>(is);
    const auto tag = detail::get<std::uint8_t>(is);
    if (tag > 1) throw Error(ErrorKind::Io, "bad law tag in snapshot");
    pool.law_tag = static_cast<LawTag>(tag);
    const auto contents = detail::get<std::uint8_t>(is);
    if (contents == 0 || contents > 3) throw Error(ErrorKind::Io, "bad contents byte in snapshot");
    pool.generation = detail::get<std::uint64_t>(is);
    pool.seed = detail::get<std::uint64_t>(is);
    if (contents & 1) {
        pool.s.resize(n);
        for (auto& v : pool.s) v = detail::get<double>(is);
    }
    if (contents & 2) {
        pool.pairs.resize(n);
        for (auto& p : pool.pairs) {
            const auto cat = detail::get<std::uint8_t>(is);
            const auto payload = detail::get<double>(is);
            switch (cat) {
                case 0: p = ExtendedRealPair::plus(payload); break;
                case 1: p = ExtendedRealPair::minus(payload); break;
                case 2: p = ExtendedRealPair::star(); break;
                default: throw Error(ErrorKind::Io, "bad category in snapshot");
            }
        }
    }
    return pool;
}

}  // namespace ugw
