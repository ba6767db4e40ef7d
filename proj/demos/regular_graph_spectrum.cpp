// Spectrum of a random d-regular graph against the Kesten-McKay law.

#include <cstdio>
#include <cstdlib>

#include "ugw/graph.hpp"
#include "ugw/spectrum.hpp"

int main(int argc, char** argv) {
    const int d = argc > 1 ? std::atoi(argv[1]) : 3;
    const std::size_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1000;
    const auto g = ugw::sample_config_model(ugw::DegreeDistribution::dirac(static_cast<std::uint64_t>(d)), n, 1, true);
    const auto spec = ugw::eigenvalues(g);
    const double ks = ugw::empirical_cdf_distance(spec, [d](double x) { return ugw::kesten_mckay_cdf(d, x); });
    std::printf("d=%d n=%zu edges=%zu KS=%.4f nullity=%zu\n", d, n, g.edge_count(), ks,
                ugw::nullity_mod_prime(g, 1).nullity);
    const double r = ugw::kesten_mckay_edge(d);
    constexpr int bins = 12;
    for (int b = 0; b < bins; ++b) {
        const double lo = -r + 2.0 * r * b / bins;
        const double hi = lo + 2.0 * r / bins;
        std::size_t count = 0;
        for (double l : spec.eigenvalues) count += (l >= lo && l < hi) ? 1 : 0;
        const double empirical = static_cast<double>(count) / (static_cast<double>(n) * (hi - lo));
        std::printf("[%6.3f,%6.3f) empirical %.4f  law %.4f\n", lo, hi, empirical,
                    ugw::kesten_mckay_density(d, 0.5 * (lo + hi)));
    }
}
