// s*(t) for a law given on the command line (default poisson:2).
//   demo_population_sweep poisson:3 20000

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "ugw/cavity.hpp"

int main(int argc, char** argv) {
    try {
        const auto dist = ugw::DegreeDistribution::parse(argc > 1 ? argv[1] : "poisson:2");
        ugw::SweepOptions opt;
        opt.pool_size = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
        opt.iterations = 150;
        opt.alpha_beta_iterations = 150;
        const auto res = ugw::s_star_sweep(dist, {1e-1, 1e-2, 1e-3}, opt);
        std::printf("%s, atom mass %.6f\n", dist.to_string().c_str(), res.atom_mass);
        for (const auto& row : res.rows)
            std::printf("t=%-8g t*E=%.5f s*=%.5f (se %.5f)\n", row.t, row.t_times_mean, row.s_star_mean,
                        row.stderr_s_star);
        std::printf("trend: %s\n", ugw::to_string(res.trend));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
}
