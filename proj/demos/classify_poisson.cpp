// Classifier verdicts and atom masses across the Poisson family.

#include <cstdio>

#include "ugw/limit_theory.hpp"

int main() {
    std::printf("%6s  %-20s %10s %10s %6s\n", "c", "verdict", "atom", "z*", "|argmax|");
    for (double c : {0.5, 1.0, 1.5, 2.0, 2.5, 2.7, 2.75, 3.0, 4.0, 6.0}) {
        const auto r = ugw::classify(ugw::DegreeDistribution::poisson(c));
        std::printf("%6.2f  %-20s %10.6f %10.6f %6zu\n", c, ugw::to_string(r.verdict), r.atom_mass, r.z_star,
                    r.argmax_set.size());
    }
}
