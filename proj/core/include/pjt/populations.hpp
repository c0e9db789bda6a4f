#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pjt {

// Mode populations (n+, n-, n0) at a sequence of output times.
struct PopulationSeries {
    std::vector<double> t;
    std::vector<std::array<double, 3>> n;
    // Weight removed by pruning up to each output time (surface hopping only).
    std::vector<double> pruned;
    // Number of live particles at each output time (surface hopping only).
    std::vector<std::size_t> particles;

    std::size_t size() const { return t.size(); }
    double total(std::size_t k) const { return n[k][0] + n[k][1] + n[k][2]; }
};

} // namespace pjt
