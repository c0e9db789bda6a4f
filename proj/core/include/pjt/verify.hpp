#pragma once

// Invariant suites behind `pjt-sim verify`.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pjt/scattering.hpp"

namespace pjt {

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
};

struct Report {
    std::vector<Check> checks;

    void add(std::string name, double value, double limit);
    bool ok() const;
    // Lines "PASS|FAIL <name> value=<v> limit=<l>".
    void print(std::ostream &out) const;
    const Check *first_failure() const;
};

Report verify_scattering(Complex z, const ScatteringSettings &settings = {});
Report verify_projectors(int n_points = 1000, std::uint64_t seed = 1);
Report verify_classical(int n_states = 100, std::uint64_t seed = 1);

} // namespace pjt
