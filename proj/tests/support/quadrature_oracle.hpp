#pragma once

// Brute-force space-time quadrature of the relative energy and its remainder
// terms, written directly from the integrand definitions in extended precision.
// Shares no code with the library beyond the instance data.

#include <array>
#include <vector>

#include "random_instance.hpp"

namespace vll::testing {

struct OracleValues {
    std::vector<double> energy; // E(t_k)
    double E0 = 0.0;
    std::array<double, 11> R{};
};

OracleValues quadrature_oracle(const RandomInstance& instance);

} // namespace vll::testing
