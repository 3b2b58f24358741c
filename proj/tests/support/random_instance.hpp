#pragma once

// Randomized small relative-energy instances: a viscous trajectory, matching
// reference samples and layer fields, all drawn independently of any solver.

#include <cstdint>
#include <vector>

#include "vll/boundary_layer.hpp"
#include "vll/euler_reference.hpp"
#include "vll/ns_solver.hpp"

namespace vll::testing {

struct RandomInstance {
    Trajectory traj;
    std::vector<ReferenceSample> refs;
    std::vector<LayerFields> layers;
    FluidParams params;
    double delta_tilde = 0.0;
    bool layer = true;
};

RandomInstance random_instance(std::uint64_t seed, std::size_t cells = 32, std::size_t snapshots = 3);

} // namespace vll::testing
