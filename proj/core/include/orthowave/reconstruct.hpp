#pragma once

#include "orthowave/generators.hpp"

#include <cstdint>

namespace orthowave {

struct ReconstructionReport {
    int null_c_dim = 0;
    int attempts = 0;
    double lm_residual = 0.0;              ///< Euclidean norm of the quadratic system at the solution
    double phi34_residual = 0.0;           ///< orthonormality of phi_3, phi_4 and orthogonality to phi_1, phi_2
    double orthonormality_residual = 0.0;  ///< all translates of phi_1..phi_6 plus the level-0 interval set
    double span_residual = 0.0;            ///< distance of phi_1..phi_6 from the level-2 Hermite space
};

/// Double-precision construction of an orthonormal scaling generator family from the
/// Hermite cubics: orthonormalized xi pair, complement basis from the null space of C,
/// Levenberg-Marquardt for the two interior generators, projection for phi_5, phi_6.
/// Boundary scaling functions are built from phi_5, phi_6. Random restarts are drawn
/// from a generator seeded with seed. Throws StageError(basis) when no attempt reaches
/// an LM residual of 1e-10 with orthonormality within 1e-8.
GeneratorSet reconstruct_scaling_generators(ReconstructionReport* report = nullptr, std::uint64_t seed = 20240611,
                                            int max_attempts = 50);

}  // namespace orthowave
