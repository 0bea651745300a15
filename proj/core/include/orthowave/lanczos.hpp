#pragma once

#include "orthowave/cg.hpp"

#include <cstddef>
#include <cstdint>

namespace orthowave {

struct ConditionEstimate {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double condition = 0.0;
    int steps = 0;
};

/// Extremal Ritz values of a symmetric operator; no definiteness is required.
ConditionEstimate lanczos_extremes(const LinearOperator& a, std::size_t n, int steps = 60, std::uint64_t seed = 12345);

/// Extremal Ritz values of a symmetric positive definite operator from Lanczos with
/// full reorthogonalization. Runs min(steps, n) steps; an invariant subspace restarts
/// with a fresh random vector orthogonal to the basis built so far.
ConditionEstimate estimate_condition(const LinearOperator& a, std::size_t n, int steps = 60,
                                     std::uint64_t seed = 12345);

}  // namespace orthowave
