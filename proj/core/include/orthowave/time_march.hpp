#pragma once

#include "orthowave/block_operator.hpp"
#include "orthowave/cg.hpp"

#include <string>
#include <vector>

namespace orthowave {

struct MarchConfig {
    int steps = 2;          ///< M; the step size is maturity / M
    double maturity = 1.0;  ///< T in years
    /// Implicit Euler half steps at the start. With M = 1 only two fit.
    int rannacher_half_steps = 4;
    CgOptions cg;
    int threads = 1;
};

struct StepLog {
    int step = 0;  ///< 1-based solve index
    std::string scheme;
    double time = 0.0;  ///< time to maturity reached after the solve
    int iterations = 0;
    double relative_residual = 0.0;
};

struct MarchResult {
    std::vector<double> coefficients;
    std::vector<StepLog> log;
    int max_iterations = 0;
    double mean_iterations = 0.0;
};

/// Rannacher start-up with implicit Euler half steps, then Crank-Nicolson up to the
/// maturity. p is the d x d diffusion table and r the interest rate. A CG failure
/// throws StageError(solve) naming the step.
MarchResult march(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p, double r,
                  std::vector<double> c0, const MarchConfig& cfg);

}  // namespace orthowave
