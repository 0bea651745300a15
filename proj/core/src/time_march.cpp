#include "orthowave/time_march.hpp"

#include "orthowave/errors.hpp"

#include <algorithm>

namespace orthowave {

namespace {

LinearOperator as_linear(const BlockOperator& op) {
    return [&op](std::span<const double> x, std::span<double> y) { op.apply(x, y); };
}

}  // namespace

MarchResult march(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p, double r,
                  std::vector<double> c0, const MarchConfig& cfg) {
    if (cfg.steps < 1) throw StageError(Stage::solve, "march: at least one time step is required");
    if (!(cfg.maturity > 0.0)) throw StageError(Stage::solve, "march: maturity must be positive");
    if (cfg.rannacher_half_steps < 0 || cfg.rannacher_half_steps % 2 != 0)
        throw StageError(Stage::solve, "march: the number of half steps must be even");
    if (c0.size() != set.total_count()) throw StageError(Stage::solve, "march: initial vector has the wrong size");

    const double tau = cfg.maturity / cfg.steps;
    const int half_steps = std::min(cfg.rannacher_half_steps, 2 * cfg.steps);
    const int cn_steps = cfg.steps - half_steps / 2;

    MarchResult res;
    std::vector<double> c = std::move(c0);
    std::vector<double> rhs(c.size());
    double time = 0.0;
    long total_iterations = 0;
    auto solve = [&](const BlockOperator& op, const char* scheme, double dt) {
        CgReport rep = cg_solve(as_linear(op), rhs, c, cfg.cg);
        const int index = static_cast<int>(res.log.size()) + 1;
        if (!rep.converged)
            throw StageError(Stage::solve, "march: CG did not converge at step " + std::to_string(index) + " (" +
                                               scheme + ", relative residual " +
                                               std::to_string(rep.relative_residual) + ")");
        time += dt;
        res.log.push_back({index, scheme, time, rep.iterations, rep.relative_residual});
        res.max_iterations = std::max(res.max_iterations, rep.iterations);
        total_iterations += rep.iterations;
    };

    if (half_steps > 0) {
        const BlockOperator euler = make_euler_system(set, blocks, p, r, tau, cfg.threads);
        for (int l = 0; l < half_steps; ++l) {
            for (std::size_t i = 0; i < c.size(); ++i) rhs[i] = (2.0 / tau) * c[i];
            solve(euler, "euler", 0.5 * tau);
        }
    }
    if (cn_steps > 0) {
        const BlockOperator lhs = make_cn_system(set, blocks, p, r, tau, cfg.threads);
        const BlockOperator rhs_op = make_cn_rhs(set, blocks, p, r, tau, cfg.threads);
        for (int l = 0; l < cn_steps; ++l) {
            rhs_op.apply(std::span<const double>(c), std::span<double>(rhs));
            solve(lhs, "cn", tau);
        }
    }
    if (!res.log.empty())
        res.mean_iterations = static_cast<double>(total_iterations) / static_cast<double>(res.log.size());
    res.coefficients = std::move(c);
    return res;
}

}  // namespace orthowave
