#include "pipeline.hpp"

#include "orthowave/errors.hpp"
#include "orthowave/generator_io.hpp"
#include "orthowave/payoff_projection.hpp"
#include "orthowave/reconstruct.hpp"
#include "orthowave/solution_eval.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <ostream>

namespace orthowave::cli {

std::string format(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    va_list copy;
    va_copy(copy, ap);
    const int n = std::vsnprintf(nullptr, 0, fmt, copy);
    va_end(copy);
    std::string out(static_cast<std::size_t>(n), '\0');
    std::vsnprintf(out.data(), out.size() + 1, fmt, ap);
    va_end(ap);
    return out;
}

BasisLevels basis_levels(LevelChoice c) {
    if (c.k < 0) throw StageError(Stage::parse, "level must be non-negative");
    if (c.convention == LevelConvention::lemma) return {c.k, false};
    if (c.k == 0) return {0, true};
    return {c.k - 1, false};
}

int table_level(LevelChoice c) { return c.convention == LevelConvention::table ? c.k : c.k + 1; }

int default_steps(LevelChoice c) { return 1 << (2 * table_level(c)); }

GeneratorSet load_generators(const fs::path& cache_dir, bool reconstructed, std::ostream* log) {
    const fs::path file = cache_dir.empty() ? fs::path()
                                            : cache_dir / (reconstructed ? "generators_reconstructed.txt"
                                                                         : "generators.txt");
    if (!file.empty()) {
        if (auto g = read_generator_cache(file)) return *g;
        if (fs::exists(file) && log) *log << "generator cache " << file.string() << " is invalid; rebuilding\n";
    }
    GeneratorSet g;
    if (reconstructed) {
        g = reconstruct_scaling_generators();
        construct_wavelet_generators(g);
        construct_boundary_functions(g);
    } else {
        g = build_generator_set(default_generator_file());
    }
    if (!file.empty()) {
        fs::create_directories(cache_dir);
        write_generator_cache(file, g);
    }
    return g;
}

Discretization discretize(const GeneratorSet& g, int d, LevelChoice level, const fs::path& cache_dir, int threads,
                          std::ostream* log) {
    const BasisLevels bl = basis_levels(level);
    Discretization disc;
    disc.basis = build_basis(g, bl.max_level, bl.scaling_only);
    disc.set = std::make_unique<SparseIndexSet>(enumerate(d, level.k, level.convention));
    disc.generator_hash = generator_hash(g);
    fs::path file;
    if (!cache_dir.empty())
        file = level_block_cache_path(cache_dir, disc.generator_hash, bl.max_level, bl.scaling_only);
    if (!file.empty()) {
        if (auto lb = read_level_block_cache(file)) {
            disc.blocks = std::move(*lb);
            return disc;
        }
        if (fs::exists(file) && log) *log << "level block cache " << file.string() << " is invalid; rebuilding\n";
    }
    disc.blocks = assemble_level_blocks(disc.basis, bl.max_level, threads);
    if (!file.empty()) {
        fs::create_directories(cache_dir);
        write_level_block_cache(file, disc.blocks);
    }
    return disc;
}

std::vector<std::vector<double>> default_points(const MarketParams& m) {
    std::vector<std::vector<double>> pts;
    for (double f : {0.5, 1.0, 1.5}) pts.emplace_back(static_cast<std::size_t>(m.d), f * m.strike);
    return pts;
}

void check_points(const ExperimentSpec& spec) {
    const auto& m = spec.problem.market;
    const auto pts = spec.points.empty() ? default_points(m) : spec.points;
    for (const auto& p : pts) {
        if (p.size() != static_cast<std::size_t>(m.d))
            throw StageError(Stage::parse, "evaluation point needs one price per asset");
        for (double s : p)
            if (!(s > 0.0)) throw StageError(Stage::parse, "evaluation prices must be positive");
        for (double z : prices_to_cube(m, spec.problem.domain, p, m.maturity))
            if (!(z > 0.0 && z < 1.0))
                throw StageError(Stage::parse, "evaluation point maps outside the unit cube; enlarge S_min/S_max");
    }
}

PriceOutcome run_price(const ExperimentSpec& spec, const Discretization& disc) {
    const auto start = std::chrono::steady_clock::now();
    check_points(spec);
    const MarketParams& m = spec.problem.market;
    const DomainSpec& dom = spec.problem.domain;
    const SparseIndexSet& set = *disc.set;

    ProjectionOptions popt;
    popt.threads = spec.threads;
    const std::vector<double> c0 = project_payoff(payoff_on_cube(spec.problem.option, m, dom), set, disc.basis, popt);

    MarchConfig cfg;
    cfg.steps = spec.steps > 0 ? spec.steps : default_steps(spec.level);
    cfg.maturity = m.maturity;
    cfg.cg.tolerance = spec.tolerance;
    cfg.threads = spec.threads;
    PriceOutcome out;
    out.march = march(set, disc.blocks, diffusion_table(m, dom), m.r, c0, cfg);

    ResultRow& row = out.row;
    row.option = spec.problem.option;
    row.d = m.d;
    row.k = spec.level.k;
    row.n = set.total_count();
    row.m = cfg.steps;
    row.iterations = out.march.max_iterations;
    row.mean_iterations = out.march.mean_iterations;
    for (const auto& p : spec.points.empty() ? default_points(m) : spec.points) {
        const double v = evaluate_solution_at_prices(out.march.coefficients, set, disc.basis, m, dom, p, m.maturity);
        const double exact = analytic_price(spec.problem.option, m, p, m.maturity);
        row.values.push_back(v);
        row.exact.push_back(exact);
        row.errors.push_back(std::abs(v - exact));
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
    std::size_t npts = 0;
    for (const auto& r : rows) npts = std::max(npts, r.errors.size());
    std::string s = "option,d,k,N,M,iterations,mean_iterations";
    for (std::size_t i = 1; i <= npts; ++i) s += format(",e_P%zu", i);
    for (std::size_t i = 1; i <= npts; ++i) s += format(",V_P%zu", i);
    s += "\n";
    for (const auto& r : rows) {
        s += format("%s,%d,%d,%zu,%d,%d,%.3f", option_kind_name(r.option), r.d, r.k, r.n, r.m, r.iterations,
                    r.mean_iterations);
        for (std::size_t i = 0; i < npts; ++i) s += i < r.errors.size() ? format(",%.5e", r.errors[i]) : ",";
        for (std::size_t i = 0; i < npts; ++i) s += i < r.values.size() ? format(",%.10f", r.values[i]) : ",";
        s += "\n";
    }
    return s;
}

std::string solver_log_csv(const std::vector<StepLog>& log) {
    std::string s = "step,scheme,time,iterations,relative_residual\n";
    for (const auto& l : log)
        s += format("%d,%s,%.10g,%d,%.5e\n", l.step, l.scheme.c_str(), l.time, l.iterations, l.relative_residual);
    return s;
}

std::string timings_csv(const std::vector<ResultRow>& rows) {
    std::string s = "option,d,k,N,M,wall_seconds\n";
    for (const auto& r : rows)
        s += format("%s,%d,%d,%zu,%d,%.3f\n", option_kind_name(r.option), r.d, r.k, r.n, r.m, r.wall_seconds);
    return s;
}

}  // namespace orthowave::cli
