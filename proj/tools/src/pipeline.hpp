#pragma once

#include "orthowave/basis1d.hpp"
#include "orthowave/generators.hpp"
#include "orthowave/level_blocks.hpp"
#include "orthowave/market.hpp"
#include "orthowave/params_io.hpp"
#include "orthowave/sparse_grid.hpp"
#include "orthowave/time_march.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace orthowave::cli {

namespace fs = std::filesystem;

struct LevelChoice {
    int k = 0;
    LevelConvention convention = LevelConvention::table;
};

/// Basis levels behind a level choice: the table convention maps k to lemma level
/// k - 1 and k = 0 to the scaling-only basis.
struct BasisLevels {
    int max_level = 0;
    bool scaling_only = false;
};
BasisLevels basis_levels(LevelChoice c);

/// Table-convention level of a choice; the default step count is 4 to this power.
int table_level(LevelChoice c);
int default_steps(LevelChoice c);

/// Generators from the cache directory, rebuilt from the coefficient table (or by
/// reconstruction) and written back when the cache is missing or corrupt.
GeneratorSet load_generators(const fs::path& cache_dir, bool reconstructed = false, std::ostream* log = nullptr);

struct Discretization {
    Basis1D basis;
    std::unique_ptr<SparseIndexSet> set;
    LevelBlocks blocks;
    std::string generator_hash;
};

/// Basis, index set and level blocks; blocks are cached under cache_dir when it is not empty.
Discretization discretize(const GeneratorSet& g, int d, LevelChoice level, const fs::path& cache_dir, int threads,
                          std::ostream* log = nullptr);

struct ExperimentSpec {
    ProblemSpec problem;
    LevelChoice level;
    int steps = 0;  ///< 0 selects default_steps(level)
    double tolerance = 1e-10;
    int threads = 1;
    /// Evaluation prices; empty selects K/2, K and 3K/2 in every coordinate.
    std::vector<std::vector<double>> points;
};

std::vector<std::vector<double>> default_points(const MarketParams& m);

/// Throws StageError(parse) when an evaluation point leaves the cube at maturity.
void check_points(const ExperimentSpec& spec);

struct ResultRow {
    OptionKind option = OptionKind::put;
    int d = 0;
    int k = 0;
    std::size_t n = 0;
    int m = 0;
    int iterations = 0;
    double mean_iterations = 0.0;
    std::vector<double> values;
    std::vector<double> exact;
    std::vector<double> errors;
    double wall_seconds = 0.0;
};

struct PriceOutcome {
    ResultRow row;
    MarchResult march;
};

PriceOutcome run_price(const ExperimentSpec& spec, const Discretization& disc);

std::string results_csv(const std::vector<ResultRow>& rows);
std::string solver_log_csv(const std::vector<StepLog>& log);
std::string timings_csv(const std::vector<ResultRow>& rows);

/// printf-style formatting into a std::string.
std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

}  // namespace orthowave::cli
