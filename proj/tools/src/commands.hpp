#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace orthowave::cli {

namespace fs = std::filesystem;

struct BasisArgs {
    int level = 3;
    std::string convention = "lemma";
    bool reconstruct = false;
    fs::path out = ".";
    fs::path cache = "orthowave_cache";
    int threads = 1;
};

struct PriceArgs {
    fs::path params;
    std::optional<int> dim;
    std::optional<std::string> option;
    int level = 3;
    std::string convention = "table";
    int steps = 0;
    fs::path out = ".";
    fs::path cache = "orthowave_cache";
    int threads = 1;
    double tolerance = 1e-10;
    bool force = false;
    std::size_t ceiling = 200000;
};

struct Table1Args {
    fs::path params;
    std::vector<int> dims{2};
    int min_level = 0;
    int max_level = 4;
    std::string convention = "table";
    fs::path out = ".";
    fs::path cache = "orthowave_cache";
    int threads = 1;
    double tolerance = 1e-10;
    bool force = false;
    std::size_t ceiling = 200000;
};

struct CondArgs {
    fs::path params;
    std::vector<int> dims{2};
    int min_level = 2;
    int max_level = 5;
    std::string convention = "lemma";
    int lanczos_steps = 60;
    bool identity_only = false;
    fs::path out = ".";
    fs::path cache = "orthowave_cache";
    int threads = 1;
    bool force = false;
    std::size_t ceiling = 200000;
};

/// Each command returns its exit code and throws StageError on a failed stage.
int cmd_basis(const BasisArgs& a, std::ostream& out, std::ostream& err);
int cmd_price(const PriceArgs& a, std::ostream& out, std::ostream& err);
int cmd_table1(const Table1Args& a, std::ostream& out, std::ostream& err);
int cmd_cond(const CondArgs& a, std::ostream& out, std::ostream& err);

/// Runs a command and maps StageError to its stage exit code, other exceptions to 1.
template <class F>
int guarded(F&& f, std::ostream& err);

}  // namespace orthowave::cli

#include "orthowave/errors.hpp"

#include <ostream>

template <class F>
int orthowave::cli::guarded(F&& f, std::ostream& err) {
    try {
        return f();
    } catch (const StageError& e) {
        err << "error [" << stage_name(e.stage()) << "]: " << e.what() << "\n";
        return static_cast<int>(e.stage());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}
