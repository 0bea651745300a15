#include "commands.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace orthowave::cli;

namespace {

void add_common(CLI::App* app, fs::path& out, fs::path& cache, int& threads) {
    app->add_option("--out", out, "Output directory")->capture_default_str();
    app->add_option("--cache", cache, "Cache directory for generators and level blocks")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

CLI::Option* add_convention(CLI::App* app, std::string& conv) {
    return app->add_option("--level-convention", conv, "Level convention: lemma or table")
        ->check(CLI::IsMember({"lemma", "table"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse wavelet Galerkin pricer for geometric-average basket options"};
    app.require_subcommand(1);

    BasisArgs basis;
    auto* b = app.add_subcommand("basis", "Build and verify the interval wavelet basis");
    b->add_option("--level", basis.level, "Sparse level k")->capture_default_str();
    add_convention(b, basis.convention);
    b->add_flag("--reconstruct", basis.reconstruct, "Use generators constructed from the Hermite cubics");
    add_common(b, basis.out, basis.cache, basis.threads);

    PriceArgs price;
    std::string price_option;
    int price_dim = 0;
    auto* p = app.add_subcommand("price", "Price one option and report pointwise errors");
    p->add_option("--params", price.params, "JSON parameter file")->required()->check(CLI::ExistingFile);
    auto* pdim = p->add_option("--dim", price_dim, "Number of assets (overrides d)")->check(CLI::PositiveNumber);
    auto* popt = p->add_option("--option", price_option, "put or call (overrides the file)")
                     ->check(CLI::IsMember({"put", "call"}));
    p->add_option("--level", price.level, "Sparse level k")->capture_default_str();
    add_convention(p, price.convention);
    p->add_option("--steps", price.steps, "Time steps M (default 4^k, table convention)");
    p->add_option("--tol", price.tolerance, "CG relative residual tolerance")->capture_default_str();
    p->add_flag("--force", price.force, "Run above the unknown-count ceiling");
    p->add_option("--ceiling", price.ceiling, "Largest unknown count without --force")->capture_default_str();
    add_common(p, price.out, price.cache, price.threads);

    Table1Args table;
    auto* t = app.add_subcommand("table1", "Error table for put and call over a level range");
    t->add_option("--params", table.params, "JSON parameter file")->required()->check(CLI::ExistingFile);
    t->add_option("--dim", table.dims, "Asset counts, comma separated")->delimiter(',')->capture_default_str();
    t->add_option("--min-level", table.min_level, "First level")->capture_default_str();
    t->add_option("--level", table.max_level, "Last level")->capture_default_str();
    add_convention(t, table.convention);
    t->add_option("--tol", table.tolerance, "CG relative residual tolerance")->capture_default_str();
    t->add_flag("--force", table.force, "Run rows above the unknown-count ceiling");
    t->add_option("--ceiling", table.ceiling, "Largest unknown count without --force")->capture_default_str();
    add_common(t, table.out, table.cache, table.threads);

    CondArgs cond;
    auto* c = app.add_subcommand("cond", "Lanczos condition estimates of the Crank-Nicolson matrix, tau = T 4^-k");
    c->add_option("--params", cond.params, "JSON parameter file")->required()->check(CLI::ExistingFile);
    c->add_option("--dim", cond.dims, "Asset counts, comma separated")->delimiter(',')->capture_default_str();
    c->add_option("--min-level", cond.min_level, "First level")->capture_default_str();
    c->add_option("--level", cond.max_level, "Last level")->capture_default_str();
    add_convention(c, cond.convention);
    c->add_option("--lanczos-steps", cond.lanczos_steps, "Lanczos steps")->capture_default_str();
    c->add_flag("--identity-only", cond.identity_only, "Drop the diffusion terms");
    c->add_flag("--force", cond.force, "Run above the unknown-count ceiling");
    c->add_option("--ceiling", cond.ceiling, "Largest unknown count without --force")->capture_default_str();
    add_common(c, cond.out, cond.cache, cond.threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(orthowave::Stage::parse);
    }

    if (*pdim) price.dim = price_dim;
    if (*popt) price.option = price_option;

    if (*b) return guarded([&] { return cmd_basis(basis, std::cout, std::cerr); }, std::cerr);
    if (*p) return guarded([&] { return cmd_price(price, std::cout, std::cerr); }, std::cerr);
    if (*t) return guarded([&] { return cmd_table1(table, std::cout, std::cerr); }, std::cerr);
    return guarded([&] { return cmd_cond(cond, std::cout, std::cerr); }, std::cerr);
}
