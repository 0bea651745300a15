#include "commands.hpp"

#include "pipeline.hpp"

#include "orthowave/block_operator.hpp"
#include "orthowave/generator_io.hpp"
#include "orthowave/lanczos.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace orthowave::cli {

namespace {

void ensure_dir(const fs::path& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

void check_ceiling(std::size_t n, std::size_t ceiling, bool force) {
    if (n > ceiling && !force)
        throw StageError(Stage::parse, format("%zu unknowns exceed the ceiling of %zu; pass --force to run anyway", n,
                                              ceiling));
}

std::size_t count_for(int d, LevelChoice level) { return enumerate(d, level.k, level.convention).total_count(); }

std::string ratio(const std::map<int, double>& prev, int k, double cur) {
    const auto it = prev.find(k - 1);
    if (it == prev.end() || !(cur > 0.0)) return "";
    return format("%.3f", it->second / cur);
}

}  // namespace

int cmd_basis(const BasisArgs& a, std::ostream& out, std::ostream& err) {
    const LevelChoice level{a.level, parse_convention(a.convention)};
    const BasisLevels bl = basis_levels(level);
    const GeneratorSet g = load_generators(a.cache, a.reconstruct, &err);
    const Basis1D b = build_basis(g, bl.max_level, bl.scaling_only);
    const BasisReport rep = verify_basis(b);
    ensure_dir(a.out);
    write_file_atomic(a.out / "verify_report.csv", report_csv(rep));
    out << "generators " << generator_hash(g) << (a.reconstruct ? " (reconstructed)" : "") << "\n";
    out << "basis level " << bl.max_level << (bl.scaling_only ? " scaling only" : "") << ", " << b.size()
        << " functions\n";
    for (const Check& c : rep.checks)
        out << format("  %-20s %.3e <= %.1e %s\n", c.name.c_str(), c.residual, c.tolerance, c.pass() ? "ok" : "FAIL");
    out << format("  h1 condition %.4f\n", rep.h1_condition);
    if (const Check* f = rep.first_failure()) {
        err << "error [basis]: check " << f->name << " failed with residual " << format("%.3e", f->residual) << "\n";
        return static_cast<int>(Stage::basis);
    }
    return 0;
}

int cmd_price(const PriceArgs& a, std::ostream& out, std::ostream& err) {
    ExperimentSpec spec;
    spec.problem = load_problem(a.params, a.dim);
    if (a.option) spec.problem.option = parse_option_kind(*a.option);
    spec.level = {a.level, parse_convention(a.convention)};
    spec.steps = a.steps;
    spec.tolerance = a.tolerance;
    spec.threads = a.threads;
    if (!(spec.tolerance > 0.0)) throw StageError(Stage::parse, "--tol must be positive");
    if (spec.steps < 0) throw StageError(Stage::parse, "--steps must be positive");
    check_points(spec);
    const int d = spec.problem.market.d;
    check_ceiling(count_for(d, spec.level), a.ceiling, a.force);

    const GeneratorSet g = load_generators(a.cache, false, &err);
    const Discretization disc = discretize(g, d, spec.level, a.cache, a.threads, &err);
    const BasisReport rep = verify_basis(disc.basis);
    ensure_dir(a.out);
    write_file_atomic(a.out / "verify_report.csv", report_csv(rep));
    if (const Check* f = rep.first_failure())
        throw StageError(Stage::basis, "basis check " + f->name + " failed");

    const PriceOutcome res = run_price(spec, disc);
    write_file_atomic(a.out / "results.csv", results_csv({res.row}));
    write_file_atomic(a.out / "solver_log.csv", solver_log_csv(res.march.log));
    write_file_atomic(a.out / "timings.csv", timings_csv({res.row}));

    const ResultRow& r = res.row;
    out << format("%s d=%d k=%d (%s) N=%zu M=%d iterations max %d mean %.2f\n", option_kind_name(r.option), r.d, r.k,
                  convention_name(spec.level.convention), r.n, r.m, r.iterations, r.mean_iterations);
    for (std::size_t i = 0; i < r.values.size(); ++i)
        out << format("  P%zu value %.10f exact %.10f error %.5e\n", i + 1, r.values[i], r.exact[i], r.errors[i]);
    out << format("  wall time %.2f s\n", r.wall_seconds);
    return 0;
}

int cmd_table1(const Table1Args& a, std::ostream& out, std::ostream& err) {
    const LevelConvention conv = parse_convention(a.convention);
    if (a.min_level < 0 || a.max_level < a.min_level) throw StageError(Stage::parse, "invalid level range");
    const GeneratorSet g = load_generators(a.cache, false, &err);
    ensure_dir(a.out);

    std::string csv =
        "d,k,N,M,put_it,put_e_P1,put_e_P2,call_it,call_e_P2,call_e_P3,put_ratio_P1,put_ratio_P2,call_ratio_P2,"
        "call_ratio_P3,status\n";
    std::vector<ResultRow> rows;
    for (int d : a.dims) {
        const ProblemSpec base = load_problem(a.params, d);
        std::map<int, double> prev[4];
        for (int k = a.min_level; k <= a.max_level; ++k) {
            const LevelChoice level{k, conv};
            const std::size_t n = count_for(d, level);
            const int m = default_steps(level);
            std::string status = "ok";
            ResultRow put;
            ResultRow call;
            bool have_put = false;
            bool have_call = false;
            if (n > a.ceiling && !a.force) {
                status = "skipped: N exceeds ceiling";
            } else {
                try {
                    const Discretization disc = discretize(g, d, level, a.cache, a.threads, &err);
                    for (OptionKind kind : {OptionKind::put, OptionKind::call}) {
                        ExperimentSpec spec;
                        spec.problem = base;
                        spec.problem.option = kind;
                        spec.level = level;
                        spec.tolerance = a.tolerance;
                        spec.threads = a.threads;
                        const PriceOutcome res = run_price(spec, disc);
                        rows.push_back(res.row);
                        (kind == OptionKind::put ? put : call) = res.row;
                        (kind == OptionKind::put ? have_put : have_call) = true;
                    }
                } catch (const StageError& e) {
                    status = std::string(stage_name(e.stage())) + ": " + e.what();
                } catch (const std::exception& e) {
                    status = std::string("error: ") + e.what();
                }
                for (char& c : status)
                    if (c == ',' || c == '\n') c = ' ';
            }
            std::string line = format("%d,%d,%zu,%d", d, k, n, m);
            line += have_put ? format(",%d,%.5e,%.5e", put.iterations, put.errors[0], put.errors[1]) : ",,,";
            line += have_call ? format(",%d,%.5e,%.5e", call.iterations, call.errors[1], call.errors[2]) : ",,,";
            const double cur[4] = {have_put ? put.errors[0] : NAN, have_put ? put.errors[1] : NAN,
                                   have_call ? call.errors[1] : NAN, have_call ? call.errors[2] : NAN};
            for (int c = 0; c < 4; ++c) {
                line += "," + (std::isnan(cur[c]) ? std::string() : ratio(prev[c], k, cur[c]));
                if (!std::isnan(cur[c])) prev[c][k] = cur[c];
            }
            line += "," + status + "\n";
            csv += line;
            out << line;
            out.flush();
        }
    }
    write_file_atomic(a.out / "table1.csv", csv);
    write_file_atomic(a.out / "results.csv", results_csv(rows));
    write_file_atomic(a.out / "timings.csv", timings_csv(rows));
    return 0;
}

int cmd_cond(const CondArgs& a, std::ostream& out, std::ostream& err) {
    const LevelConvention conv = parse_convention(a.convention);
    if (a.min_level < 0 || a.max_level < a.min_level) throw StageError(Stage::parse, "invalid level range");
    const GeneratorSet g = load_generators(a.cache, false, &err);
    ensure_dir(a.out);
    std::string csv = "d,k,N,tau,lambda_min,lambda_max,cond,gamma,bound\n";
    for (int d : a.dims) {
        const ProblemSpec prob = load_problem(a.params, d);
        const MarketParams& m = prob.market;
        std::vector<double> p = diffusion_table(m, prob.domain);
        if (a.identity_only) std::fill(p.begin(), p.end(), 0.0);
        for (int k = a.min_level; k <= a.max_level; ++k) {
            const LevelChoice level{k, conv};
            check_ceiling(count_for(d, level), a.ceiling, a.force);
            const Discretization disc = discretize(g, d, level, a.cache, a.threads, &err);
            const double tau = m.maturity * std::pow(4.0, -k);
            const BlockOperator op = make_cn_system(*disc.set, disc.blocks, p, m.r, tau, a.threads);
            const ConditionEstimate est = estimate_condition(
                [&op](std::span<const double> x, std::span<double> y) { op.apply(x, y); }, op.size(), a.lanczos_steps);

            // A = (I + E) / tau with ||E|| <= gamma; gamma < 1 bounds the condition number.
            const DenseMatrix mk = full_matrix(disc.blocks, true);
            const DenseMatrix bk = full_matrix(disc.blocks, false);
            auto dense = [](const DenseMatrix& x, bool gram) {
                return [&x, gram](std::span<const double> v, std::span<double> y) {
                    std::vector<double> t(x.rows, 0.0);
                    for (std::size_t i = 0; i < x.rows; ++i)
                        for (std::size_t j = 0; j < x.cols; ++j) t[i] += x(i, j) * v[j];
                    if (!gram) {
                        std::copy(t.begin(), t.end(), y.begin());
                        return;
                    }
                    std::fill(y.begin(), y.end(), 0.0);
                    for (std::size_t i = 0; i < x.rows; ++i)
                        for (std::size_t j = 0; j < x.cols; ++j) y[j] += x(i, j) * t[i];
                };
            };
            const double m_norm = lanczos_extremes(dense(mk, false), mk.rows, a.lanczos_steps).lambda_max;
            const double b_norm2 = lanczos_extremes(dense(bk, true), bk.rows, a.lanczos_steps).lambda_max;
            double g_norm = 0.0;
            for (int i = 0; i < d; ++i) {
                g_norm += std::abs(p[static_cast<std::size_t>(i * d + i)]) * m_norm;
                for (int j = i + 1; j < d; ++j)
                    g_norm += 2.0 * std::abs(p[static_cast<std::size_t>(i * d + j)]) * b_norm2;
            }
            const double gamma = tau * (0.5 * std::abs(m.r) + 0.5 * g_norm);
            const double bound =
                gamma < 1.0 ? (1.0 + gamma) / (1.0 - gamma) : std::numeric_limits<double>::infinity();
            const std::string line = format("%d,%d,%zu,%.6e,%.6e,%.6e,%.6f,%.6f,%.6f\n", d, k, op.size(), tau,
                                            est.lambda_min, est.lambda_max, est.condition, gamma, bound);
            csv += line;
            out << line;
            out.flush();
        }
    }
    write_file_atomic(a.out / "cond.csv", csv);
    return 0;
}

}  // namespace orthowave::cli
