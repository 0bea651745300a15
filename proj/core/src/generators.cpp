#include "orthowave/generators.hpp"

#include "dense_linalg.hpp"
#include "orthowave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#ifndef ORTHOWAVE_DEFAULT_DATA_DIR
#define ORTHOWAVE_DEFAULT_DATA_DIR "data"
#endif

namespace orthowave {

namespace {

using detail::combine;
using detail::gram_schmidt;
using detail::null_space;
using detail::with_sign_convention;

struct Row {
    double a, b;
    PiecewisePoly::Coeffs global;
};

PiecewisePoly assemble_rows(const std::string& name, std::vector<Row> rows) {
    // A restart of the interval sequence marks pieces printed with unshifted intervals.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].a < rows[i - 1].b - PiecewisePoly::kBreakTolerance) {
            const double shift = rows[i].a - rows[i - 1].b;
            for (std::size_t k = 0; k < i; ++k) {
                rows[k].a += shift;
                rows[k].b += shift;
            }
        }
    }
    std::vector<double> breaks{rows.front().a};
    std::vector<PiecewisePoly::Coeffs> coeffs;
    for (const Row& r : rows) {
        if (std::abs(r.a - breaks.back()) > PiecewisePoly::kBreakTolerance)
            throw StageError(Stage::parse, "generator " + name + ": pieces are not contiguous");
        breaks.push_back(r.b);
        coeffs.push_back(r.global);
    }
    return PiecewisePoly::from_global(std::move(breaks), coeffs);
}

// Overlapping integer translates for functions supported in [-1, 1].
constexpr int kMaxShift = 2;

PiecewisePoly interval_part(const PiecewisePoly& p) { return p.restricted(0.0, 1.0); }

}  // namespace

PiecewisePoly hermite_xi1() {
    return PiecewisePoly({-1.0, 0.0, 1.0}, {{0.0, 0.0, 3.0, -2.0}, {1.0, 0.0, -3.0, 2.0}});
}

PiecewisePoly hermite_xi2() {
    return PiecewisePoly({-1.0, 0.0, 1.0}, {{0.0, 0.0, -1.0, 1.0}, {0.0, 1.0, -2.0, 1.0}});
}

GeneratorSet parse_scaling_generators(std::istream& in) {
    std::map<std::string, std::vector<Row>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string name;
        Row r{};
        double c3, c2, c1, c0;
        if (!(ls >> name >> r.a >> r.b >> c3 >> c2 >> c1 >> c0))
            throw StageError(Stage::parse, "generator table line " + std::to_string(line_no) + ": expected 7 fields");
        if (!(r.b > r.a))
            throw StageError(Stage::parse, "generator table line " + std::to_string(line_no) + ": empty interval");
        r.global = {c3, c2, c1, c0};
        rows[name].push_back(r);
    }
    const char* names[] = {"phi1", "phi2", "phi3", "phi4", "phi5", "phi6", "phiL", "phiR"};
    for (const char* n : names) {
        if (rows.find(n) == rows.end()) throw StageError(Stage::parse, std::string("generator table lacks ") + n);
    }
    GeneratorSet g;
    for (int i = 0; i < 6; ++i) g.phi[static_cast<std::size_t>(i)] = assemble_rows(names[i], rows[names[i]]);
    g.phi_left = assemble_rows("phiL", rows["phiL"]);
    g.phi_right = assemble_rows("phiR", rows["phiR"]);
    return g;
}

std::filesystem::path default_generator_file() {
    return std::filesystem::path(ORTHOWAVE_DEFAULT_DATA_DIR) / "scaling_generators.txt";
}

GeneratorSet load_scaling_generators(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw StageError(Stage::parse, "cannot open generator table " + file.string());
    GeneratorSet g = parse_scaling_generators(in);
    const double res = scaling_orthonormality_residual(g);
    if (!(res <= 1e-6)) {
        std::ostringstream msg;
        msg << "scaling generators are not orthonormal (residual " << res << "); check the interval convention";
        throw StageError(Stage::basis, msg.str());
    }
    return g;
}

double scaling_orthonormality_residual(const GeneratorSet& g) {
    double res = 0.0;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            for (int n = -kMaxShift; n <= kMaxShift; ++n) {
                const double ip = inner_product(g.phi[static_cast<std::size_t>(i)],
                                                g.phi[static_cast<std::size_t>(j)].shifted(n));
                const double expect = (i == j && n == 0) ? 1.0 : 0.0;
                res = std::max(res, std::abs(ip - expect));
            }
        }
    }
    const std::vector<PiecewisePoly> level0{g.phi_left, g.phi[0], g.phi[1], g.phi[2], g.phi[3], g.phi_right};
    for (std::size_t i = 0; i < level0.size(); ++i) {
        for (std::size_t j = 0; j < level0.size(); ++j) {
            const double ip = inner_product(level0[i], level0[j]);
            res = std::max(res, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    }
    return res;
}

void construct_wavelet_generators(GeneratorSet& g, ConstructionLog* log) {
    const auto& phi = g.phi;
    const double r2 = std::sqrt(2.0);
    auto half = [&](int l, double k) {  // phi_l(2x - k)
        return phi[static_cast<std::size_t>(l - 1)].dilated(1, k).scaled(1.0 / r2);
    };

    // psi_1, psi_2: combinations of V_1 functions on [0, 1] orthogonal to V_0.
    std::vector<PiecewisePoly> p;
    for (int l = 1; l <= 4; ++l) p.push_back(half(l, 0.0));
    for (int l = 1; l <= 6; ++l) p.push_back(half(l, 1.0));
    std::vector<PiecewisePoly> q(phi.begin(), phi.end());
    q.push_back(phi[4].shifted(1.0));
    q.push_back(phi[5].shifted(1.0));
    Eigen::MatrixXd s(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inner_product(p[i], q[j]);
    const detail::NullSpace ns = null_space(s.transpose());
    if (ns.basis.cols() != 2)
        throw StageError(Stage::basis, "null space of S has dimension " + std::to_string(ns.basis.cols()));
    auto psi12 = gram_schmidt({combine(ns.basis, 0, p), combine(ns.basis, 1, p)});

    // psi_3, psi_4: phi_5(2x), phi_6(2x) with their V_0 components removed.
    std::vector<PiecewisePoly> h;
    for (int l = 5; l <= 6; ++l) {
        PiecewisePoly f = half(l, 0.0);
        f = f - inner_product(f, phi[4]) * phi[4] - inner_product(f, phi[5]) * phi[5];
        h.push_back(f);
    }
    auto psi34 = gram_schmidt(h);

    // psi_5, psi_6: V_1 functions on [-1, 1] orthogonal to V_0 and to psi_1..psi_4 and neighbours.
    auto phi_jk = [&](int j, int k) {
        const int kk = static_cast<int>(std::floor((k - 1) / 6.0));
        const int l = k - 1 - 6 * kk + 1;
        const double shift = l <= 4 ? kk : kk + 1;
        return phi[static_cast<std::size_t>(l - 1)].dilated(j, shift);
    };
    std::vector<PiecewisePoly> level1;
    for (int k = -11; k <= 10; ++k) level1.push_back(phi_jk(1, k));
    std::vector<PiecewisePoly> rows;
    for (int k = -7; k <= 6; ++k) rows.push_back(phi_jk(0, k));
    rows.push_back(psi12[0].shifted(-1.0));
    rows.push_back(psi12[1].shifted(-1.0));
    rows.push_back(psi12[0]);
    rows.push_back(psi12[1]);
    rows.push_back(psi34[0]);
    rows.push_back(psi34[1]);
    Eigen::MatrixXd t(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(level1.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < level1.size(); ++j)
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inner_product(rows[i], level1[j]);
    const detail::NullSpace nt = null_space(t);
    if (nt.basis.cols() != 2)
        throw StageError(Stage::basis, "null space of T has dimension " + std::to_string(nt.basis.cols()));
    auto psi56 = gram_schmidt({combine(nt.basis, 0, level1), combine(nt.basis, 1, level1)});

    g.psi = {with_sign_convention(psi12[0]), with_sign_convention(psi12[1]), with_sign_convention(psi34[0]),
             with_sign_convention(psi34[1]), with_sign_convention(psi56[0]), with_sign_convention(psi56[1])};
    g.has_wavelets = true;

    if (log) {
        log->null_s_dim = static_cast<int>(ns.basis.cols());
        log->null_t_dim = static_cast<int>(nt.basis.cols());
        log->s_singular_values.assign(ns.singular_values.data(), ns.singular_values.data() + ns.singular_values.size());
        log->t_singular_values.assign(nt.singular_values.data(), nt.singular_values.data() + nt.singular_values.size());
    }
    const double res = wavelet_orthonormality_residual(g);
    if (!(res <= 1e-8)) {
        std::ostringstream msg;
        msg << "wavelet generators lost orthogonality (residual " << res << ")";
        throw StageError(Stage::basis, msg.str());
    }
}

void construct_boundary_functions(GeneratorSet& g, ConstructionLog* log) {
    if (!g.has_wavelets) construct_wavelet_generators(g, log);

    // Boundary scaling functions rebuilt from phi_5, phi_6 as a cross-check of the table.
    const double p5 = g.phi[4](0.0);
    const double p6 = g.phi[5](0.0);
    auto normalized = [](const PiecewisePoly& f) { return f.scaled(1.0 / l2_norm(f)); };
    const PiecewisePoly left = normalized(interval_part(p6 * g.phi[4] - p5 * g.phi[5]));
    const PiecewisePoly right = normalized(interval_part(p6 * g.phi[4].shifted(1.0) - p5 * g.phi[5].shifted(1.0)));
    auto mismatch = [](const PiecewisePoly& a, const PiecewisePoly& b) {
        return std::min(max_abs_difference(a, b), max_abs_difference(a.scaled(-1.0), b));
    };

    std::vector<PiecewisePoly> left_candidates;
    std::vector<PiecewisePoly> right_candidates;
    for (int j = 2; j < 6; ++j) {
        left_candidates.push_back(interval_part(g.psi[static_cast<std::size_t>(j)]));
        right_candidates.push_back(interval_part(g.psi[static_cast<std::size_t>(j)].shifted(1.0)));
    }
    Eigen::MatrixXd gm(2, 4);
    Eigen::MatrixXd hm(2, 4);
    for (int j = 0; j < 4; ++j) {
        const double at_zero = g.psi[static_cast<std::size_t>(j + 2)](0.0);
        gm(0, j) = at_zero;
        gm(1, j) = inner_product(g.phi_left, left_candidates[static_cast<std::size_t>(j)]);
        // psi(x - 1) evaluated at x = 1.
        hm(0, j) = at_zero;
        hm(1, j) = inner_product(g.phi_right, right_candidates[static_cast<std::size_t>(j)]);
    }
    const detail::NullSpace ng = null_space(gm);
    const detail::NullSpace nh = null_space(hm);
    if (ng.basis.cols() != 2 || nh.basis.cols() != 2)
        throw StageError(Stage::basis, "boundary null spaces must be two dimensional");
    auto psi_l = gram_schmidt({combine(ng.basis, 0, left_candidates), combine(ng.basis, 1, left_candidates)});
    auto psi_r = gram_schmidt({combine(nh.basis, 0, right_candidates), combine(nh.basis, 1, right_candidates)});
    g.psi_left = {with_sign_convention(psi_l[0]), with_sign_convention(psi_l[1])};
    g.psi_right = {with_sign_convention(psi_r[0]), with_sign_convention(psi_r[1])};
    g.has_boundary = true;

    if (log) {
        log->null_g_dim = static_cast<int>(ng.basis.cols());
        log->null_h_dim = static_cast<int>(nh.basis.cols());
        log->phi_left_mismatch = mismatch(left, g.phi_left);
        log->phi_right_mismatch = mismatch(right, g.phi_right);
    }
    for (const auto* set : {&g.psi_left, &g.psi_right}) {
        for (const PiecewisePoly& f : *set) {
            if (std::abs(f(0.0)) > 1e-10 || std::abs(f(1.0)) > 1e-10)
                throw StageError(Stage::basis, "boundary wavelet does not vanish at the interval ends");
        }
    }
    const double ol = std::max(std::abs(inner_product(g.phi_left, g.psi_left[0])),
                               std::abs(inner_product(g.phi_left, g.psi_left[1])));
    const double orr = std::max(std::abs(inner_product(g.phi_right, g.psi_right[0])),
                                std::abs(inner_product(g.phi_right, g.psi_right[1])));
    if (!(std::max(ol, orr) <= 1e-8))
        throw StageError(Stage::basis, "boundary wavelets are not orthogonal to the boundary scaling functions");
}

double wavelet_orthonormality_residual(const GeneratorSet& g) {
    double res = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t l = 0; l < 6; ++l) {
            for (int n = -kMaxShift; n <= kMaxShift; ++n) {
                const PiecewisePoly moved = g.psi[i].shifted(n);
                const double expect = (i == l && n == 0) ? 1.0 : 0.0;
                res = std::max(res, std::abs(inner_product(moved, g.psi[l]) - expect));
                res = std::max(res, std::abs(inner_product(moved, g.phi[l])));
            }
        }
    }
    return res;
}

double wavelet_moment_residual(const GeneratorSet& g) {
    double res = 0.0;
    for (const PiecewisePoly& f : g.psi)
        for (int m = 0; m <= 3; ++m) res = std::max(res, std::abs(moment(f, m)));
    return res;
}

GeneratorSet build_generator_set(const std::filesystem::path& file, ConstructionLog* log) {
    GeneratorSet g = load_scaling_generators(file);
    construct_wavelet_generators(g, log);
    construct_boundary_functions(g, log);
    return g;
}

}  // namespace orthowave
