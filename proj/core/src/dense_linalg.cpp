#include "dense_linalg.hpp"

#include "orthowave/errors.hpp"

#include <cmath>

namespace orthowave {

const char* stage_name(Stage s) noexcept {
    switch (s) {
        case Stage::parse: return "parse";
        case Stage::basis: return "basis";
        case Stage::assembly: return "assembly";
        case Stage::solve: return "solve";
        case Stage::evaluate: return "evaluate";
    }
    return "unknown";
}

namespace detail {

NullSpace null_space(const Eigen::MatrixXd& a, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cutoff = s.size() > 0 ? rel_tol * s(0) : 0.0;
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;
    NullSpace out;
    out.singular_values = s;
    out.basis = svd.matrixV().rightCols(a.cols() - rank);
    return out;
}

std::vector<PiecewisePoly> gram_schmidt(std::vector<PiecewisePoly> fs) {
    std::vector<PiecewisePoly> out;
    out.reserve(fs.size());
    for (PiecewisePoly f : fs) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const PiecewisePoly& o : out) f = f - inner_product(f, o) * o;
        }
        out.push_back((1.0 / l2_norm(f)) * f);
    }
    return out;
}

PiecewisePoly combine(const Eigen::MatrixXd& w, Eigen::Index col, const std::vector<PiecewisePoly>& fs) {
    std::vector<double> weights(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) weights[i] = w(static_cast<Eigen::Index>(i), col);
    return linear_combination(weights, fs);
}

PiecewisePoly with_sign_convention(const PiecewisePoly& p) {
    const PiecewisePoly t = p.trimmed(1e-12);
    return t.leading_coefficient() < 0.0 ? t.scaled(-1.0) : t;
}

}  // namespace detail
}  // namespace orthowave
