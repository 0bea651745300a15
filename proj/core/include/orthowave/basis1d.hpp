#pragma once

#include "orthowave/generators.hpp"
#include "orthowave/piecewise_poly.hpp"

#include <span>
#include <string>
#include <vector>

namespace orthowave {

enum class FunctionKind { scaling, inner_wavelet, left_boundary, right_boundary };

const char* kind_name(FunctionKind k) noexcept;

/// One element of the interval basis. Level 0 holds the six scaling functions
/// (translations -5..0) followed by the six level-0 wavelets (1..6); level j >= 1
/// holds wavelets with translations 1..6*2^j.
struct BasisFunction {
    int level = 0;
    int translation = 0;
    FunctionKind kind = FunctionKind::scaling;
    PiecewisePoly shape;
};

/// Interval basis with blocks indexed by level.
class Basis1D {
public:
    Basis1D() = default;
    Basis1D(int max_level, bool scaling_only, std::vector<BasisFunction> functions);

    [[nodiscard]] int max_level() const noexcept { return max_level_; }
    [[nodiscard]] bool scaling_only() const noexcept { return scaling_only_; }
    [[nodiscard]] std::size_t size() const noexcept { return functions_.size(); }
    [[nodiscard]] std::size_t level_size(int m) const;
    [[nodiscard]] std::size_t level_offset(int m) const;
    [[nodiscard]] std::span<const BasisFunction> level(int m) const;
    [[nodiscard]] const std::vector<BasisFunction>& functions() const noexcept { return functions_; }
    [[nodiscard]] const BasisFunction& operator[](std::size_t i) const { return functions_[i]; }

private:
    int max_level_ = 0;
    bool scaling_only_ = false;
    std::vector<BasisFunction> functions_;
    std::vector<std::size_t> offsets_;
};

/// Number of functions in level block m (12 at level 0, 6*2^m above).
std::size_t level_block_size(int m);

/// Builds levels 0..k. With scaling_only the basis is the six level-0 scaling functions.
Basis1D build_basis(const GeneratorSet& g, int k, bool scaling_only = false);

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    [[nodiscard]] bool pass() const { return residual <= tolerance; }
};

struct BasisReport {
    double gram_residual = 0.0;       ///< max |<f_i, f_j> - delta_ij|
    double moment_residual = 0.0;     ///< max |integral x^m f| over inner wavelets, m <= 3
    double boundary_residual = 0.0;   ///< max |f(0)|, |f(1)|
    double support_excess = 0.0;      ///< max(diam supp - 2^{1-j}, 0) and distance outside [0, 1]
    double two_scale_residual = 0.0;  ///< least-squares distance to the Hermite spline space
    double h1_condition = 0.0;        ///< condition number of the H1-seminorm normalized Gram matrix
    std::vector<Check> checks;

    [[nodiscard]] bool pass() const;
    /// First failing check, or nullptr.
    [[nodiscard]] const Check* first_failure() const;
};

BasisReport verify_basis(const Basis1D& b);

/// CSV with columns check,residual,tolerance,pass.
std::string report_csv(const BasisReport& r);

}  // namespace orthowave
