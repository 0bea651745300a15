#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace orthowave {

/// Compactly supported piecewise cubic on [t_0, t_n].
///
/// Piece i is stored in local form c0 + c1 (x - t_i) + c2 (x - t_i)^2 + c3 (x - t_i)^3,
/// which keeps dilations to fine levels exact in binary arithmetic.
/// Evaluation is right-continuous at interior breakpoints; the closed support
/// [t_0, t_n] uses the last piece at t_n and the value is 0 outside.
class PiecewisePoly {
public:
    /// Local coefficients, index e multiplies (x - t_i)^e.
    using Coeffs = std::array<double, 4>;

    PiecewisePoly() = default;
    PiecewisePoly(std::vector<double> breaks, std::vector<Coeffs> local);

    /// Builds from global coefficients ordered (c3, c2, c1, c0) in x.
    static PiecewisePoly from_global(std::vector<double> breaks, const std::vector<Coeffs>& global);

    double operator()(double x) const;

    [[nodiscard]] bool empty() const noexcept { return pieces_.empty(); }
    [[nodiscard]] std::size_t piece_count() const noexcept { return pieces_.size(); }
    [[nodiscard]] double support_begin() const;
    [[nodiscard]] double support_end() const;
    [[nodiscard]] const std::vector<double>& breaks() const noexcept { return breaks_; }
    [[nodiscard]] const Coeffs& local(std::size_t i) const { return pieces_[i]; }

    /// Global coefficients of piece i ordered (c3, c2, c1, c0).
    [[nodiscard]] Coeffs global(std::size_t i) const;

    /// Index of the piece used to evaluate at x, or -1 outside the support.
    [[nodiscard]] std::ptrdiff_t locate(double x) const;

    [[nodiscard]] PiecewisePoly derivative() const;
    /// x -> p(x - s).
    [[nodiscard]] PiecewisePoly shifted(double s) const;
    /// x -> 2^{j/2} p(2^j x - m).
    [[nodiscard]] PiecewisePoly dilated(int j, double m) const;
    /// p multiplied by the indicator of [lo, hi].
    [[nodiscard]] PiecewisePoly restricted(double lo, double hi) const;
    [[nodiscard]] PiecewisePoly scaled(double s) const;
    /// Drops leading and trailing pieces whose coefficients are all below rel_tol times the largest one.
    [[nodiscard]] PiecewisePoly trimmed(double rel_tol) const;

    /// Highest-degree coefficient of the first piece above a relative threshold.
    [[nodiscard]] double leading_coefficient() const;

    /// Breakpoints closer than this are treated as equal when merging.
    static constexpr double kBreakTolerance = 1e-14;

private:
    std::vector<double> breaks_;
    std::vector<Coeffs> pieces_;
};

/// Re-expands local coefficients about a + delta.
PiecewisePoly::Coeffs taylor_shift(const PiecewisePoly::Coeffs& c, double delta);
double horner(const PiecewisePoly::Coeffs& c, double t);

double evaluate(const PiecewisePoly& p, double x);
PiecewisePoly derivative(const PiecewisePoly& p);
/// 2^{j/2} p(2^j x - m).
PiecewisePoly rescale(const PiecewisePoly& p, int j, long m);

/// Exact L2 inner product via 4-point Gauss on merged breakpoints.
double inner_product(const PiecewisePoly& p, const PiecewisePoly& q);
double l2_norm(const PiecewisePoly& p);
/// Integral of x^m p(x).
double moment(const PiecewisePoly& p, int m);

PiecewisePoly linear_combination(std::span<const double> weights, std::span<const PiecewisePoly> fs);
PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b);
PiecewisePoly operator-(const PiecewisePoly& a, const PiecewisePoly& b);
PiecewisePoly operator*(double s, const PiecewisePoly& p);

/// Largest absolute difference over merged pieces, compared by values at Gauss nodes.
double max_abs_difference(const PiecewisePoly& p, const PiecewisePoly& q);

}  // namespace orthowave
