#pragma once

#include "orthowave/payoff_projection.hpp"

#include <span>
#include <string>
#include <vector>

namespace orthowave {

enum class OptionKind { put, call };

/// Accepts "put" or "call"; throws StageError(parse) otherwise.
OptionKind parse_option_kind(const std::string& s);
const char* option_kind_name(OptionKind k) noexcept;

struct MarketParams {
    int d = 1;
    double r = 0.0;
    std::vector<double> sigma;
    std::vector<double> rho;  ///< row-major d x d correlation matrix
    double strike = 1.0;
    double maturity = 1.0;
    /// Real-world drifts. Kept for completeness; risk-neutral pricing never reads them.
    std::vector<double> mu;

    /// Throws StageError(parse) when a field is inconsistent or rho is not a
    /// positive definite correlation matrix.
    void validate() const;
    [[nodiscard]] double correlation(int i, int j) const { return rho[static_cast<std::size_t>(i * d + j)]; }
};

/// Price box [S_min, S_max] per asset and its logarithmic image.
struct DomainSpec {
    std::vector<double> s_min;
    std::vector<double> s_max;

    void validate(int d) const;
    [[nodiscard]] double x_min(int i) const;
    [[nodiscard]] double width(int i) const;  ///< ln S_max - ln S_min
};

/// b_i = sigma_i^2 / 2 - r.
std::vector<double> drift(const MarketParams& m);

/// P_ij = rho_ij sigma_i sigma_j / (2 d_i d_j), row-major.
std::vector<double> diffusion_table(const MarketParams& m, const DomainSpec& dom);

/// Payoff of the geometric-average option on the unit cube: S_i = exp(x_i^min + d_i z_i).
ExpLinearPayoff payoff_on_cube(OptionKind kind, const MarketParams& m, const DomainSpec& dom);

/// Geometric average (prod S_i)^{1/d}.
double geometric_average(std::span<const double> s);

double normal_cdf(double x);

struct EffectiveParams {
    double sigma = 0.0;
    double delta = 0.0;
};

/// Volatility and dividend yield of the geometric average.
EffectiveParams effective_vol_and_div(const MarketParams& m);

/// Closed-form price with time t to maturity; the call follows from parity.
double analytic_price(OptionKind kind, const MarketParams& m, std::span<const double> s, double t);

/// Unit-cube point of prices s at time to maturity t: z_i = (ln s_i - b_i t - x_i^min) / d_i.
std::vector<double> prices_to_cube(const MarketParams& m, const DomainSpec& dom, std::span<const double> s, double t);
std::vector<double> cube_to_prices(const MarketParams& m, const DomainSpec& dom, std::span<const double> z, double t);

}  // namespace orthowave
