#include "orthowave/market.hpp"

#include "orthowave/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <numeric>

namespace orthowave {

OptionKind parse_option_kind(const std::string& s) {
    if (s == "put") return OptionKind::put;
    if (s == "call") return OptionKind::call;
    throw StageError(Stage::parse, "unknown option kind '" + s + "' (expected put or call)");
}

const char* option_kind_name(OptionKind k) noexcept { return k == OptionKind::put ? "put" : "call"; }

void MarketParams::validate() const {
    auto fail = [](const std::string& msg) { throw StageError(Stage::parse, "market parameters: " + msg); };
    if (d < 1) fail("d must be at least 1");
    const auto du = static_cast<std::size_t>(d);
    if (sigma.size() != du) fail("sigma needs d entries");
    if (rho.size() != du * du) fail("rho needs d x d entries");
    if (!mu.empty() && mu.size() != du) fail("mu needs d entries");
    if (!std::isfinite(r)) fail("r must be finite");
    if (!(strike > 0.0)) fail("K must be positive");
    if (!(maturity > 0.0)) fail("T must be positive");
    for (double s : sigma)
        if (!(s > 0.0)) fail("sigma entries must be positive");
    Eigen::MatrixXd q(d, d);
    for (int i = 0; i < d; ++i) {
        if (std::abs(correlation(i, i) - 1.0) > 1e-12) fail("rho must have a unit diagonal");
        for (int j = 0; j < d; ++j) {
            if (std::abs(correlation(i, j) - correlation(j, i)) > 1e-12) fail("rho must be symmetric");
            q(i, j) = correlation(i, j);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(q);
    if (llt.info() != Eigen::Success) fail("rho must be positive definite");
}

void DomainSpec::validate(int d) const {
    const auto du = static_cast<std::size_t>(d);
    if (s_min.size() != du || s_max.size() != du)
        throw StageError(Stage::parse, "domain: S_min and S_max need d entries");
    for (std::size_t i = 0; i < du; ++i)
        if (!(s_min[i] > 0.0) || !(s_max[i] > s_min[i]))
            throw StageError(Stage::parse, "domain: need 0 < S_min < S_max");
}

double DomainSpec::x_min(int i) const { return std::log(s_min.at(static_cast<std::size_t>(i))); }

double DomainSpec::width(int i) const {
    return std::log(s_max.at(static_cast<std::size_t>(i))) - std::log(s_min.at(static_cast<std::size_t>(i)));
}

std::vector<double> drift(const MarketParams& m) {
    std::vector<double> b;
    for (double s : m.sigma) b.push_back(0.5 * s * s - m.r);
    return b;
}

std::vector<double> diffusion_table(const MarketParams& m, const DomainSpec& dom) {
    std::vector<double> p(static_cast<std::size_t>(m.d * m.d));
    for (int i = 0; i < m.d; ++i)
        for (int j = 0; j < m.d; ++j)
            p[static_cast<std::size_t>(i * m.d + j)] =
                m.correlation(i, j) * m.sigma[static_cast<std::size_t>(i)] * m.sigma[static_cast<std::size_t>(j)] /
                (2.0 * dom.width(i) * dom.width(j));
    return p;
}

ExpLinearPayoff payoff_on_cube(OptionKind kind, const MarketParams& m, const DomainSpec& dom) {
    ExpLinearPayoff u;
    u.strike = m.strike;
    u.call = kind == OptionKind::call;
    const double inv_d = 1.0 / m.d;
    for (int i = 0; i < m.d; ++i) {
        u.offset += dom.x_min(i) * inv_d;
        u.slope.push_back(dom.width(i) * inv_d);
    }
    return u;
}

double geometric_average(std::span<const double> s) {
    double l = 0.0;
    for (double v : s) l += std::log(v);
    return std::exp(l / static_cast<double>(s.size()));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

EffectiveParams effective_vol_and_div(const MarketParams& m) {
    double var = 0.0;
    double diag = 0.0;
    for (int i = 0; i < m.d; ++i) {
        const double si = m.sigma[static_cast<std::size_t>(i)];
        diag += si * si;
        for (int j = 0; j < m.d; ++j) var += m.correlation(i, j) * si * m.sigma[static_cast<std::size_t>(j)];
    }
    var /= static_cast<double>(m.d) * m.d;
    return {std::sqrt(var), diag / (2.0 * m.d) - 0.5 * var};
}

double analytic_price(OptionKind kind, const MarketParams& m, std::span<const double> s, double t) {
    if (s.size() != static_cast<std::size_t>(m.d)) throw StageError(Stage::evaluate, "analytic_price: need d prices");
    const double g = geometric_average(s);
    const EffectiveParams e = effective_vol_and_div(m);
    const double k = m.strike;
    double put = 0.0;
    if (t <= 0.0) {
        put = std::max(k - g, 0.0);
    } else {
        const double sd = e.sigma * std::sqrt(t);
        const double d1 = (std::log(g / k) + (m.r - e.delta + 0.5 * e.sigma * e.sigma) * t) / sd;
        const double d2 = d1 - sd;
        put = k * std::exp(-m.r * t) * normal_cdf(-d2) - g * std::exp(-e.delta * t) * normal_cdf(-d1);
    }
    if (kind == OptionKind::put) return put;
    return put + g * std::exp(-e.delta * std::max(t, 0.0)) - k * std::exp(-m.r * std::max(t, 0.0));
}

std::vector<double> prices_to_cube(const MarketParams& m, const DomainSpec& dom, std::span<const double> s, double t) {
    const std::vector<double> b = drift(m);
    std::vector<double> z;
    for (int i = 0; i < m.d; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        z.push_back((std::log(s[iu]) - b[iu] * t - dom.x_min(i)) / dom.width(i));
    }
    return z;
}

std::vector<double> cube_to_prices(const MarketParams& m, const DomainSpec& dom, std::span<const double> z, double t) {
    const std::vector<double> b = drift(m);
    std::vector<double> s;
    for (int i = 0; i < m.d; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        s.push_back(std::exp(dom.x_min(i) + dom.width(i) * z[iu] + b[iu] * t));
    }
    return s;
}

}  // namespace orthowave
