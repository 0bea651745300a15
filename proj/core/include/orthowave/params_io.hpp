#pragma once

#include "orthowave/market.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace orthowave {

struct ProblemSpec {
    MarketParams market;
    DomainSpec domain;
    OptionKind option = OptionKind::put;
};

/// JSON object with the mandatory keys d, r, sigma, rho, K, T, S_min, S_max, option
/// and the optional key mu. sigma, S_min, S_max and mu take a number (same for every
/// asset) or a list of d numbers; rho takes a number (every off-diagonal entry) or a
/// d x d nested list. dim replaces d, which only works with the scalar forms.
/// Errors throw StageError(parse).
ProblemSpec parse_problem(const std::string& json_text, std::optional<int> dim = std::nullopt);
ProblemSpec load_problem(const std::filesystem::path& file, std::optional<int> dim = std::nullopt);

}  // namespace orthowave
