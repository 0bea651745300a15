#include "orthowave/params_io.hpp"

#include "orthowave/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace orthowave {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw StageError(Stage::parse, "parameter file: " + msg); }

const json& field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& v, const char* key) {
    if (!v.is_number()) fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> per_asset(const json& v, const char* key, int d) {
    if (v.is_number()) return std::vector<double>(static_cast<std::size_t>(d), v.get<double>());
    if (!v.is_array() || v.size() != static_cast<std::size_t>(d))
        fail(std::string("field '") + key + "' must be a number or a list of " + std::to_string(d) + " numbers");
    std::vector<double> out;
    for (const json& x : v) out.push_back(number(x, key));
    return out;
}

std::vector<double> correlation(const json& v, int d) {
    const auto du = static_cast<std::size_t>(d);
    std::vector<double> rho(du * du, 0.0);
    if (v.is_number()) {
        for (std::size_t i = 0; i < du; ++i)
            for (std::size_t j = 0; j < du; ++j) rho[i * du + j] = i == j ? 1.0 : v.get<double>();
        return rho;
    }
    if (!v.is_array() || v.size() != du) fail("field 'rho' must be a number or a d x d list");
    for (std::size_t i = 0; i < du; ++i) {
        if (!v[i].is_array() || v[i].size() != du) fail("field 'rho' must be a number or a d x d list");
        for (std::size_t j = 0; j < du; ++j) rho[i * du + j] = number(v[i][j], "rho");
    }
    return rho;
}

}  // namespace

ProblemSpec parse_problem(const std::string& json_text, std::optional<int> dim) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top level must be an object");
    const json& dj = field(j, "d");
    if (!dj.is_number_integer()) fail("field 'd' must be an integer");
    const int d = dim.value_or(dj.get<int>());
    if (d < 1) fail("d must be at least 1");

    ProblemSpec p;
    p.market.d = d;
    p.market.r = number(field(j, "r"), "r");
    p.market.sigma = per_asset(field(j, "sigma"), "sigma", d);
    p.market.rho = correlation(field(j, "rho"), d);
    p.market.strike = number(field(j, "K"), "K");
    p.market.maturity = number(field(j, "T"), "T");
    if (j.contains("mu")) p.market.mu = per_asset(j["mu"], "mu", d);
    p.domain.s_min = per_asset(field(j, "S_min"), "S_min", d);
    p.domain.s_max = per_asset(field(j, "S_max"), "S_max", d);
    const json& opt = field(j, "option");
    if (!opt.is_string()) fail("field 'option' must be \"put\" or \"call\"");
    p.option = parse_option_kind(opt.get<std::string>());
    p.market.validate();
    p.domain.validate(d);
    return p;
}

ProblemSpec load_problem(const std::filesystem::path& file, std::optional<int> dim) {
    std::ifstream in(file);
    if (!in) fail("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), dim);
}

}  // namespace orthowave
