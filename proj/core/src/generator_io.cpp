#include "orthowave/generator_io.hpp"

#include "orthowave/errors.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace orthowave {

namespace {

constexpr const char* kMagic = "orthowave-generators";
constexpr int kVersion = 1;

void append(std::ostringstream& out, const std::string& name, const PiecewisePoly& p) {
    char buf[64];
    for (std::size_t i = 0; i < p.piece_count(); ++i) {
        out << name;
        for (double v : {p.breaks()[i], p.breaks()[i + 1]}) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            out << buf;
        }
        for (double v : p.local(i)) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            out << buf;
        }
        out << '\n';
    }
}

std::string hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize_generators(const GeneratorSet& g) {
    std::ostringstream out;
    for (std::size_t i = 0; i < 6; ++i) append(out, "phi" + std::to_string(i + 1), g.phi[i]);
    append(out, "phiL", g.phi_left);
    append(out, "phiR", g.phi_right);
    for (std::size_t i = 0; i < 6; ++i) append(out, "psi" + std::to_string(i + 1), g.psi[i]);
    append(out, "psiL1", g.psi_left[0]);
    append(out, "psiL2", g.psi_left[1]);
    append(out, "psiR1", g.psi_right[0]);
    append(out, "psiR2", g.psi_right[1]);
    return out.str();
}

std::string generator_hash(const GeneratorSet& g) { return hex(fnv1a(serialize_generators(g))); }

void write_file_atomic(const std::filesystem::path& file, const std::string& contents) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

void write_generator_cache(const std::filesystem::path& file, const GeneratorSet& g) {
    const std::string body = serialize_generators(g);
    std::ostringstream out;
    out << kMagic << ' ' << kVersion << '\n' << "hash " << hex(fnv1a(body)) << '\n' << body;
    write_file_atomic(file, out.str());
}

std::optional<GeneratorSet> read_generator_cache(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::string magic, hash_tag, stored;
    int version = 0;
    if (!(in >> magic >> version >> hash_tag >> stored) || magic != kMagic || version != kVersion || hash_tag != "hash")
        return std::nullopt;
    in.ignore(1);
    std::ostringstream rest;
    rest << in.rdbuf();
    const std::string body = rest.str();
    if (hex(fnv1a(body)) != stored) return std::nullopt;

    std::map<std::string, std::pair<std::vector<double>, std::vector<PiecewisePoly::Coeffs>>> parts;
    std::istringstream ls(body);
    std::string name;
    double a, b;
    PiecewisePoly::Coeffs c;
    while (ls >> name >> a >> b >> c[0] >> c[1] >> c[2] >> c[3]) {
        auto& [breaks, coeffs] = parts[name];
        if (breaks.empty()) breaks.push_back(a);
        breaks.push_back(b);
        coeffs.push_back(c);
    }
    auto take = [&](const std::string& n) -> PiecewisePoly {
        auto it = parts.find(n);
        if (it == parts.end()) throw StageError(Stage::parse, "generator cache lacks " + n);
        return PiecewisePoly(it->second.first, it->second.second);
    };
    try {
        GeneratorSet g;
        for (std::size_t i = 0; i < 6; ++i) {
            g.phi[i] = take("phi" + std::to_string(i + 1));
            g.psi[i] = take("psi" + std::to_string(i + 1));
        }
        g.phi_left = take("phiL");
        g.phi_right = take("phiR");
        g.psi_left = {take("psiL1"), take("psiL2")};
        g.psi_right = {take("psiR1"), take("psiR2")};
        g.has_wavelets = g.has_boundary = true;
        return g;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace orthowave
