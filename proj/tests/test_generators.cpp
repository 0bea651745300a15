#include "oracles.hpp"

#include "orthowave/errors.hpp"
#include "orthowave/generator_io.hpp"
#include "orthowave/generators.hpp"
#include "orthowave/reconstruct.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace orthowave;
namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("orthowave_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST(Generators, TableIsOrthonormalAcrossTranslates) {
    const GeneratorSet g = load_scaling_generators(default_generator_file());
    EXPECT_LE(scaling_orthonormality_residual(g), 1e-10);
    EXPECT_DOUBLE_EQ(g.phi[4].support_begin(), -1.0);
    EXPECT_DOUBLE_EQ(g.phi[5].support_end(), 1.0);
    EXPECT_DOUBLE_EQ(g.phi[0].support_begin(), 0.0);
}

TEST(Generators, ReadingRestartRowsAsContinuationFails) {
    // Reading the second group of phi5/phi6 rows as [1, 2] instead of shifting the first
    // group to [-1, 0] produces functions that are not orthonormal.
    std::istringstream in(read_text(default_generator_file()));
    std::ostringstream out;
    std::string line;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string name;
        double a = 0.0, b = 0.0;
        if (line.empty() || line[0] == '#' || !(ls >> name >> a >> b)) {
            out << line << "\n";
            continue;
        }
        std::string rest;
        std::getline(ls, rest);
        if ((name == "phi5" || name == "phi6") && seen[name]++ >= 4) {
            a += 1.0;
            b += 1.0;
        }
        out << name << " " << a << " " << b << rest << "\n";
    }
    const fs::path dir = temp_dir("unshifted");
    std::ofstream(dir / "table.txt") << out.str();
    try {
        load_scaling_generators(dir / "table.txt");
        FAIL() << "expected a basis error";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), Stage::basis);
    }
}

TEST(Generators, WaveletConstruction) {
    ConstructionLog log;
    const GeneratorSet g = build_generator_set(default_generator_file(), &log);
    EXPECT_EQ(log.null_s_dim, 2);
    EXPECT_EQ(log.null_t_dim, 2);
    EXPECT_EQ(log.null_g_dim, 2);
    EXPECT_EQ(log.null_h_dim, 2);
    EXPECT_LE(wavelet_orthonormality_residual(g), 1e-10);
    EXPECT_LE(wavelet_moment_residual(g), 1e-10);
    for (int i = 0; i < 2; ++i) {
        EXPECT_GE(g.psi[i].support_begin(), 0.0);
        EXPECT_LE(g.psi[i].support_end(), 1.0);
    }
    for (int i = 2; i < 6; ++i) {
        EXPECT_GE(g.psi[i].support_begin(), -1.0);
        EXPECT_LE(g.psi[i].support_end(), 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        EXPECT_NEAR(g.psi_left[i](0.0), 0.0, 1e-10);
        EXPECT_NEAR(g.psi_right[i](1.0), 0.0, 1e-10);
    }
    EXPECT_NEAR(g.phi_left(0.0), 0.0, 1e-10);
    EXPECT_NEAR(g.phi_right(1.0), 0.0, 1e-10);
    // Boundary scaling functions built from phi5, phi6 agree with the tabulated ones.
    EXPECT_LE(log.phi_left_mismatch, 1e-10);
    EXPECT_LE(log.phi_right_mismatch, 1e-10);
}

TEST(Generators, SignConventionMakesLeadingCoefficientPositive) {
    const GeneratorSet& g = oracle::generators();
    for (const auto& p : g.psi) EXPECT_GT(p.leading_coefficient(), 0.0);
}

TEST(GeneratorCache, RoundTripIsExactAndDeterministic) {
    const GeneratorSet& g = oracle::generators();
    const fs::path dir = temp_dir("gencache");
    write_generator_cache(dir / "a.txt", g);
    write_generator_cache(dir / "b.txt", g);
    EXPECT_EQ(read_text(dir / "a.txt"), read_text(dir / "b.txt"));
    const auto back = read_generator_cache(dir / "a.txt");
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(serialize_generators(*back), serialize_generators(g));
    EXPECT_EQ(generator_hash(*back), generator_hash(g));
}

TEST(GeneratorCache, CorruptionIsDetected) {
    const fs::path dir = temp_dir("gencorrupt");
    write_generator_cache(dir / "g.txt", oracle::generators());
    std::string text = read_text(dir / "g.txt");
    const auto pos = text.rfind('7');
    ASSERT_NE(pos, std::string::npos);
    text[pos] = '8';
    std::ofstream(dir / "g.txt") << text;
    EXPECT_FALSE(read_generator_cache(dir / "g.txt").has_value());
    EXPECT_FALSE(read_generator_cache(dir / "missing.txt").has_value());
}

TEST(Reconstruction, ProducesAnEquivalentOrthonormalFamily) {
    ReconstructionReport rep;
    GeneratorSet g = reconstruct_scaling_generators(&rep);
    EXPECT_EQ(rep.null_c_dim, 4);
    EXPECT_LE(rep.lm_residual, 1e-10);
    EXPECT_LE(rep.orthonormality_residual, 1e-8);
    EXPECT_LE(rep.span_residual, 1e-8);
    construct_wavelet_generators(g);
    construct_boundary_functions(g);
    const BasisReport br = verify_basis(build_basis(g, 3));
    EXPECT_TRUE(br.pass()) << (br.first_failure() ? br.first_failure()->name : "");
}
