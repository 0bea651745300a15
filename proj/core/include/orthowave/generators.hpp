#pragma once

#include "orthowave/piecewise_poly.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace orthowave {

/// Generators of the orthogonal cubic spline multiresolution analysis.
struct GeneratorSet {
    std::array<PiecewisePoly, 6> phi;  ///< phi_1..phi_6
    PiecewisePoly phi_left;
    PiecewisePoly phi_right;
    std::array<PiecewisePoly, 6> psi;  ///< psi_1..psi_6
    std::array<PiecewisePoly, 2> psi_left;
    std::array<PiecewisePoly, 2> psi_right;
    bool has_wavelets = false;
    bool has_boundary = false;
};

/// Numbers recorded while constructing wavelet and boundary generators.
struct ConstructionLog {
    int null_s_dim = 0;
    int null_t_dim = 0;
    int null_g_dim = 0;
    int null_h_dim = 0;
    std::vector<double> s_singular_values;
    std::vector<double> t_singular_values;
    double phi_left_mismatch = 0.0;   ///< sup distance between constructed and loaded phi_L, up to sign
    double phi_right_mismatch = 0.0;
};

/// Parses rows "name a b c3 c2 c1 c0" (global coefficients). Pieces of a function whose
/// intervals restart are shifted so that the earlier rows precede the later ones.
GeneratorSet parse_scaling_generators(std::istream& in);
/// Parses and verifies orthonormality of all translates; throws StageError(basis) above 1e-6.
GeneratorSet load_scaling_generators(const std::filesystem::path& file);
std::filesystem::path default_generator_file();

/// Max |<phi_i, phi_j(. - n)> - delta| over i, j <= 6 and all overlapping n,
/// together with the Gram residual of {phi_L, phi_1..phi_4, phi_R} on [0, 1].
double scaling_orthonormality_residual(const GeneratorSet& g);

void construct_wavelet_generators(GeneratorSet& g, ConstructionLog* log = nullptr);
void construct_boundary_functions(GeneratorSet& g, ConstructionLog* log = nullptr);

/// Max |<psi_i(. - n), psi_l>| - delta, |<psi_i(. - n), phi_l>| over overlapping translates.
double wavelet_orthonormality_residual(const GeneratorSet& g);
/// Max |integral x^m psi_i| for m = 0..3.
double wavelet_moment_residual(const GeneratorSet& g);

/// Loads the default table and constructs everything.
GeneratorSet build_generator_set(const std::filesystem::path& file, ConstructionLog* log = nullptr);

/// Hermite cubic generators xi_1 (value) and xi_2 (slope) on [-1, 1].
PiecewisePoly hermite_xi1();
PiecewisePoly hermite_xi2();

}  // namespace orthowave
