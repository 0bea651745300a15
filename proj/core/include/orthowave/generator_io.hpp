#pragma once

#include "orthowave/generators.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace orthowave {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Cache body: one row "name a b c0 c1 c2 c3" per piece, local coefficients
/// about a, 17 significant digits.
std::string serialize_generators(const GeneratorSet& g);
/// Hex digest of serialize_generators(g).
std::string generator_hash(const GeneratorSet& g);

/// Writes header, hash line and body atomically (temp file + rename).
void write_generator_cache(const std::filesystem::path& file, const GeneratorSet& g);
/// Returns nullopt when the file is missing, has another version, or fails its hash check.
std::optional<GeneratorSet> read_generator_cache(const std::filesystem::path& file);

/// Atomic text write used by every cache and report writer.
void write_file_atomic(const std::filesystem::path& file, const std::string& contents);

}  // namespace orthowave
