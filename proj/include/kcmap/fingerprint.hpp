#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace kcmap {

/// FNV-1a over raw bytes. Used to fingerprint input files and the manifest;
/// a content identifier, not a cryptographic digest.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string to_hex16(std::uint64_t v);

} // namespace kcmap
