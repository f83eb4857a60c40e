#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace sepnmf::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Reproducibility record written next to command outputs.
nlohmann::json run_manifest(const std::string& command, const nlohmann::json& config,
                            unsigned long long seed,
                            const std::vector<std::filesystem::path>& inputs);

}  // namespace sepnmf::cli
