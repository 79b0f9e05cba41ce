#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "utfsr/reconstruct.hpp"

namespace utfsr::cli {

enum class OutputFormat { Json, Dot };

struct RunConfig {
    std::size_t grid_size = 1024;
    std::size_t max_lag = kDefaultCausalLags;
    double eps_sep = kDefaultEpsSep;
    std::size_t search_cap = 12;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Json;

    ReconstructionOptions reconstruction_options() const;
};

/// $UTFSR_CONFIG if set, otherwise ./utfsr.json when it exists.
std::optional<std::filesystem::path> default_config_path();

/// Overlays the keys present in a JSON config file ("grid", "max_lag", "eps",
/// "search_cap", "seed", "format") onto base.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

OutputFormat parse_format(const std::string& name);

}  // namespace utfsr::cli
