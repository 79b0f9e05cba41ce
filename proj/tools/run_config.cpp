#include "run_config.hpp"

#include <cstdlib>
#include <stdexcept>

#include "utfsr/errors.hpp"
#include "utfsr/io.hpp"

namespace utfsr::cli {

ReconstructionOptions RunConfig::reconstruction_options() const {
    ReconstructionOptions opts;
    opts.max_lag = max_lag;
    opts.eps_sep = eps_sep;
    opts.search_cap = search_cap;
    return opts;
}

std::optional<std::filesystem::path> default_config_path() {
    if (const char* env = std::getenv("UTFSR_CONFIG"); env && *env) return std::filesystem::path(env);
    const std::filesystem::path local = "utfsr.json";
    if (std::filesystem::exists(local)) return local;
    return std::nullopt;
}

OutputFormat parse_format(const std::string& name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "dot") return OutputFormat::Dot;
    throw std::invalid_argument("unknown output format '" + name + "' (expected json or dot)");
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    const auto doc = io::read_json_file(path);
    if (!doc.is_object()) throw FormatError(path.string() + ": config must be a JSON object");
    try {
        if (doc.contains("grid")) base.grid_size = doc.at("grid").get<std::size_t>();
        if (doc.contains("max_lag")) base.max_lag = doc.at("max_lag").get<std::size_t>();
        if (doc.contains("eps")) base.eps_sep = doc.at("eps").get<double>();
        if (doc.contains("search_cap")) base.search_cap = doc.at("search_cap").get<std::size_t>();
        if (doc.contains("seed")) base.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("format")) base.format = parse_format(doc.at("format").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return base;
}

}  // namespace utfsr::cli
