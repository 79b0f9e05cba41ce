#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "periodogram.hpp"
#include "run_config.hpp"
#include "utfsr/errors.hpp"
#include "utfsr/io.hpp"
#include "utfsr/model.hpp"
#include "utfsr/reconstruct.hpp"

namespace utfsr::cli {

namespace {

class UsageError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GlobalFlags {
    std::optional<std::size_t> grid;
    std::optional<std::size_t> max_lag;
    std::optional<double> eps;
    std::optional<std::size_t> search_cap;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
    std::string config;
};

RunConfig resolve_config(const GlobalFlags& flags) {
    RunConfig cfg;
    if (!flags.config.empty()) {
        cfg = load_config(flags.config);
    } else if (const auto path = default_config_path()) {
        cfg = load_config(*path);
    }
    if (flags.grid) cfg.grid_size = *flags.grid;
    if (flags.max_lag) cfg.max_lag = *flags.max_lag;
    if (flags.eps) cfg.eps_sep = *flags.eps;
    if (flags.search_cap) cfg.search_cap = *flags.search_cap;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.format) cfg.format = parse_format(*flags.format);
    return cfg;
}

Node parse_node(const std::string& label, std::size_t n) {
    std::string digits = label;
    if (!digits.empty() && (digits[0] == 'y' || digits[0] == 'Y')) digits.erase(0, 1);
    std::size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(digits, &pos);
    } catch (const std::exception&) {
        throw UsageError("bad node label '" + label + "'");
    }
    if (pos != digits.size() || value < 1 || static_cast<std::size_t>(value) > n) {
        throw UsageError("node '" + label + "' is outside y1..y" + std::to_string(n));
    }
    return static_cast<Node>(value - 1);
}

std::vector<Node> parse_nodes(const std::vector<std::string>& labels, std::size_t n) {
    std::vector<Node> out;
    for (const auto& l : labels) out.push_back(parse_node(l, n));
    return out;
}

SpectralDensity load_density(const std::string& path, const RunConfig& cfg) {
    const auto doc = io::read_json_file(path);
    if (io::is_psd_document(doc)) return io::psd_from_json(doc);
    return psd(io::model_from_json(doc), FrequencyGrid(cfg.grid_size));
}

Eigen::MatrixXd load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return io::read_csv(in);
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw FormatError("cannot write " + path);
    file << text;
}

std::string describe(const UtfReport& r) {
    if (r.is_utf()) return "UTF: true";
    std::string why;
    for (const auto& e : r.two_cycles) {
        if (!why.empty()) why += "; ";
        why += "2-cycle " + std::to_string(e.a + 1) + "," + std::to_string(e.b + 1);
    }
    for (const auto& t : r.triangles) {
        if (!why.empty()) why += "; ";
        why += "triangle " + std::to_string(t[0] + 1) + "," + std::to_string(t[1] + 1) + "," + std::to_string(t[2] + 1);
    }
    return "UTF: false (" + why + ")";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Skeleton reconstruction for unidirectional triangle-free linear dynamic networks", "utfsr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "utfsr 0.1.0");

    GlobalFlags flags;
    app.add_option("--grid", flags.grid, "Frequency grid size N (power of two)");
    app.add_option("--max-lag", flags.max_lag, "Causal filter lags M");
    app.add_option("--eps", flags.eps, "Separation tolerance");
    app.add_option("--search-cap", flags.search_cap, "Largest neighborhood pool searched exhaustively");
    app.add_option("--seed", flags.seed, "Random seed");
    app.add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"json", "dot"}));
    app.add_option("--config", flags.config, "JSON config file (default: $UTFSR_CONFIG or ./utfsr.json)");

    std::string model_path, input_path, output_path;

    auto* validate = app.add_subcommand("validate", "Check that a model is unidirectional and triangle-free");
    validate->add_option("model", model_path, "Model JSON")->required();

    auto* psd_cmd = app.add_subcommand("psd", "Write the output PSD of a model (half grid)");
    psd_cmd->add_option("model", model_path, "Model JSON")->required();
    psd_cmd->add_option("-o,--output", output_path, "Output file (default stdout)");

    bool from_csv = false;
    bool self_lags = false;
    std::size_t threads = 0;
    auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct the skeleton with a certificate");
    reconstruct->add_option("input", input_path, "Model JSON or PSD dump")->required();
    reconstruct->add_option("-o,--output", output_path, "Output file (default stdout)");
    reconstruct->add_flag("--experimental-from-csv", from_csv,
                          "Treat input as a CSV sample matrix and estimate the PSD by a lag-window smoothed averaged periodogram");
    reconstruct->add_flag("--self-lags", self_lags, "Allow delayed values of the estimated node as regressors");
    reconstruct->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

    std::string mode;
    std::string target;
    std::string tested;
    std::vector<std::string> cond;
    std::vector<std::string> cond_delayed;
    bool tested_delayed = false;
    auto* query = app.add_subcommand("query", "Evaluate a single Wiener separation statement");
    query->add_option("input", input_path, "Model JSON or PSD dump")->required();
    query->add_option("mode", mode, "wsep (non-causal) or cwsep (causal)")
        ->required()
        ->check(CLI::IsMember({"wsep", "cwsep"}));
    query->add_option("--target", target, "Estimated node, e.g. y2")->required();
    query->add_option("--tested", tested, "Node whose filter component is tested")->required();
    query->add_option("--cond", cond, "Conditioning nodes (present values)")->delimiter(',');
    query->add_option("--cond-delayed", cond_delayed, "Conditioning nodes seen through one delay (cwsep)")
        ->delimiter(',');
    query->add_flag("--delayed", tested_delayed, "Test the delayed tested node (cwsep)");

    std::size_t samples = 10000;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a model and write samples as CSV");
    simulate_cmd->add_option("model", model_path, "Model JSON")->required();
    simulate_cmd->add_option("-T,--samples", samples, "Number of samples")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("-o,--output", output_path, "Output file (default stdout)");

    std::vector<std::string> argv_store{"utfsr"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const RunConfig cfg = resolve_config(flags);

        if (validate->parsed()) {
            const auto report = validate_utf(io::model_from_json(io::read_json_file(model_path)));
            out << describe(report) << '\n';
            return 0;
        }

        if (psd_cmd->parsed()) {
            const auto density = psd(io::model_from_json(io::read_json_file(model_path)), FrequencyGrid(cfg.grid_size));
            write_output(output_path, io::psd_to_json(density).dump(1) + "\n", out);
            return 0;
        }

        if (reconstruct->parsed()) {
            std::optional<SpectralDensity> density;
            if (from_csv) {
                err << "warning: PSD estimated from samples; certificates assume the exact PSD\n";
                const auto raw = averaged_periodogram(load_csv(input_path), FrequencyGrid(cfg.grid_size));
                density.emplace(bartlett_smooth(raw, cfg.max_lag));
            } else {
                density.emplace(load_density(input_path, cfg));
            }
            auto opts = cfg.reconstruction_options();
            opts.target_self_lags = self_lags;
            opts.threads = threads;
            const auto report = utf_sr(*density, opts);
            write_output(output_path,
                         cfg.format == OutputFormat::Dot ? io::report_to_dot(report)
                                                         : io::report_to_json(report).dump(2) + "\n",
                         out);
            return exit_code(report.status);
        }

        if (query->parsed()) {
            const auto density = load_density(input_path, cfg);
            const auto n = static_cast<std::size_t>(density.dim());
            const Node j = parse_node(target, n);
            const Node i = parse_node(tested, n);
            if (i == j) throw UsageError("the tested node must differ from the target");
            const auto present_nodes = parse_nodes(cond, n);
            const auto delayed_nodes = parse_nodes(cond_delayed, n);
            SeparationVerdict verdict;
            if (mode == "wsep") {
                if (!delayed_nodes.empty() || tested_delayed) {
                    throw UsageError("wsep takes only present conditioning nodes");
                }
                for (Node v : present_nodes)
                    if (v == i || v == j) throw UsageError("conditioning set must exclude target and tested node");
                verdict = wsep(density, j, present_nodes, i, cfg.eps_sep);
            } else {
                std::vector<Regressor> regs;
                for (Node v : present_nodes) {
                    if (v == j) throw UsageError("the target may only enter through --cond-delayed");
                    regs.push_back(present(v));
                }
                for (Node v : delayed_nodes) regs.push_back(delayed(v));
                const auto cov = covariances_from_psd(density, cfg.max_lag);
                try {
                    verdict = cwsep(cov, j, regs, tested_delayed ? delayed(i) : present(i), cfg.max_lag, cfg.eps_sep);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
            out << io::verdict_to_json(verdict).dump(2) << '\n';
            return 0;
        }

        if (simulate_cmd->parsed()) {
            const auto path = simulate(io::model_from_json(io::read_json_file(model_path)), samples, cfg.seed);
            std::ostringstream text;
            io::write_csv(text, path);
            write_output(output_path, text.str(), out);
            return 0;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace utfsr::cli
