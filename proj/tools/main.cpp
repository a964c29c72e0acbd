#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "signalscope/cli.hpp"

namespace {

struct RawOptions {
    std::string kind = "clone";
    std::string overlap;
    std::string epsilon;
    bool epsilon_max = false;
    double threshold = 1e-9;
    std::uint64_t seed = 0;
    int restarts = 32;
    int max_iterations = 10000;
    std::string format = "json";
    std::string output;
};

void add_common_options(CLI::App* cmd, RawOptions& raw) {
    cmd->add_option("--kind", raw.kind, "Machine kind")
        ->check(CLI::IsMember({"clone", "delete"}));
    cmd->add_option("--seed", raw.seed, "Search seed (SIGNALSCOPE_SEED as default)");
    cmd->add_option("--format", raw.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", raw.output, "Write the document to a file");
}

int emit(const signalscope::cli::CommandResult& result, const std::string& path) {
    if (path.empty()) {
        std::cout << result.document;
        return result.exit_code;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << result.document) || !out.flush()) {
        std::cerr << "error: cannot write output file '" << path << "'\n";
        return 1;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    using signalscope::cli::CommandResult;
    using signalscope::cli::RunConfig;

    RawOptions raw;
    if (const char* env = std::getenv("SIGNALSCOPE_SEED")) {
        try {
            raw.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: SIGNALSCOPE_SEED is not an integer\n";
            return 1;
        }
    }

    CLI::App app{"Signaling tests for state-dependent copying and deleting machines"};
    app.require_subcommand(1);

    CLI::App* detect =
        app.add_subcommand("detect", "Run one protocol instance and report signaling");
    add_common_options(detect, raw);
    detect->add_option("--overlap", raw.overlap, "Anchor overlap s")->required();
    CLI::Option* eps_opt =
        detect->add_option("--epsilon", raw.epsilon, "Fidelity excess over optimal");
    detect->add_flag("--epsilon-max", raw.epsilon_max,
                     "Use the exact machine (epsilon = 1 - optimal fidelity)")
        ->excludes(eps_opt);
    detect->add_option("--threshold", raw.threshold, "Signaling threshold in bits");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Tabulate the protocol over (overlap, epsilon)");
    add_common_options(sweep_cmd, raw);
    sweep_cmd->add_option("--overlap", raw.overlap, "Overlap grid (v | a:b:step | a,b,c)")
        ->required();
    sweep_cmd->add_option("--epsilon", raw.epsilon, "Epsilon grid")->required();
    sweep_cmd->add_option("--threshold", raw.threshold, "Signaling threshold in bits");

    CLI::App* oracle =
        app.add_subcommand("oracle", "Cross-check the optimal fidelity constructions");
    add_common_options(oracle, raw);
    oracle->add_option("--overlap", raw.overlap, "Overlap grid")
        ->default_val("0.05:0.95:0.05");
    oracle->add_option("--restarts", raw.restarts, "Search restarts");
    oracle->add_option("--max-iterations", raw.max_iterations,
                       "Iteration cap per restart");

    CLI::App* plan =
        app.add_subcommand("plan", "Probe preparation numbers for one overlap");
    add_common_options(plan, raw);
    plan->add_option("--overlap", raw.overlap, "Anchor overlap s")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig config;
        config.kind = signalscope::cli::parse_kind(raw.kind);
        config.threshold = raw.threshold;
        config.seed = raw.seed;
        config.restarts = raw.restarts;
        config.max_iterations = raw.max_iterations;
        config.format = raw.format == "csv" ? signalscope::cli::OutputFormat::Csv
                                            : signalscope::cli::OutputFormat::Json;
        config.output_path = raw.output;
        if (!raw.overlap.empty()) {
            config.overlaps = signalscope::cli::parse_grid(raw.overlap);
        }
        config.epsilon_max = raw.epsilon_max;
        if (!raw.epsilon.empty()) {
            config.epsilons = signalscope::cli::parse_grid(raw.epsilon);
        } else if (detect->parsed() && !raw.epsilon_max) {
            config.epsilons = {0.0};
        }

        CommandResult result;
        if (detect->parsed()) {
            config.command = "detect";
            result = signalscope::cli::cmd_detect(config);
        } else if (sweep_cmd->parsed()) {
            config.command = "sweep";
            result = signalscope::cli::cmd_sweep(config);
        } else if (oracle->parsed()) {
            config.command = "oracle";
            result = signalscope::cli::cmd_oracle(config);
        } else {
            config.command = "plan";
            result = signalscope::cli::cmd_plan(config);
        }
        return emit(result, raw.output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
