#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lumen/cli.hpp"
#include "lumen/error.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")->required();
    cmd->add_option("--set", args.overrides,
                    "Override a config field, dotted path: --set noise.noise_scale=10");
    cmd->add_option("--out", args.out_dir, "Output directory (overrides config out_dir)");
}

lumen::RunConfig load(const CommonArgs& args) {
    std::filesystem::path path(args.config_path);
    if (!std::filesystem::exists(path) && path.is_relative()) {
        if (const char* dir = std::getenv("LUMEN_SIM_CONFIG_DIR")) {
            const std::filesystem::path alt = std::filesystem::path(dir) / path;
            if (std::filesystem::exists(alt)) path = alt;
        }
    }
    std::ifstream f(path);
    if (!f) throw lumen::ConfigError("cannot open config file " + args.config_path);
    nlohmann::json doc;
    try {
        f >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw lumen::ConfigError("config: " + args.config_path + ": " + e.what());
    }
    for (const std::string& assignment : args.overrides) {
        lumen::apply_override(doc, assignment);
    }
    return lumen::parse_config(doc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lumen-sim: photonic neuromorphic inference simulator"};
    app.require_subcommand(1);

    CommonArgs train_args, eval_args, power_args, lower_args, sweep_args;
    CLI::App* train = app.add_subcommand("train", "Train a network on the ideal numeric path");
    add_common(train, train_args);
    CLI::App* eval = app.add_subcommand("eval", "Evaluate accuracy on one path");
    add_common(eval, eval_args);
    CLI::App* power = app.add_subcommand("power", "Estimate static power across networks");
    add_common(power, power_args);
    CLI::App* lower = app.add_subcommand("lower", "Emit the photonic device netlist");
    add_common(lower, lower_args);
    CLI::App* sweep = app.add_subcommand("sweep", "Accuracy sweeps over noise settings");
    add_common(sweep, sweep_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) return lumen::cli::cmd_train(load(train_args), train_args.out_dir, std::cout);
        if (eval->parsed()) return lumen::cli::cmd_eval(load(eval_args), eval_args.out_dir, std::cout);
        if (power->parsed()) return lumen::cli::cmd_power(load(power_args), power_args.out_dir, std::cout);
        if (lower->parsed()) return lumen::cli::cmd_lower(load(lower_args), lower_args.out_dir, std::cout);
        if (sweep->parsed()) return lumen::cli::cmd_sweep(load(sweep_args), sweep_args.out_dir, std::cout);
    } catch (const lumen::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lumen::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const lumen::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
