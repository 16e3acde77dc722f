#include <CLI11.hpp>
#include <fstream>

#include "slipflow/harness.hpp"

namespace {

slipflow::RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw slipflow::ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return slipflow::parse_config(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slipflow: stochastic compressible channel flow with friction-slip walls"};
    app.require_subcommand(1);

    std::string config_path, outdir = "out", record_dir, suite = "energy", param;
    std::string values_csv;
    uint64_t seed = 0;
    int n_paths = 1;

    CLI::App* run = app.add_subcommand("run", "simulate trajectories and export artifacts");
    run->add_option("--config", config_path, "key=value config file")->required();
    run->add_option("--seed", seed, "base seed");
    run->add_option("--paths", n_paths, "number of trajectories");
    run->add_option("--out", outdir, "output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "re-run with one parameter swept");
    sweep->add_option("--config", config_path, "key=value config file")->required();
    sweep->add_option("--param", param, "h | alpha | m | epsilon | delta | R | dt_inner")
        ->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();
    sweep->add_option("--seed", seed, "base seed");
    sweep->add_option("--out", outdir, "output directory");

    CLI::App* check = app.add_subcommand("check", "audit a stored record directory");
    check->add_option("--record", record_dir, "record directory from a previous run")->required();
    check->add_option("--suite", suite, "energy | mass | friction | weakforms | ops");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return slipflow::run_command(load_config(config_path), seed, n_paths, outdir);
        }
        if (sweep->parsed()) {
            std::vector<double> values;
            std::stringstream ss(values_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) values.push_back(std::strtod(tok.c_str(), nullptr));
            return slipflow::sweep_command(load_config(config_path), param, values, seed, outdir);
        }
        if (check->parsed()) {
            return slipflow::check_command(record_dir, suite);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
