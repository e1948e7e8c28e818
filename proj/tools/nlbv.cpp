#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "nlbv/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Certified evaluation of the non-local functionals F_{gamma,lambda} on BV functions"};
    std::string config_path;
    std::optional<std::string> mode;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    app.add_option("--config", config_path, "experiment config (YAML)")->required();
    app.add_option("--mode", mode, "eval, sweep, verify, section-nd or gadgets (overrides the config)");
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed", seed, "Monte Carlo seed (overrides seed)");
    app.add_option("--threads", threads, "worker threads (overrides threads)");
    app.set_version_flag("--version", NLBV_VERSION);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nlbv::exit_usage;
    }

    try {
        nlbv::ExperimentConfig config = nlbv::load_config(config_path, mode);
        if (out_dir) nlbv::override_out_dir(config, *out_dir);
        if (seed) nlbv::override_seed(config, *seed);
        if (threads) nlbv::override_threads(config, *threads);
        return nlbv::run_experiment(config, std::cout);
    } catch (const nlbv::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return nlbv::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return nlbv::exit_usage;
    }
}
