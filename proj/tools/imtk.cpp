#include <CLI11.hpp>

#include "imtk/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"inertial manifold toolkit for relaxed parabolic problems"};
    app.require_subcommand(1);

    imtk::CliOptions options;
    std::string command;
    for (const char* name :
         {"analyze", "construct", "track", "compare-eps", "counterexample", "wave1d"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", options.config_path, "configuration file")->required();
        sub->add_option("--out", options.out_dir, "output directory");
        sub->add_option("--seed", options.seed, "random seed");
        sub->add_option("--threads", options.threads, "worker threads");
        sub->add_flag("--verbose", options.verbose, "verbose progress");
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return imtk::run_command(command, options);
}
