#include <string>

#include <CLI11.hpp>

#include "rdreg/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Observer-based PI boundary regulation toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto add = [&](const char* name, const char* desc, bool config_required) {
        CLI::App* sub = app.add_subcommand(name, desc);
        auto* opt = sub->add_option("--config", config_path, "run configuration (JSON)");
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        return sub;
    };
    add("eig", "solve the plant eigenproblem and report the spectrum", true);
    add("design", "select N0, design gains and certify the closed loop", true);
    add("simulate", "design and then integrate the closed loop", true);
    add("reproduce-paper", "run the built-in benchmark fixture end to end", false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    return rdreg::run_command(app.get_subcommands().front()->get_name(), config_path, out_dir);
}
