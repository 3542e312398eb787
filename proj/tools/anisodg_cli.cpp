#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anisodg/study.hpp"

namespace {

int run(const std::string& command, const std::string& config_path, const std::string& out_dir,
        const std::vector<std::string>& overrides)
{
    anisodg::RunConfig config;
    try {
        std::vector<std::string> all = overrides;
        all.insert(all.begin(), "command=" + command);
        config = anisodg::load_config(config_path, all);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        const auto report = anisodg::run_command(command, config);
        anisodg::write_outputs(report, out_dir);
        std::cout << anisodg::report_csv(report);
        int failed = 0;
        for (const auto& row : report.rows) {
            failed += row.error.has_value() || (row.converged && !*row.converged);
        }
        if (failed > 0) {
            std::cerr << failed << " row(s) failed or did not converge\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"anisotropic diffusion IPDG solver and preconditioner studies"};
    app.set_version_flag("--version", std::string(anisodg::kLibraryVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::string chosen;
    for (const char* name : {"solve", "convergence", "cond", "precond"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--override", overrides, "key=value (dotted keys, JSON values)");
        sub->callback([&chosen, name] { chosen = name; });
    }
    CLI11_PARSE(app, argc, argv);
    return run(chosen, config_path, out_dir, overrides);
}
