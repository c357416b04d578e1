// Command-line front end for scenario runs.

#include "repcol/error.hpp"
#include "repcol/format.hpp"
#include "repcol/kernels.hpp"
#include "repcol/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

int exit_code(repcol::ErrorKind kind) {
    using repcol::ErrorKind;
    switch (kind) {
        case ErrorKind::Parse:
        case ErrorKind::Validation: return kValidation;
        case ErrorKind::Io: return kIo;
        default: return kNumerical;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) repcol::fail(repcol::ErrorKind::Io, "cannot read config " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repeated beam-splitter collision model: scenario runner"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(repcol::library_version()));

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "run a scenario and write its tables, plot data and manifest");
    run->add_option("--config", config_path, "scenario config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (overrides output_dir)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and validate a config, print its canonical form");
    validate->add_option("--config", validate_path, "scenario config (JSON)")->required();

    auto* list = app.add_subcommand("scenarios", "list scenarios and config fields");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            std::cout << repcol::scenario_catalog();
            return kOk;
        }
        if (*validate) {
            const auto config = repcol::parse_config(read_file(validate_path));
            std::cout << repcol::serialize_config(config).dump(2) << '\n';
            return kOk;
        }
        auto config = repcol::parse_config(read_file(config_path));
        if (!out_dir.empty()) config.output_dir = out_dir;
        const auto record = repcol::run_scenario(config);
        const auto plots = repcol::emit_plot_data(record);
        std::cerr << "scenario " << repcol::to_string(config.scenario) << " done in "
                  << repcol::format_number(record.wall_time_seconds) << " s (kernels: "
                  << repcol::kernels::active_name() << "), output in " << config.output_dir << '\n';
        std::cout << record.summary.dump(2) << '\n';
        return kOk;
    } catch (const repcol::Error& e) {
        std::cerr << "error (" << repcol::to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}
