#pragma once

// Declarative scenario runs: a JSON config in, CSV tables, a summary and a
// manifest out.

#include "repcol/charfn.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace repcol {

enum class ScenarioKind { Relax, ProductCompare, LambdaSweep, VanHove, Measures };

const char* to_string(ScenarioKind kind) noexcept;

struct StateSpec {
    enum class Kind { Thermal, Fock, Coherent, FockDefault };
    Kind kind = Kind::FockDefault;
    double beta = 0.0;
    int level = 0;
    cplx alpha = 0.0;

    friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Relax;
    StateSpec sigma;
    StateSpec rho0;  // FockDefault is the vacuum
    // Couplings; for vanhove these are the step counts K.
    std::vector<double> lambda;
    bool lambda_is_list = false;
    int n_max = 40;
    double tol = 1e-9;
    int max_steps = 10000;
    ZGrid z_grid{2.0, 25};
    std::string output_dir = "out";

    friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
        return a.scenario == b.scenario && a.sigma == b.sigma && a.rho0 == b.rho0 && a.lambda == b.lambda &&
               a.lambda_is_list == b.lambda_is_list && a.n_max == b.n_max && a.tol == b.tol &&
               a.max_steps == b.max_steps && a.z_grid.radius == b.z_grid.radius &&
               a.z_grid.count == b.z_grid.count && a.output_dir == b.output_dir;
    }
};

// Throws Parse (with line and column) for malformed JSON and Validation,
// naming the field, for out-of-domain values.
ScenarioConfig parse_config(std::string_view text);
nlohmann::ordered_json serialize_config(const ScenarioConfig& config);

DensityMatrix build_state(const StateSpec& spec, FockCutoff cutoff);

struct Table {
    std::string name;  // file name
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& table);

struct RunRecord {
    ScenarioConfig config;
    std::vector<Table> results;
    std::vector<Table> plots;
    std::vector<std::pair<std::string, std::string>> documents;  // file name, text
    nlohmann::ordered_json summary;
    std::string version;
    double wall_time_seconds = 0.0;
};

// Computes the scenario without touching the filesystem.
RunRecord compute_scenario(const ScenarioConfig& config);

// compute_scenario, then writes the result tables, documents, summary.json and
// manifest.json to config.output_dir. Files written by a failed run are
// removed again.
RunRecord run_scenario(const ScenarioConfig& config);

// Writes the per-figure tables of a completed record; returns their paths.
std::vector<std::filesystem::path> emit_plot_data(const RunRecord& record);

// Human-readable scenario list with the accepted config fields.
std::string scenario_catalog();

std::string_view library_version() noexcept;

}  // namespace repcol
