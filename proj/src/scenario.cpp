#include "repcol/scenario.hpp"

#include "repcol/channel.hpp"
#include "repcol/error.hpp"
#include "repcol/format.hpp"
#include "repcol/gaussian.hpp"
#include "repcol/measures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#ifndef REPCOL_VERSION
#define REPCOL_VERSION "0.0.0"
#endif

namespace repcol {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct ScenarioName {
    ScenarioKind kind;
    const char* name;
};

constexpr ScenarioName kScenarios[] = {
    {ScenarioKind::Relax, "relax"},
    {ScenarioKind::ProductCompare, "product_compare"},
    {ScenarioKind::LambdaSweep, "lambda_sweep"},
    {ScenarioKind::VanHove, "vanhove"},
    {ScenarioKind::Measures, "measures"},
};

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    fail(ErrorKind::Validation, "config field '" + field + "': " + what);
}

double number_field(const json& v, const std::string& field) {
    if (!v.is_number()) invalid(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(field, "must be finite");
    return x;
}

int integer_field(const json& v, const std::string& field) {
    if (!v.is_number_integer()) {
        if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>() &&
            std::abs(v.get<double>()) < 1e9)
            return static_cast<int>(v.get<double>());
        invalid(field, "expected an integer");
    }
    const auto x = v.get<long long>();
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) invalid(field, "integer out of range");
    return static_cast<int>(x);
}

StateSpec parse_state(const json& v, const std::string& field, bool allow_default) {
    StateSpec s;
    if (v.is_string()) {
        if (allow_default && v.get<std::string>() == "fock_default") return s;
        invalid(field, allow_default ? "expected \"fock_default\" or an object" : "expected an object");
    }
    if (!v.is_object() || v.size() != 1)
        invalid(field, "expected an object with exactly one of thermal, fock, coherent");
    const auto& [key, val] = *v.items().begin();
    const std::string sub = field + "." + key;
    if (key == "thermal") {
        s.kind = StateSpec::Kind::Thermal;
        s.beta = number_field(val, sub);
        if (!(s.beta > 0.0)) invalid(sub, "inverse temperature must be > 0");
    } else if (key == "fock") {
        s.kind = StateSpec::Kind::Fock;
        s.level = integer_field(val, sub);
        if (s.level < 0) invalid(sub, "Fock level must be >= 0");
    } else if (key == "coherent") {
        s.kind = StateSpec::Kind::Coherent;
        if (val.is_array()) {
            if (val.size() != 2) invalid(sub, "expected [re, im]");
            s.alpha = cplx(number_field(val[0], sub), number_field(val[1], sub));
        } else {
            s.alpha = cplx(number_field(val, sub), 0.0);
        }
    } else {
        invalid(field, "unknown state kind '" + key + "'");
    }
    return s;
}

ordered_json state_json(const StateSpec& s) {
    ordered_json j;
    switch (s.kind) {
        case StateSpec::Kind::Thermal: j["thermal"] = s.beta; break;
        case StateSpec::Kind::Fock: j["fock"] = s.level; break;
        case StateSpec::Kind::Coherent: j["coherent"] = {s.alpha.real(), s.alpha.imag()}; break;
        case StateSpec::Kind::FockDefault: return "fock_default";
    }
    return j;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

const char* to_string(ScenarioKind kind) noexcept {
    for (const auto& s : kScenarios)
        if (s.kind == kind) return s.name;
    return "unknown";
}

std::string_view library_version() noexcept { return REPCOL_VERSION; }

ScenarioConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        fail(ErrorKind::Parse, "malformed JSON at line " + std::to_string(line) + ", column " +
                                   std::to_string(col) + ": " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::Validation, "config must be a JSON object");

    static const std::set<std::string> known = {"scenario", "sigma_spec", "rho0_spec", "lambda", "n_max",
                                                "tol",      "max_steps",  "z_grid",    "output_dir"};
    for (const auto& [key, val] : j.items())
        if (!known.count(key)) invalid(key, "unknown field");

    ScenarioConfig c;
    if (!j.contains("scenario") || !j["scenario"].is_string()) invalid("scenario", "required string");
    {
        const std::string name = j["scenario"].get<std::string>();
        bool found = false;
        for (const auto& s : kScenarios)
            if (name == s.name) {
                c.scenario = s.kind;
                found = true;
            }
        if (!found) invalid("scenario", "unknown scenario '" + name + "'");
    }
    const bool vanhove = c.scenario == ScenarioKind::VanHove;

    if (!j.contains("lambda")) invalid("lambda", "required");
    {
        const json& lam = j["lambda"];
        if (lam.is_array()) {
            if (lam.empty()) invalid("lambda", "list must not be empty");
            c.lambda_is_list = true;
            for (const auto& v : lam) c.lambda.push_back(number_field(v, "lambda"));
        } else {
            c.lambda.push_back(number_field(lam, "lambda"));
        }
        for (double v : c.lambda) {
            if (vanhove) {
                if (!(v >= 1.0) || std::floor(v) != v || v > 1e7)
                    invalid("lambda", "vanhove step counts K must be positive integers, got " + format_number(v));
            } else if (!(v > 0.0) || v > kHalfPi) {
                invalid("lambda", "coupling must lie in (0, pi/2], got " + format_number(v));
            }
        }
        if ((c.scenario == ScenarioKind::Relax || c.scenario == ScenarioKind::ProductCompare) && c.lambda_is_list)
            invalid("lambda", std::string("scenario ") + to_string(c.scenario) + " takes a single coupling");
        std::set<double> seen(c.lambda.begin(), c.lambda.end());
        if (seen.size() != c.lambda.size()) invalid("lambda", "values must be distinct");
    }

    if (j.contains("n_max")) c.n_max = integer_field(j["n_max"], "n_max");
    if (c.n_max < 1) invalid("n_max", "must be >= 1");
    if (static_cast<long>(c.n_max + 1) * (c.n_max + 1) > max_joint_dim())
        invalid("n_max", "(n_max+1)^2 exceeds the dimension limit " + std::to_string(max_joint_dim()) +
                             " (set REPCOL_MAX_DIM to raise it)");
    if (j.contains("tol")) c.tol = number_field(j["tol"], "tol");
    if (!(c.tol >= 1e-12)) invalid("tol", "must be >= 1e-12");
    if (j.contains("max_steps")) c.max_steps = integer_field(j["max_steps"], "max_steps");
    if (c.max_steps < 1) invalid("max_steps", "must be >= 1");

    if (!j.contains("sigma_spec")) invalid("sigma_spec", "required");
    c.sigma = parse_state(j["sigma_spec"], "sigma_spec", false);
    if (j.contains("rho0_spec")) c.rho0 = parse_state(j["rho0_spec"], "rho0_spec", true);
    for (const auto* s : {&c.sigma, &c.rho0})
        if (s->kind == StateSpec::Kind::Fock && s->level > c.n_max)
            invalid(s == &c.sigma ? "sigma_spec.fock" : "rho0_spec.fock", "Fock level exceeds n_max");

    if (j.contains("z_grid")) {
        const json& g = j["z_grid"];
        if (!g.is_object()) invalid("z_grid", "expected {radius, count}");
        for (const auto& [key, val] : g.items())
            if (key != "radius" && key != "count") invalid("z_grid." + key, "unknown field");
        if (g.contains("radius")) c.z_grid.radius = number_field(g["radius"], "z_grid.radius");
        if (g.contains("count")) c.z_grid.count = integer_field(g["count"], "z_grid.count");
    }
    if (!(c.z_grid.radius > 0.0) || c.z_grid.radius > 10.0) invalid("z_grid.radius", "must lie in (0, 10]");
    if (c.z_grid.count < 1 || c.z_grid.count > 100000) invalid("z_grid.count", "must lie in [1, 100000]");

    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string() || j["output_dir"].get<std::string>().empty())
            invalid("output_dir", "expected a non-empty path");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    return c;
}

ordered_json serialize_config(const ScenarioConfig& c) {
    ordered_json j;
    j["scenario"] = to_string(c.scenario);
    j["sigma_spec"] = state_json(c.sigma);
    j["rho0_spec"] = state_json(c.rho0);
    const bool as_int = c.scenario == ScenarioKind::VanHove;
    auto value = [as_int](double v) { return as_int ? ordered_json(static_cast<long long>(v)) : ordered_json(v); };
    if (c.lambda_is_list) {
        ordered_json arr = ordered_json::array();
        for (double v : c.lambda) arr.push_back(value(v));
        j["lambda"] = std::move(arr);
    } else {
        j["lambda"] = value(c.lambda.front());
    }
    j["n_max"] = c.n_max;
    j["tol"] = c.tol;
    j["max_steps"] = c.max_steps;
    j["z_grid"] = {{"radius", c.z_grid.radius}, {"count", c.z_grid.count}};
    j["output_dir"] = c.output_dir;
    return j;
}

DensityMatrix build_state(const StateSpec& spec, FockCutoff cutoff) {
    switch (spec.kind) {
        case StateSpec::Kind::Thermal: return thermal_state(spec.beta, cutoff);
        case StateSpec::Kind::Fock: return fock_state(spec.level, cutoff);
        case StateSpec::Kind::Coherent: return coherent_state(spec.alpha, cutoff);
        case StateSpec::Kind::FockDefault: return fock_state(0, cutoff);
    }
    fail(ErrorKind::InvalidArgument, "unknown state kind");
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
        out += '\n';
    }
    return out;
}

namespace {

CharFn reservoir_charfn(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::Thermal: return charfn_thermal(spec.beta);
        case StateSpec::Kind::Fock: return charfn_fock(spec.level);
        case StateSpec::Kind::Coherent: return charfn_coherent(spec.alpha);
        case StateSpec::Kind::FockDefault: return charfn_fock(0);
    }
    fail(ErrorKind::InvalidArgument, "unknown state kind");
}

// Thermal state with the reservoir's photon number, or the vacuum.
DensityMatrix matched_thermal(const DensityMatrix& sigma) {
    const double nbar = mean_photon_number(sigma);
    if (nbar <= 1e-12) return fock_state(0, sigma.cutoff());
    return thermal_state(thermal_beta(nbar), sigma.cutoff());
}

RelaxationTrajectory relax(const ScenarioConfig& c, const DensityMatrix& rho0, const DensityMatrix& sigma,
                           double lambda) {
    const ChannelParams params(lambda, FockCutoff(c.n_max));
    return iterate_to_fixed_point(rho0, sigma, params, {c.tol, c.max_steps, false});
}

double converged_flag(const RelaxationTrajectory& t) { return t.converged_at ? 1.0 : 0.0; }

void run_relax(const ScenarioConfig& c, const DensityMatrix& rho0, const DensityMatrix& sigma, RunRecord& r) {
    const double lambda = c.lambda.front();
    const RelaxationTrajectory t = relax(c, rho0, sigma, lambda);
    Table traj{"trajectory.csv", {"step", "trace_distance_to_next", "mean_photon_number", "purity"}, {}};
    Table curve{"relaxation.csv", {"step", "trace_distance"}, {}};
    for (std::size_t k = 0; k < t.mean_photon.size(); ++k) {
        const double dist = k < t.distances.size() ? t.distances[k] : NAN;
        traj.rows.push_back({static_cast<double>(k), dist, t.mean_photon[k], t.purity[k]});
        if (k < t.distances.size()) curve.rows.push_back({static_cast<double>(k), dist});
    }
    r.results.push_back(std::move(traj));
    r.plots.push_back(std::move(curve));
    r.summary["lambda"] = lambda;
    r.summary["steps"] = t.steps();
    r.summary["converged"] = t.converged_at.has_value();
    r.summary["final_distance_to_sigma"] = trace_distance(t.final_state(), sigma);
    r.summary["final_mean_photon"] = t.mean_photon.back();
    r.summary["final_purity"] = t.purity.back();
    r.documents.emplace_back("final_state.json", to_json(t.final_state()).dump() + "\n");
}

void run_product_compare(const ScenarioConfig& c, const DensityMatrix& rho0, const DensityMatrix& sigma,
                         RunRecord& r) {
    const double lambda = c.lambda.front();
    const ChannelParams params(lambda, FockCutoff(c.n_max));
    const RelaxationTrajectory t = relax(c, rho0, sigma, lambda);
    const CharFn iter = charfn_of_state(t.final_state());
    const CharFn chi_sigma = reservoir_charfn(c.sigma);
    Table cmp{"chi_compare.csv",
              {"re_z", "im_z", "re_chi_iter", "im_chi_iter", "re_chi_product", "im_chi_product", "abs_diff",
               "tail_bound"},
              {}};
    Table profile{"chi_profile.csv", {"r", "abs_chi_iter", "abs_chi_product", "abs_diff"}, {}};
    double worst = 0.0;
    for (cplx z : c.z_grid.points()) {
        const cplx a = iter(z);
        const ProductValue p = asymptotic_product(chi_sigma, params, z);
        const double diff = std::abs(a - p.value);
        worst = std::max(worst, diff);
        cmp.rows.push_back({z.real(), z.imag(), a.real(), a.imag(), p.value.real(), p.value.imag(), diff,
                            p.trunc.tail_bound});
        profile.rows.push_back({std::abs(z), std::abs(a), std::abs(p.value), diff});
    }
    r.results.push_back(std::move(cmp));
    r.plots.push_back(std::move(profile));
    r.summary["lambda"] = lambda;
    r.summary["steps"] = t.steps();
    r.summary["converged"] = t.converged_at.has_value();
    r.summary["max_abs_diff"] = worst;
}

std::vector<double> sorted(std::vector<double> v, bool descending) {
    std::sort(v.begin(), v.end());
    if (descending) std::reverse(v.begin(), v.end());
    return v;
}

void run_lambda_sweep(const ScenarioConfig& c, const DensityMatrix& rho0, const DensityMatrix& sigma,
                      RunRecord& r) {
    const DensityMatrix target = matched_thermal(sigma);
    Table sweep{"lambda_sweep.csv",
                {"lambda", "steps", "converged", "mean_photon", "distance_to_thermal", "purity"},
                {}};
    Table plot{"measures_vs_lambda.csv", {"lambda", "purity", "entropy", "qcs_squared"}, {}};
    bool monotone = true;
    double previous = INFINITY;
    for (double lambda : sorted(c.lambda, true)) {
        const RelaxationTrajectory t = relax(c, rho0, sigma, lambda);
        const DensityMatrix& fin = t.final_state();
        const double dist = trace_distance(fin, target);
        monotone = monotone && dist < previous;
        previous = dist;
        const MeasureReport m = measure_report(fin);
        sweep.rows.push_back({lambda, static_cast<double>(t.steps()), converged_flag(t), m.mean_photon, dist, m.purity});
        plot.rows.push_back({lambda, m.purity, m.entropy, m.qcs_squared});
    }
    r.results.push_back(std::move(sweep));
    r.plots.push_back(std::move(plot));
    r.summary["thermal_target_mean_photon"] = mean_photon_number(sigma);
    r.summary["distance_decreasing_with_lambda"] = monotone;
}

void run_vanhove(const ScenarioConfig& c, const DensityMatrix& rho0, const DensityMatrix& sigma, RunRecord& r) {
    const FockCutoff cutoff(c.n_max);
    const DensityMatrix target = matched_thermal(sigma);
    Table table{"vanhove.csv", {"K", "lambda", "distance_to_thermal", "mean_photon", "purity"}, {}};
    bool decreasing = true;
    double previous = INFINITY;
    for (double kv : sorted(c.lambda, false)) {
        const int k = static_cast<int>(kv);
        const RelaxationTrajectory t = run_schedule(rho0, sigma, CouplingSchedule::van_hove_fixed(k), cutoff);
        const double dist = trace_distance(t.final_state(), target);
        decreasing = decreasing && dist < previous;
        previous = dist;
        table.rows.push_back({kv, 1.0 / std::sqrt(kv), dist, t.mean_photon.back(), t.purity.back()});
    }
    Table plot = table;
    plot.name = "vanhove_curve.csv";
    r.results.push_back(std::move(table));
    r.plots.push_back(std::move(plot));
    r.summary["thermal_target_mean_photon"] = mean_photon_number(sigma);
    r.summary["distance_strictly_decreasing_in_K"] = decreasing;
}

void run_measures(const ScenarioConfig& c, const DensityMatrix& rho0, const DensityMatrix& sigma, RunRecord& r) {
    Table table{"measures.csv",
                {"lambda", "purity", "entropy", "qcs_squared", "mean_photon", "gaussian_purity", "gaussian_entropy",
                 "gaussian_qcs_squared"},
                {}};
    Table plot{"measures_vs_lambda.csv", {"lambda", "purity", "entropy", "qcs_squared"}, {}};
    for (double lambda : sorted(c.lambda, true)) {
        const RelaxationTrajectory t = relax(c, rho0, sigma, lambda);
        const MeasureReport m = measure_report(t.final_state());
        const GaussianState g = gaussian_from_moments(t.final_state());
        table.rows.push_back({lambda, m.purity, m.entropy, m.qcs_squared, m.mean_photon, gaussian_purity(g),
                              gaussian_entropy(g), qcs_gaussian(g)});
        plot.rows.push_back({lambda, m.purity, m.entropy, m.qcs_squared});
    }
    r.results.push_back(std::move(table));
    r.plots.push_back(std::move(plot));
    const MeasureReport s = measure_report(sigma);
    r.summary["sigma"] = to_json(s);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

// Removes files written so far unless released.
class OutputGuard {
public:
    explicit OutputGuard(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        if (!fs::exists(dir_, ec)) {
            if (!fs::create_directories(dir_, ec))
                fail(ErrorKind::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
            created_dir_ = true;
        } else if (!fs::is_directory(dir_, ec)) {
            fail(ErrorKind::Io, "output path " + dir_.string() + " is not a directory");
        }
    }
    ~OutputGuard() {
        if (released_) return;
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
        if (created_dir_) fs::remove(dir_, ec);
    }
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;

    void write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        written_.push_back(p);
        write_text(p, text);
    }
    void release() { released_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool created_dir_ = false;
    bool released_ = false;
};

}  // namespace

RunRecord compute_scenario(const ScenarioConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    RunRecord r;
    r.config = c;
    r.version = std::string(library_version());
    r.summary = ordered_json::object();
    r.summary["scenario"] = to_string(c.scenario);
    try {
        const FockCutoff cutoff(c.n_max);
        const DensityMatrix sigma = build_state(c.sigma, cutoff);
        const DensityMatrix rho0 = build_state(c.rho0, cutoff);
        switch (c.scenario) {
            case ScenarioKind::Relax: run_relax(c, rho0, sigma, r); break;
            case ScenarioKind::ProductCompare: run_product_compare(c, rho0, sigma, r); break;
            case ScenarioKind::LambdaSweep: run_lambda_sweep(c, rho0, sigma, r); break;
            case ScenarioKind::VanHove: run_vanhove(c, rho0, sigma, r); break;
            case ScenarioKind::Measures: run_measures(c, rho0, sigma, r); break;
        }
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("scenario ") + to_string(c.scenario) + ": " + e.what());
    }
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

RunRecord run_scenario(const ScenarioConfig& c) {
    RunRecord r = compute_scenario(c);
    OutputGuard guard{fs::path(c.output_dir)};
    ordered_json files = ordered_json::array();
    for (const Table& t : r.results) {
        guard.write(t.name, to_csv(t));
        files.push_back(t.name);
    }
    for (const auto& [name, text] : r.documents) {
        guard.write(name, text);
        files.push_back(name);
    }
    guard.write("summary.json", r.summary.dump(2) + "\n");
    files.push_back("summary.json");
    ordered_json manifest;
    manifest["version"] = r.version;
    manifest["config"] = serialize_config(c);
    manifest["files"] = std::move(files);
    guard.write("manifest.json", manifest.dump(2) + "\n");
    guard.release();
    return r;
}

std::vector<fs::path> emit_plot_data(const RunRecord& record) {
    const fs::path dir(record.config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<fs::path> out;
    for (const Table& t : record.plots) {
        const fs::path p = dir / t.name;
        write_text(p, to_csv(t));
        out.push_back(p);
    }
    return out;
}

std::string scenario_catalog() {
    std::ostringstream s;
    s << "Scenarios:\n"
         "  relax            iterate the channel from rho0 to its fixed point (single lambda)\n"
         "  product_compare  compare chi of the fixed point with the infinite product (single lambda)\n"
         "  lambda_sweep     fixed points over a list of lambda; distance to the matched thermal state\n"
         "  vanhove          K steps at lambda = 1/sqrt(K); \"lambda\" lists the K values\n"
         "  measures         purity, entropy and QCS of fixed points over a list of lambda\n"
         "\n"
         "Config fields (JSON object):\n"
         "  scenario    string, required\n"
         "  sigma_spec  {\"thermal\": beta} | {\"fock\": n} | {\"coherent\": a | [re, im]}, required\n"
         "  rho0_spec   same as sigma_spec, or \"fock_default\" (vacuum); default \"fock_default\"\n"
         "  lambda      number or list; each in (0, pi/2], or positive integers K for vanhove\n"
         "  n_max       integer >= 1, default 40; (n_max+1)^2 limited by REPCOL_MAX_DIM (default 4096)\n"
         "  tol         convergence threshold on successive trace distance, >= 1e-12, default 1e-9\n"
         "  max_steps   integer >= 1, default 10000\n"
         "  z_grid      {\"radius\": r, \"count\": n}, default {\"radius\": 2, \"count\": 25}\n"
         "  output_dir  path, default \"out\"\n";
    return s.str();
}

}  // namespace repcol
