// omega-lab: run orbit / omega-set scenarios from JSON files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "omegalab/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace omegalab;

namespace {

struct Overrides {
    std::optional<std::size_t> n_max;
    std::optional<double> eps;
    std::optional<double> eps_net;
};

harness::ScenarioConfig load(const fs::path& path, const Overrides& ov) {
    std::ifstream in(path);
    if (!in) throw harness::ConfigError("cannot open scenario file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw harness::ConfigError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw harness::ConfigError(path.string() + ": expected a JSON object");
    if (ov.n_max) j["n_max"] = *ov.n_max;
    if (ov.eps) j["eps_comp"] = *ov.eps;
    if (ov.eps_net) j["eps_net"] = *ov.eps_net;
    return harness::scenario_from_json(j);
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << "\n";
}

void dump_cloud(const omega::Cloud& cloud, const std::string& path) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    harness::write_cloud_csv(f, cloud);
}

json points_json(const omega::Cloud& cloud, std::size_t limit) {
    json a = json::array();
    for (std::size_t i = 0; i < cloud.size() && i < limit; ++i) a.push_back(harness::point_to_json(cloud[i]));
    return a;
}

void print_summary(const harness::VerificationReport& r, std::ostream& os) {
    os << (r.all_passed() ? "PASS " : "FAIL ") << r.scenario_id << "  (" << r.map_name << ", |omega| = " << r.omega_size
       << ", components = " << r.component_count << ")\n";
    if (r.error) os << "  error: " << *r.error << "\n";
    for (const auto& c : r.checks) os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orbit and omega-limit set experiments"};
    app.require_subcommand(1);

    Overrides ov;
    auto add_overrides = [&ov](CLI::App* sub) {
        sub->add_option("--n-max", ov.n_max, "largest period tried when certifying periodicity");
        sub->add_option("--eps", ov.eps, "component linking radius (eps_comp)");
        sub->add_option("--eps-net", ov.eps_net, "net radius (eps_net)");
    };

    std::string scenario_path, out, dump, dir, out_dir;
    std::size_t show = 20;
    bool timing = false;

    auto* orbit_cmd = app.add_subcommand("orbit", "compute the orbit of the scenario start point");
    orbit_cmd->add_option("scenario", scenario_path)->required()->check(CLI::ExistingFile);
    orbit_cmd->add_option("--out", out, "write JSON here instead of stdout");
    orbit_cmd->add_option("--dump", dump, "write the orbit as CSV");
    orbit_cmd->add_option("--show", show, "number of points listed in the JSON");
    add_overrides(orbit_cmd);

    auto* omega_cmd = app.add_subcommand("omega", "estimate the omega-limit set");
    omega_cmd->add_option("scenario", scenario_path)->required()->check(CLI::ExistingFile);
    omega_cmd->add_option("--out", out);
    omega_cmd->add_option("--dump", dump, "write the net as CSV");
    omega_cmd->add_option("--show", show);
    add_overrides(omega_cmd);

    auto* comp_cmd = app.add_subcommand("components", "components of the omega estimate and the induced map");
    comp_cmd->add_option("scenario", scenario_path)->required()->check(CLI::ExistingFile);
    comp_cmd->add_option("--out", out);
    comp_cmd->add_option("--dump", dump, "write the net as CSV");
    add_overrides(comp_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "run a scenario and its checks");
    verify_cmd->add_option("scenario", scenario_path)->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--out", out, "write the report JSON here");
    verify_cmd->add_option("--dump", dump, "write the omega net as CSV");
    verify_cmd->add_flag("--timing", timing, "include wall_time in the report");
    add_overrides(verify_cmd);

    auto* suite_cmd = app.add_subcommand("suite", "run every scenario in a directory");
    suite_cmd->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
    suite_cmd->add_option("--out-dir", out_dir, "write one report per scenario here");
    suite_cmd->add_flag("--timing", timing, "include wall_time in the reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*orbit_cmd) {
            const auto cfg = load(scenario_path, ov);
            const auto o = dynamics::orbit(cfg.map, cfg.start, cfg.steps);
            dump_cloud(o.points, dump);
            emit({{"scenario", cfg.id}, {"map", cfg.map.name()}, {"steps", cfg.steps}, {"exact", o.exact},
                  {"points", points_json(o.points, show)},
                  {"last", harness::point_to_json(o.points.back())}},
                 out);
            return 0;
        }
        if (*omega_cmd || *comp_cmd) {
            const auto cfg = load(scenario_path, ov);
            const auto p = harness::run_pipeline(cfg);
            dump_cloud(p.estimate.net, dump);
            json j = {{"scenario", cfg.id},
                      {"map", cfg.map.name()},
                      {"tail_size", p.estimate.tail.size()},
                      {"omega_size", p.estimate.net.size()},
                      {"eps_net", cfg.eps_net},
                      {"classification",
                       {{"kind", omega::class_name(p.classification.kind)}, {"max_period", p.classification.max_period}}}};
            if (*omega_cmd) {
                j["net"] = points_json(p.estimate.net, show);
                if (cfg.target) {
                    j["hausdorff_to_target"] = omega::hausdorff(p.estimate.net, *cfg.target, cfg.sampling, p.estimate.space);
                }
            } else {
                json straddles = json::array();
                for (const auto& s : p.induced.straddles) {
                    straddles.push_back({{"component", s.component}, {"point", harness::point_to_json(s.point)},
                                         {"reason", s.reason}});
                }
                j["eps_comp"] = cfg.eps_comp;
                j["component_count"] = p.partition.count;
                j["labels"] = p.partition.labels;
                j["induced_map"] = p.induced.table;
                j["well_defined"] = p.induced.well_defined;
                j["straddles"] = straddles;
                j["cycle"] = {{"single", p.cycle.single_cycle}, {"length", p.cycle.length}};
            }
            emit(j, out);
            return 0;
        }
        if (*verify_cmd) {
            const auto cfg = load(scenario_path, ov);
            const auto report = harness::run_scenario(cfg);
            if (!dump.empty()) dump_cloud(harness::run_pipeline(cfg).estimate.net, dump);
            const json j = harness::report_to_json(report, timing);
            if (out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                emit(j, out);
                print_summary(report, std::cout);
            }
            return report.all_passed() ? 0 : 1;
        }
        if (*suite_cmd) {
            const auto entries = harness::run_suite(dir);
            if (!out_dir.empty()) fs::create_directories(out_dir);
            bool config_failure = false;
            bool all_pass = true;
            std::size_t passed = 0;
            for (const auto& e : entries) {
                if (e.config_error) {
                    config_failure = true;
                    std::cout << "ERROR " << e.file.filename().string() << ": " << *e.config_error << "\n";
                    continue;
                }
                const auto& r = *e.report;
                print_summary(r, std::cout);
                if (r.all_passed()) ++passed;
                all_pass = all_pass && r.all_passed();
                if (!out_dir.empty()) {
                    emit(harness::report_to_json(r, timing), (fs::path(out_dir) / (e.file.stem().string() + ".report.json")).string());
                }
            }
            std::cout << passed << "/" << entries.size() << " scenarios passed\n";
            if (config_failure) return 2;
            return all_pass ? 0 : 1;
        }
    } catch (const harness::ConfigError& e) {
        std::cerr << "omega-lab: bad config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "omega-lab: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
