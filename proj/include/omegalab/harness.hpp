#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omegalab/omega.hpp"
#include "omegalab/scenario.hpp"

namespace omegalab::harness {

struct CheckResult {
    std::string name;
    bool passed = false;
    /// Raw outcome before applying the check's expectation.
    bool raw_passed = false;
    bool expected_pass = true;
    std::string detail;
    std::vector<spaces::Point> witnesses;
    json metrics = json::object();
};

struct VerificationReport {
    std::string scenario_id;
    std::string map_name;
    std::size_t tail_size = 0;
    std::size_t omega_size = 0;  // net representatives
    std::size_t component_count = 0;
    bool single_cycle = false;
    std::size_t cycle_length = 0;
    std::string classification;
    std::size_t max_period = 0;
    std::optional<double> hausdorff_to_target;
    std::vector<CheckResult> checks;
    std::optional<std::string> error;
    double wall_time = 0.0;

    bool all_passed() const;
};

/// Everything run_scenario computes before the checks.
struct Pipeline {
    dynamics::Orbit orbit;
    omega::OmegaEstimate estimate;
    omega::ComponentPartition partition;
    omega::InducedMap induced;
    omega::CycleReport cycle;
    omega::Classification classification;
};

Pipeline run_pipeline(const ScenarioConfig& cfg);

/// orbit -> omega_estimate -> components -> induced_map -> requested checks.
/// Stage errors are recorded in the report, never thrown.
VerificationReport run_scenario(const ScenarioConfig& cfg);

// Individual checks. Each returns its raw outcome; run_scenario applies the
// expectation in the CheckSpec.
CheckResult check_thm12(const omega::OmegaEstimate& est, const omega::ComponentPartition& part,
                        const omega::InducedMap& im);
CheckResult check_cor13(const dynamics::DynamicalMap& m, const omega::OmegaEstimate& est,
                        const omega::ComponentPartition& part, std::size_t n, double tol);
CheckResult check_lemma23(const dynamics::DynamicalMap& m, const omega::OmegaEstimate& est);
CheckResult check_dendrite_counterexample(const ScenarioConfig& cfg, const omega::OmegaEstimate& est,
                                          const json& params);
CheckResult check_disk_coverage(const ScenarioConfig& cfg, const json& params);
CheckResult check_s1_fixed(const ScenarioConfig& cfg, const json& params);
CheckResult check_monotone_r(const ScenarioConfig& cfg, const json& params);
CheckResult check_theta_relation(const ScenarioConfig& cfg, const json& params);
CheckResult check_suspension(const ScenarioConfig& cfg, const json& params);
CheckResult check_square_extension(const ScenarioConfig& cfg, const json& params);
CheckResult check_prop18(const ScenarioConfig& cfg, const omega::OmegaEstimate& est, const json& params);
CheckResult check_cantor_negative(const ScenarioConfig& cfg, const omega::Classification& cls, const json& params);

/// Report as JSON. wall_time is included only when requested, so that
/// identical scenarios give byte-identical reports.
json report_to_json(const VerificationReport& r, bool include_timing = false);

/// CSV with header index,coord0,coord1,... (flat coordinates of each point).
void write_cloud_csv(std::ostream& out, const omega::Cloud& cloud);

struct SuiteEntry {
    std::filesystem::path file;
    std::optional<VerificationReport> report;
    std::optional<std::string> config_error;
};

/// Loads every *.json in dir (sorted by name) and runs them concurrently;
/// entries come back in file order.
std::vector<SuiteEntry> run_suite(const std::filesystem::path& dir);

}  // namespace omegalab::harness
