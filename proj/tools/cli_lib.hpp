#pragma once

#include "qform/analysis.hpp"
#include "qform/event_solver.hpp"
#include "qform/oracle.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace qform::cli {

/// Config-file problem with a "file:line: message" what() string.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SolverKind { Event, Euler, Hysteresis };

struct ScenarioConfig {
    FormationSpec spec;
    std::optional<RatVec> x0;  // n absolute positions, when the anchor is known
    RatVec z0;                 // always populated after load
    SolverKind solver = SolverKind::Event;
    Rat h = Rat(1, 1000);
    Rat eps_h = Rat(1, 20);
    Rat t_max = 100;
    BranchPolicy policy = BranchPolicy::Deterministic;
    Rat snap_tol = 0;
    /// Tolerance used to classify sampled-solver terminals; defaults to
    /// 5 * h * max speed bound when unset.
    std::optional<Rat> report_tol;
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    Rat terminal_tolerance() const;
};

/// Flat key = value file; '#' comments; keys documented in the README.
ScenarioConfig parse_config(std::istream& in, const std::string& name);
ScenarioConfig load_config(const std::string& path);

struct RunResult {
    int exit_code = 0;
    nlohmann::ordered_json summary;
};

/// Executes the scenario and writes trajectory.csv, events.log and
/// summary.json into out_dir. Never throws on solver timeouts (that is
/// exit code 3); config/filesystem problems surface as exceptions.
RunResult run_scenario(const ScenarioConfig& cfg);

struct GridSpec {
    Rat lo = -3;
    Rat hi = 3;
    int count = 21;         // points per axis
    int random_points = 0;  // when > 0, seeded uniform sampling instead
    bool axes_only = false;
};

struct SweepStats {
    int total = 0;
    int agreed = 0;
};

/// Basin table for three-agent scenarios: per grid point, the classifier
/// prediction against the event-solver terminal(s). Writes CSV rows to
/// `out` and returns agreement counts.
SweepStats run_sweep(const ScenarioConfig& cfg, const GridSpec& grid, std::ostream& out);

/// Renders the summary (and, for sampled runs, the z_1 chattering band
/// measured from trajectory.csv) of a finished run directory. Returns the
/// run's recorded exit code; throws ConfigError when files are missing.
int run_report(const std::string& dir, std::ostream& out);

const char* to_string(SolverKind kind);

}  // namespace qform::cli
