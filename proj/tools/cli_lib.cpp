#include "cli_lib.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace qform::cli {

namespace {

// ---------------------------------------------------------------- formatting

std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

ordered_json exact_vec(const RatVec& v) {
    ordered_json a = ordered_json::array();
    for (const auto& r : v) a.push_back(fraction_string(r));
    return a;
}

ordered_json dec_vec(const RatVec& v) {
    ordered_json a = ordered_json::array();
    for (const auto& r : v) a.push_back(to_double(r));
    return a;
}

ordered_json dec_vec(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(x);
    return a;
}

std::string join_indices(const std::vector<int>& idx) {
    if (idx.empty()) return "-";
    std::string s;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (j) s += ';';
        s += std::to_string(idx[j] + 1);  // 1-based, matching z_1..z_{n-1}
    }
    return s;
}

Rat max_speed_bound(const FormationSpec& spec) {
    Rat s = 0;
    for (int i = 0; i < spec.m(); ++i)
        if (Rat b = speed_bound(spec, i); b > s) s = b;
    return s;
}

// Agent velocities for a (possibly fractional) output vector.
RatVec x_velocity(const RatVec& q, const FormationSpec& spec) {
    RatVec dx(spec.n);
    dx[0] = -spec.k[0] * q[0];
    for (int i = 1; i < spec.n - 1; ++i) dx[i] = q[i - 1] - spec.k[i] * q[i];
    dx[spec.n - 1] = q[spec.n - 2];
    return dx;
}

std::vector<double> x_velocity(const std::vector<int>& q, const FormationSpec& spec) {
    std::vector<double> dx(spec.n);
    dx[0] = -to_double(spec.k[0]) * q[0];
    for (int i = 1; i < spec.n - 1; ++i) dx[i] = q[i - 1] - to_double(spec.k[i]) * q[i];
    dx[spec.n - 1] = q[spec.n - 2];
    return dx;
}

// ---------------------------------------------------------------- config

struct KeyedValue {
    int line = 0;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

Rat one_rational(const std::string& name, const KeyedValue& v, const std::string& key) {
    if (v.tokens.size() != 1) fail(name, v.line, key + ": expected a single value");
    try {
        return parse_rational(v.tokens[0]);
    } catch (const std::invalid_argument& e) {
        fail(name, v.line, key + ": " + e.what());
    }
}

RatVec rational_list(const std::string& name, const KeyedValue& v, const std::string& key) {
    RatVec out;
    for (const auto& tok : v.tokens) {
        try {
            out.push_back(parse_rational(tok));
        } catch (const std::invalid_argument& e) {
            fail(name, v.line, key + ": " + e.what());
        }
    }
    return out;
}

long long integer_value(const std::string& name, const KeyedValue& v, const std::string& key) {
    const Rat r = one_rational(name, v, key);
    if (denominator(r) != 1) fail(name, v.line, key + ": expected an integer");
    return static_cast<long long>(numerator(r));
}

}  // namespace

Rat ScenarioConfig::terminal_tolerance() const {
    if (report_tol) return *report_tol;
    if (solver == SolverKind::Event) return 0;
    return 5 * h * max_speed_bound(spec);
}

ScenarioConfig parse_config(std::istream& in, const std::string& name) {
    std::map<std::string, KeyedValue> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected 'key = value'");

        std::istringstream key_in(line.substr(0, eq));
        std::string key, extra;
        if (!(key_in >> key) || (key_in >> extra))
            fail(name, lineno, "expected a single key before '='");

        KeyedValue v;
        v.line = lineno;
        std::istringstream val_in(line.substr(eq + 1));
        std::string tok;
        while (val_in >> tok) v.tokens.push_back(tok);
        if (v.tokens.empty()) fail(name, lineno, key + ": missing value");
        if (!kv.emplace(key, std::move(v)).second) fail(name, lineno, "duplicate key '" + key + "'");
    }

    static const std::set<std::string> known{"n",      "d",     "k",       "x0",         "z0",
                                             "solver", "h",     "eps_h",   "t_max",      "policy",
                                             "snap_tol", "report_tol", "out_dir", "seed"};
    for (const auto& [key, v] : kv)
        if (!known.count(key)) fail(name, v.line, "unknown key '" + key + "'");

    ScenarioConfig cfg;
    auto it = kv.find("n");
    if (it == kv.end()) fail(name, lineno, "missing required key 'n'");
    const long long n = integer_value(name, it->second, "n");
    if (n < 2 || n > 1000) fail(name, it->second.line, "n: must be in [2, 1000]");
    cfg.spec.n = static_cast<int>(n);
    const int m = cfg.spec.m();

    it = kv.find("d");
    if (it == kv.end()) fail(name, lineno, "missing required key 'd'");
    cfg.spec.d = rational_list(name, it->second, "d");
    if (cfg.spec.d.size() == 1) cfg.spec.d.assign(m, cfg.spec.d[0]);  // scalar broadcast
    if (static_cast<int>(cfg.spec.d.size()) != m)
        fail(name, it->second.line,
             "d: expected 1 or " + std::to_string(m) + " values, got " +
                 std::to_string(cfg.spec.d.size()));

    it = kv.find("k");
    if (it == kv.end()) fail(name, lineno, "missing required key 'k'");
    cfg.spec.k = rational_list(name, it->second, "k");
    if (static_cast<int>(cfg.spec.k.size()) != m)
        fail(name, it->second.line,
             "k: expected " + std::to_string(m) + " values, got " +
                 std::to_string(cfg.spec.k.size()));

    try {
        cfg.spec.validate();
    } catch (const std::invalid_argument& e) {
        fail(name, kv.at("d").line, e.what());
    }

    const auto x0_it = kv.find("x0");
    const auto z0_it = kv.find("z0");
    if ((x0_it == kv.end()) == (z0_it == kv.end()))
        fail(name, lineno, "exactly one of 'x0' (n values) or 'z0' (n-1 values) is required");
    if (x0_it != kv.end()) {
        RatVec x = rational_list(name, x0_it->second, "x0");
        if (static_cast<int>(x.size()) != cfg.spec.n)
            fail(name, x0_it->second.line,
                 "x0: expected " + std::to_string(cfg.spec.n) + " values, got " +
                     std::to_string(x.size()));
        cfg.x0 = x;
        cfg.z0 = x_to_z(x);
    } else {
        cfg.z0 = rational_list(name, z0_it->second, "z0");
        if (static_cast<int>(cfg.z0.size()) != m)
            fail(name, z0_it->second.line,
                 "z0: expected " + std::to_string(m) + " values, got " +
                     std::to_string(cfg.z0.size()));
    }

    if ((it = kv.find("solver")) != kv.end()) {
        const std::string& s = it->second.tokens[0];
        if (s == "event")
            cfg.solver = SolverKind::Event;
        else if (s == "euler")
            cfg.solver = SolverKind::Euler;
        else if (s == "hysteresis")
            cfg.solver = SolverKind::Hysteresis;
        else
            fail(name, it->second.line, "solver: expected event | euler | hysteresis");
    }
    if ((it = kv.find("policy")) != kv.end()) {
        const std::string& s = it->second.tokens[0];
        if (s == "deterministic")
            cfg.policy = BranchPolicy::Deterministic;
        else if (s == "enumerate")
            cfg.policy = BranchPolicy::Enumerate;
        else
            fail(name, it->second.line, "policy: expected deterministic | enumerate");
    }
    if ((it = kv.find("h")) != kv.end()) {
        cfg.h = one_rational(name, it->second, "h");
        if (cfg.h <= 0) fail(name, it->second.line, "h: must be > 0");
    }
    if ((it = kv.find("eps_h")) != kv.end()) {
        cfg.eps_h = one_rational(name, it->second, "eps_h");
        if (cfg.eps_h <= 0) fail(name, it->second.line, "eps_h: must be > 0");
    }
    if ((it = kv.find("t_max")) != kv.end()) {
        cfg.t_max = one_rational(name, it->second, "t_max");
        if (cfg.t_max <= 0) fail(name, it->second.line, "t_max: must be > 0");
    }
    if ((it = kv.find("snap_tol")) != kv.end()) {
        cfg.snap_tol = one_rational(name, it->second, "snap_tol");
        if (cfg.snap_tol < 0) fail(name, it->second.line, "snap_tol: must be >= 0");
    }
    if ((it = kv.find("report_tol")) != kv.end()) {
        cfg.report_tol = one_rational(name, it->second, "report_tol");
        if (*cfg.report_tol < 0) fail(name, it->second.line, "report_tol: must be >= 0");
    }
    if ((it = kv.find("out_dir")) != kv.end()) cfg.out_dir = it->second.tokens[0];
    if ((it = kv.find("seed")) != kv.end()) {
        const long long s = integer_value(name, it->second, "seed");
        if (s < 0) fail(name, it->second.line, "seed: must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse_config(in, path);
}

// ---------------------------------------------------------------- run

namespace {

ordered_json spec_json(const ScenarioConfig& cfg) {
    ordered_json j;
    j["n"] = cfg.spec.n;
    j["d"] = exact_vec(cfg.spec.d);
    j["d_decimal"] = dec_vec(cfg.spec.d);
    j["k"] = exact_vec(cfg.spec.k);
    j["k_decimal"] = dec_vec(cfg.spec.k);
    return j;
}

ordered_json solver_json(const ScenarioConfig& cfg) {
    ordered_json j;
    j["name"] = to_string(cfg.solver);
    j["policy"] = cfg.policy == BranchPolicy::Enumerate ? "enumerate" : "deterministic";
    j["t_max"] = fraction_string(cfg.t_max);
    if (cfg.solver == SolverKind::Event) {
        j["h"] = nullptr;
        j["eps_h"] = nullptr;
    } else {
        j["h"] = fraction_string(cfg.h);
        j["eps_h"] = cfg.solver == SolverKind::Hysteresis
                         ? ordered_json(fraction_string(cfg.eps_h))
                         : ordered_json(nullptr);
    }
    j["snap_tol"] = fraction_string(cfg.snap_tol);
    j["terminal_tolerance"] = fraction_string(cfg.terminal_tolerance());
    j["seed"] = cfg.seed;
    return j;
}

ordered_json bit_budget_json(const FormationSpec& spec) {
    const BitBudget b = bit_budget(spec);
    ordered_json j;
    j["per_agent"] = b.per_agent;
    j["derived_total"] = b.derived_total;
    j["stated_total"] = b.stated_total;
    j["totals_agree"] = b.totals_agree;
    return j;
}

void write_event_csv(std::ostream& out, const Trajectory& traj, const ScenarioConfig& cfg) {
    const int m = cfg.spec.m();
    out << "t";
    for (int i = 1; i <= m; ++i) out << ",z_" << i;
    if (cfg.x0)
        for (int i = 1; i <= cfg.spec.n; ++i) out << ",x_" << i;
    out << ",V,mode,active_set\n";

    auto row = [&](const Rat& t, const RatVec& z, const RatVec* x, const char* mode,
                   const std::vector<int>& active) {
        out << decimal_string(t);
        for (const auto& zi : z) out << ',' << decimal_string(zi);
        if (x)
            for (const auto& xi : *x) out << ',' << decimal_string(xi);
        out << ',' << decimal_string(lyapunov(z, cfg.spec)) << ',' << mode << ','
            << join_indices(active) << '\n';
    };

    RatVec x;
    if (cfg.x0) x = *cfg.x0;
    row(Rat(0), traj.z0, cfg.x0 ? &x : nullptr, "start", active_set(traj.z0, cfg.spec));
    for (const auto& seg : traj.segments) {
        if (cfg.x0) {
            const RatVec dx = x_velocity(seg.q, cfg.spec);
            const Rat dt = seg.t_end - seg.t_start;
            for (int i = 0; i < cfg.spec.n; ++i) x[i] += dt * dx[i];
        }
        row(seg.t_end, seg.z_end(), cfg.x0 ? &x : nullptr, to_string(seg.mode), seg.sliding);
    }
}

void write_event_log_line(std::ostream& out, const Event& ev, int branch) {
    out << "t=" << decimal_string(ev.t) << " exact=" << fraction_string(ev.t)
        << " kind=" << to_string(ev.kind) << " coords=" << join_indices(ev.coords)
        << " branch=" << branch << '\n';
}

int exit_code_for(const Trajectory& traj) {
    if (traj.terminal == TerminalKind::Timeout) return 3;
    return traj.terminal_class.tag == EquilibriumTag::Desired ? 0 : 2;
}

RunResult run_event(const ScenarioConfig& cfg) {
    SolverOptions opts;
    opts.t_max = cfg.t_max;
    opts.policy = cfg.policy;

    bool overflowed = false;
    std::vector<Trajectory> trajectories;
    try {
        trajectories = simulate(cfg.z0, cfg.spec, opts);
    } catch (const EventOverflow&) {
        overflowed = true;
    }

    const fs::path dir(cfg.out_dir);
    ordered_json summary;
    summary["format"] = "qform-summary-v1";
    summary["spec"] = spec_json(cfg);
    ordered_json init;
    init["x0"] = cfg.x0 ? exact_vec(*cfg.x0) : ordered_json(nullptr);
    init["z0"] = exact_vec(cfg.z0);
    init["z0_decimal"] = dec_vec(cfg.z0);
    summary["initial"] = init;
    summary["solver"] = solver_json(cfg);
    summary["event_cap_exceeded"] = overflowed;

    if (overflowed) {
        summary["exit_code"] = 3;
        ordered_json term;
        term["class"] = "timeout";
        term["timed_out"] = true;
        summary["terminal"] = term;
        summary["bit_budget"] = bit_budget_json(cfg.spec);
        std::ofstream(dir / "trajectory.csv") << "";
        std::ofstream(dir / "events.log") << "";
        std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
        return {3, summary};
    }

    const Trajectory& primary = trajectories.front();
    const int code = exit_code_for(primary);
    summary["exit_code"] = code;

    {
        std::ofstream csv(dir / "trajectory.csv");
        write_event_csv(csv, primary, cfg);
        for (std::size_t b = 1; b < trajectories.size(); ++b) {
            std::ofstream extra(dir / ("trajectory_branch" +
                                       std::to_string(trajectories[b].branch_id) + ".csv"));
            write_event_csv(extra, trajectories[b], cfg);
        }
        std::ofstream log(dir / "events.log");
        for (const auto& traj : trajectories)
            for (const auto& ev : traj.events) write_event_log_line(log, ev, traj.branch_id);
    }

    ordered_json term;
    term["class"] = primary.terminal == TerminalKind::Timeout
                        ? "timeout"
                        : to_string(primary.terminal_class.tag);
    term["timed_out"] = primary.terminal == TerminalKind::Timeout;
    term["t"] = fraction_string(primary.t_end);
    term["t_decimal"] = to_double(primary.t_end);
    term["z"] = exact_vec(primary.z_end);
    term["z_decimal"] = dec_vec(primary.z_end);
    if (cfg.x0) {
        RatVec x = *cfg.x0;
        for (const auto& seg : primary.segments) {
            const RatVec dx = x_velocity(seg.q, cfg.spec);
            for (int i = 0; i < cfg.spec.n; ++i) x[i] += (seg.t_end - seg.t_start) * dx[i];
        }
        term["x"] = exact_vec(x);
        term["x_decimal"] = dec_vec(x);
    } else {
        term["x"] = nullptr;
    }
    summary["terminal"] = term;

    const ConvergenceReport rep =
        convergence_report(primary, cfg.spec, cfg.report_tol.value_or(Rat(0)));
    ordered_json an;
    an["terminal_V"] = fraction_string(rep.terminal_V);
    an["terminal_V_decimal"] = to_double(rep.terminal_V);
    an["time_to_E1"] = fraction_string(rep.time_to_E1);
    an["time_to_E1_decimal"] = to_double(rep.time_to_E1);
    an["time_to_E2"] = fraction_string(rep.time_to_E2);
    an["time_to_E2_decimal"] = to_double(rep.time_to_E2);
    an["reaches_E1"] = rep.reaches_E1;
    an["reaches_E2"] = rep.reaches_E2;
    an["sliding_duration"] = fraction_string(rep.sliding_duration);
    an["sliding_duration_decimal"] = to_double(rep.sliding_duration);
    an["sliding_fraction"] =
        primary.t_end == 0 ? 0.0 : to_double(Rat(rep.sliding_duration / primary.t_end));
    an["event_count"] = rep.event_count;
    summary["analysis"] = an;
    summary["bit_budget"] = bit_budget_json(cfg.spec);

    ordered_json branches = ordered_json::array();
    for (const auto& traj : trajectories) {
        ordered_json b;
        b["id"] = traj.branch_id;
        b["terminal_class"] = traj.terminal == TerminalKind::Timeout
                                  ? "timeout"
                                  : to_string(traj.terminal_class.tag);
        b["t_end"] = fraction_string(traj.t_end);
        b["z_end"] = exact_vec(traj.z_end);
        b["event_count"] = traj.events.size();
        branches.push_back(std::move(b));
    }
    summary["branches"] = branches;

    ordered_json segs = ordered_json::array();
    for (const auto& seg : primary.segments) {
        ordered_json s;
        s["t_start"] = fraction_string(seg.t_start);
        s["t_end"] = fraction_string(seg.t_end);
        s["z_start"] = exact_vec(seg.z_start);
        s["velocity"] = exact_vec(seg.velocity);
        s["q"] = exact_vec(seg.q);
        s["mode"] = to_string(seg.mode);
        s["sliding"] = seg.sliding;
        segs.push_back(std::move(s));
    }
    summary["segments"] = segs;

    std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
    return {code, summary};
}

RunResult run_sampled(const ScenarioConfig& cfg) {
    const double h = to_double(cfg.h);
    const double t_max = to_double(cfg.t_max);
    const auto z0 = to_doubles(cfg.z0);
    const SampledTrajectory traj =
        cfg.solver == SolverKind::Euler
            ? simulate_euler(z0, cfg.spec, h, t_max)
            : simulate_hysteresis(z0, cfg.spec, h, to_double(cfg.eps_h), t_max);

    const int m = cfg.spec.m();
    const double tol = to_double(cfg.terminal_tolerance());
    std::vector<double> dvals(m);
    for (int i = 0; i < m; ++i) dvals[i] = to_double(cfg.spec.d[i]);

    auto in_E1 = [&](const std::vector<double>& z) {
        for (int i = 0; i < m; ++i)
            if (std::abs(std::abs(z[i]) - dvals[i]) > tol) return false;
        return true;
    };
    auto in_E2 = [&](const std::vector<double>& z) {
        for (int i = 0; i < m; ++i)
            if (std::abs(std::abs(z[i]) - dvals[i]) > tol && std::abs(z[i]) > tol) return false;
        return true;
    };

    const auto& z_final = traj.z.back();
    std::string term_class = "timeout";
    int code = 3;
    bool timed_out = true;
    if (in_E1(z_final)) {
        term_class = "desired";
        code = 0;
        timed_out = false;
    } else if (in_E2(z_final)) {
        term_class = "degenerate";
        code = 2;
        timed_out = false;
    }

    // Last sample outside the tolerance neighborhood; the entry time is the
    // following sample.
    double time_to_E1 = 0, time_to_E2 = 0;
    for (std::size_t j = traj.z.size(); j-- > 0;) {
        if (!in_E1(traj.z[j])) {
            time_to_E1 = j + 1 < traj.t.size() ? traj.t[j + 1] : traj.t[j];
            break;
        }
    }
    for (std::size_t j = traj.z.size(); j-- > 0;) {
        if (!in_E2(traj.z[j])) {
            time_to_E2 = j + 1 < traj.t.size() ? traj.t[j + 1] : traj.t[j];
            break;
        }
    }

    // Agent positions, when the anchor is known, integrated with the same
    // outputs the z-steps used.
    std::vector<std::vector<double>> xs;
    if (cfg.x0) {
        std::vector<double> x = to_doubles(*cfg.x0);
        xs.reserve(traj.t.size());
        xs.push_back(x);
        for (std::size_t j = 0; j + 1 < traj.t.size(); ++j) {
            const auto dx = x_velocity(traj.q[j], cfg.spec);
            for (int i = 0; i < cfg.spec.n; ++i) x[i] += h * dx[i];
            xs.push_back(x);
        }
    }

    const fs::path dir(cfg.out_dir);
    std::size_t flips = 0;
    {
        std::ofstream csv(dir / "trajectory.csv");
        csv << "t";
        for (int i = 1; i <= m; ++i) csv << ",z_" << i;
        if (cfg.x0)
            for (int i = 1; i <= cfg.spec.n; ++i) csv << ",x_" << i;
        csv << ",V,mode,active_set\n";
        for (std::size_t j = 0; j < traj.t.size(); ++j) {
            csv << fmt_double(traj.t[j]);
            for (double zi : traj.z[j]) csv << ',' << fmt_double(zi);
            if (cfg.x0)
                for (double xi : xs[j]) csv << ',' << fmt_double(xi);
            csv << ',' << fmt_double(traj.V[j]) << ",sample,-\n";
        }

        std::ofstream log(dir / "events.log");
        for (std::size_t j = 1; j < traj.q.size(); ++j) {
            std::vector<int> changed;
            for (int i = 0; i < m; ++i)
                if (traj.q[j][i] != traj.q[j - 1][i]) changed.push_back(i);
            if (changed.empty()) continue;
            ++flips;
            log << "t=" << fmt_double(traj.t[j]) << " kind=quantizer-flip coords="
                << join_indices(changed) << " branch=0\n";
        }
    }

    ordered_json summary;
    summary["format"] = "qform-summary-v1";
    summary["spec"] = spec_json(cfg);
    ordered_json init;
    init["x0"] = cfg.x0 ? exact_vec(*cfg.x0) : ordered_json(nullptr);
    init["z0"] = exact_vec(cfg.z0);
    init["z0_decimal"] = dec_vec(cfg.z0);
    summary["initial"] = init;
    summary["solver"] = solver_json(cfg);
    summary["event_cap_exceeded"] = false;
    summary["exit_code"] = code;

    ordered_json term;
    term["class"] = term_class;
    term["timed_out"] = timed_out;
    term["t"] = nullptr;
    term["t_decimal"] = traj.t.back();
    term["z"] = nullptr;
    term["z_decimal"] = dec_vec(z_final);
    if (cfg.x0) {
        term["x"] = nullptr;
        term["x_decimal"] = dec_vec(xs.back());
    } else {
        term["x"] = nullptr;
    }
    summary["terminal"] = term;

    ordered_json an;
    an["terminal_V"] = nullptr;
    an["terminal_V_decimal"] = traj.V.back();
    an["time_to_E1"] = nullptr;
    an["time_to_E1_decimal"] = time_to_E1;
    an["time_to_E2"] = nullptr;
    an["time_to_E2_decimal"] = time_to_E2;
    an["reaches_E1"] = term_class == "desired";
    an["reaches_E2"] = code == 0 || code == 2;
    an["sliding_duration"] = nullptr;
    an["sliding_duration_decimal"] = 0.0;
    an["sliding_fraction"] = 0.0;
    an["event_count"] = flips;
    summary["analysis"] = an;
    summary["bit_budget"] = bit_budget_json(cfg.spec);

    std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
    return {code, summary};
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    if (cfg.solver == SolverKind::Event) return run_event(cfg);
    return run_sampled(cfg);
}

// ---------------------------------------------------------------- sweep

namespace {

std::string pair_string(const Rat& a, const Rat& b) {
    return "(" + decimal_string(a) + " " + decimal_string(b) + ")";
}

}  // namespace

SweepStats run_sweep(const ScenarioConfig& cfg, const GridSpec& grid, std::ostream& out) {
    if (cfg.spec.n != 3)
        throw ConfigError("sweep: classifier comparison requires n = 3 (got n = " +
                          std::to_string(cfg.spec.n) + ")");

    std::vector<std::array<Rat, 2>> points;
    if (grid.random_points > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> dist(to_double(grid.lo), to_double(grid.hi));
        for (int j = 0; j < grid.random_points; ++j) {
            const double a = dist(rng), b = dist(rng);
            points.push_back({Rat(a), Rat(b)});
        }
    } else {
        const Rat span = grid.hi - grid.lo;
        for (int i = 0; i < grid.count; ++i)
            for (int j = 0; j < grid.count; ++j) {
                const Rat a = grid.count == 1 ? grid.lo : Rat(grid.lo + span * i / (grid.count - 1));
                const Rat b = grid.count == 1 ? grid.lo : Rat(grid.lo + span * j / (grid.count - 1));
                points.push_back({a, b});
            }
    }
    if (grid.axes_only) {
        std::erase_if(points,
                      [](const std::array<Rat, 2>& p) { return p[0] != 0 && p[1] != 0; });
    }

    SolverOptions opts;
    opts.t_max = cfg.t_max;
    opts.policy = cfg.policy;

    out << "z1,z2,predicted,simulated,agreement\n";
    SweepStats stats;
    for (const auto& p : points) {
        const BasinPrediction pred =
            classify_basin_3agent(p, {cfg.spec.d[0], cfg.spec.d[1]});

        std::set<std::pair<Rat, Rat>> predicted;
        for (const auto& lim : pred.limits) predicted.insert({lim[0], lim[1]});

        std::set<std::pair<Rat, Rat>> terminals;
        bool timed_out = false;
        const auto trajectories = simulate({p[0], p[1]}, cfg.spec, opts);
        for (const auto& traj : trajectories) {
            if (traj.terminal == TerminalKind::Timeout) {
                timed_out = true;
                continue;
            }
            terminals.insert({traj.z_end[0], traj.z_end[1]});
        }

        bool agree = !timed_out && !terminals.empty();
        for (const auto& t : terminals)
            if (!predicted.count(t)) agree = false;
        if (cfg.policy == BranchPolicy::Enumerate)
            for (const auto& t : predicted)
                if (!terminals.count(t)) agree = false;

        std::string pred_s, sim_s;
        for (const auto& q : predicted) {
            if (!pred_s.empty()) pred_s += '|';
            pred_s += pair_string(q.first, q.second);
        }
        if (timed_out) sim_s = "timeout";
        for (const auto& t : terminals) {
            if (!sim_s.empty()) sim_s += '|';
            sim_s += pair_string(t.first, t.second);
        }

        out << decimal_string(p[0]) << ',' << decimal_string(p[1]) << ',' << pred_s << ','
            << sim_s << ',' << (agree ? 1 : 0) << '\n';
        ++stats.total;
        if (agree) ++stats.agreed;
    }
    return stats;
}

// ---------------------------------------------------------------- report

namespace {

std::string bandwidth_line(int n, const std::vector<int>& per_agent) {
    if (n == 2) return "agents 1 and 2: " + std::to_string(per_agent[0]) + " bits";
    return "agents 2-" + std::to_string(n - 1) + ": " + std::to_string(per_agent[1]) +
           " bits, agents 1 and " + std::to_string(n) + ": " + std::to_string(per_agent[0]) +
           " bits";
}

// Width of the z_1 oscillation over the trailing 20% of a sampled run; the
// post-convergence chattering band.
std::optional<double> chatter_band(const fs::path& csv_path) {
    std::ifstream csv(csv_path);
    if (!csv) return std::nullopt;
    std::string header;
    if (!std::getline(csv, header)) return std::nullopt;

    std::vector<std::pair<double, double>> samples;  // (t, z_1)
    std::string line;
    while (std::getline(csv, line)) {
        const auto c1 = line.find(',');
        if (c1 == std::string::npos) continue;
        const auto c2 = line.find(',', c1 + 1);
        samples.emplace_back(std::stod(line.substr(0, c1)),
                             std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    if (samples.size() < 2) return std::nullopt;

    const double t_cut = samples.back().first * 0.8;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [t, z1] : samples)
        if (t >= t_cut) {
            lo = std::min(lo, z1);
            hi = std::max(hi, z1);
        }
    return hi - lo;
}

double num_or(const json& j, const char* exact_key, const char* dec_key) {
    (void)exact_key;
    return j.at(dec_key).get<double>();
}

}  // namespace

int run_report(const std::string& dir, std::ostream& out) {
    const fs::path base(dir);
    std::ifstream in(base / "summary.json");
    if (!in) throw ConfigError(dir + ": missing summary.json (not a run directory?)");
    json s;
    try {
        s = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(dir + ": unreadable summary.json: " + e.what());
    }

    const int n = s.at("spec").at("n").get<int>();
    const std::string solver = s.at("solver").at("name").get<std::string>();
    const std::string policy = s.at("solver").at("policy").get<std::string>();
    const int code = s.at("exit_code").get<int>();
    const auto& term = s.at("terminal");
    const std::string term_class = term.at("class").get<std::string>();

    out << "run summary (" << dir << ")\n";
    out << "  agents: " << n << ", solver: " << solver << " (policy " << policy << ")\n";
    out << "  terminal: " << term_class << ", exit code " << code << "\n";
    if (term.at("timed_out").get<bool>() || s.value("event_cap_exceeded", false)) {
        out << "  NOT CONVERGED: the run hit t_max (or the event cap) before reaching"
               " an equilibrium\n";
    }
    if (term.contains("t_decimal")) {
        out << "  t_end: " << fmt_double(term.at("t_decimal").get<double>());
        if (!term.at("t").is_null())
            out << " (= " << term.at("t").get<std::string>() << ")";
        out << "\n";
    }
    if (s.contains("analysis")) {
        const auto& an = s.at("analysis");
        out << "  time to E1: " << fmt_double(num_or(an, "time_to_E1", "time_to_E1_decimal"))
            << ", time to E2: " << fmt_double(num_or(an, "time_to_E2", "time_to_E2_decimal"))
            << "\n";
        out << "  sliding duration: "
            << fmt_double(num_or(an, "sliding_duration", "sliding_duration_decimal"))
            << " (fraction " << fmt_double(an.at("sliding_fraction").get<double>()) << ")\n";
        out << "  events: " << an.at("event_count").get<std::size_t>() << "\n";
        out << "  terminal V: "
            << fmt_double(num_or(an, "terminal_V", "terminal_V_decimal")) << "\n";
    }

    const auto& bb = s.at("bit_budget");
    out << "  bandwidth: " << bandwidth_line(n, bb.at("per_agent").get<std::vector<int>>())
        << "\n";
    out << "  derived total: " << bb.at("derived_total").get<int>()
        << " bits; stated total (4n-2): " << bb.at("stated_total").get<int>()
        << " bits" << (bb.at("totals_agree").get<bool>() ? "" : " (mismatch)") << "\n";

    if (solver != "event") {
        if (const auto band = chatter_band(base / "trajectory.csv"))
            out << "  z_1 chattering band (last 20% of run): " << fmt_double(*band) << "\n";
    }
    return code;
}

const char* to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::Event: return "event";
        case SolverKind::Euler: return "euler";
        case SolverKind::Hysteresis: return "hysteresis";
    }
    return "?";
}

}  // namespace qform::cli
