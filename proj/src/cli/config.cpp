#include "config.hpp"

#include "pite/engine.hpp"
#include "pite/errors.hpp"
#include "pite/io.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pite::cli {

namespace {

constexpr double pi = 3.14159265358979323846;
using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw config_error("config: " + msg); }

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(where + ": expected a JSON object");
    for (const auto& item : obj.items())
        if (allowed.find(item.key()) == allowed.end())
            fail(where + ": unknown key '" + item.key() + "'");
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where + ": missing key '" + key + "'");
    if (!obj[key].is_number()) fail(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where + ": missing key '" + key + "'");
    if (!obj[key].is_number_integer()) fail(where + "." + key + ": expected an integer");
    return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where + ": missing key '" + key + "'");
    if (!obj[key].is_string()) fail(where + "." + key + ": expected a string");
    return obj[key].get<std::string>();
}

// A number, or a string "<x>pi" meaning x*pi (e.g. "0.5pi", "5pi").
double pi_value(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_pi_literal(v.get<std::string>(), where);
    fail(where + ": expected a number or '<x>pi' string");
}

void check_file_exists(const std::string& path, const std::string& where) {
    if (!std::filesystem::exists(path)) fail(where + ": file does not exist: " + path);
}

HamiltonianConfig parse_hamiltonian(const json& obj) {
    HamiltonianConfig hc;
    const std::string where = "hamiltonian";
    const std::string type = get_string(obj, where, "type");
    if (type == "heisenberg") {
        require_keys(obj, where, {"type", "n", "J", "h"});
        hc.kind = HamiltonianConfig::Kind::heisenberg;
        hc.n = get_int(obj, where, "n");
        if (hc.n < 2) fail(where + ".n: need at least 2 sites");
        hc.J = get_number(obj, where, "J");
        hc.h = get_number(obj, where, "h");
    } else if (type == "double_well") {
        require_keys(obj, where, {"type", "n_qubits", "L", "d", "delta", "V0"});
        hc.kind = HamiltonianConfig::Kind::double_well;
        hc.n_qubits = get_int(obj, where, "n_qubits");
        if (hc.n_qubits < 3) fail(where + ".n_qubits: need at least 3");
        hc.L = get_number(obj, where, "L");
        hc.d = get_number(obj, where, "d");
        hc.delta = get_number(obj, where, "delta");
        hc.V0 = get_number(obj, where, "V0");
        if (!(hc.L > hc.d && hc.d > 0.0)) fail(where + ": need L > d > 0");
        if (hc.V0 < 0.0) fail(where + ".V0: must be >= 0");
    } else if (type == "spectrum_file") {
        require_keys(obj, where, {"type", "path"});
        hc.kind = HamiltonianConfig::Kind::spectrum_file;
        hc.path = get_string(obj, where, "path");
        check_file_exists(hc.path, where + ".path");
    } else {
        fail(where + ".type: expected heisenberg | double_well | spectrum_file, got '" + type +
             "'");
    }
    return hc;
}

InitialStateConfig parse_initial_state(const json& obj) {
    InitialStateConfig ic;
    ic.explicit_block = true;
    const std::string where = "initial_state";
    const std::string type = get_string(obj, where, "type");
    if (type == "uniform") {
        require_keys(obj, where, {"type"});
        ic.kind = InitialStateConfig::Kind::uniform;
    } else if (type == "weights_file") {
        require_keys(obj, where, {"type", "path"});
        ic.kind = InitialStateConfig::Kind::weights_file;
        ic.path = get_string(obj, where, "path");
        check_file_exists(ic.path, where + ".path");
    } else {
        fail(where + ".type: expected uniform | weights_file, got '" + type + "'");
    }
    return ic;
}

ScheduleConfig parse_schedule(const json& obj) {
    ScheduleConfig sc;
    const std::string where = "schedule";
    require_keys(obj, where, {"type", "s_dtau_min", "s_dtau_max", "K", "kappa_bar"});
    const std::string type = get_string(obj, where, "type");
    if (type == "constant")
        sc.kind = ScheduleKind::constant;
    else if (type == "linear")
        sc.kind = ScheduleKind::linear;
    else if (type == "exponential")
        sc.kind = ScheduleKind::exponential;
    else
        fail(where + ".type: expected constant | linear | exponential, got '" + type + "'");

    sc.K = get_int(obj, where, "K");
    if (sc.K < 1) fail(where + ".K: must be >= 1");
    if (sc.kind == ScheduleKind::linear && sc.K < 2) fail(where + ".K: linear needs K >= 2");

    if (!obj.contains("s_dtau_max")) fail(where + ": missing key 's_dtau_max'");
    if (obj["s_dtau_max"].is_string() && obj["s_dtau_max"].get<std::string>() == "auto")
        sc.s_dtau_max_auto = true;
    else
        sc.s_dtau_max = pi_value(obj["s_dtau_max"], where + ".s_dtau_max");

    if (obj.contains("s_dtau_min"))
        sc.s_dtau_min = pi_value(obj["s_dtau_min"], where + ".s_dtau_min");
    else if (sc.kind == ScheduleKind::constant)
        sc.s_dtau_min = sc.s_dtau_max; // constant: the single step value
    else
        fail(where + ": missing key 's_dtau_min'");

    if (!(sc.s_dtau_min >= 0.0)) fail(where + ".s_dtau_min: must be >= 0");
    if (!sc.s_dtau_max_auto) {
        if (!(sc.s_dtau_max >= 0.0)) fail(where + ".s_dtau_max: must be >= 0");
        if (sc.kind == ScheduleKind::constant && sc.s_dtau_min != sc.s_dtau_max)
            fail(where + ": a constant schedule requires s_dtau_min == s_dtau_max");
        if (sc.kind != ScheduleKind::constant && sc.s_dtau_max < sc.s_dtau_min)
            fail(where + ": s_dtau_max must be >= s_dtau_min");
    }

    if (obj.contains("kappa_bar")) {
        sc.has_kappa_bar = true;
        sc.kappa_bar = get_number(obj, where, "kappa_bar");
        if (!(sc.kappa_bar > 0.0)) fail(where + ".kappa_bar: must be > 0");
    } else if (sc.kind == ScheduleKind::exponential) {
        fail(where + ": exponential schedule requires 'kappa_bar'");
    }
    return sc;
}

SweepConfig parse_sweep(const json& obj, const ScheduleConfig& sched) {
    SweepConfig sw;
    const std::string where = "sweep";
    require_keys(obj, where, {"param", "from", "to", "points", "spacing"});
    sw.param = get_string(obj, where, "param");
    const std::set<std::string> params = {"s_dtau_max", "s_dtau_min", "K", "alpha", "kappa_bar"};
    if (params.find(sw.param) == params.end())
        fail(where + ".param: expected one of s_dtau_max | s_dtau_min | K | alpha | kappa_bar, "
                     "got '" +
             sw.param + "'");
    if (!obj.contains("from")) fail(where + ": missing key 'from'");
    if (!obj.contains("to")) fail(where + ": missing key 'to'");
    sw.from = pi_value(obj["from"], where + ".from");
    sw.to = pi_value(obj["to"], where + ".to");
    sw.points = get_int(obj, where, "points");
    if (sw.points < 1) fail(where + ".points: must be >= 1");
    if (sw.from > sw.to) fail(where + ": from > to");
    const std::string spacing =
        obj.contains("spacing") ? get_string(obj, where, "spacing") : std::string("linear");
    if (spacing == "linear")
        sw.log_spacing = false;
    else if (spacing == "log")
        sw.log_spacing = true;
    else
        fail(where + ".spacing: expected linear | log, got '" + spacing + "'");
    if (sw.log_spacing && !(sw.from > 0.0)) fail(where + ".from: log spacing needs from > 0");

    if (sw.param == "kappa_bar" && sched.kind != ScheduleKind::exponential)
        fail(where + ": kappa_bar sweeps require an exponential schedule");
    if (sw.param == "alpha" && (sw.from < 0.0 || sw.to > 1.0))
        fail(where + ": alpha sweeps must stay inside [0, 1]");
    if (sw.param == "K" && sw.from < 1.0) fail(where + ": K sweeps must start at K >= 1");
    if ((sw.param == "s_dtau_max" || sw.param == "s_dtau_min") && sw.from < 0.0)
        fail(where + ": step-size sweeps must be nonnegative");
    return sw;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    require_keys(root, "top level",
                 {"hamiltonian", "initial_state", "schedule", "gamma", "alpha", "branch_n",
                  "sweep", "seed", "output"});

    RunConfig cfg;
    if (!root.contains("hamiltonian")) fail("missing key 'hamiltonian'");
    cfg.hamiltonian = parse_hamiltonian(root["hamiltonian"]);
    if (root.contains("initial_state")) cfg.initial_state = parse_initial_state(root["initial_state"]);
    if (!root.contains("schedule")) fail("missing key 'schedule'");
    cfg.schedule = parse_schedule(root["schedule"]);

    if (root.contains("gamma")) {
        if (!root["gamma"].is_number()) fail("gamma: expected a number");
        cfg.gamma = root["gamma"].get<double>();
    }
    try {
        gamma_params(cfg.gamma); // full validation, including the singular point
    } catch (const std::invalid_argument& e) {
        fail(std::string("gamma: ") + e.what());
    }

    if (root.contains("alpha")) {
        if (!root["alpha"].is_number()) fail("alpha: expected a number");
        cfg.alpha = root["alpha"].get<double>();
        if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) fail("alpha: must lie in [0, 1]");
    }
    if (root.contains("branch_n")) {
        if (!root["branch_n"].is_number_integer()) fail("branch_n: expected an integer");
        cfg.branch_n = root["branch_n"].get<int>();
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer() || root["seed"].get<long long>() < 0)
            fail("seed: expected a nonnegative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("output")) cfg.output = get_string(root, "top level", "output");
    if (root.contains("sweep")) cfg.sweep = parse_sweep(root["sweep"], cfg.schedule);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    return parse_config(read_text_file(path));
}

double parse_pi_literal(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        if (text.size() > 2 && text.substr(text.size() - 2) == "pi") {
            const double x = std::stod(text.substr(0, text.size() - 2), &used);
            if (used == text.size() - 2) return x * pi;
        } else {
            const double x = std::stod(text, &used);
            if (used == text.size()) return x;
        }
    } catch (const std::exception&) {
    }
    throw config_error("config: " + where + ": expected a number or '<x>pi', got '" + text + "'");
}

} // namespace pite::cli
