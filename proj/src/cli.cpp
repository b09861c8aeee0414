#include "gfm/cli.hpp"

#include "gfm/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace gfm {
namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string> kTasks{"transform", "check-symbol", "tl-norm", "kernel-decay", "bound-sweep", "selftest"};
const std::set<std::string> kConditions{"marcinkiewicz", "hormander-mihlin", "weak-marcinkiewicz"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown field \"" + key + "\" in " + where);
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& what) {
    if (!j.is_string()) throw ConfigError(what + " must be a string");
    return j.get<std::string>();
}

const json& array(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a nonempty array");
    return j;
}

GroupDescriptor parse_group(const json& j) {
    reject_unknown(j, {"kind", "dim"}, "group");
    if (!j.contains("kind")) throw ConfigError("group.kind is required");
    const int dim = j.contains("dim") ? integer(j["dim"], "group.dim") : 1;
    return make_group(text(j["kind"], "group.kind"), dim);
}

NormSpec parse_spec(const json& j) {
    reject_unknown(j, {"r", "p", "q"}, "specs[]");
    for (const char* k : {"r", "p", "q"})
        if (!j.contains(k)) throw ConfigError(std::string("specs[].") + k + " is required");
    NormSpec s{number(j["r"], "specs[].r"), number(j["p"], "specs[].p"), number(j["q"], "specs[].q")};
    s.validate();
    return s;
}

json spec_to_json(const NormSpec& s) { return {{"r", s.r}, {"p", s.p}, {"q", s.q}}; }

json point_to_json(const GroupPoint& p) { return json::array({p.c[0], p.c[1], p.c[2]}); }

bool needs_symbol(const std::string& task) {
    return task == "check-symbol" || task == "kernel-decay" || task == "bound-sweep";
}

json make_echo(const ExperimentConfig& c) {
    json e;
    e["task"] = c.task;
    e["group"] = {{"kind", c.group.is_su2() ? "su2" : "torus"}, {"dim", c.group.dim}};
    e["cutoffs"] = c.cutoffs;
    e["symbols"] = json::array();
    for (const auto& s : c.symbols) e["symbols"].push_back(profile_to_json(s));
    e["specs"] = json::array();
    for (const auto& s : c.specs) e["specs"].push_back(spec_to_json(s));
    e["seed"] = c.seed;
    e["tolerances"] = c.tolerances;
    e["condition"] = c.condition;
    e["order"] = c.order ? json(*c.order) : json(nullptr);
    e["functions"] = c.functions;
    e["oversample"] = c.oversample;
    json types = json::array();
    for (auto t : c.ensemble.types) types.push_back(ensemble_name(t));
    e["ensemble"] = {{"types", types}, {"count", c.ensemble.count}};
    e["kernel"] = {{"c", c.kernel.c}, {"z", point_to_json(c.kernel.z)}, {"windows", c.kernel.windows}};
    return e;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const ReportCell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    const auto& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

DualPtr slice_for(const ExperimentConfig& cfg, double cutoff) { return enumerate_dual(cfg.group, cutoff); }

std::vector<FourierCoefficients> gaussian_members(const ExperimentConfig& cfg, const DualPtr& dual,
                                                  const LPPartition& partition) {
    EnsembleConfig e;
    e.types = {EnsembleType::GaussianCoefficients};
    e.count = cfg.functions;
    e.seed = cfg.seed;
    return build_ensemble(e, identity_symbol(dual), partition);
}

void task_selftest(const ExperimentConfig& cfg, RunResult& res) {
    res.table.columns = {"group", "cutoff", "member", "roundtrip_error", "plancherel_residual"};
    const LPPartition partition = build_partition();
    double worst_roundtrip = 0.0, worst_plancherel = 0.0;
    for (double cutoff : cfg.cutoffs) {
        const auto dual = slice_for(cfg, cutoff);
        const auto grid = make_grid(cfg.group, dual->max_label(), cfg.oversample);
        const auto members = gaussian_members(cfg, dual, partition);
        for (std::size_t m = 0; m < members.size(); ++m) {
            const double rt = roundtrip_error(members[m], grid);
            const double pl = plancherel_residual(members[m], grid);
            res.table.rows.push_back({group_name(cfg.group), cutoff, as_int(m), rt, pl});
            worst_roundtrip = std::max(worst_roundtrip, rt);
            worst_plancherel = std::max(worst_plancherel, pl);
        }
    }
    res.summary["roundtrip_error"] = worst_roundtrip;
    res.summary["plancherel_residual"] = worst_plancherel;
    if (worst_roundtrip > cfg.tolerances.at("roundtrip"))
        res.violations.push_back("roundtrip: " + format_double(worst_roundtrip));
    if (worst_plancherel > cfg.tolerances.at("plancherel"))
        res.violations.push_back("plancherel: " + format_double(worst_plancherel));
}

void task_transform(const ExperimentConfig& cfg, RunResult& res) {
    res.table.columns = {"group", "cutoff", "member", "irrep", "dim", "frobenius_norm"};
    const LPPartition partition = build_partition();
    double worst = 0.0;
    for (double cutoff : cfg.cutoffs) {
        const auto dual = slice_for(cfg, cutoff);
        const auto grid = make_grid(cfg.group, dual->max_label(), cfg.oversample);
        const auto members = gaussian_members(cfg, dual, partition);
        for (std::size_t m = 0; m < members.size(); ++m) {
            const auto fhat = forward_transform(synthesize(members[m], grid), dual);
            for (std::size_t i = 0; i < dual->size(); ++i)
                res.table.rows.push_back({group_name(cfg.group), cutoff, as_int(m), label_string(cfg.group, (*dual)[i]),
                                          std::int64_t{(*dual)[i].dim}, fhat.block(i).norm()});
            worst = std::max(worst, roundtrip_error(members[m], grid));
        }
    }
    res.summary["roundtrip_error"] = worst;
    if (worst > cfg.tolerances.at("roundtrip")) res.violations.push_back("roundtrip: " + format_double(worst));
}

CheckReport run_checker(const ExperimentConfig& cfg, const Symbol& sigma, const LPPartition& partition,
                        double threshold) {
    if (cfg.condition == "marcinkiewicz") {
        std::optional<int> kappa;
        if (cfg.order) kappa = static_cast<int>(*cfg.order);
        return check_marcinkiewicz(sigma, kappa, threshold);
    }
    if (cfg.condition == "hormander-mihlin") return check_hormander_mihlin(sigma, partition, cfg.order, threshold);
    const int s0 = cfg.order ? static_cast<int>(*cfg.order) : 1;
    return check_weak_marcinkiewicz(sigma, s0, threshold);
}

void task_check_symbol(const ExperimentConfig& cfg, RunResult& res) {
    res.table.columns = {"group", "symbol", "condition", "cutoff", "constant",    "order",
                         "value", "headline", "worst_irrep", "valid_irreps", "passed"};
    const LPPartition partition = build_partition();
    const double threshold = cfg.tolerances.at("divergence");
    json trend = json::array();
    for (const auto& profile : cfg.symbols) {
        json headlines = json::array();
        for (double cutoff : cfg.cutoffs) {
            const Symbol sigma = build_spectral_symbol(profile, slice_for(cfg, cutoff));
            const CheckReport rep = run_checker(cfg, sigma, partition, threshold);
            for (const auto& c : rep.constants)
                res.table.rows.push_back({group_name(cfg.group), profile.name(), rep.condition, cutoff, c.name,
                                          std::int64_t{c.order}, c.value, rep.headline, rep.worst_irrep,
                                          as_int(rep.valid_irreps), std::string(rep.passed ? "true" : "false")});
            headlines.push_back({{"cutoff", cutoff}, {"headline", rep.headline}, {"passed", rep.passed}});
            if (!rep.passed)
                res.violations.push_back("divergence: " + profile.name() + " at cutoff " + format_double(cutoff) +
                                         " has headline " + format_double(rep.headline));
        }
        trend.push_back({{"symbol", profile.name()}, {"headlines", headlines}});
    }
    res.summary["trend"] = trend;
}

void task_tl_norm(const ExperimentConfig& cfg, RunResult& res) {
    res.table.columns = {"group", "cutoff", "member", "ensemble", "r", "p", "q", "norm", "kind"};
    const LPPartition partition = build_partition();
    for (double cutoff : cfg.cutoffs) {
        const auto dual = slice_for(cfg, cutoff);
        const Symbol sigma = cfg.symbols.empty() ? identity_symbol(dual) : build_spectral_symbol(cfg.symbols[0], dual);
        const auto grid = make_grid(cfg.group, dual->max_label(), cfg.oversample);
        const auto members = build_ensemble(cfg.ensemble, sigma, partition);
        for (std::size_t m = 0; m < members.size(); ++m) {
            const LPDecomposition dec(members[m], partition, grid);
            const std::string type = ensemble_name(cfg.ensemble.types[m / static_cast<std::size_t>(cfg.ensemble.count)]);
            for (const auto& s : cfg.specs) {
                const bool weak = s.p == 1.0;
                res.table.rows.push_back({group_name(cfg.group), cutoff, as_int(m), type, s.r, s.p, s.q,
                                          weak ? dec.weak_norm(s) : dec.norm(s),
                                          std::string(weak ? "weak" : "strong")});
            }
        }
    }
}

void task_kernel_decay(const ExperimentConfig& cfg, RunResult& res) {
    res.table.columns = {"group", "symbol", "cutoff", "window", "distance", "c", "integral", "log2_integral"};
    const LPPartition partition = build_partition();
    const double cutoff = cfg.cutoffs.front();
    const auto dual = slice_for(cfg, cutoff);
    const Symbol sigma = build_spectral_symbol(cfg.symbols.front(), dual);
    const auto grid = make_grid(cfg.group, dual->max_label(), cfg.oversample);
    const double distance = geometric_weights(cfg.group, cfg.kernel.z).distance;
    std::vector<double> xs, ys;
    for (int ell : cfg.kernel.windows) {
        const double v = kernel_difference_integral(window_kernel(sigma, partition, ell), cfg.kernel.z, cfg.kernel.c, grid);
        res.table.rows.push_back({group_name(cfg.group), cfg.symbols.front().name(), cutoff, std::int64_t{ell},
                                  distance, cfg.kernel.c, v, std::log2(v)});
        xs.push_back(ell);
        ys.push_back(std::log2(v));
    }
    const double slope = least_squares_slope(xs, ys);
    res.summary["slope"] = slope;
    if (!(slope <= cfg.tolerances.at("slope"))) res.violations.push_back("slope: " + format_double(slope));
}

void task_bound_sweep(const ExperimentConfig& cfg, RunResult& res) {
    res.table.columns = {"group", "symbol", "r", "p", "q", "cutoff", "max_ratio", "argmax_member", "seed"};
    const double max_variation = cfg.tolerances.at("variation");
    json per_spec = json::array();
    for (const auto& profile : cfg.symbols) {
        const auto sweeps = boundedness_sweep(cfg.group, profile, cfg.specs, cfg.cutoffs, cfg.ensemble, cfg.oversample);
        for (const auto& s : sweeps) {
            for (const auto& row : s.rows)
                res.table.rows.push_back({s.group, s.symbol, s.spec.r, s.spec.p, s.spec.q, row.cutoff, row.max_ratio,
                                          std::int64_t{row.argmax_member}, static_cast<std::int64_t>(cfg.seed)});
            const double variation = sweep_variation(s);
            per_spec.push_back({{"symbol", s.symbol},
                                {"spec", spec_to_json(s.spec)},
                                {"variation", variation},
                                {"strictly_increasing", sweep_strictly_increasing(s)}});
            if (variation > max_variation)
                res.violations.push_back("variation: " + s.symbol + " at (" + format_double(s.spec.r) + "," +
                                         format_double(s.spec.p) + "," + format_double(s.spec.q) + ") is " +
                                         format_double(variation));
        }
    }
    res.summary["sweeps"] = per_spec;
}

void execute_into(const ExperimentConfig& cfg, RunResult& res) {
    res.table = {};
    res.summary = json::object();
    res.violations.clear();
    if (cfg.task == "selftest") task_selftest(cfg, res);
    else if (cfg.task == "transform") task_transform(cfg, res);
    else if (cfg.task == "check-symbol") task_check_symbol(cfg, res);
    else if (cfg.task == "tl-norm") task_tl_norm(cfg, res);
    else if (cfg.task == "kernel-decay") task_kernel_decay(cfg, res);
    else if (cfg.task == "bound-sweep") task_bound_sweep(cfg, res);
    else throw ConfigError("unknown task \"" + cfg.task + "\"");
    res.code = res.violations.empty() ? ExitCode::Ok : ExitCode::ToleranceViolated;
}

void append_failed_row(ReportTable& table) {
    if (table.columns.empty()) table.columns = {"status"};
    std::vector<ReportCell> row(table.columns.size(), std::string());
    row[0] = std::string("failed");
    table.rows.push_back(std::move(row));
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("cannot write " + path.string());
}

}  // namespace

std::string format_csv(const ReportTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + csv_field(table.columns[c]);
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw PreconditionError("report row width does not match the header");
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_field(row[c]);
        out += '\n';
    }
    return out;
}

json report_to_json(const ReportTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        for (const auto& cell : row) std::visit([&](const auto& v) { r.push_back(v); }, cell);
        rows.push_back(std::move(r));
    }
    return {{"columns", table.columns}, {"rows", rows}};
}

ReportTable report_from_json(const json& j) {
    reject_unknown(j, {"columns", "rows"}, "report");
    if (!j.contains("columns") || !j.contains("rows")) throw ConfigError("report needs columns and rows");
    ReportTable t;
    for (const auto& c : j["columns"]) t.columns.push_back(text(c, "report column"));
    for (const auto& r : j["rows"]) {
        if (!r.is_array() || r.size() != t.columns.size()) throw ConfigError("report row width does not match the header");
        std::vector<ReportCell> row;
        for (const auto& cell : r) {
            if (cell.is_string()) row.emplace_back(cell.get<std::string>());
            else if (cell.is_number_integer()) row.emplace_back(cell.get<std::int64_t>());
            else if (cell.is_number()) row.emplace_back(cell.get<double>());
            else throw ConfigError("report cells must be strings or numbers");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void emit_report(const ReportTable& table, const std::filesystem::path& path, ReportFormat format) {
    if (table.rows.empty()) throw PreconditionError("emit_report needs at least one row");
    write_text(path, format == ReportFormat::Csv ? format_csv(table) : report_to_json(table).dump(2) + "\n");
}

std::map<std::string, double> default_tolerances(const std::string& task) {
    if (task == "selftest") return {{"plancherel", 1e-10}, {"roundtrip", 1e-10}};
    if (task == "transform") return {{"roundtrip", 1e-10}};
    if (task == "check-symbol") return {{"divergence", kInf}};
    if (task == "kernel-decay") return {{"slope", kInf}};
    if (task == "bound-sweep") return {{"variation", kInf}};
    return {};
}

ExperimentConfig parse_config(const json& j) {
    reject_unknown(j, {"task", "group", "cutoffs", "l_max", "symbols", "specs", "seed", "output", "tolerances",
                       "condition", "order", "functions", "oversample", "ensemble", "kernel"},
                   "config");
    ExperimentConfig c;
    if (!j.contains("task")) throw ConfigError("task is required");
    c.task = text(j["task"], "task");
    if (!kTasks.count(c.task)) throw ConfigError("unknown task \"" + c.task + "\"");
    if (!j.contains("group")) throw ConfigError("group is required");
    c.group = parse_group(j["group"]);

    if (j.contains("cutoffs") == j.contains("l_max")) throw ConfigError("exactly one of cutoffs and l_max is required");
    if (j.contains("cutoffs")) {
        for (const auto& v : array(j["cutoffs"], "cutoffs")) {
            const double x = number(v, "cutoffs[]");
            if (!(x >= 1.0) || !std::isfinite(x)) throw ConfigError("cutoffs must be finite and at least 1");
            c.cutoffs.push_back(x);
        }
    } else {
        if (!c.group.is_su2()) throw ConfigError("l_max is only defined for su2");
        for (const auto& v : array(j["l_max"], "l_max")) {
            const double l = number(v, "l_max[]");
            if (!(l >= 0.0) || std::floor(2.0 * l) != 2.0 * l || 2.0 * l > kMaxTwiceSpin)
                throw ConfigError("l_max entries must be half-integers in [0, 64]");
            c.cutoffs.push_back(su2_bracket(static_cast<int>(2.0 * l)));
        }
    }
    for (std::size_t i = 1; i < c.cutoffs.size(); ++i)
        if (!(c.cutoffs[i] > c.cutoffs[i - 1])) throw ConfigError("cutoffs must be strictly ascending");

    if (j.contains("symbols"))
        for (const auto& s : array(j["symbols"], "symbols")) c.symbols.push_back(profile_from_json(s));
    if (needs_symbol(c.task) && c.symbols.empty()) throw ConfigError("task " + c.task + " needs symbols");
    if (j.contains("specs"))
        for (const auto& s : array(j["specs"], "specs")) c.specs.push_back(parse_spec(s));
    if ((c.task == "tl-norm" || c.task == "bound-sweep") && c.specs.empty())
        throw ConfigError("task " + c.task + " needs specs");

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
            throw ConfigError("seed must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
        if (c.seed > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw ConfigError("seed must fit in 63 bits");
    }
    if (j.contains("output")) c.output = text(j["output"], "output");

    c.tolerances = default_tolerances(c.task);
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) throw ConfigError("tolerances must be an object");
        for (const auto& [name, v] : j["tolerances"].items()) {
            if (!c.tolerances.count(name)) throw ConfigError("unknown tolerance \"" + name + "\" for task " + c.task);
            c.tolerances[name] = number(v, "tolerances." + name);
        }
    }

    if (j.contains("condition")) c.condition = text(j["condition"], "condition");
    if (!kConditions.count(c.condition)) throw ConfigError("unknown condition \"" + c.condition + "\"");
    if (j.contains("order") && !j["order"].is_null()) c.order = number(j["order"], "order");
    if (j.contains("functions")) c.functions = integer(j["functions"], "functions");
    if (c.functions < 1) throw ConfigError("functions must be positive");
    if (j.contains("oversample")) c.oversample = number(j["oversample"], "oversample");
    if (!(c.oversample >= 1.0) || !std::isfinite(c.oversample)) throw ConfigError("oversample must be at least 1");

    c.ensemble.seed = c.seed;
    if (j.contains("ensemble")) {
        const json& e = j["ensemble"];
        reject_unknown(e, {"types", "count"}, "ensemble");
        if (e.contains("types")) {
            c.ensemble.types.clear();
            for (const auto& t : array(e["types"], "ensemble.types"))
                c.ensemble.types.push_back(ensemble_from_name(text(t, "ensemble.types[]")));
        }
        if (e.contains("count")) c.ensemble.count = integer(e["count"], "ensemble.count");
        if (c.ensemble.count < 1) throw ConfigError("ensemble.count must be positive");
    }

    if (j.contains("kernel")) {
        const json& k = j["kernel"];
        reject_unknown(k, {"c", "z", "windows"}, "kernel");
        if (k.contains("c")) c.kernel.c = number(k["c"], "kernel.c");
        if (k.contains("z")) {
            const json& z = k["z"];
            if (!z.is_array() || z.size() != 3) throw ConfigError("kernel.z must hold three coordinates");
            for (int i = 0; i < 3; ++i) c.kernel.z.c[i] = number(z[i], "kernel.z[]");
        }
        if (k.contains("windows"))
            for (const auto& w : array(k["windows"], "kernel.windows")) c.kernel.windows.push_back(integer(w, "kernel.windows[]"));
    }
    if (c.task == "kernel-decay") {
        if (c.cutoffs.size() != 1) throw ConfigError("kernel-decay takes a single cutoff");
        if (c.symbols.size() != 1) throw ConfigError("kernel-decay takes a single symbol");
        if (c.kernel.windows.size() < 2) throw ConfigError("kernel-decay needs at least two windows");
        if (!(c.kernel.c > 0.0)) throw ConfigError("kernel.c must be positive");
    }
    c.echo = make_echo(c);
    return c;
}

void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     const std::vector<std::pair<std::string, double>>& tolerances) {
    if (seed) {
        if (*seed > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw ConfigError("seed must fit in 63 bits");
        cfg.seed = *seed;
        cfg.ensemble.seed = *seed;
    }
    for (const auto& [name, value] : tolerances) {
        if (!cfg.tolerances.count(name)) throw ConfigError("unknown tolerance \"" + name + "\" for task " + cfg.task);
        cfg.tolerances[name] = value;
    }
    cfg.echo = make_echo(cfg);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunResult execute(const ExperimentConfig& cfg) {
    RunResult res;
    execute_into(cfg, res);
    return res;
}

ExitCode run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "gfm: cannot create " << out_dir.string() << ": " << ec.message() << "\n";
        return ExitCode::ConfigFailure;
    }

    RunResult res;
    std::string status = "ok";
    try {
        execute_into(cfg, res);
        if (res.code == ExitCode::ToleranceViolated) status = "failed";
    } catch (const std::exception& e) {
        res.code = ExitCode::ConfigFailure;
        res.violations.push_back(std::string("error: ") + e.what());
        status = "error";
    }
    if (res.code != ExitCode::Ok) {
        append_failed_row(res.table);
        for (const auto& v : res.violations) std::cerr << "gfm: " << v << "\n";
    }

    json manifest;
    manifest["tool"] = "gfm";
    manifest["version"] = kLibraryVersion;
    manifest["task"] = cfg.task;
    manifest["config"] = cfg.echo;
    manifest["seed"] = cfg.seed;
    manifest["inputs_digest"] = fnv1a_hex(cfg.echo.dump());
    manifest["status"] = status;
    manifest["exit_code"] = static_cast<int>(res.code);
    manifest["rows"] = res.table.rows.size();
    manifest["summary"] = res.summary;
    manifest["violations"] = res.violations;
    manifest["report"] = "report.csv";

    try {
        emit_report(res.table, out_dir / "report.csv", ReportFormat::Csv);
        write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_text(out_dir / "timing.json", json{{"wall_seconds", wall}}.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "gfm: " << e.what() << "\n";
        return ExitCode::ConfigFailure;
    }
    return res.code;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Fourier multipliers on compact groups: config-driven experiments"};
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::vector<std::string> tols;
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--seed", seed, "overrides the config seed");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--tol", tols, "tolerance override NAME=VALUE")->take_all();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::ConfigFailure);
    }

    ExperimentConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read " + config_path);
        const json j = json::parse(in);
        cfg = parse_config(j);
        std::vector<std::pair<std::string, double>> overrides;
        for (const auto& t : tols) {
            const auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("--tol expects NAME=VALUE, got \"" + t + "\"");
            const std::string value = t.substr(eq + 1);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != value.size()) throw ConfigError("--tol value is not a number: \"" + value + "\"");
            overrides.emplace_back(t.substr(0, eq), v);
        }
        apply_overrides(cfg, seed, overrides);
    } catch (const json::exception& e) {
        std::cerr << "gfm: config error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::ConfigFailure);
    } catch (const std::exception& e) {
        std::cerr << "gfm: config error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::ConfigFailure);
    }
    return static_cast<int>(run(cfg, out_dir.empty() ? std::filesystem::path(cfg.output) : std::filesystem::path(out_dir)));
}

}  // namespace gfm
