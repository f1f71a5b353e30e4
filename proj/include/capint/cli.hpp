#pragma once

// Command-line front end. `run` is the whole program; tools/capint.cpp only
// forwards argv to it.
//
// Exit status: 0 when every verdict passes (inconclusive allowed unless
// --strict), 1 on any fail verdict, 2 on configuration or input errors.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capint/io.hpp"

namespace capint::cli {

inline constexpr const char* kVersion = "0.1.0";

enum Exit { Ok = 0, Failed = 1, ConfigError = 2 };

struct Run {
    SpecId id;
    CheckParams params;
};

struct RunConfig {
    std::vector<Run> runs;
    std::vector<std::string> inputs;
    std::optional<std::uint64_t> seed;
    std::size_t size = 100;
    std::optional<ValueLaw> law;
    std::uint64_t calibration_seed = 1;
    std::size_t calibration_size = 100;
    std::optional<double> constant;
    bool strict = false;
};

// Parameter block used for each spec by `verify --all`.
inline std::vector<Run> default_runs() {
    std::vector<Run> runs;
    for (const auto& info : catalog()) {
        CheckParams q;
        q.n = 1;
        q.L = info.uses_capacity ? 4 : 5;
        q.beta = 0.5;
        q.gamma = 0.25;
        q.p = 2.0;
        q.alpha = 0.3;
        q.s = 2.0;
        switch (info.id) {
            case SpecId::COR14i: q.beta = 0.8; q.gamma = 0.4; q.p = 1.0; break;
            case SpecId::COR14ii: q.beta = 0.8; q.gamma = 0.4; break;
            case SpecId::LEM22:
            case SpecId::LEM23: q.beta = 1.0; q.gamma = 0.5; break;
            case SpecId::LEM26:
            case SpecId::COR19i:
            case SpecId::COR19ii: q.gamma = 0.1; q.p = 1.0; break;
            default: break;
        }
        runs.push_back({info.id, normalize(info.id, q)});
    }
    return runs;
}

// ---------------------------------------------------------------------------
// Config (de)serialization

inline Json to_json(const RunConfig& c) {
    Json runs = Json::array();
    for (const auto& r : c.runs) runs.push_back(Json{{"spec", to_string(r.id)}, {"params", capint::to_json(r.params)}});
    Json j;
    j["command"] = "verify";
    j["runs"] = runs;
    j["inputs"] = c.inputs;
    j["ensemble"] = Json{{"seed", c.seed ? Json(*c.seed) : Json(nullptr)},
                         {"size", c.size},
                         {"law", c.law ? Json(std::string(to_string(*c.law))) : Json("mixed")}};
    j["calibration"] = Json{{"seed", c.calibration_seed}, {"size", c.calibration_size}};
    j["constant"] = c.constant ? Json(*c.constant) : Json(nullptr);
    j["strict"] = c.strict;
    return j;
}

inline std::optional<ValueLaw> law_from_string(const std::string& s) {
    if (s == "mixed") return std::nullopt;
    return parse_value_law(s);
}

inline RunConfig config_from_json(const Json& root, const std::string& where) {
    // a report carries its config under "config"
    const Json& j = root.contains("config") && root.contains("toolkit") ? root.at("config") : root;
    io::require_fields(j, {"command", "runs", "inputs", "ensemble", "calibration", "constant", "strict"}, where);
    if (j.contains("command") && j.at("command") != "verify") throw InputError(where + ": only verify configs can be run");
    RunConfig c;
    const Json& runs = io::field(j, "runs", where);
    if (!runs.is_array() || runs.empty()) throw InputError(where + ": 'runs' must be a non-empty list");
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const std::string at = where + ": runs[" + std::to_string(k) + "]";
        io::require_fields(runs[k], {"spec", "params"}, at);
        const Json& spec = io::field(runs[k], "spec", at);
        if (!spec.is_string()) throw InputError(at + ".spec: expected a string");
        try {
            c.runs.push_back({parse_spec_id(spec.get<std::string>()), params_from_json(io::field(runs[k], "params", at), at)});
        } catch (const std::invalid_argument& e) {
            throw InputError(at + ": " + e.what());
        }
    }
    if (j.contains("inputs")) {
        if (!j.at("inputs").is_array()) throw InputError(where + ": 'inputs' must be a list");
        for (const auto& v : j.at("inputs")) {
            if (!v.is_string()) throw InputError(where + ": 'inputs' must hold paths");
            c.inputs.push_back(v.get<std::string>());
        }
    }
    if (j.contains("ensemble")) {
        const Json& e = j.at("ensemble");
        io::require_fields(e, {"seed", "size", "law"}, where + ".ensemble");
        if (e.contains("seed") && !e.at("seed").is_null()) {
            if (!e.at("seed").is_number_unsigned()) throw InputError(where + ".ensemble.seed: expected a non-negative integer");
            c.seed = e.at("seed").get<std::uint64_t>();
        }
        if (e.contains("size")) {
            if (!e.at("size").is_number_unsigned()) throw InputError(where + ".ensemble.size: expected a positive integer");
            c.size = e.at("size").get<std::size_t>();
        }
        if (e.contains("law")) {
            try {
                c.law = law_from_string(e.at("law").get<std::string>());
            } catch (const std::exception& ex) {
                throw InputError(where + ".ensemble.law: " + ex.what());
            }
        }
    }
    if (j.contains("calibration")) {
        const Json& e = j.at("calibration");
        io::require_fields(e, {"seed", "size"}, where + ".calibration");
        if (e.contains("seed")) c.calibration_seed = e.at("seed").get<std::uint64_t>();
        if (e.contains("size")) c.calibration_size = e.at("size").get<std::size_t>();
    }
    if (j.contains("constant") && !j.at("constant").is_null()) c.constant = io::number(j.at("constant"), where + ".constant");
    if (j.contains("strict")) c.strict = j.at("strict").get<bool>();
    return c;
}

// ---------------------------------------------------------------------------
// Verification

struct FrozenConstant {
    std::string name;
    std::string kind;  // explicit | empirical | override
    double value = 0.0;
    double conservative = 0.0;
    std::string source;
};

inline Json to_json(const FrozenConstant& c) {
    return Json{{"name", c.name}, {"kind", c.kind}, {"value", c.value}, {"conservative", c.conservative}, {"source", c.source}};
}

inline std::string seed_range(std::uint64_t seed, std::size_t size) {
    return "seeds " + std::to_string(seed) + ".." + std::to_string(seed + size - 1);
}

// Frozen constants for one run, estimated on the calibration ensemble.
inline Constants calibrate(const Run& run, const RunConfig& cfg, std::vector<FrozenConstant>& table) {
    Constants k;
    const Ensemble cal{cfg.calibration_seed, cfg.calibration_size, cfg.law};
    const std::string tag = to_string(run.id);
    auto empirical = [&](SpecId id, const std::string& name) {
        if (cfg.constant) {
            table.push_back({name, "override", *cfg.constant, *cfg.constant, "command line"});
            return *cfg.constant;
        }
        const auto est = estimate_sharp_constant(id, run.params, cal);
        table.push_back({name, "empirical", est.envelope, est.conservative,
                         to_string(id) + " sup ratio over " + seed_range(cal.seed, cal.size)});
        return est.envelope;
    };
    switch (run.id) {
        case SpecId::THM12i: {
            const SpecId weak = run.params.form == Form::Dyadic ? SpecId::DYWEAK : SpecId::THM12ii;
            k.weak_type = empirical(weak, tag + ".A1");
            table.push_back({tag + ".A3", "explicit", interpolation_constant(2.0, *k.weak_type, 1.0, run.params.p), 0.0,
                             "interpolation with K = 2, A2 = 1"});
            break;
        }
        case SpecId::LEM24: {
            if (cfg.constant) {
                k.equivalence = *cfg.constant;
                table.push_back({tag + ".C_beta", "override", *cfg.constant, *cfg.constant, "command line"});
            } else {
                const auto est = estimate_equivalence_constant(run.params.beta, run.params.n,
                                                               Ensemble{cal.seed, cal.size, std::nullopt, {run.params.L}});
                k.equivalence = est.envelope;
                table.push_back({tag + ".C_beta", "empirical", est.envelope, est.conservative,
                                 "ball/dyadic content ratio over random sets, " + seed_range(cal.seed, cal.size)});
            }
            table.push_back({tag + ".c", "explicit", level_set_scale(run.params.beta, run.params.n, *k.equivalence), 0.0,
                             "omega_beta / (C_beta^3 2^(n + 2 beta))"});
            break;
        }
        default:
            if (spec_info(run.id).constant == ConstantKind::Empirical) {
                k.empirical = empirical(run.id, tag + ".C");
            } else {
                table.push_back({tag + ".C", "explicit", CheckContext(run.id, run.params).constant(true), 0.0,
                                 std::string(spec_info(run.id).statement)});
            }
    }
    return k;
}

struct RunResult {
    Run run;
    std::vector<InequalityCheck> checks;
    double seconds = 0.0;
    std::size_t unconverged = 0;
};

inline RunResult execute(const Run& run, const RunConfig& cfg, const Constants& constants) {
    RunResult out{run, {}, 0.0, 0};
    const auto start = std::chrono::steady_clock::now();
    if (!cfg.inputs.empty()) {
        const CheckContext ctx(run.id, run.params, constants);
        std::vector<StepFunction> fs;
        for (const auto& path : cfg.inputs) fs.push_back(read_function(path));
        if (run.id == SpecId::SUBLIN) {
            out.checks.push_back(check_family(ctx, fs));
        } else {
            for (const auto& f : fs) out.checks.push_back(check(ctx, f));
        }
        if (ctx.has_capacity()) out.unconverged = ctx.cap_alpha().unconverged();
    } else {
        out.checks = run_ensemble(run.id, run.params, Ensemble{*cfg.seed, cfg.size, cfg.law}, constants);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

inline Json summary_json(const EnsembleSummary& s) {
    return Json{{"instances", s.pass + s.fail + s.inconclusive},
                {"pass", s.pass},
                {"fail", s.fail},
                {"inconclusive", s.inconclusive},
                {"evaluations", s.evaluations},
                {"failing_evaluations", s.failing_evaluations},
                {"inconclusive_evaluations", s.inconclusive_evaluations},
                {"worst_ratio", s.worst_ratio}};
}

struct VerifyOutcome {
    Json report;
    std::vector<RunResult> results;
    int status = Ok;
};

// Inputs given as files override n and L of every run.
inline RunConfig resolve_inputs(RunConfig cfg) {
    if (cfg.inputs.empty()) {
        if (!cfg.seed) throw InputError("ensemble runs need --seed");
        if (cfg.size == 0) throw InputError("ensemble size must be positive");
        return cfg;
    }
    const StepFunction f = read_function(cfg.inputs.front());
    for (auto& r : cfg.runs) {
        r.params.n = f.dimension();
        r.params.L = f.resolution();
    }
    return cfg;
}

inline VerifyOutcome verify(RunConfig cfg) {
    cfg = resolve_inputs(cfg);
    if (cfg.calibration_size == 0) throw InputError("calibration size must be positive");
    for (auto& r : cfg.runs) r.params = normalize(r.id, r.params);
    VerifyOutcome out;
    Json constants = Json::array();
    Json results = Json::array();
    Json timing = Json::object();
    const auto start = std::chrono::steady_clock::now();
    bool any_fail = false, any_open = false;
    for (const auto& run : cfg.runs) {
        std::vector<FrozenConstant> table;
        const auto t0 = std::chrono::steady_clock::now();
        const Constants k = calibrate(run, cfg, table);
        const double calib = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const auto& c : table) constants.push_back(to_json(c));
        RunResult r = execute(run, cfg, k);
        const EnsembleSummary s = summarize(r.checks);
        any_fail = any_fail || s.fail > 0;
        any_open = any_open || s.inconclusive > 0 || r.unconverged > 0;
        Json entry;
        entry["spec"] = to_string(run.id);
        entry["statement"] = std::string(spec_info(run.id).statement);
        entry["params"] = capint::to_json(run.params);
        entry["constant_kind"] = spec_info(run.id).constant == ConstantKind::Explicit ? "explicit" : "empirical";
        entry["constant"] = r.checks.empty() ? 0.0 : r.checks.front().constant;
        if (spec_info(run.id).uses_capacity) {
            entry["kernel_normalization"] = "gamma(alpha) = pi^(n/2) 2^alpha Gamma(alpha/2) / Gamma((n - alpha)/2)";
            entry["gamma_alpha"] = riesz_normalization(run.params.alpha, run.params.n);
        }
        entry["summary"] = summary_json(s);
        Json checks = Json::array();
        for (const auto& c : r.checks) checks.push_back(capint::to_json(c));
        entry["checks"] = checks;
        results.push_back(entry);
        timing[to_string(run.id)] = Json{{"calibration_seconds", calib}, {"check_seconds", r.seconds}};
        out.results.push_back(std::move(r));
    }
    timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.status = any_fail ? Failed : (cfg.strict && any_open ? Failed : Ok);
    Json& rep = out.report;
    rep["toolkit"] = Json{{"name", "capint"}, {"version", kVersion}};
    rep["config"] = to_json(cfg);
    rep["verdict"] = any_fail ? "fail" : any_open ? "inconclusive" : "pass";
    rep["constants"] = constants;
    rep["results"] = results;
    rep["timing"] = timing;
    return out;
}

// ---------------------------------------------------------------------------
// Reports

inline Json without_timing(Json report) {
    report.erase("timing");
    return report;
}

inline void print_summary(const Json& report, std::ostream& out) {
    for (const auto& r : report.at("results")) {
        const auto& s = r.at("summary");
        out << r.at("spec").get<std::string>() << ": " << s.at("pass") << " pass, " << s.at("fail") << " fail, "
            << s.at("inconclusive") << " inconclusive, worst ratio " << s.at("worst_ratio").get<double>()
            << " (constant " << r.at("constant").get<double>() << ", " << r.at("constant_kind").get<std::string>()
            << ")\n";
    }
    out << "verdict: " << report.at("verdict").get<std::string>() << "\n";
}

inline void write_histograms(const std::string& dir, const std::vector<RunResult>& results) {
    std::filesystem::create_directories(dir);
    for (const auto& r : results) {
        const std::string name = to_string(r.run.id);
        io::write_file((std::filesystem::path(dir) / (name + ".svg")).string(), ratio_histogram_svg(name, r.checks));
    }
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"capint: capacitary integrals, maximal functions and inequality checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // shared parameter flags
    struct Flags {
        std::string set, function, kind = "dyadic", evaluator = "dyadic", law = "mixed", output, svg, config, form;
        std::vector<std::string> inputs, specs;
        int n = 1, L = 4;
        double beta = 0.5, gamma = 0.25, p = 1.0, alpha = 0.3, s = 2.0, t = 0.0, tolerance = 0.0, constant = 0.0;
        std::uint64_t seed = 0, calibration_seed = 1;
        std::size_t size = 100, calibration_size = 100;
        bool all = false, strict = false, rerun = false;
    } f;
    auto real = [](CLI::App* a, const char* name, double& v, const char* help) { return a->add_option(name, v, help); };

    auto* content = app.add_subcommand("content", "Dyadic content and certified ball content of a set");
    content->add_option("--set", f.set, "set file")->required();
    real(content, "--beta", f.beta, "content dimension")->required();

    auto* integrate = app.add_subcommand("integrate", "Choquet integral of f^p");
    integrate->add_option("--function", f.function, "function file")->required();
    integrate->add_option("--evaluator", f.evaluator, "dyadic | ball | riesz")
        ->check(CLI::IsMember({"dyadic", "ball", "riesz"}));
    real(integrate, "--beta", f.beta, "content dimension");
    real(integrate, "--alpha", f.alpha, "Riesz order");
    real(integrate, "--s", f.s, "capacity exponent");
    real(integrate, "--p", f.p, "power of f");

    auto* maximal = app.add_subcommand("maximal", "Maximal function at every cell center");
    maximal->add_option("--function", f.function, "function file")->required();
    maximal->add_option("--kind", f.kind, "dyadic | centered | uncentered | riesz")
        ->check(CLI::IsMember({"dyadic", "centered", "uncentered", "riesz"}));
    real(maximal, "--beta", f.beta, "content dimension");
    real(maximal, "--alpha", f.alpha, "Riesz order");
    real(maximal, "--s", f.s, "capacity exponent");

    auto* capacity_cmd = app.add_subcommand("capacity", "Discretized Riesz capacity of a set");
    capacity_cmd->add_option("--set", f.set, "set file")->required();
    real(capacity_cmd, "--alpha", f.alpha, "Riesz order");
    real(capacity_cmd, "--s", f.s, "capacity exponent");

    auto* verify_cmd = app.add_subcommand("verify", "Check inequalities on a function or a seeded ensemble");
    auto* spec_opt = verify_cmd->add_option("--spec", f.specs, "inequality id (repeatable)");
    auto* all_opt = verify_cmd->add_flag("--all", f.all, "every inequality with its default parameters");
    auto* config_opt = verify_cmd->add_option("--config", f.config, "config file or report to re-run");
    std::vector<CLI::Option*> run_opts{spec_opt, all_opt};
    run_opts.push_back(verify_cmd->add_option("--n", f.n, "dimension"));
    run_opts.push_back(verify_cmd->add_option("--L", f.L, "resolution"));
    run_opts.push_back(real(verify_cmd, "--beta", f.beta, "content dimension"));
    run_opts.push_back(real(verify_cmd, "--gamma", f.gamma, "second dimension or Riesz order"));
    run_opts.push_back(real(verify_cmd, "--p", f.p, "exponent"));
    run_opts.push_back(real(verify_cmd, "--alpha", f.alpha, "Riesz order"));
    run_opts.push_back(real(verify_cmd, "--s", f.s, "capacity exponent"));
    run_opts.push_back(real(verify_cmd, "--t", f.t, "single threshold for weak-type checks"));
    run_opts.push_back(verify_cmd->add_option("--form", f.form, "dyadic | ball")->check(CLI::IsMember({"dyadic", "ball"})));
    run_opts.push_back(real(verify_cmd, "--tolerance", f.tolerance, "relative slack in comparisons"));
    run_opts.push_back(verify_cmd->add_option("--input", f.inputs, "function file (repeatable)"));
    run_opts.push_back(verify_cmd->add_option("--seed", f.seed, "first ensemble seed"));
    run_opts.push_back(verify_cmd->add_option("--size", f.size, "ensemble size"));
    run_opts.push_back(verify_cmd->add_option("--law", f.law, "uniform | dyadic-levels | sparse-indicator | mixed"));
    run_opts.push_back(verify_cmd->add_option("--calibration-seed", f.calibration_seed, "first calibration seed"));
    run_opts.push_back(verify_cmd->add_option("--calibration-size", f.calibration_size, "calibration ensemble size"));
    run_opts.push_back(real(verify_cmd, "--constant", f.constant, "use this constant instead of calibrating"));
    verify_cmd->add_flag("--strict", f.strict, "inconclusive records count as failures");
    verify_cmd->add_option("--output", f.output, "report file (default: stdout)");
    verify_cmd->add_option("--svg", f.svg, "directory for ratio histograms");

    auto* report_cmd = app.add_subcommand("report", "Summarize a report, or re-run it from its echoed config");
    report_cmd->add_option("--input", f.inputs, "report file")->required()->expected(1);
    report_cmd->add_flag("--rerun", f.rerun, "re-run and compare everything except timing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : ConfigError;
    }

    try {
        if (content->parsed()) {
            const GridSet e = read_set(f.set);
            check_beta(f.beta, e.dimension());
            Json j{{"n", e.dimension()}, {"L", e.resolution()}, {"beta", f.beta}, {"cells", e.size()}};
            j["dyadic_content"] = dyadic_content(e, f.beta);
            j["ball_content"] = to_json(certified_content(e, f.beta));
            out << j.dump(2) << "\n";
            return Ok;
        }
        if (integrate->parsed()) {
            const StepFunction fn = read_function(f.function);
            if (!(f.p > 0.0)) throw std::domain_error("p must be positive");
            const StepFunction g = fn.pow(f.p);
            Json j{{"evaluator", f.evaluator}, {"p", f.p}};
            if (f.evaluator == "riesz") {
                const CapacityEvaluator cap(CapacityParams(f.alpha, f.s, fn.dimension(), fn.resolution()));
                j["alpha"] = f.alpha;
                j["s"] = f.s;
                j["integral"] = to_json(choquet_integral(g, cap));
                j["unconverged_solves"] = cap.unconverged();
            } else {
                check_beta(f.beta, fn.dimension());
                j["beta"] = f.beta;
                if (f.evaluator == "dyadic") {
                    j["integral"] = choquet_integral(g, DyadicContentEvaluator{f.beta});
                } else {
                    j["integral"] = to_json(choquet_integral(g, BallContentEvaluator{f.beta}));
                }
            }
            out << j.dump(2) << "\n";
            return Ok;
        }
        if (maximal->parsed()) {
            const StepFunction fn = read_function(f.function);
            MaximalResult m;
            if (f.kind == "riesz") {
                m = riesz_maximal(fn, CapacityEvaluator(CapacityParams(f.alpha, f.s, fn.dimension(), fn.resolution())));
            } else {
                check_beta(f.beta, fn.dimension());
                m = f.kind == "dyadic" ? dyadic_maximal(fn, f.beta)
                                       : ball_maximal(fn, f.beta, f.kind == "centered" ? MaximalKind::Centered
                                                                                       : MaximalKind::Uncentered);
            }
            Json values = Json::array();
            for (const auto& v : m.values) values.push_back(to_json(v));
            Json j{{"kind", f.kind}, {"n", m.n}, {"L", m.L}, {"radii_examined", m.radii_examined}, {"values", values}};
            out << j.dump(2) << "\n";
            return Ok;
        }
        if (capacity_cmd->parsed()) {
            const GridSet e = read_set(f.set);
            const CapacityParams params(f.alpha, f.s, e.dimension(), e.resolution());
            const auto sol = capacity(e, params);
            Json j{{"alpha", f.alpha}, {"s", f.s}, {"n", e.dimension()}, {"L", e.resolution()}};
            j["capacity"] = to_json(sol.enclosure());
            j["converged"] = sol.converged;
            j["iterations"] = sol.iterations;
            j["gamma_alpha"] = riesz_normalization(f.alpha, e.dimension());
            out << j.dump(2) << "\n";
            if (!sol.converged && f.strict) return Failed;
            return Ok;
        }
        if (verify_cmd->parsed()) {
            RunConfig cfg;
            if (config_opt->count() > 0) {
                for (auto* o : run_opts) {
                    if (o->count() > 0) throw InputError("--config cannot be combined with " + o->get_name());
                }
                cfg = config_from_json(io::read_file(f.config), f.config);
                cfg.strict = cfg.strict || f.strict;
            } else {
                if (f.all == !f.specs.empty()) throw InputError("give exactly one of --spec or --all");
                if (f.all) {
                    cfg.runs = default_runs();
                } else {
                    CheckParams q;
                    q.n = f.n;
                    q.L = f.L;
                    q.beta = f.beta;
                    q.gamma = f.gamma;
                    q.p = f.p;
                    q.alpha = f.alpha;
                    q.s = f.s;
                    if (run_opts[9]->count() > 0) q.t = f.t;
                    if (!f.form.empty()) q.form = parse_form(f.form);
                    if (run_opts[11]->count() > 0) q.tolerance = f.tolerance;
                    for (const auto& name : f.specs) cfg.runs.push_back({parse_spec_id(name), q});
                }
                if (!f.inputs.empty() && (run_opts[2]->count() > 0 || run_opts[3]->count() > 0)) {
                    throw InputError("--n and --L come from the input file");
                }
                cfg.inputs = f.inputs;
                if (run_opts[13]->count() > 0) cfg.seed = f.seed;
                cfg.size = f.size;
                cfg.law = law_from_string(f.law);
                cfg.calibration_seed = f.calibration_seed;
                cfg.calibration_size = f.calibration_size;
                if (run_opts[18]->count() > 0) cfg.constant = f.constant;
                cfg.strict = f.strict;
            }
            VerifyOutcome v = verify(cfg);
            if (!f.svg.empty()) write_histograms(f.svg, v.results);
            if (f.output.empty()) {
                out << v.report.dump(2) << "\n";
            } else {
                io::write_file(f.output, v.report.dump(2) + "\n");
                print_summary(v.report, out);
            }
            return v.status;
        }
        if (report_cmd->parsed()) {
            const Json report = io::read_file(f.inputs.front());
            if (!report.contains("results") || !report.contains("config")) throw InputError(f.inputs.front() + ": not a report");
            if (!f.rerun) {
                print_summary(report, out);
                return report.at("verdict") == "fail" ? Failed : Ok;
            }
            const VerifyOutcome v = verify(config_from_json(report, f.inputs.front()));
            const bool same = without_timing(v.report).dump() == without_timing(report).dump();
            out << (same ? "identical" : "differs") << " to the stored report (timing excluded)\n";
            return same ? v.status : Failed;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return ConfigError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return ConfigError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return ConfigError;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return ConfigError;
    }
    return ConfigError;
}

}  // namespace capint::cli
