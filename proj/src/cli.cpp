#include "gfbp/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "gfbp/error.hpp"
#include "gfbp/problems.hpp"
#include "gfbp/rng.hpp"
#include "gfbp/verify.hpp"

namespace gfbp::cli {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json optional_number(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

json validation_json(const ValidationReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return {{"accepted", report.accepted}, {"validated", report.validated}, {"checks", checks}};
}

json schedule_json(const StepSchedule& s, double bound, const ValidationReport& report) {
    return {{"a", s.a()},
            {"p", s.p()},
            {"xi", s.xi()},
            {"q", s.q()},
            {"cocoercivity_bound", std::isinf(bound) ? json("inf") : json(bound)},
            {"validation", validation_json(report)}};
}

json run_json(const RunReport& r) {
    return {{"iterations", r.iterations},
            {"elapsed_s", r.elapsed_s},
            {"termination", to_string(r.reason)},
            {"final_F", optional_number(r.final_objective)},
            {"final_g", optional_number(r.final_constraint)},
            {"final_norm_C", r.final_norm_c},
            {"final_x_norm", norm2(r.x_final)},
            {"final_z_norm", norm2(r.z_final)}};
}

json stopping_json(const StoppingRule& rule) {
    return {{"mode", to_string(rule.mode)}, {"tol", rule.tol}, {"max_iters", rule.max_iters}};
}

void write_trace_file(const std::string& path, const std::vector<TraceRow>& trace) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot write trace file " + path);
    write_trace_csv(f, trace);
}

void write_summary_file(const std::string& path, const json& summary) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot write summary file " + path);
    f << summary.dump(2) << '\n';
}

void print_human(std::ostream& out, const json& s) {
    out << "experiment:   " << s.value("experiment", "") << '\n';
    if (s.contains("instance")) out << "instance:     " << s["instance"].dump() << '\n';
    const auto& sched = s["schedule"];
    out << "schedule:     alpha_k = " << sched["a"].get<double>() << "/k^" << sched["p"].get<double>()
        << ", beta_k = " << sched["xi"].get<double>() << "*k^" << sched["q"].get<double>() << " ("
        << (sched["validation"]["accepted"].get<bool>() ? "accepted" : "REJECTED") << ")\n";
    out << "stopping:     " << s["stopping"]["mode"].get<std::string>()
        << ", tol = " << s["stopping"]["tol"].get<double>()
        << ", max_iters = " << s["stopping"]["max_iters"].get<std::size_t>() << '\n';
    auto line = [&](const json& r) {
        out << "iterations:   " << r["iterations"] << '\n';
        out << "elapsed_s:    " << r["elapsed_s"] << '\n';
        out << "termination:  " << r["termination"].get<std::string>() << '\n';
        out << "final F:      " << r["final_F"] << '\n';
        out << "final g:      " << r["final_g"] << '\n';
        out << "final |C(x)|: " << r["final_norm_C"] << '\n';
        out << "final |z|:    " << r["final_z_norm"] << '\n';
    };
    if (s.contains("runs") && s["runs"].size() > 1) {
        out << "samples:      " << s["runs"].size() << '\n';
        out << "mean iterations: " << s["mean_iterations"] << '\n';
        out << "mean elapsed_s:  " << s["mean_elapsed_s"] << '\n';
        out << "mean final F:    " << s["mean_final_F"] << '\n';
        out << "mean final |z|:  " << s["mean_final_z_norm"] << '\n';
        out << "terminations:    " << s["terminations"].dump() << '\n';
    } else {
        line(s["run"]);
    }
}

void emit(const RunConfig& cfg, const json& summary, std::ostream& out) {
    if (!cfg.summary_path.empty()) write_summary_file(cfg.summary_path, summary);
    if (cfg.json) {
        out << summary.dump(2) << '\n';
    } else {
        print_human(out, summary);
    }
}

StoppingRule stopping_from(const RunConfig& cfg) {
    return StoppingRule{cfg.tol, cfg.max_iters, cfg.stop};
}

StepSchedule schedule_for(const RunConfig& cfg, const GfbpProblem& problem) {
    double xi = 0.0;
    if (cfg.xi) {
        xi = *cfg.xi;
    } else {
        const double bound = schedule_bound(problem);
        xi = std::isinf(bound) ? cfg.xi_scale : cfg.xi_scale * bound / cfg.a;
    }
    return StepSchedule(cfg.a, cfg.p, xi, cfg.q);
}

// Validates and, in strict mode, refuses a rejected schedule.
ValidationReport checked_schedule(const RunConfig& cfg, const StepSchedule& s, double bound,
                                  std::ostream& err) {
    ValidationReport report = validate(s, bound);
    if (!report.accepted) {
        if (cfg.strict_schedule) throw ParameterError("schedule rejected:\n" + report.to_string());
        err << "warning: schedule does not satisfy the convergence conditions:\n" << report.to_string();
    }
    return report;
}

std::string sample_path(const std::string& path, std::size_t index, std::size_t count) {
    if (path.empty() || count == 1) return path;
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    const std::string suffix = "_" + std::to_string(index + 1);
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

// --- custom problems -------------------------------------------------------

Vector json_vector(const json& j, std::size_t n, const char* what) {
    if (j.is_number()) return Vector(n, j.get<double>());
    auto v = j.get<Vector>();
    if (v.size() != n) throw ShapeError(std::string("custom problem: ") + what + " has wrong length");
    return v;
}

Matrix json_matrix(const json& j, const char* what) {
    const auto rows = j.get<std::vector<Vector>>();
    if (rows.empty() || rows.front().empty()) throw ParameterError(std::string("custom problem: ") + what + " is empty");
    Matrix a(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != a.cols()) throw ShapeError(std::string("custom problem: ") + what + " is ragged");
        for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) = rows[i][k];
    }
    return a;
}

struct CustomProblem {
    GfbpProblem problem;
    Vector start;
};

CustomProblem load_custom_problem(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParameterError("cannot open problem file " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParameterError("problem file " + path + ": " + e.what());
    }
    try {
        const std::size_t n = doc.at("dim").get<std::size_t>();
        CustomProblem out;
        out.problem.dim = n;
        std::vector<ScalarFn> terms;
        for (const auto& b : doc.at("blocks")) {
            const std::string type = b.at("type").get<std::string>();
            if (type == "l1") {
                const double w = b.at("weight").get<double>();
                out.problem.blocks.push_back(prox_l1_op(w));
                terms.push_back([w](std::span<const double> x) {
                    double s = 0.0;
                    for (double v : x) s += std::abs(v);
                    return w * s;
                });
            } else if (type == "sq_norm") {
                const double c = b.at("coef").get<double>();
                out.problem.blocks.push_back(prox_scaled_sq_norm_op(c));
                terms.push_back([c](std::span<const double> x) { return c * squared_norm(x); });
            } else if (type == "rank_one") {
                Vector a = json_vector(b.at("a"), n, "a");
                const double rhs = b.at("b").get<double>();
                out.problem.blocks.push_back(prox_rank_one_quadratic_op(a, rhs, "rank_one"));
                terms.push_back([a, rhs](std::span<const double> x) {
                    const double t = dot(a, x) - rhs;
                    return 0.5 * t * t;
                });
            } else if (type == "least_squares") {
                Matrix a = json_matrix(b.at("A"), "A");
                Vector rhs = json_vector(b.at("b"), a.rows(), "b");
                if (a.cols() != n) throw ShapeError("custom problem: least_squares A has wrong width");
                out.problem.blocks.push_back(prox_least_squares_op(a, rhs));
                terms.push_back([a, rhs](std::span<const double> x) {
                    const Vector ax = kernels::matvec(a, x);
                    return 0.5 * squared_distance(ax, rhs);
                });
            } else if (type == "dist_ball") {
                Vector c = json_vector(b.at("center"), n, "center");
                const double rho = b.value("radius", 1.0);
                out.problem.blocks.push_back(prox_dist_ball_op(c, rho, "dist_ball"));
                terms.push_back([c, rho](std::span<const double> x) {
                    return std::max(0.0, distance(x, c) - rho);
                });
            } else {
                throw ParameterError("custom problem: unknown block type '" + type + "'");
            }
        }
        out.problem.objective = [terms](std::span<const double> x) {
            double s = 0.0;
            for (const auto& t : terms) s += t(x);
            return s;
        };

        const json pen = doc.value("penalty", json{{"type", "zero"}});
        const std::string ptype = pen.at("type").get<std::string>();
        if (ptype == "box") {
            Vector lo = json_vector(pen.at("lo"), n, "lo");
            Vector hi = json_vector(pen.at("hi"), n, "hi");
            out.problem.penalty = grad_half_sqdist_box_op(lo, hi);
            out.problem.constraint_value = [lo, hi](std::span<const double> x) {
                double s = 0.0;
                for (std::size_t j = 0; j < x.size(); ++j) {
                    const double d = x[j] - std::clamp(x[j], lo[j], hi[j]);
                    s += d * d;
                }
                return 0.5 * s;
            };
        } else if (ptype == "sq_Ax") {
            Matrix a = json_matrix(pen.at("A"), "A");
            if (a.cols() != n) throw ShapeError("custom problem: penalty A has wrong width");
            out.problem.penalty = grad_half_sq_Ax_op(a);
            out.problem.constraint_value = [a](std::span<const double> x) {
                return 0.5 * squared_norm(kernels::matvec(a, x));
            };
        } else if (ptype == "zero") {
            out.problem.penalty = zero_cocoercive();
            out.problem.constraint_value = [](std::span<const double>) { return 0.0; };
        } else {
            throw ParameterError("custom problem: unknown penalty type '" + ptype + "'");
        }
        out.start = doc.contains("start") ? json_vector(doc["start"], n, "start") : Vector(n, 0.0);
        out.problem.check();
        return out;
    } catch (const json::exception& e) {
        throw ParameterError("problem file " + path + ": " + e.what());
    }
}

// --- option registry -------------------------------------------------------

// Each option is registered with CLI11 and with a JSON setter so a config file
// can supply any flag the command line did not.
class Registry {
public:
    explicit Registry(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* option(const std::string& name, T& field, const std::string& desc) {
        CLI::Option* opt = app_->add_option("--" + name, field, desc);
        setters_[name] = {opt, [&field](const json& j) { field = j.get<T>(); }};
        return opt;
    }

    template <class T>
    CLI::Option* option(const std::string& name, std::optional<T>& field, const std::string& desc) {
        CLI::Option* opt = app_->add_option("--" + name, field, desc);
        setters_[name] = {opt, [&field](const json& j) { field = j.get<T>(); }};
        return opt;
    }

    CLI::Option* flag(const std::string& name, bool& field, const std::string& desc) {
        CLI::Option* opt = app_->add_flag("--" + name, field, desc);
        setters_[name] = {opt, [&field](const json& j) { field = j.get<bool>(); }};
        return opt;
    }

    void apply(const json& flat) {
        for (const auto& [key, value] : flat.items()) {
            const auto it = setters_.find(key);
            if (it == setters_.end()) throw ParameterError("config: unknown key '" + key + "'");
            if (it->second.first->count() > 0) continue;  // command line wins
            try {
                it->second.second(value);
            } catch (const json::exception& e) {
                throw ParameterError("config: bad value for '" + key + "': " + e.what());
            }
        }
    }

    bool given(const std::string& name) const {
        const auto it = setters_.find(name);
        return it != setters_.end() && it->second.first->count() > 0;
    }

private:
    CLI::App* app_;
    std::map<std::string, std::pair<CLI::Option*, std::function<void(const json&)>>> setters_;
};

// {"schedule": {"xi": 0.5}} -> {"schedule.xi": 0.5}; the schedule keys map to
// the flat flags a, p, xi, q.
void flatten(const json& j, const std::string& prefix, json& out) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten(value, name, out);
        } else {
            out[name] = value;
        }
    }
}

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParameterError("cannot open config file " + path);
    json raw;
    try {
        raw = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParameterError("config file " + path + ": " + e.what());
    }
    json flat = json::object();
    flatten(raw, "", flat);
    json renamed = json::object();
    for (const auto& [key, value] : flat.items()) {
        std::string k = key;
        if (k.rfind("schedule.", 0) == 0) k = k.substr(9);
        renamed[k] = value;
    }
    return renamed;
}

void add_common(Registry& reg, RunConfig& cfg, std::string& stop_name) {
    reg.option("start", cfg.start, "Starting point: zero or random");
    reg.option("a", cfg.a, "Step scale: alpha_k = a / k^p");
    reg.option("p", cfg.p, "Step exponent");
    reg.option("xi", cfg.xi, "Penalty scale: beta_k = xi * k^q");
    reg.option("xi-scale", cfg.xi_scale,
               "When --xi is unset: xi = xi-scale * cocoercivity bound / a");
    reg.option("q", cfg.q, "Penalty exponent");
    reg.flag("strict-schedule", cfg.strict_schedule, "Refuse schedules that fail validation");
    reg.option("tol", cfg.tol, "Stopping tolerance");
    reg.option("max-iters", cfg.max_iters, "Iteration cap");
    reg.option("stop", stop_name, "Stopping rule: relative_change, objective_change, max_only, residual")
        ->check(CLI::IsMember({"relative_change", "objective_change", "max_only", "residual"}));
    reg.option("seed", cfg.seed, "Random seed");
    reg.option("trace-every", cfg.trace_every, "Record every k-th iteration (0 = no trace)");
    reg.option("trace", cfg.trace_path, "Trace CSV output path");
    reg.option("summary", cfg.summary_path, "Summary JSON output path");
    reg.flag("json", cfg.json, "Print the summary as JSON");
}

StopMode parse_stop(const std::string& s) {
    if (s == "max_only") return StopMode::MaxOnly;
    if (s == "residual") return StopMode::Residual;
    if (s == "objective_change") return StopMode::ObjectiveChange;
    return StopMode::RelativeChange;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
    out << "k,F,g,norm_C,inner_disp,alpha,beta,elapsed_s\n";
    for (const auto& r : trace) {
        out << r.k << ',' << fmt17(r.objective) << ',' << fmt17(r.constraint) << ',' << fmt17(r.norm_c)
            << ',' << fmt17(r.inner_disp) << ',' << fmt17(r.alpha) << ',' << fmt17(r.beta) << ','
            << fmt17(r.elapsed_s) << '\n';
    }
}

int cmd_elastic_net(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    ElasticNetConfig en;
    json instance;
    if (cfg.hilbert) {
        HilbertData h = gen_hilbert_problem(*cfg.hilbert);
        instance = {{"source", "hilbert"}, {"m", h.a.rows()}, {"n", h.a.cols()}};
        en.a = std::move(h.a);
        en.b = std::move(h.b);
    } else if (!cfg.csv_a.empty()) {
        if (cfg.csv_b.empty()) throw ParameterError("--csv-A requires --csv-b");
        en.a = load_csv_matrix(cfg.csv_a);
        en.b = load_csv_vector(cfg.csv_b);
        instance = {{"source", "csv"}, {"m", en.a.rows()}, {"n", en.a.cols()}};
    } else {
        RegressionData d = gen_regression_data(cfg.m, cfg.n, cfg.seed);
        instance = {{"source", "synthetic"}, {"m", cfg.m}, {"n", cfg.n}, {"seed", cfg.seed}};
        en.a = std::move(d.a);
        en.b = std::move(d.b);
    }
    en.gamma = cfg.gamma;
    en.split = cfg.split;
    instance["gamma"] = cfg.gamma;
    instance["split"] = cfg.split;

    const GfbpProblem problem = build_elastic_net(en);
    const StepSchedule schedule = schedule_for(cfg, problem);
    const double bound = schedule_bound(problem);
    const ValidationReport validation = checked_schedule(cfg, schedule, bound, err);

    Vector start(problem.dim, 0.0);
    if (cfg.start == "random") {
        Rng rng(cfg.seed + 1);
        for (double& v : start) v = rng.uniform(-1.0, 2.0);
    }
    instance["start"] = cfg.start.empty() ? "zero" : cfg.start;

    const RunReport report = run(problem, schedule, {stopping_from(cfg), cfg.trace_every}, start);
    if (!cfg.trace_path.empty()) write_trace_file(cfg.trace_path, report.trace);

    json summary = {{"experiment", "elastic-net"},
                    {"instance", instance},
                    {"schedule", schedule_json(schedule, bound, validation)},
                    {"stopping", stopping_json(report.stopping)},
                    {"run", run_json(report)}};
    emit(cfg, summary, out);
    return kSuccess;
}

int cmd_heron(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.samples == 0) throw ParameterError("--samples must be positive");
    const std::size_t count = cfg.samples;
    std::vector<RunReport> reports(count);
    std::vector<json> schedules(count);
    std::vector<std::string> warnings(count);
    std::vector<std::string> failures(count);
    std::vector<int> codes(count, kSuccess);

    // Samples are independent; each gets seed + index.
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(count); ++si) {
        const auto s = static_cast<std::size_t>(si);
        try {
            const std::uint64_t seed = cfg.seed + s;
            HeronConfig hc = gen_heron_instance(cfg.dim, cfg.targets, seed);
            if (cfg.identity_a) hc.a = Matrix::identity(cfg.dim);
            const GfbpProblem problem = build_heron(hc);
            const StepSchedule schedule = schedule_for(cfg, problem);
            const double bound = schedule_bound(problem);
            std::ostringstream warn;
            const ValidationReport validation = checked_schedule(cfg, schedule, bound, warn);
            warnings[s] = warn.str();
            schedules[s] = schedule_json(schedule, bound, validation);
            const Vector start = cfg.start == "zero" ? Vector(cfg.dim, 0.0) : gen_heron_start(cfg.dim, seed);
            reports[s] = run(problem, schedule, {stopping_from(cfg), cfg.trace_every}, start);
            const std::string path = sample_path(cfg.trace_path, s, count);
            if (!path.empty()) write_trace_file(path, reports[s].trace);
        } catch (const DivergenceError& e) {
            codes[s] = kDivergence;
            failures[s] = e.what();
        } catch (const Error& e) {
            codes[s] = kParameterError;
            failures[s] = e.what();
        }
    }

    for (std::size_t s = 0; s < count; ++s) {
        if (!warnings[s].empty()) err << "sample " << s + 1 << ": " << warnings[s];
        if (codes[s] != kSuccess) {
            err << "sample " << s + 1 << ": " << failures[s] << '\n';
            return codes[s];
        }
    }

    json runs = json::array();
    json terminations = json::object();
    double iters = 0.0;
    double secs = 0.0;
    double f = 0.0;
    double z = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
        const auto& r = reports[s];
        json rj = run_json(r);
        rj["seed"] = cfg.seed + s;
        runs.push_back(rj);
        const std::string reason = to_string(r.reason);
        terminations[reason] = terminations.value(reason, 0) + 1;
        iters += static_cast<double>(r.iterations);
        secs += r.elapsed_s;
        f += r.final_objective.value_or(0.0);
        z += norm2(r.z_final);
    }
    const auto nrun = static_cast<double>(count);
    json summary = {{"experiment", "heron"},
                    {"instance",
                     {{"dim", cfg.dim},
                      {"targets", cfg.targets},
                      {"identity_A", cfg.identity_a},
                      {"seed", cfg.seed},
                      {"start", cfg.start.empty() ? "random" : cfg.start}}},
                    {"schedule", schedules.front()},
                    {"stopping", stopping_json(stopping_from(cfg))},
                    {"runs", runs},
                    {"terminations", terminations},
                    {"mean_iterations", iters / nrun},
                    {"mean_elapsed_s", secs / nrun},
                    {"mean_final_F", f / nrun},
                    {"mean_final_z_norm", z / nrun}};
    if (count == 1) summary["run"] = runs.front();
    emit(cfg, summary, out);
    return kSuccess;
}

int cmd_custom(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.problem_path.empty()) throw ParameterError("--problem is required");
    CustomProblem cp = load_custom_problem(cfg.problem_path);
    const StepSchedule schedule = schedule_for(cfg, cp.problem);
    const double bound = schedule_bound(cp.problem);
    const ValidationReport validation = checked_schedule(cfg, schedule, bound, err);
    const RunReport report = run(cp.problem, schedule, {stopping_from(cfg), cfg.trace_every}, cp.start);
    if (!cfg.trace_path.empty()) write_trace_file(cfg.trace_path, report.trace);
    json summary = {{"experiment", "custom"},
                    {"instance", {{"problem", cfg.problem_path}, {"dim", cp.problem.dim},
                                  {"blocks", cp.problem.blocks.size()}}},
                    {"schedule", schedule_json(schedule, bound, validation)},
                    {"stopping", stopping_json(report.stopping)},
                    {"run", run_json(report)}};
    summary["run"]["x_final"] = report.x_final;
    summary["run"]["z_final"] = report.z_final;
    emit(cfg, summary, out);
    return kSuccess;
}

int cmd_verify(bool as_json, std::ostream& out) {
    const auto results = verify::run_all(verify::ProxSuite::library());
    bool all = true;
    for (const auto& r : results) all = all && r.passed;
    if (as_json) {
        out << verify::to_json(results) << '\n';
    } else {
        out << verify::format_table(results);
        out << (all ? "all checks passed\n" : "verification FAILED\n");
    }
    return all ? kSuccess : kVerificationFailure;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized forward-backward splitting with penalization"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    RunConfig cfg;
    std::string config_path;
    std::string stop_name = "relative_change";

    CLI::App* en = app.add_subcommand("elastic-net", "Box-constrained elastic net");
    Registry en_reg(en);
    en->add_option("--config", config_path, "JSON config file (flags override)");
    en_reg.option("m", cfg.m, "Observations (synthetic instance)");
    en_reg.option("n", cfg.n, "Predictors (synthetic instance)");
    en_reg.option("gamma", cfg.gamma, "Elastic-net parameter in [0, 1]");
    en_reg.flag("split", cfg.split, "One block per observation");
    en_reg.option("hilbert", cfg.hilbert, "Use the m x 2^m Hilbert-type instance");
    en_reg.option("csv-A", cfg.csv_a, "Design matrix CSV");
    en_reg.option("csv-b", cfg.csv_b, "Response vector CSV");
    add_common(en_reg, cfg, stop_name);

    CLI::App* he = app.add_subcommand("heron", "Generalized Heron problem over null(A)");
    Registry he_reg(he);
    he->add_option("--config", config_path, "JSON config file (flags override)");
    he_reg.option("dim", cfg.dim, "Dimension n");
    he_reg.option("targets", cfg.targets, "Number of unit-ball targets");
    he_reg.option("samples", cfg.samples, "Independent instances to average");
    he_reg.flag("identity-A", cfg.identity_a, "Replace the random A by the identity");
    add_common(he_reg, cfg, stop_name);

    CLI::App* cu = app.add_subcommand("custom", "Problem described by a JSON file");
    Registry cu_reg(cu);
    cu->add_option("--config", config_path, "JSON config file (flags override)");
    cu_reg.option("problem", cfg.problem_path, "Problem JSON");
    add_common(cu_reg, cfg, stop_name);

    CLI::App* ve = app.add_subcommand("verify", "Run the oracle self-checks");
    ve->add_flag("--json", cfg.json, "Machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kParameterError;
    }

    try {
        Registry* reg = nullptr;
        if (en->parsed()) reg = &en_reg;
        if (he->parsed()) reg = &he_reg;
        if (cu->parsed()) reg = &cu_reg;
        if (ve->parsed()) return cmd_verify(cfg.json, out);

        if (!config_path.empty()) reg->apply(load_config(config_path));
        cfg.stop = parse_stop(stop_name);
        if (cfg.start != "" && cfg.start != "zero" && cfg.start != "random") {
            throw ParameterError("--start must be zero or random");
        }

        if (en->parsed()) {
            cfg.experiment = "elastic-net";
            const bool synthetic = reg->given("m") || reg->given("n");
            if (!cfg.hilbert && cfg.csv_a.empty() && !synthetic && config_path.empty()) {
                err << "elastic-net: choose an instance with --m/--n, --hilbert or --csv-A/--csv-b\n"
                    << en->help();
                return kParameterError;
            }
            return cmd_elastic_net(cfg, out, err);
        }
        if (he->parsed()) {
            cfg.experiment = "heron";
            if (config_path.empty() && (!reg->given("dim") || !reg->given("targets"))) {
                err << "heron: --dim and --targets are required\n" << he->help();
                return kParameterError;
            }
            return cmd_heron(cfg, out, err);
        }
        cfg.experiment = "custom";
        return cmd_custom(cfg, out, err);
    } catch (const DivergenceError& e) {
        err << "diverged: " << e.what() << '\n';
        return kDivergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParameterError;
    }
}

}  // namespace gfbp::cli
