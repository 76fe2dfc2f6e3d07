#include "bernmm/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "bernmm/analytic.hpp"
#include "bernmm/cli/verify.hpp"
#include "bernmm/numeric.hpp"
#include "bernmm/risk.hpp"

namespace bernmm::cli {

namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, bool, std::string>;

struct Field {
    std::string name;
    Cell value;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::string command;
    std::vector<Field> inputs;
    std::vector<Field> results;
    std::optional<Table> table;
    Json tolerances = Json::object();
};

struct GlobalOptions {
    std::string format = "text";
    std::string out_path;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    bool timing = false;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string shortest(double x) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string seven_digits(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7g", x);
    return buf;
}

std::string render_cell(const Cell& cell, bool human) {
    return std::visit(
        [human](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return human ? seven_digits(v) : shortest(v);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return v;
            }
        },
        cell);
}

Json to_json(const Cell& cell) {
    return std::visit([](const auto& v) { return Json(v); }, cell);
}

Json to_json(const std::vector<Field>& fields) {
    Json obj = Json::object();
    for (const auto& f : fields) obj[f.name] = to_json(f.value);
    return obj;
}

std::string render_json(const Report& report, const GlobalOptions& global, std::optional<double> wall_ms) {
    Json results = to_json(report.results);
    if (report.table) {
        Json rows = Json::array();
        for (const auto& row : report.table->rows) {
            Json obj = Json::object();
            for (std::size_t c = 0; c < row.size(); ++c) obj[report.table->columns[c]] = to_json(row[c]);
            rows.push_back(std::move(obj));
        }
        results[report.table->name] = std::move(rows);
    }
    Json envelope = Json::object();
    envelope["schema_version"] = kSchemaVersion;
    envelope["command"] = report.command;
    envelope["inputs"] = to_json(report.inputs);
    envelope["results"] = std::move(results);
    envelope["metadata"] = {{"tolerances", report.tolerances.is_null() ? Json::object() : report.tolerances},
                            {"seed", global.seed},
                            {"generator", kGeneratorName},
                            {"wall_time_ms", wall_ms ? Json(*wall_ms) : Json(nullptr)}};
    return envelope.dump(2) + "\n";
}

std::string render_csv(const Report& report) {
    std::ostringstream os;
    if (report.table) {
        const auto& table = *report.table;
        for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << render_cell(row[c], false);
            os << '\n';
        }
        return os.str();
    }
    os << "field,value\n";
    os << "schema_version," << kSchemaVersion << '\n';
    os << "command," << report.command << '\n';
    for (const auto& f : report.inputs) os << "input." << f.name << ',' << render_cell(f.value, false) << '\n';
    for (const auto& f : report.results) os << f.name << ',' << render_cell(f.value, false) << '\n';
    return os.str();
}

std::string render_text(const Report& report, const GlobalOptions& global, std::optional<double> wall_ms) {
    std::ostringstream os;
    os << "schema_version: " << kSchemaVersion << '\n';
    os << "command: " << report.command << '\n';
    for (const auto& f : report.inputs) os << f.name << ": " << render_cell(f.value, true) << '\n';
    for (const auto& f : report.results) os << f.name << ": " << render_cell(f.value, true) << '\n';
    if (report.table) {
        const auto& table = *report.table;
        std::vector<std::size_t> widths(table.columns.size());
        std::vector<std::vector<std::string>> cells;
        for (std::size_t c = 0; c < table.columns.size(); ++c) widths[c] = table.columns[c].size();
        for (const auto& row : table.rows) {
            auto& line = cells.emplace_back();
            for (std::size_t c = 0; c < row.size(); ++c) {
                line.push_back(render_cell(row[c], true));
                widths[c] = std::max(widths[c], line.back().size());
            }
        }
        auto emit = [&](const std::vector<std::string>& line) {
            std::string text;
            for (std::size_t c = 0; c < line.size(); ++c) {
                text += line[c];
                if (c + 1 < line.size()) text += std::string(widths[c] - line[c].size() + 2, ' ');
            }
            os << text << '\n';
        };
        emit(table.columns);
        for (const auto& line : cells) emit(line);
    }
    os << "seed: " << global.seed << '\n';
    os << "generator: " << kGeneratorName << '\n';
    if (wall_ms) os << "wall_time_ms: " << seven_digits(*wall_ms) << '\n';
    return os.str();
}

// --- commands -------------------------------------------------------------

Report cmd_estimate(double eta, long long x) {
    const ParamSpace space(eta);
    const MinimaxSolution sol = minimax_n1(space);
    Report r{"estimate", {{"eta", eta}, {"x", x}}, {}, std::nullopt, {}};
    r.results = {
        {"branch", std::string(to_string(sol.branch))},
        {"branch_rule", std::string(sol.branch == Branch::Restricted ? "eta <= 3/4" : "eta > 3/4")},
        {"a_star", sol.a_star},
        {"b_star", sol.b_star},
        {"estimate", x == 0 ? sol.a_star : sol.b_star},
        {"minimax_value", sol.value},
    };
    return r;
}

Report cmd_classic(long long n, long long k) {
    if (k < 0 || k > n) {
        throw std::invalid_argument("k must satisfy 0 <= k <= n, got k=" + std::to_string(k) +
                                    " n=" + std::to_string(n));
    }
    const double mean = static_cast<double>(k) / static_cast<double>(n);
    Report r{"classic", {{"n", n}, {"k", k}}, {}, std::nullopt, {}};
    r.results = {{"minimax", classic_minimax(n, mean)}, {"sample_mean", mean}};
    return r;
}

struct SolveOutcome {
    Report report;
    bool within_tolerance = false;
};

SolveOutcome cmd_solve(double eta, double step, double tol, unsigned threads) {
    constexpr double coord_tol = VerifyTolerances::refine_coord;
    constexpr double value_tol = VerifyTolerances::refine_value;
    const ParamSpace space(eta);
    const GridSpec grid(step);
    const NumericSolution coarse = grid_minimax(space, grid, threads);
    const NumericSolution fine = refine(space, coarse.estimator(), tol);
    const MinimaxSolution exact = minimax_n1(space);

    const double da = std::abs(fine.a - exact.a_star);
    const double db = std::abs(fine.b - exact.b_star);
    const double dv = std::abs(fine.value - exact.value);
    const bool ok = da <= coord_tol && db <= coord_tol && dv <= value_tol;

    Report r{"solve", {{"eta", eta}, {"step", step}, {"tol", tol}},
             {}, std::nullopt, {{"coordinate", coord_tol}, {"value", value_tol}}};
    r.results = {
        {"grid_a", coarse.a},
        {"grid_b", coarse.b},
        {"grid_value", coarse.value},
        {"grid_evaluations", static_cast<long long>(coarse.evaluations)},
        {"numeric_a", fine.a},
        {"numeric_b", fine.b},
        {"numeric_value", fine.value},
        {"refine_evaluations", static_cast<long long>(fine.evaluations)},
        {"refine_sweeps", static_cast<long long>(fine.objective_trace.size() - 1)},
        {"analytic_branch", std::string(to_string(exact.branch))},
        {"analytic_a", exact.a_star},
        {"analytic_b", exact.b_star},
        {"analytic_value", exact.value},
        {"abs_diff_a", da},
        {"abs_diff_b", db},
        {"abs_diff_value", dv},
        {"within_tolerance", ok},
    };
    return {std::move(r), ok};
}

Report cmd_risk_curve(double eta, double a, double b, long long points, std::ostream& err) {
    if (points < 2) throw std::invalid_argument("points must be at least 2, got " + std::to_string(points));
    const ParamSpace space(eta);
    const BinaryEstimator est{a, b};
    std::vector<CurvePoint> curve;
    if (eta == 0.0) {
        err << "warning: eta = 0 leaves a single theta; points coerced to 1\n";
        curve.push_back({0.0, risk_at(est, 0.0)});
    } else {
        curve = risk_curve(est, space, static_cast<std::size_t>(points));
    }
    Report r{"risk-curve", {{"eta", eta}, {"a", a}, {"b", b}, {"points", static_cast<long long>(curve.size())}},
             {}, Table{"curve", {"theta", "risk"}, {}}, {}};
    for (const auto& p : curve) r.table->rows.push_back({p.theta, p.risk});
    return r;
}

struct VerifyOutcome {
    Report report;
    std::vector<PropertyCheck> failures;
};

VerifyOutcome cmd_verify(const VerifyOptions& options) {
    const std::vector<PropertyCheck> checks = run_verification(options);
    using Tol = VerifyTolerances;
    Report r{"verify",
             {{"eta_step", options.eta_step},
              {"grid_step", options.grid_step},
              {"samples", static_cast<long long>(options.samples)}},
             {},
             Table{"checks", {"eta", "property", "status", "detail"}, {}},
             {{"grid_coordinate", "2*grid_step"},
              {"grid_value", "grid_step"},
              {"refine_tol", Tol::refine_tol},
              {"refine_coordinate", Tol::refine_coord},
              {"refine_value", Tol::refine_value},
              {"endpoint_equality", Tol::endpoint_equality},
              {"value_consistency", Tol::value_consistency},
              {"hyperbola_margin", Tol::hyperbola_margin},
              {"ellipse_residual", Tol::ellipse_residual},
              {"identity_ulps", Tol::identity_ulps},
              {"constant_risk_ulps", 1.0}}};
    std::vector<PropertyCheck> failures;
    for (const auto& c : checks) {
        r.table->rows.push_back({c.eta, c.property, std::string(c.pass ? "PASS" : "FAIL"), c.detail});
        if (!c.pass) failures.push_back(c);
    }
    r.results = {{"checks", static_cast<long long>(checks.size())},
                 {"passed", static_cast<long long>(checks.size() - failures.size())},
                 {"all_pass", failures.empty()}};
    return {std::move(r), std::move(failures)};
}

void emit(const std::string& text, const GlobalOptions& global, std::ostream& out) {
    if (global.out_path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(global.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open output file '" + global.out_path + "'");
    file << text;
    file.flush();
    if (!file) throw IoError("failed writing output file '" + global.out_path + "'");
}

std::string one_line(std::string message) {
    for (auto& ch : message) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    while (!message.empty() && message.back() == ' ') message.pop_back();
    return message;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimax estimation of a Bernoulli proportion on a restricted interval [0, eta]", "bernmm"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", global.out_path, "Write output to PATH instead of standard output");
    app.add_option("--threads", global.threads, "Worker threads for the grid sweep")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    app.add_option("--seed", global.seed, "Seed for randomized property checks")->capture_default_str();
    app.add_flag("--timing", global.timing, "Report wall time (makes output run-dependent)");

    double eta = 0.0;
    long long x = 0;
    auto* estimate = app.add_subcommand("estimate", "Closed-form minimax estimate for one observation");
    estimate->add_option("--eta", eta, "Upper bound of the parameter space")->required();
    estimate->add_option("--x", x, "Observed outcome")->required()->check(CLI::IsMember({0, 1}));

    long long n = 1;
    long long k = 0;
    auto* classic = app.add_subcommand("classic", "Unrestricted minimax estimate from k successes in n trials");
    classic->add_option("--n", n, "Number of trials")->required()->check(CLI::PositiveNumber);
    classic->add_option("--k", k, "Number of successes")->required()->check(CLI::NonNegativeNumber);

    double step = 1e-3;
    double tol = 1e-8;
    auto* solve = app.add_subcommand("solve", "Grid search plus refinement, compared with the closed form");
    solve->add_option("--eta", eta, "Upper bound of the parameter space")->required();
    solve->add_option("--step", step, "Grid spacing")->capture_default_str();
    solve->add_option("--tol", tol, "Refinement bracket tolerance")->capture_default_str();

    double a = 0.0;
    double b = 0.0;
    long long points = 101;
    auto* curve = app.add_subcommand("risk-curve", "Tabulate the risk of (a, b) over [0, eta]");
    curve->add_option("--eta", eta, "Upper bound of the parameter space")->required();
    curve->add_option("--a", a, "Estimate when X = 0")->required();
    curve->add_option("--b", b, "Estimate when X = 1")->required();
    curve->add_option("--points", points, "Number of theta samples")->capture_default_str();

    VerifyOptions verify_options;
    auto* verify = app.add_subcommand("verify", "Run the property battery over an eta sweep");
    verify->add_option("--eta-step", verify_options.eta_step, "Spacing of the eta sweep")->capture_default_str();
    verify->add_option("--grid-step", verify_options.grid_step, "Grid spacing for the oracle")
        ->capture_default_str();
    verify->add_option("--samples", verify_options.samples, "Random inputs per sampled property")
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kArgumentError;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        Report report;
        int code = kSuccess;
        if (estimate->parsed()) {
            report = cmd_estimate(eta, x);
        } else if (classic->parsed()) {
            report = cmd_classic(n, k);
        } else if (solve->parsed()) {
            auto outcome = cmd_solve(eta, step, tol, global.threads);
            report = std::move(outcome.report);
            if (!outcome.within_tolerance) {
                err << "error: numeric solution differs from the closed form beyond tolerance\n";
                code = kToleranceFailure;
            }
        } else if (curve->parsed()) {
            report = cmd_risk_curve(eta, a, b, points, err);
        } else if (verify->parsed()) {
            verify_options.seed = global.seed;
            verify_options.threads = global.threads;
            auto outcome = cmd_verify(verify_options);
            report = std::move(outcome.report);
            for (const auto& f : outcome.failures) {
                err << "FAIL eta=" << shortest(f.eta) << " property=" << f.property << " " << f.detail << '\n';
            }
            if (!outcome.failures.empty()) code = kToleranceFailure;
        }

        std::optional<double> wall_ms;
        if (global.timing) {
            wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        }
        std::string text;
        if (global.format == "json") text = render_json(report, global, wall_ms);
        else if (global.format == "csv") text = render_csv(report);
        else text = render_text(report, global, wall_ms);
        emit(text, global, out);
        return code;
    } catch (const IoError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kIoError;
    } catch (const ConvergenceError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kArgumentError;
    } catch (const std::domain_error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kArgumentError;
    }
}

}  // namespace bernmm::cli
