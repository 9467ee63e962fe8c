// eseries: scriptable frontend for the expansion coefficients, the
// convergence-order experiments, the integral representations and the
// Carleman weight reports.
//
// Exit codes: 0 success, 1 verification/tolerance failure, 2 usage error.
// Output is byte-deterministic for a fixed command line (worker threads, if
// enabled through ESERIES_WORKERS, never change the bytes).

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eseries/carleman.hpp"
#include "eseries/exact_coeffs.hpp"
#include "eseries/expansion.hpp"
#include "eseries/order_probe.hpp"
#include "eseries/quadrature.hpp"
#include "eseries/rational.hpp"
#include "eseries/real.hpp"

namespace {

using eseries::PrecisionContext;
using eseries::Rational;
using eseries::Real;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    long precision_bits = 256;
    std::string format = "json";  // "json" | "csv"
    std::string tolerance = "1e-12";
    int digits = 30;
    std::string out_path;

    PrecisionContext context() const { return PrecisionContext(precision_bits); }
    Real tolerance_value(const PrecisionContext& ctx) const { return ctx.parse(tolerance); }
};

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--precision-bits", cfg.precision_bits, "Mantissa bits (>= 64)")
        ->capture_default_str();
    cmd->add_option("--format", cfg.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--tolerance", cfg.tolerance, "Acceptance tolerance (decimal string)")
        ->capture_default_str();
    cmd->add_option("--digits", cfg.digits, "Significant digits for decimal renderings")
        ->capture_default_str();
    cmd->add_option("--out", cfg.out_path, "Write the report to this file instead of stdout");
}

std::string decimal(const Rational& q, const RunConfig& cfg) {
    return Real::of(q, cfg.precision_bits).str(cfg.digits);
}

// ---------------------------------------------------------------------------
// Rendering. JSON is one top-level object {command, config, rows|result,
// expected, status}; CSV mirrors it with '#'-prefixed config lines, a header
// row, and a trailing status line.
// ---------------------------------------------------------------------------

struct Report {
    std::string command;
    Json config = Json::object();
    std::optional<Json> rows;  // array of uniform objects
    std::optional<Json> result;
    std::optional<Json> expected;
    bool ok = true;

    std::string to_json() const {
        Json doc;
        doc["command"] = command;
        doc["config"] = config;
        if (rows) doc["rows"] = *rows;
        if (result) doc["result"] = *result;
        if (expected) doc["expected"] = *expected;
        doc["status"] = ok ? "ok" : "fail";
        return doc.dump(2) + "\n";
    }

    static std::string scalar(const Json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_null()) return "";
        return v.dump();
    }

    std::string to_csv() const {
        std::string s;
        s += "# command=" + command + "\n";
        for (const auto& [key, value] : config.items()) {
            s += "# " + key + "=" + scalar(value) + "\n";
        }
        if (expected) {
            for (const auto& [key, value] : expected->items()) {
                s += "# expected." + key + "=" + scalar(value) + "\n";
            }
        }
        if (rows && !rows->empty()) {
            std::string header;
            for (const auto& [key, value] : rows->front().items()) {
                if (!header.empty()) header += ',';
                header += key;
            }
            s += header + "\n";
            for (const auto& row : *rows) {
                std::string line;
                for (const auto& [key, value] : row.items()) {
                    if (!line.empty()) line += ',';
                    line += scalar(value);
                }
                s += line + "\n";
            }
        }
        if (result) {
            for (const auto& [key, value] : result->items()) {
                s += key + "=" + scalar(value) + "\n";
            }
        }
        s += "# status=" + std::string(ok ? "ok" : "fail") + "\n";
        return s;
    }

    int emit(const RunConfig& cfg) const {
        std::string text = cfg.format == "csv" ? to_csv() : to_json();
        if (cfg.out_path.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream f(cfg.out_path, std::ios::binary);
            if (!f) {
                std::fprintf(stderr, "eseries: cannot open output file '%s'\n", cfg.out_path.c_str());
                return kExitUsage;
            }
            f << text;
        }
        return ok ? kExitOk : kExitFailure;
    }
};

Json base_config(const RunConfig& cfg) {
    Json c;
    c["precision_bits"] = cfg.precision_bits;
    c["format"] = cfg.format;
    c["tolerance"] = cfg.tolerance;
    c["digits"] = cfg.digits;
    return c;
}

// ---------------------------------------------------------------------------
// coeffs
// ---------------------------------------------------------------------------

int run_coeffs(const RunConfig& cfg, const std::string& route_name, long n_max) {
    eseries::Route route = eseries::route_from_name(route_name);
    auto table = eseries::coefficient_table(route, static_cast<std::size_t>(n_max));

    Report rep;
    rep.command = "coeffs";
    rep.config = base_config(cfg);
    rep.config["route"] = eseries::route_name(route);
    rep.config["n_max"] = n_max;
    Json rows = Json::array();
    for (const auto& [index, value] : table.entries) {
        Json row;
        row["index"] = index;
        row["rational"] = eseries::to_string(value);
        row["decimal"] = decimal(value, cfg);
        rows.push_back(std::move(row));
    }
    rep.rows = std::move(rows);
    return rep.emit(cfg);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const RunConfig& cfg, long n_max, long corrupt_index) {
    Report rep;
    rep.command = "verify";
    rep.config = base_config(cfg);
    rep.config["n_max"] = n_max;

    Json rows = Json::array();
    auto add_check = [&rows](const std::string& name, bool pass, long failure_index,
                             const std::string& detail) {
        Json row;
        row["check"] = name;
        row["status"] = pass ? "pass" : "fail";
        row["failure_index"] = pass ? Json() : Json(failure_index);
        row["detail"] = detail;
        rows.push_back(std::move(row));
    };

    bool all_ok = true;

    {  // exact agreement of the two d routes
        bool pass = true;
        long bad = -1;
        std::string detail;
        for (long n = 1; n <= n_max; ++n) {
            Rational lhs = eseries::d_from_b(static_cast<std::size_t>(n));
            if (n == corrupt_index) lhs += Rational(1, 7);  // test hook
            Rational rhs = eseries::d_from_recurrence(static_cast<std::size_t>(n));
            if (lhs != rhs) {
                pass = false;
                bad = n;
                detail = "conversion " + eseries::to_string(lhs) + " != recurrence " +
                         eseries::to_string(rhs);
                break;
            }
        }
        add_check("route-agreement", pass, bad, detail);
        all_ok = all_ok && pass;
    }
    {  // positivity of b
        bool pass = true;
        long bad = -1;
        for (long n = 1; n <= n_max; ++n) {
            if (eseries::b_coeff(static_cast<std::size_t>(n)) <= 0) {
                pass = false;
                bad = n;
                break;
            }
        }
        add_check("b-positivity", pass, bad, "");
        all_ok = all_ok && pass;
    }
    {  // d_1 > 0, d_2 == 0, d_n > 0 for n >= 3
        bool pass = true;
        long bad = -1;
        for (long n = 1; n <= n_max; ++n) {
            Rational d = eseries::d_from_recurrence(static_cast<std::size_t>(n));
            bool good = n == 2 ? d == 0 : d > 0;
            if (!good) {
                pass = false;
                bad = n;
                break;
            }
        }
        add_check("d-sign-pattern", pass, bad, "");
        all_ok = all_ok && pass;
    }
    {  // a_n == (n+1) L_{n+1}
        bool pass = true;
        long bad = -1;
        for (long n = 0; n <= n_max; ++n) {
            if (eseries::a_coeff(static_cast<std::size_t>(n)) !=
                (n + 1) * eseries::log_g_coeff(static_cast<std::size_t>(n + 1))) {
                pass = false;
                bad = n;
                break;
            }
        }
        add_check("a-logg-consistency", pass, bad, "");
        all_ok = all_ok && pass;
    }

    rep.rows = std::move(rows);
    rep.ok = all_ok;
    return rep.emit(cfg);
}

// ---------------------------------------------------------------------------
// quad
// ---------------------------------------------------------------------------

int run_quad(const RunConfig& cfg, const std::string& target, long n, const std::string& x_str,
             const std::string& rule_name, int max_levels, const std::string& quad_tol) {
    PrecisionContext ctx = cfg.context();
    eseries::QuadratureConfig qcfg;
    qcfg.rule = rule_name == "gauss" ? eseries::QuadratureRule::composite_gauss
                                     : eseries::QuadratureRule::double_exponential;
    qcfg.max_levels = max_levels;
    qcfg.target_abs_tolerance = std::stod(quad_tol);
    Real tol = cfg.tolerance_value(ctx);

    Report rep;
    rep.command = "quad";
    rep.config = base_config(cfg);
    rep.config["target"] = target;
    rep.config["rule"] = rule_name;
    rep.config["max_levels"] = max_levels;
    rep.config["quad_tolerance"] = quad_tol;

    Json result;
    Real diff = ctx.real(0);

    if (target == "g-mass") {
        auto q = eseries::g_mass(qcfg, ctx);
        Real reference = ctx.e() / 24L;
        diff = abs(q.value - reference);
        result["value"] = q.value.str(cfg.digits);
        result["error_estimate"] = q.error_estimate.str(6);
        result["nodes_used"] = q.nodes_used;
        result["levels_used"] = q.levels_used;
        result["reference"] = reference.str(cfg.digits);
        result["reference_closed_form"] = "e/24";
        result["abs_diff"] = diff.str(6);
    } else if (target == "h") {
        Real x = ctx.parse(x_str);
        Real direct = eseries::alzer_h(x, eseries::HRoute::direct, qcfg, ctx);
        auto q = eseries::alzer_h_integral(x, qcfg, ctx);
        diff = abs(direct - q.value);
        result["x"] = x_str;
        result["value"] = q.value.str(cfg.digits);
        result["error_estimate"] = q.error_estimate.str(6);
        result["nodes_used"] = q.nodes_used;
        result["levels_used"] = q.levels_used;
        result["reference"] = direct.str(cfg.digits);
        result["reference_closed_form"] = "(x+1)[e-(1+1/x)^x]";
        result["abs_diff"] = diff.str(6);
    } else {  // "d"
        if (n < 2) throw std::domain_error("quad --target d requires --n >= 2");
        auto q = eseries::d_from_integral(n, qcfg, ctx);
        Rational exact = eseries::d_from_recurrence(static_cast<std::size_t>(n));
        Real reference = ctx.real(exact);
        diff = abs(q.value - reference);
        result["n"] = n;
        result["value"] = q.value.str(cfg.digits);
        result["error_estimate"] = q.error_estimate.str(6);
        result["nodes_used"] = q.nodes_used;
        result["levels_used"] = q.levels_used;
        result["reference"] = reference.str(cfg.digits);
        result["reference_rational"] = eseries::to_string(exact);
        result["abs_diff"] = diff.str(6);
    }

    rep.result = std::move(result);
    Json expected;
    expected["abs_diff_below"] = cfg.tolerance;
    rep.expected = std::move(expected);
    rep.ok = diff < tol;
    return rep.emit(cfg);
}

// ---------------------------------------------------------------------------
// order
// ---------------------------------------------------------------------------

int run_order(const RunConfig& cfg, const std::string& experiment, std::size_t depth) {
    PrecisionContext ctx = cfg.context();
    Real tol = cfg.tolerance_value(ctx);

    Report rep;
    rep.command = "order";
    rep.config = base_config(cfg);
    rep.config["experiment"] = experiment;

    if (experiment == "shift-compare") {
        rep.config["depth"] = depth;
        // First omitted term: index depth+1 for shift 1; first omitted
        // *nonzero* coefficient for shift 11/12 (the quadratic one is 0).
        long expect_b = static_cast<long>(depth) + 1;
        long expect_d = depth == 1 ? 3 : static_cast<long>(depth) + 1;

        auto est_b = eseries::truncation_order_report(Rational(1), depth, ctx);
        auto est_d = eseries::truncation_order_report(Rational(11, 12), depth, ctx);

        Json rows = Json::array();
        bool ok = true;
        auto push = [&](const char* shift, const eseries::OrderEstimate& est, long expect) {
            Json row;
            row["shift"] = shift;
            row["measured_exponent"] = est.exponent.str(12);
            row["expected_exponent"] = expect;
            row["limit_constant"] = est.limit_constant.str(12);
            bool good = abs(est.exponent - ctx.real(expect)) < ctx.real(0.05);
            row["status"] = good ? "pass" : "fail";
            ok = ok && good;
            rows.push_back(std::move(row));
        };
        push("1", est_b, expect_b);
        push("11/12", est_d, expect_d);
        rep.rows = std::move(rows);
        Json expected;
        expected["exponent_window"] = "0.05";
        rep.expected = std::move(expected);
        rep.ok = ok;
        return rep.emit(cfg);
    }

    const bool is_c = experiment == "c-fit";
    std::vector<Rational> params = is_c
        ? std::vector<Rational>{Rational(-1, 10), Rational(0), Rational(1, 10)}
        : std::vector<Rational>{Rational(0), Rational(1, 96), Rational(1, 20)};
    auto fit = eseries::fit_leading_coeffs(
        is_c ? eseries::FitSlot::quadratic_term : eseries::FitSlot::cubic_term, params, ctx);

    Json rows = Json::array();
    for (const auto& s : fit.samples) {
        Json row;
        row["param"] = eseries::to_string(s.param);
        row["measured_coefficient"] = s.measured.str(12);
        row["predicted_coefficient"] = eseries::to_string(s.predicted);
        row["predicted_decimal"] = decimal(s.predicted, cfg);
        rows.push_back(std::move(row));
    }
    rep.rows = std::move(rows);

    Real expected_root = ctx.real(fit.predicted_root);
    Real err = abs(fit.root - expected_root);
    Json result;
    result["root"] = fit.root.str(cfg.digits);
    result["root_error"] = err.str(6);
    result["difference_order"] = fit.difference_order;
    rep.result = std::move(result);
    Json expected;
    expected["root"] = eseries::to_string(fit.predicted_root);
    expected["root_decimal"] = decimal(fit.predicted_root, cfg);
    rep.expected = std::move(expected);
    rep.ok = err < tol;
    return rep.emit(cfg);
}

// ---------------------------------------------------------------------------
// carleman
// ---------------------------------------------------------------------------

int run_carleman(const RunConfig& cfg, std::string family_arg, const std::string& rank_arg,
                 bool margin_mode, const std::string& seq_arg, long n_max,
                 const std::string& yang_c, long series_depth) {
    PrecisionContext ctx = cfg.context();

    // --K / --c may complete a bare family name.
    if (!family_arg.empty() && family_arg.find(':') == std::string::npos) {
        if (series_depth > 0 &&
            (family_arg == "b-series" || family_arg == "d-series")) {
            family_arg += ":" + std::to_string(series_depth);
        } else if (!yang_c.empty() && family_arg == "yang") {
            family_arg += ":" + yang_c;
        }
    }

    Report rep;
    rep.command = "carleman";
    rep.config = base_config(cfg);
    rep.config["n_max"] = n_max;

    if (!rank_arg.empty()) {
        std::vector<eseries::WeightFamily> families;
        std::size_t pos = 0;
        while (pos <= rank_arg.size()) {
            std::size_t comma = rank_arg.find(',', pos);
            std::string piece = rank_arg.substr(pos, comma == std::string::npos
                                                        ? std::string::npos
                                                        : comma - pos);
            if (!piece.empty()) families.push_back(eseries::WeightFamily::parse(piece));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rep.config["mode"] = "rank";
        auto ranked = eseries::tightness_ranking(families, n_max, ctx);
        Json rows = Json::array();
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            Json row;
            row["rank"] = i + 1;
            row["family"] = ranked[i].family.name();
            row["total_slack"] = ranked[i].total_slack.str(cfg.digits);
            rows.push_back(std::move(row));
        }
        rep.rows = std::move(rows);
        return rep.emit(cfg);
    }

    eseries::WeightFamily family = eseries::WeightFamily::parse(family_arg);
    rep.config["family"] = family.name();

    if (margin_mode) {
        rep.config["mode"] = "margin";
        auto scan = eseries::margin_scan({family}, n_max, ctx)[0];
        Json result;
        result["min_margin"] = scan.min_margin.str(cfg.digits);
        result["argmin"] = scan.argmin;
        rep.result = std::move(result);
        Json expected;
        expected["min_margin"] = "positive";
        rep.expected = std::move(expected);
        rep.ok = scan.min_margin.sign() > 0;
        return rep.emit(cfg);
    }

    rep.config["mode"] = "report";
    eseries::SequenceSpec seq = eseries::SequenceSpec::parse(seq_arg);
    rep.config["sequence"] = seq.name();
    auto report = eseries::finite_carleman_report(seq, family, n_max, ctx);
    Json result;
    result["lhs"] = report.lhs.str(cfg.digits);
    result["rhs"] = report.rhs.str(cfg.digits);
    result["min_margin"] = report.min_margin.str(cfg.digits);
    result["holds"] = report.holds;
    rep.result = std::move(result);
    Json expected;
    expected["relation"] = "lhs < rhs";
    rep.expected = std::move(expected);
    rep.ok = report.holds && report.min_margin.sign() > 0;
    return rep.emit(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"series expansion of (1+1/x)^x and Carleman weight reports"};
    app.require_subcommand(1);

    RunConfig cfg;

    // coeffs
    auto* coeffs = app.add_subcommand("coeffs", "Emit exact coefficient tables");
    std::string route = "b";
    long coeffs_max = 10;
    coeffs->add_option("--route", route, "b | d-conversion | d-recurrence | a | log-g")
        ->capture_default_str();
    coeffs->add_option("--max", coeffs_max, "Largest index to emit")->capture_default_str();
    add_common_options(coeffs, cfg);

    // verify
    auto* verify = app.add_subcommand("verify", "Cross-route and sign checks on the exact tables");
    long verify_max = 200;
    long corrupt_index = -1;
    verify->add_option("--max", verify_max, "Largest index to verify")->capture_default_str();
    verify->add_option("--corrupt-index", corrupt_index, "")->group("");  // test hook
    add_common_options(verify, cfg);

    // quad
    auto* quad = app.add_subcommand("quad", "Quadrature targets with reference comparison");
    std::string target = "g-mass";
    long quad_n = 3;
    std::string quad_x = "1";
    std::string rule = "de";
    int max_levels = 14;
    std::string quad_tol = "1e-14";
    quad->add_option("--target", target, "g-mass | h | d")
        ->check(CLI::IsMember({"g-mass", "h", "d"}))
        ->capture_default_str();
    quad->add_option("--n", quad_n, "Coefficient index (target d)")->capture_default_str();
    quad->add_option("--x", quad_x, "Evaluation point (target h)")->capture_default_str();
    quad->add_option("--rule", rule, "de (double exponential) | gauss")
        ->check(CLI::IsMember({"de", "gauss"}))
        ->capture_default_str();
    quad->add_option("--max-levels", max_levels, "Refinement level cap")->capture_default_str();
    quad->add_option("--quad-tolerance", quad_tol, "Quadrature refinement tolerance")
        ->capture_default_str();
    add_common_options(quad, cfg);

    // order
    auto* order = app.add_subcommand("order", "Convergence-order experiments");
    std::string experiment = "shift-compare";
    std::size_t order_depth = 1;
    order->add_option("--experiment", experiment, "shift-compare | c-fit | d-fit")
        ->check(CLI::IsMember({"shift-compare", "c-fit", "d-fit"}))
        ->capture_default_str();
    order->add_option("--k", order_depth, "Truncation depth for shift-compare")
        ->capture_default_str();
    add_common_options(order, cfg);

    // carleman
    auto* carleman = app.add_subcommand("carleman", "Weight margins, finite reports, rankings");
    std::string family_arg = "classical";
    std::string rank_arg;
    std::string seq_arg = "geometric:1/2";
    bool margin_mode = false;
    long carleman_max = 10000;
    std::string yang_c;
    long series_depth = 0;
    carleman->add_option("--family", family_arg,
                         "classical | bicheng-debnath | ping-guozheng | yang[:c] | "
                         "b-series:K | d-series:K")
        ->capture_default_str();
    carleman->add_option("--rank", rank_arg, "Comma-separated families to rank by total slack");
    carleman->add_flag("--margin", margin_mode, "Scan the pointwise validity margin");
    carleman->add_option("--seq", seq_arg, "geometric:r | power:p | finite:v1,v2,...")
        ->capture_default_str();
    carleman->add_option("--max,--N", carleman_max, "Scan range / report length")
        ->capture_default_str();
    carleman->add_option("--c", yang_c, "Parameter for the yang family");
    carleman->add_option("--K", series_depth, "Depth for the series families");
    add_common_options(carleman, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        (void)cfg.context();  // enforce the mantissa-bits contract up front
        if (coeffs->parsed()) {
            if (coeffs_max < 0) throw std::domain_error("--max must be >= 0");
            return run_coeffs(cfg, route, coeffs_max);
        }
        if (verify->parsed()) {
            if (verify_max < 1) throw std::domain_error("--max must be >= 1");
            return run_verify(cfg, verify_max, corrupt_index);
        }
        if (quad->parsed()) {
            return run_quad(cfg, target, quad_n, quad_x, rule, max_levels, quad_tol);
        }
        if (order->parsed()) {
            // Fit roots are located to 1e-6 by contract; keep that default
            // unless the caller asked for something else.
            if (order->count("--tolerance") == 0 && experiment != "shift-compare") {
                cfg.tolerance = "1e-6";
            }
            return run_order(cfg, experiment, order_depth);
        }
        if (carleman->parsed()) {
            // Margins scan to 1e5 by default; reports and rankings to 1e4.
            if (margin_mode && carleman->count("--max") == 0) carleman_max = 100000;
            return run_carleman(cfg, family_arg, rank_arg, margin_mode, seq_arg, carleman_max,
                                yang_c, series_depth);
        }
    } catch (const eseries::QuadratureError& e) {
        std::fprintf(stderr, "eseries: %s\n", e.what());
        return kExitFailure;
    } catch (const eseries::ProbeError& e) {
        std::fprintf(stderr, "eseries: %s\n", e.what());
        return kExitFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "eseries: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
