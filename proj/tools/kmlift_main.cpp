// Command-line front end: traces | series | theta | verify subcommands with
// JSON or CSV output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kmlift/verify.hpp"

using json = nlohmann::ordered_json;
using namespace kmlift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Options {
    int prec = 60;
    long dmin = -200;
    std::string tau = "0.0+1.0i";
    std::string format = "json";
    std::string out;
    double cutoff = 0.0;
};

/// Parse "a+bi" with decimal parts, e.g. "0.5+1.25i", "-0.3-0.7i".
std::optional<std::pair<double, double>> parse_complex(const std::string& s) {
    static const std::regex re(R"(^([+-]?[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)([+-][0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)i$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return std::nullopt;
    return std::make_pair(std::stod(m[1].str()), std::stod(m[2].str()));
}

PrecisionContext make_ctx(const Options& opt) {
    PrecisionContext ctx = PrecisionContext::with_digits(opt.prec);
    if (opt.cutoff > 0.0) ctx.lattice_cutoff = opt.cutoff;
    return ctx;
}

Complex make_tau(const Options& opt, const PrecisionContext& ctx) {
    auto parsed = parse_complex(opt.tau);
    if (!parsed) throw CLI::ValidationError("--tau", "expected format a+bi");
    if (parsed->second <= 0.0) throw CLI::ValidationError("--tau", "Im tau must be positive");
    return {Real(parsed->first, ctx.prec_bits()), Real(parsed->second, ctx.prec_bits())};
}

void emit(const json& doc, const Options& opt, const std::vector<std::string>& csv_columns) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) throw std::runtime_error("cannot open output file " + opt.out);
        os = &file;
    }
    if (opt.format == "json") {
        *os << doc.dump(2) << "\n";
        return;
    }
    // RFC-4180 style CSV of the rows array
    auto quote = [](std::string s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += "\"\"";
            else q += ch;
        }
        return q + "\"";
    };
    for (size_t i = 0; i < csv_columns.size(); ++i)
        *os << (i ? "," : "") << csv_columns[i];
    *os << "\r\n";
    for (const auto& row : doc.at("rows")) {
        for (size_t i = 0; i < csv_columns.size(); ++i) {
            const auto& v = row.at(csv_columns[i]);
            std::string cell = v.is_string() ? v.get<std::string>() : v.dump();
            *os << (i ? "," : "") << quote(cell);
        }
        *os << "\r\n";
    }
}

json meta_for(const PrecisionContext& ctx) {
    return {{"precision", ctx.precision_digits},
            {"series_order", ctx.series_order},
            {"tail_tolerance", ctx.tail_tolerance},
            {"lattice_cutoff", ctx.lattice_cutoff}};
}

int cmd_traces(const Options& opt) {
    PrecisionContext ctx = make_ctx(opt);
    traces::TraceCalculator tc(ctx);
    auto entries = tc.generating_series(opt.dmin, true);
    json rows = json::array();
    for (const auto& e : entries) {
        std::string rational;
        if (e.rational_guess) {
            rational = e.rational_guess->get_num().get_str();
            if (e.rational_guess->get_den() != 1)
                rational += "/" + e.rational_guess->get_den().get_str();
        }
        rows.push_back({{"D", e.D},
                        {"value", e.value.str(ctx.precision_digits)},
                        {"rational", rational},
                        {"classes", e.class_count},
                        {"provenance", "computed"}});
    }
    json doc = {{"meta", meta_for(ctx)}, {"rows", rows}};
    emit(doc, opt, {"D", "value", "rational", "classes"});
    return kExitOk;
}

int cmd_series(const Options& opt, const std::string& name) {
    PrecisionContext ctx = make_ctx(opt);
    modfuncs::SeriesName sn;
    if (name == "j") sn = modfuncs::SeriesName::J;
    else if (name == "e4") sn = modfuncs::SeriesName::E4;
    else if (name == "e6") sn = modfuncs::SeriesName::E6;
    else if (name == "delta") sn = modfuncs::SeriesName::Delta;
    else if (name == "e2star") sn = modfuncs::SeriesName::E2Star;
    else throw CLI::ValidationError("series", "name must be one of j|e4|e6|delta|e2star");
    QExpansion q = modfuncs::build_series(sn, ctx);
    json rows = json::array();
    for (const auto& [n, c] : q.terms)
        rows.push_back({{"exponent_num", n},
                        {"exponent_den", q.denom},
                        {"re", c.re().str(ctx.precision_digits)},
                        {"im", c.im().str(ctx.precision_digits)},
                        {"provenance", "computed"}});
    json doc = {{"meta", meta_for(ctx)}, {"rows", rows}};
    doc["meta"]["series"] = name;
    doc["meta"]["error_budget"] = q.error_budget;
    emit(doc, opt, {"exponent_num", "exponent_den", "re", "im"});
    return kExitOk;
}

int cmd_theta(const Options& opt) {
    PrecisionContext ctx = make_ctx(opt);
    Complex tau = make_tau(opt, ctx);
    json rows = json::array();
    auto add_row = [&](const std::string& name, int h, const theta::ThetaValue& tv) {
        rows.push_back({{"function", name},
                        {"h", h},
                        {"re", tv.value.re().str(ctx.precision_digits)},
                        {"im", tv.value.im().str(ctx.precision_digits)},
                        {"cutoff", tv.cutoff},
                        {"tail_bound", tv.tail_bound},
                        {"provenance", "computed"}});
    };
    for (int h = 0; h < 3; ++h) add_row("theta_3_2", h, theta::theta_unary(3, h, tau, ctx));
    for (int h = 0; h < 3; ++h) add_row("theta_7_2", h, theta::theta_unary(7, h, tau, ctx));
    for (int h = 0; h < 3; ++h) add_row("theta_4", h, theta::theta_binary_4(h, tau, ctx));
    Complex shadow = theta::shadow_combination(tau, ctx);
    rows.push_back({{"function", "shadow_combination"},
                    {"h", -1},
                    {"re", shadow.re().str(ctx.precision_digits)},
                    {"im", shadow.im().str(ctx.precision_digits)},
                    {"cutoff", 0.0},
                    {"tail_bound", 0.0},
                    {"provenance", "computed"}});
    json doc = {{"meta", meta_for(ctx)}, {"rows", rows}};
    doc["meta"]["tau"] = opt.tau;
    emit(doc, opt, {"function", "h", "re", "im", "cutoff", "tail_bound"});
    return kExitOk;
}

int cmd_verify(const Options& opt, const std::string& target) {
    PrecisionContext ctx = make_ctx(opt);
    PrecisionContext used = ctx;
    std::vector<verify::CheckResult> checks;
    if (target == "paper-values") {
        used = PrecisionContext::with_digits(std::max(opt.prec, 90));
        checks = verify::check_reference_values(used);
    } else if (target == "splitting") {
        mpfr_prec_t prec = ctx.prec_bits();
        std::vector<Complex> taus;
        if (opt.tau != "0.0+1.0i") {
            taus.push_back(make_tau(opt, ctx));
        } else {
            taus.emplace_back(Real(0L, prec), Real(0.5, prec));
            taus.emplace_back(Real(0L, prec), Real(1L, prec));
            taus.emplace_back(Real(1L, prec) / 3L, Real(2L, prec) / 3L);
        }
        checks = verify::check_splitting(taus, ctx);
    } else if (target == "lowering") {
        traces::TraceCalculator tc(ctx);
        checks = verify::check_lowering(tc);
    } else if (target == "shadow") {
        traces::TraceCalculator tc(ctx);
        checks = verify::check_shadow(tc);
    } else if (target == "integral") {
        used = PrecisionContext::with_digits(std::min(opt.prec, 40));
        traces::TraceCalculator tc(used);
        lift::QuadratureSpec spec;
        checks = verify::check_integral(make_tau(opt, used), tc, spec);
    } else if (target == "example-2-1") {
        checks = verify::check_unary_decomposition(ctx);
    } else {
        throw CLI::ValidationError(
            "verify", "target must be one of paper-values|splitting|lowering|shadow|integral|example-2-1");
    }

    json rows = json::array();
    for (const auto& c : checks)
        rows.push_back({{"check", c.name},
                        {"target", c.target},
                        {"computed", c.computed},
                        {"tolerance", c.tolerance},
                        {"residual", c.residual},
                        {"pass", c.pass},
                        {"provenance", "paper_target"}});
    json doc = {{"meta", meta_for(used)}, {"rows", rows}};
    doc["meta"]["subtarget"] = target;
    emit(doc, opt, {"check", "target", "computed", "tolerance", "residual", "pass"});
    return verify::all_pass(checks) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traces of reciprocal singular moduli and their theta lift"};
    app.require_subcommand(1);

    Options opt;
    std::string series_name, verify_target;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--prec", opt.prec, "working precision in decimal digits")
            ->check(CLI::Range(30, 240));
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", opt.out, "output path (default stdout)");
        cmd->add_option("--cutoff", opt.cutoff, "lattice cutoff override");
        cmd->add_option("--tau", opt.tau, "evaluation point a+bi");
    };

    CLI::App* traces_cmd = app.add_subcommand("traces", "trace table for dmin <= D <= 0");
    traces_cmd->add_option("--dmin", opt.dmin, "lowest discriminant")->check(CLI::Range(-100000L, -1L));
    add_common(traces_cmd);

    CLI::App* series_cmd = app.add_subcommand("series", "q-expansion coefficients");
    series_cmd->add_option("name", series_name, "one of j|e4|e6|delta|e2star")->required();
    add_common(series_cmd);

    CLI::App* theta_cmd = app.add_subcommand("theta", "theta values at tau");
    add_common(theta_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "verification report");
    verify_cmd
        ->add_option("target", verify_target,
                     "paper-values|splitting|lowering|shadow|integral|example-2-1")
        ->required();
    add_common(verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (traces_cmd->parsed()) return cmd_traces(opt);
        if (series_cmd->parsed()) return cmd_series(opt, series_name);
        if (theta_cmd->parsed()) return cmd_theta(opt);
        if (verify_cmd->parsed()) return cmd_verify(opt, verify_target);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
