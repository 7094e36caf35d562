// Experiment CLI for the invariant-metrics toolkit.
//
// Subcommands: estimate, scan, fit, chain-check, verify, report.
// Exit codes: 0 success, 1 property violation found, 2 invalid
// configuration, 3 estimation failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "invmet/invmet.hpp"

namespace {

using namespace invmet;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEstimation = 3;

/// Parse one complex scalar: "1.5", "2i", "1+2i", "-0.3-4e-2i", "i", "-i".
cplx parse_complex(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw configuration_error("empty complex component");
    if (s.back() != 'i' && s.back() != 'I') {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw configuration_error("");
            return cplx(v, 0.0);
        } catch (const std::exception&) {
            throw configuration_error("bad complex component '" + s + "'");
        }
    }
    std::string body = s.substr(0, s.size() - 1); // strip the i
    // Split the imaginary term from an optional leading real term at the
    // last +/- that is not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto to_num = [&](std::string t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        try {
            std::size_t pos = 0;
            double v = std::stod(t, &pos);
            if (pos != t.size()) throw configuration_error("");
            return v;
        } catch (const std::exception&) {
            throw configuration_error("bad complex component '" + s + "'");
        }
    };
    if (split == std::string::npos) return cplx(0.0, to_num(body));
    return cplx(to_num(body.substr(0, split)), to_num(body.substr(split)));
}

ComplexVector parse_cvec(const std::string& s) {
    std::vector<cplx> comps;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) comps.push_back(parse_complex(item));
    if (comps.empty()) throw configuration_error("empty vector '" + s + "'");
    return ComplexVector(std::move(comps));
}

std::vector<MetricKind> parse_kinds(const std::string& s) {
    std::vector<MetricKind> kinds;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) kinds.push_back(parse_metric_kind(item));
    if (kinds.empty()) throw configuration_error("no metric kinds given");
    return kinds;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw configuration_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os.good()) throw configuration_error("write failed for '" + path + "'");
}

std::vector<ScanRow> load_rows(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw configuration_error("cannot open '" + path + "'");
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        json j;
        try {
            is >> j;
        } catch (const json::exception& e) {
            throw configuration_error(std::string("bad JSON input: ") + e.what());
        }
        return rows_from_json(j);
    }
    return rows_from_csv(is);
}

int run(int argc, char** argv) {
    CLI::App app{"Numerical estimation of holomorphically invariant metrics on model domains"};
    app.require_subcommand(1);

    // --- estimate ---
    auto* est = app.add_subcommand("estimate", "Certified metric brackets at one (point, vector)");
    std::string est_domain = "g", est_point, est_vector, est_kinds = "kobayashi";
    std::string est_out;
    KobConfig est_cfg;
    est->add_option("--domain", est_domain, "Domain spec, e.g. g, disk, geps:m=2,k=2,n=3,eps=2");
    est->add_option("--point", est_point, "Base point, comma-separated complex components")
        ->required();
    est->add_option("--vector", est_vector, "Tangent vector, same format")->required();
    est->add_option("--kinds", est_kinds, "Comma-separated metric kinds");
    est->add_option("--degree", est_cfg.degree, "Max disk coefficient degree");
    est->add_option("--starts", est_cfg.starts, "Pattern-search starts");
    est->add_option("--iterations", est_cfg.iterations, "Objective evaluations per start");
    est->add_option("--seed", est_cfg.seed, "Deterministic seed");
    est->add_option("--out", est_out, "Write JSON here instead of stdout");

    // --- scan ---
    auto* scan = app.add_subcommand("scan", "Boundary-approach scan from a JSON config");
    std::string scan_config_path, scan_out, scan_format = "csv";
    bool scan_timings = false;
    scan->add_option("--config", scan_config_path, "Scan config JSON file")->required();
    scan->add_option("--out", scan_out, "Output path (default stdout)");
    scan->add_option("--format", scan_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    scan->add_flag("--timings", scan_timings,
                   "Include wall-clock times (breaks byte-identical reruns)");

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "Log-log power-law fit over scan rows");
    std::string fit_input, fit_field = "upper", fit_kind;
    fit->add_option("--input", fit_input, "Rows file (.csv or .json)")->required();
    fit->add_option("--field", fit_field, "lower or upper")
        ->check(CLI::IsMember({"lower", "upper"}));
    fit->add_option("--kind", fit_kind, "Restrict to one metric kind");

    // --- chain-check ---
    auto* chain = app.add_subcommand("chain-check", "Flag lower/upper chain violations");
    std::string chain_input;
    chain->add_option("--input", chain_input, "Rows file (.csv or .json)")->required();

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "Run a lemma verification campaign");
    std::string verify_lemma_name;
    int verify_trials = 100;
    std::uint64_t verify_seed = 1;
    verify->add_option("--lemma", verify_lemma_name,
                       "lemkob|modeps|realf|basic|product|inclusion|exhaustion")
        ->required();
    verify->add_option("--trials", verify_trials, "Trial count");
    verify->add_option("--seed", verify_seed, "Deterministic seed");

    // --- report ---
    auto* report = app.add_subcommand("report", "Convert row reports between csv and json");
    std::string report_input, report_format = "csv", report_out;
    bool report_timings = false;
    report->add_option("--input", report_input, "Rows file (.csv or .json)")->required();
    report->add_option("--format", report_format, "Target format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    report->add_option("--out", report_out, "Output path (default stdout)");
    report->add_flag("--timings", report_timings, "Preserve wall-clock times");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (est->parsed()) {
        ModelDomain dom = parse_domain(est_domain);
        ComplexVector p = parse_cvec(est_point);
        ComplexVector X = parse_cvec(est_vector);
        EstimateOptions opts;
        opts.optimizer = est_cfg;
        auto estimates = estimate_kinds(dom, p, X, parse_kinds(est_kinds), opts);
        json out = json::array();
        bool failed = false;
        for (const MetricEstimate& e : estimates) {
            json je = to_json(e);
            je["config"] = to_json(est_cfg);
            out.push_back(std::move(je));
            failed = failed || (!std::isfinite(e.upper) && !X.is_zero());
        }
        write_output(out.dump(2) + "\n", est_out);
        return failed ? kExitEstimation : kExitOk;
    }

    if (scan->parsed()) {
        std::ifstream is(scan_config_path);
        if (!is) throw configuration_error("cannot open config '" + scan_config_path + "'");
        json j;
        try {
            is >> j;
        } catch (const json::exception& e) {
            throw configuration_error(std::string("bad config JSON: ") + e.what());
        }
        ScanConfig cfg = scan_config_from_json(j);
        auto rows = run_scan(cfg);
        std::string text;
        if (scan_format == "csv") {
            std::ostringstream os;
            write_rows_csv(os, rows, scan_timings);
            text = os.str();
        } else {
            text = rows_to_json(rows, scan_timings).dump(2) + "\n";
        }
        write_output(text, scan_out);
        for (const ScanRow& r : rows)
            if (!r.error.empty()) return kExitEstimation;
        return kExitOk;
    }

    if (fit->parsed()) {
        auto rows = load_rows(fit_input);
        if (!fit_kind.empty()) {
            MetricKind k = parse_metric_kind(fit_kind);
            std::vector<ScanRow> filtered;
            for (const ScanRow& r : rows)
                if (r.kind == k) filtered.push_back(r);
            rows = std::move(filtered);
        }
        FitResult f = fit_exponent(rows, fit_field == "lower" ? FitField::Lower : FitField::Upper);
        json out = {{"slope", f.slope},
                    {"intercept", f.intercept},
                    {"r_squared", f.r_squared},
                    {"point_count", f.point_count}};
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }

    if (chain->parsed()) {
        auto rows = load_rows(chain_input);
        auto violations = chain_check(rows);
        json out = json::array();
        for (const ChainViolation& v : violations)
            out.push_back({{"delta", v.delta},
                           {"x", v.x},
                           {"lower_kind", to_string(v.lower_kind)},
                           {"upper_kind", to_string(v.upper_kind)},
                           {"lower", v.lower},
                           {"upper", v.upper}});
        std::cout << out.dump(2) << "\n";
        return violations.empty() ? kExitOk : kExitViolation;
    }

    if (verify->parsed()) {
        VerifyReport rep = verify_lemma(verify_lemma_name, verify_trials, verify_seed);
        json out = {{"lemma", rep.lemma},
                    {"trials", rep.trials},
                    {"failures", rep.failures},
                    {"worst_slack", bound_to_json(rep.worst_slack)},
                    {"notes", rep.notes}};
        std::cout << out.dump(2) << "\n";
        return rep.failures == 0 ? kExitOk : kExitViolation;
    }

    if (report->parsed()) {
        auto rows = load_rows(report_input);
        std::string text;
        if (report_format == "csv") {
            std::ostringstream os;
            write_rows_csv(os, rows, report_timings);
            text = os.str();
        } else {
            text = rows_to_json(rows, report_timings).dump(2) + "\n";
        }
        write_output(text, report_out);
        return kExitOk;
    }
    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const invmet::configuration_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const invmet::parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const invmet::dimension_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const invmet::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    }
}
