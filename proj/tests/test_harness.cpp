#include <doctest.h>

#include <sstream>

#include "invmet/harness.hpp"

using namespace invmet;

TEST_SUITE_BEGIN("harness");

namespace {
ScanConfig small_scan() {
    ScanConfig cfg;
    cfg.domain = "g";
    cfg.deltas = log_spaced_deltas(1e-4, 1e-2, 5);
    cfg.direction.fixed = ComplexVector{cplx(1, 0), cplx(0, 0)};
    cfg.kinds = {MetricKind::Kobayashi, MetricKind::Caratheodory};
    cfg.optimizer.degree = 2;
    cfg.optimizer.starts = 1;
    cfg.optimizer.iterations = 60;
    cfg.functional_count = 4;
    cfg.seed = 42;
    return cfg;
}
} // namespace

TEST_CASE("log-spaced deltas are strictly decreasing") {
    auto d = log_spaced_deltas(1e-5, 1e-2, 8);
    REQUIRE(d.size() == 8);
    CHECK(d.front() == doctest::Approx(1e-2));
    CHECK(d.back() == doctest::Approx(1e-5));
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] < d[i - 1]);
}

TEST_CASE("fit recovers synthetic power laws to machine precision") {
    auto deltas = log_spaced_deltas(1e-5, 1e-2, 8);
    for (double p : {-0.75, -0.5, -0.25, -1.0 / 6.0, 0.0}) {
        std::vector<ScanRow> rows;
        for (double d : deltas) {
            ScanRow r;
            r.delta = d;
            r.upper = 7.0 * std::pow(d, p);
            r.lower = r.upper;
            rows.push_back(r);
        }
        FitResult f = fit_exponent(rows, FitField::Upper);
        CHECK(f.slope == doctest::Approx(p).epsilon(1e-12));
        CHECK(f.point_count == 8);
        CHECK(f.r_squared == doctest::Approx(1.0));
    }
}

TEST_CASE("fit rejects insufficient data") {
    std::vector<ScanRow> rows(3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].delta = 1e-2 / (i + 1.0);
        rows[i].upper = 1.0;
    }
    CHECK_THROWS_AS((void)fit_exponent(rows, FitField::Upper), parameter_error);

    // Non-finite and nonpositive values are dropped before the count check.
    std::vector<ScanRow> mixed(6);
    for (std::size_t i = 0; i < mixed.size(); ++i) {
        mixed[i].delta = 1e-2 / std::pow(2.0, static_cast<double>(i));
        mixed[i].upper = i < 3 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    CHECK_THROWS_AS((void)fit_exponent(mixed, FitField::Upper), parameter_error);
}

TEST_CASE("chain check is empty on consistent rows and flags injections") {
    std::vector<ScanRow> rows;
    ScanRow cara;
    cara.delta = 1e-3;
    cara.X = ComplexVector{cplx(1, 0)};
    cara.kind = MetricKind::Caratheodory;
    cara.lower = 0.8;
    cara.upper = 2.0;
    ScanRow kob = cara;
    kob.kind = MetricKind::Kobayashi;
    kob.lower = 1.0;
    kob.upper = 1.5;
    rows = {cara, kob};
    CHECK(chain_check(rows).empty());

    // Injected violation: caratheodory lower above the kobayashi upper.
    rows[0].lower = 1.6;
    auto v = chain_check(rows);
    REQUIRE(v.size() == 1);
    CHECK(v[0].lower_kind == MetricKind::Caratheodory);
    CHECK(v[0].upper_kind == MetricKind::Kobayashi);

    // Azukawa and Kobayashi-Buseman are incomparable.
    ScanRow az = cara;
    az.kind = MetricKind::Azukawa;
    az.lower = 3.0;
    az.upper = 10.0;
    ScanRow kb = cara;
    kb.kind = MetricKind::KobBuseman;
    kb.lower = 0.1;
    kb.upper = 0.2;
    auto v2 = chain_check({az, kb});
    CHECK(v2.empty());
}

TEST_CASE("scan on G: rows carry lemkob lowers and certified uppers") {
    auto rows = run_scan(small_scan());
    REQUIRE(rows.size() == 10);
    int kob_rows = 0;
    for (const ScanRow& r : rows) {
        CHECK(r.error.empty());
        if (r.kind != MetricKind::Kobayashi) continue;
        ++kob_rows;
        CHECK(r.method == "pattern-search/lemkob-two-sided");
        CHECK(r.lower == doctest::Approx(1.0 / (38.0 * std::pow(r.delta, 0.75))));
        CHECK(std::isfinite(r.upper));
        CHECK(r.lower <= r.upper);
        CHECK(r.margin > 0.0);
    }
    CHECK(kob_rows == 5);
    CHECK(chain_check(rows).empty());

    // Certificate-lower slope is exactly -3/4 on this scan.
    std::vector<ScanRow> kob_only;
    for (const ScanRow& r : rows)
        if (r.kind == MetricKind::Kobayashi) kob_only.push_back(r);
    FitResult f = fit_exponent(kob_only, FitField::Lower);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
}

TEST_CASE("scan determinism: same seed gives byte-identical reports") {
    ScanConfig cfg = small_scan();
    auto rows1 = run_scan(cfg);
    cfg.threads = 2;
    auto rows2 = run_scan(cfg);
    std::ostringstream a, b;
    write_rows_csv(a, rows1);
    write_rows_csv(b, rows2);
    CHECK(a.str() == b.str());
}

TEST_CASE("zero direction yields zero rows") {
    ScanConfig cfg = small_scan();
    cfg.deltas = {1e-2, 1e-3, 1e-4, 1e-5};
    cfg.direction.fixed = ComplexVector(2);
    auto rows = run_scan(cfg);
    for (const ScanRow& r : rows) {
        CHECK(r.lower == 0.0);
        CHECK(r.upper == 0.0);
        CHECK(r.method == "zero-vector");
    }
}

TEST_CASE("csv round trip and header") {
    auto rows = run_scan(small_scan());
    std::ostringstream os;
    write_rows_csv(os, rows);
    std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "delta,x_re[],x_im[],kind,lower,upper,method,margin,wallclock_ms");
    std::istringstream is(text);
    auto parsed = rows_from_csv(is);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].delta == rows[i].delta);
        CHECK(parsed[i].kind == rows[i].kind);
        CHECK(parsed[i].lower == rows[i].lower);
        CHECK(parsed[i].upper == rows[i].upper);
        CHECK(parsed[i].method == rows[i].method);
        CHECK(distance(parsed[i].X, rows[i].X) == 0.0);
    }

    // Header-only output for an empty row set.
    std::ostringstream empty;
    write_rows_csv(empty, {});
    CHECK(empty.str() == std::string(kCsvHeader) + "\n");

    // An 8-row scan emits a 9-line file.
    std::vector<ScanRow> eight(rows.begin(), rows.begin() + 8);
    std::ostringstream nine;
    write_rows_csv(nine, eight);
    std::string nine_text = nine.str();
    CHECK(std::count(nine_text.begin(), nine_text.end(), '\n') == 9);
}

TEST_CASE("json round trip mirrors the typed records") {
    auto rows = run_scan(small_scan());
    json j = rows_to_json(rows);
    auto parsed = rows_from_json(j);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].upper == rows[i].upper);
        CHECK(parsed[i].method == rows[i].method);
    }
}

TEST_CASE("scan config parses from JSON") {
    json j = {{"domain", "g"},
              {"delta_range", {{"min", 1e-5}, {"max", 1e-2}, {"count", 8}}},
              {"direction", {{"family", {{"c", 100.0}}}}},
              {"kinds", {"kobayashi", "caratheodory"}},
              {"optimizer", {{"degree", 3}, {"starts", 2}, {"iterations", 100}}},
              {"seed", 7}};
    ScanConfig cfg = scan_config_from_json(j);
    CHECK(cfg.domain == "g");
    CHECK(cfg.deltas.size() == 8);
    CHECK(cfg.deltas.front() == doctest::Approx(1e-2));
    CHECK(cfg.direction.family_c.has_value());
    CHECK(cfg.optimizer.degree == 3);
    CHECK(cfg.seed == 7);
    ComplexVector X = cfg.direction.at(1e-4, 2);
    CHECK(X[0].real() == doctest::Approx(100.0 * 1e-2));
    CHECK(X[1] == cplx(1, 0));

    json bad = j;
    bad.erase("direction");
    CHECK_THROWS_AS((void)scan_config_from_json(bad), error);
}

TEST_CASE("verify_lemma dispatches and rejects unknown names") {
    VerifyReport r = verify_lemma("realf", 50, 7);
    CHECK(r.trials == 50);
    CHECK(r.failures == 0);
    CHECK(r.worst_slack >= 0.0);
    CHECK_THROWS_AS((void)verify_lemma("nope", 10, 1), configuration_error);
}

TEST_CASE("verify_lemma product and inclusion smoke") {
    VerifyReport p = verify_lemma("product", 4, 11);
    CHECK(p.failures == 0);
    VerifyReport inc = verify_lemma("inclusion", 10, 13);
    CHECK(inc.trials == 10);
    CHECK(inc.failures == 0);
}

TEST_CASE("emit_report writes files and surfaces path errors") {
    auto rows = run_scan(small_scan());
    emit_report(rows, ReportFormat::Csv, "/tmp/invmet_test_rows.csv");
    std::ifstream is("/tmp/invmet_test_rows.csv");
    auto parsed = rows_from_csv(is);
    CHECK(parsed.size() == rows.size());
    CHECK_THROWS_AS(emit_report(rows, ReportFormat::Csv, "/nonexistent-dir/x.csv"),
                    configuration_error);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("harness");

TEST_CASE("disk and certificate JSON surfaces") {
    AnalyticDisk quad = make_quad_disk(0.04, cplx(0.2, 0.1), cplx(1, 0));
    json j = to_json(quad);
    AnalyticDisk back = disk_from_json(j);
    CHECK(distance(back.center, quad.center) == 0.0);
    CHECK(back.radius == quad.radius);
    REQUIRE(back.coeffs.size() == quad.coeffs.size());
    for (std::size_t c = 0; c < back.coeffs.size(); ++c)
        for (std::size_t k = 0; k < back.coeffs[c].size(); ++k)
            CHECK(back.coeffs[c][k] == quad.coeffs[c][k]);

    ContainmentCertificate cert =
        certify_containment(with_radius(quad, 0.995 * quad.radius), ModelDomain::half_parab());
    json jc = to_json(cert);
    CHECK(jc.at("valid").get<bool>() == cert.valid);
    CHECK(jc.at("slack").get<double>() == cert.slack);
    CHECK(jc.at("grid")[0].get<int>() == cert.grid.first);

    // Infinite uppers serialize as null and parse back.
    MetricEstimate inf_est;
    inf_est.upper = std::numeric_limits<double>::infinity();
    json je = to_json(inf_est);
    CHECK(je.at("upper").is_null());
    CHECK(std::isinf(bound_from_json(je.at("upper"))));

    // Sample and figure JSON carry their metadata.
    IndicatrixSample s;
    s.base = ComplexVector(2);
    s.entries.push_back({ComplexVector{cplx(1, 0), cplx(0, 0)}, 1.0});
    json js = to_json(s);
    CHECK(js.contains("config"));
    CHECK(js.at("entries").size() == 1);
    json jf = to_json(hartogs_polydisk(2.0, 2.0, 1e-3, 0.998, 3, 3));
    CHECK(jf.at("radii").size() == 3);
    CHECK(jf.at("worst_slack").get<double>() > 0.0);

    json jl = to_json(lemkob_bounds(0.01, cplx(1, 0), cplx(1, 0)), 0.01, cplx(1, 0), cplx(1, 0));
    CHECK(jl.at("regime").get<std::string>() == "two-sided");
    CHECK(jl.at("asymptotic_only").get<bool>() == false);
}

TEST_SUITE_END();
