#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "invmet/certificates.hpp"
#include "invmet/geometry.hpp"
#include "invmet/json_io.hpp"
#include "invmet/ktilde.hpp"
#include "invmet/metrics.hpp"

namespace invmet {

// Boundary-approach scans, log-log exponent fits, chain checks, lemma fuzz
// campaigns and deterministic CSV/JSON reporting.

// ---------------------------------------------------------------------------
// Scan configuration.
// ---------------------------------------------------------------------------

/// Either a fixed direction or the slope family X_delta = (c sqrt(delta), 1).
struct DirectionSpec {
    std::optional<ComplexVector> fixed;
    std::optional<double> family_c;

    ComplexVector at(double delta, int dim) const {
        if (fixed) {
            if (static_cast<int>(fixed->size()) != dim)
                throw configuration_error("direction dimension does not match the domain");
            return *fixed;
        }
        if (family_c) {
            if (dim != 2)
                throw configuration_error("the slope family X_delta needs a two-dimensional domain");
            return ComplexVector{cplx(*family_c * std::sqrt(delta), 0.0), cplx(1.0, 0.0)};
        }
        throw configuration_error("direction spec is empty");
    }
};

struct ScanConfig {
    std::string domain = "g";
    std::vector<double> deltas; // strictly decreasing, all positive
    DirectionSpec direction;
    std::vector<MetricKind> kinds{MetricKind::Kobayashi};
    KobConfig optimizer;
    int indicatrix_directions = 16; // only used when kob-buseman is requested
    int indicatrix_phases = 8;
    double hartogs_safety = 0.998;
    std::uint64_t seed = 1;
    int threads = 0; // 0: hardware concurrency
    int functional_count = 32;
};

inline std::vector<double> log_spaced_deltas(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi > lo) || count < 2)
        throw configuration_error("log_spaced_deltas: need 0 < lo < hi and count >= 2");
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(std::exp(std::log(hi) + (std::log(lo) - std::log(hi)) * i / (count - 1)));
    return out;
}

struct ScanRow {
    double delta = 0.0;
    ComplexVector X;
    MetricKind kind = MetricKind::Kobayashi;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::string method;
    double margin = 0.0;
    double wallclock_ms = 0.0;
    std::string error;
};

namespace detail {

inline bool is_base_form(const ComplexVector& p) {
    bool ok = p[0].real() < 0.0 && std::abs(p[0].imag()) < 1e-14;
    for (std::size_t c = 1; c < p.size(); ++c) ok = ok && std::abs(p[c]) < 1e-14;
    return ok;
}

inline void validate_deltas(const std::vector<double>& deltas) {
    if (deltas.empty()) throw configuration_error("scan: delta list is empty");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw configuration_error("scan: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw configuration_error("scan: deltas must be strictly decreasing");
    }
}

/// Pointwise-valid Kobayashi lower bound for a scan row, kept formula-pure so
/// fitted certificate slopes stay exact. The intermediate regime's liminf
/// bound is never used pointwise; the Schwarz floor stands in for it.
inline std::pair<double, std::string> scan_kob_lower(const ModelDomain& dom,
                                                     const ComplexVector& p,
                                                     const ComplexVector& X, double delta,
                                                     double cara_value) {
    if (dom.kind() == DomainKind::HalfParab && is_base_form(p)) {
        LemkobResult lr = lemkob_bounds(delta, X[0], X[1]);
        if (!lr.asymptotic_only)
            return {lr.lower, std::string("lemkob-") + to_string(lr.regime)};
        return {std::abs(X[1]), "schwarz"};
    }
    if (dom.kind() == DomainKind::OmegaXi && is_base_form(p)) {
        auto v = modeps_lower(dom.xi(), 1.0, delta, X[0], X[1]);
        if (v) return {*v, "modeps"};
        return {std::abs(X[1]), "schwarz"};
    }
    return {cara_value, "caratheodory"};
}

template <typename F>
inline void parallel_over(std::size_t n, int threads, F&& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max<std::size_t>(hw ? hw : 1, 1);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w)
        futs.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        }));
    for (auto& f : futs) f.get();
}

} // namespace detail

/// One row per (delta, kind); rows for each delta are computed as one pure
/// task with its own derived seed, so results are identical under any thread
/// count. Per-row estimation failures are recorded in-row and the scan
/// continues.
inline std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
    detail::validate_deltas(cfg.deltas);
    ModelDomain dom = parse_domain(cfg.domain);
    if (cfg.kinds.empty()) throw configuration_error("scan: no metric kinds requested");

    std::vector<std::vector<ScanRow>> per_delta(cfg.deltas.size());
    detail::parallel_over(cfg.deltas.size(), cfg.threads, [&](std::size_t i) {
        double delta = cfg.deltas[i];
        std::vector<ScanRow>& rows = per_delta[i];
        auto push_error_rows = [&](const std::string& msg) {
            for (MetricKind k : cfg.kinds) {
                ScanRow r;
                r.delta = delta;
                r.kind = k;
                r.error = msg;
                r.method = "error";
                r.lower = 0.0;
                r.upper = std::numeric_limits<double>::infinity();
                rows.push_back(std::move(r));
            }
        };
        try {
            ComplexVector p = base_point(dom, delta);
            ComplexVector X = cfg.direction.at(delta, dom.dim());
            KobConfig kob_cfg = cfg.optimizer;
            kob_cfg.seed = cfg.seed * 0x9e3779b97f4a7c15ULL + 0x2545F4914F6CDD1DULL * (i + 1);

            bool zero_dir = X.is_zero();
            MetricEstimate kob;
            if (!zero_dir)
                kob = kob_upper(dom, p, X, kob_cfg);
            else {
                kob.lower = kob.upper = 0.0;
            }

            auto fam = default_functional_family(dom, p, kob_cfg.seed ^ 0xabcdef, cfg.functional_count);
            double cara = zero_dir ? 0.0 : caratheodory_lower(dom, p, X, fam).lower;

            std::optional<HartogsFigure> figure;
            if (dom.kind() == DomainKind::GEpsilon &&
                std::find(cfg.kinds.begin(), cfg.kinds.end(), MetricKind::KTilde) != cfg.kinds.end())
                figure = hartogs_polydisk(dom.m(), dom.k(), delta, cfg.hartogs_safety, dom.dim());

            std::optional<IndicatrixSample> sample;
            std::optional<double> khat;
            if (!zero_dir && std::find(cfg.kinds.begin(), cfg.kinds.end(),
                                       MetricKind::KobBuseman) != cfg.kinds.end()) {
                KobConfig icfg = kob_cfg;
                sample = indicatrix_sample(dom, p, cfg.indicatrix_directions, icfg,
                                           cfg.indicatrix_phases);
                khat = khat_gauge(*sample, X);
            }

            for (MetricKind k : cfg.kinds) {
                auto t0 = std::chrono::steady_clock::now();
                ScanRow r;
                r.delta = delta;
                r.X = X;
                r.kind = k;
                if (zero_dir) {
                    r.lower = r.upper = 0.0;
                    r.method = "zero-vector";
                    rows.push_back(std::move(r));
                    continue;
                }
                switch (k) {
                    case MetricKind::Kobayashi: {
                        auto [lo, method] = detail::scan_kob_lower(dom, p, X, delta, cara);
                        r.lower = lo;
                        r.upper = kob.upper;
                        r.method = "pattern-search/" + method;
                        if (kob.witness_certificate) r.margin = kob.witness_certificate->margin;
                        if (!std::isfinite(kob.upper)) r.error = kob.diagnostic;
                        break;
                    }
                    case MetricKind::Caratheodory:
                        r.lower = cara;
                        r.upper = kob.upper;
                        r.method = "functional-family/chain";
                        break;
                    case MetricKind::Sibony:
                    case MetricKind::Azukawa:
                        r.lower = cara;
                        r.upper = figure ? ktilde_upper(*figure, X) : kob.upper;
                        r.method = figure ? "chain/hartogs" : "chain";
                        break;
                    case MetricKind::KobBuseman:
                        r.lower = cara;
                        r.upper = khat ? *khat : kob.upper;
                        r.method = khat ? "khat-lp" : "chain";
                        break;
                    case MetricKind::KTilde:
                        r.lower = cara;
                        if (figure) {
                            r.upper = ktilde_upper(*figure, X);
                            r.margin = figure->worst_slack;
                            r.method = "hartogs-figure";
                        } else {
                            r.upper = kob.upper;
                            r.method = "chain";
                        }
                        break;
                }
                auto t1 = std::chrono::steady_clock::now();
                r.wallclock_ms = std::chrono::duration<double, std::milli>(t1 - t0).count() +
                                 (k == MetricKind::Kobayashi ? kob.wallclock_ms : 0.0);
                rows.push_back(std::move(r));
            }
        } catch (const error& e) {
            push_error_rows(e.what());
        }
    });

    std::vector<ScanRow> rows;
    for (auto& chunk : per_delta)
        for (auto& r : chunk) rows.push_back(std::move(r));
    return rows;
}

// ---------------------------------------------------------------------------
// Point estimates for the CLI: one bracket per requested kind, with every
// chain-derived bound folded in.
// ---------------------------------------------------------------------------

struct EstimateOptions {
    KobConfig optimizer;
    int functional_count = 32;
    int indicatrix_directions = 64;
    int indicatrix_phases = 8;
    double hartogs_safety = 0.998;
};

inline std::vector<MetricEstimate> estimate_kinds(const ModelDomain& dom, const ComplexVector& p,
                                                  const ComplexVector& X,
                                                  const std::vector<MetricKind>& kinds,
                                                  const EstimateOptions& opts = {}) {
    std::vector<MetricEstimate> out;
    if (X.is_zero()) {
        for (MetricKind k : kinds) {
            MetricEstimate e;
            e.kind = k;
            e.lower = e.upper = 0.0;
            e.diagnostic = "zero vector";
            out.push_back(std::move(e));
        }
        return out;
    }
    MetricEstimate kob = kob_upper(dom, p, X, opts.optimizer);
    auto fam = default_functional_family(dom, p, opts.optimizer.seed ^ 0xabcdef,
                                         opts.functional_count);
    double cara = caratheodory_lower(dom, p, X, fam).lower;

    bool base = detail::is_base_form(p);
    double delta = base ? -p[0].real() : 0.0;
    std::optional<double> ktilde_val;
    if (dom.kind() == DomainKind::GEpsilon && base)
        ktilde_val = ktilde_upper(dom, delta, X, opts.hartogs_safety);

    std::optional<double> khat_val;
    for (MetricKind k : kinds)
        if (k == MetricKind::KobBuseman) {
            IndicatrixSample s = indicatrix_sample(dom, p, opts.indicatrix_directions,
                                                   opts.optimizer, opts.indicatrix_phases);
            khat_val = khat_gauge(s, X);
        }

    for (MetricKind k : kinds) {
        MetricEstimate e;
        e.kind = k;
        e.lower = cara;
        e.lower_witness = "caratheodory family";
        switch (k) {
            case MetricKind::Kobayashi: {
                e = kob;
                e.lower = cara;
                e.lower_witness = "caratheodory family";
                for (std::size_t c = 0; c < p.size(); ++c) {
                    if (dom.coordinate_sup(c) > 1.0 + 1e-12) continue;
                    double s = schwarz_lower(dom, p, X, c);
                    if (s > e.lower) {
                        e.lower = s;
                        e.lower_witness = "schwarz coordinate " + std::to_string(c);
                    }
                }
                if (dom.kind() == DomainKind::HalfParab && base) {
                    LemkobResult lr = lemkob_bounds(delta, X[0], X[1]);
                    if (!lr.asymptotic_only && lr.lower > e.lower) {
                        e.lower = lr.lower;
                        e.lower_witness = std::string("lemkob-") + to_string(lr.regime);
                    }
                }
                if (dom.kind() == DomainKind::OmegaXi && base) {
                    auto v = modeps_lower(dom.xi(), 1.0, delta, X[0], X[1]);
                    if (v && *v > e.lower) {
                        e.lower = *v;
                        e.lower_witness = "modeps";
                    }
                }
                break;
            }
            case MetricKind::Caratheodory:
                e.upper = kob.upper;
                e.upper_witness = kob.upper_witness;
                e.witness_certificate = kob.witness_certificate;
                break;
            case MetricKind::Sibony:
            case MetricKind::Azukawa:
            case MetricKind::KTilde:
                if (ktilde_val && *ktilde_val < kob.upper) {
                    e.upper = *ktilde_val;
                    e.diagnostic = "upper from the certified product figure";
                } else {
                    e.upper = kob.upper;
                    e.upper_witness = kob.upper_witness;
                    e.witness_certificate = kob.witness_certificate;
                }
                break;
            case MetricKind::KobBuseman:
                if (khat_val && *khat_val < kob.upper) {
                    e.upper = *khat_val;
                    e.diagnostic = "upper from the sampled-hull gauge";
                } else {
                    e.upper = kob.upper;
                    e.upper_witness = kob.upper_witness;
                    e.witness_certificate = kob.witness_certificate;
                }
                break;
        }
        out.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Log-log exponent fit.
// ---------------------------------------------------------------------------

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int point_count = 0;
};

enum class FitField { Lower, Upper };

inline FitResult fit_powerlaw(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw dimension_error("fit_powerlaw: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(ys[i])) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    const std::size_t n = lx.size();
    if (n < 4) throw parameter_error("fit_powerlaw: need at least 4 finite positive points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) mx += lx[i], my += ly[i];
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw parameter_error("fit_powerlaw: degenerate abscissae");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.point_count = static_cast<int>(n);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double resid = ly[i] - (f.intercept + f.slope * lx[i]);
        ss_res += resid * resid;
    }
    f.r_squared = syy > 1e-30 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0)
                              : (ss_res < 1e-20 ? 1.0 : 0.0);
    return f;
}

inline FitResult fit_exponent(const std::vector<ScanRow>& rows, FitField field) {
    std::vector<double> xs, ys;
    for (const ScanRow& r : rows) {
        xs.push_back(r.delta);
        ys.push_back(field == FitField::Lower ? r.lower : r.upper);
    }
    return fit_powerlaw(xs, ys);
}

// ---------------------------------------------------------------------------
// Chain consistency.
// ---------------------------------------------------------------------------

struct ChainViolation {
    double delta = 0.0;
    std::string x;
    MetricKind lower_kind = MetricKind::Caratheodory;
    MetricKind upper_kind = MetricKind::Kobayashi;
    double lower = 0.0;
    double upper = 0.0;
};

namespace detail {
inline int chain_rank(MetricKind k) {
    switch (k) {
        case MetricKind::Caratheodory: return 0;
        case MetricKind::Sibony: return 1;
        case MetricKind::Azukawa: return 2;
        case MetricKind::KobBuseman: return 2;
        case MetricKind::KTilde: return 3;
        case MetricKind::Kobayashi: return 4;
    }
    return 0;
}

/// Chain order C <= S <= {A, K^} <= K~ <= K; Azukawa and Kobayashi-Buseman
/// are mutually incomparable.
inline bool chain_le(MetricKind a, MetricKind b) {
    if (a == b) return true;
    if ((a == MetricKind::Azukawa && b == MetricKind::KobBuseman) ||
        (a == MetricKind::KobBuseman && b == MetricKind::Azukawa))
        return false;
    return chain_rank(a) <= chain_rank(b);
}

inline std::string x_repr(const ComplexVector& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i)
        os << v[i].real() << "," << v[i].imag() << ";";
    return os.str();
}
} // namespace detail

/// Flags every pair, within a (delta, X) group, where a lower bound of a
/// chain-smaller metric exceeds an upper bound of a chain-larger metric
/// beyond 1e-6 relative tolerance.
inline std::vector<ChainViolation> chain_check(const std::vector<ScanRow>& rows) {
    std::map<std::pair<double, std::string>, std::vector<const ScanRow*>> groups;
    for (const ScanRow& r : rows)
        groups[{r.delta, detail::x_repr(r.X)}].push_back(&r);
    std::vector<ChainViolation> out;
    for (auto& [key, group] : groups) {
        for (const ScanRow* a : group)
            for (const ScanRow* b : group) {
                if (!detail::chain_le(a->kind, b->kind)) continue;
                if (!std::isfinite(b->upper)) continue;
                if (a->lower > b->upper * (1.0 + 1e-6)) {
                    out.push_back(
                        {a->delta, key.second, a->kind, b->kind, a->lower, b->upper});
                }
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lemma verification campaigns.
// ---------------------------------------------------------------------------

struct VerifyReport {
    std::string lemma;
    int trials = 0;
    int failures = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::vector<std::string> notes;
};

namespace detail {
inline KobConfig verify_kob_cfg(std::uint64_t seed) {
    KobConfig cfg;
    cfg.degree = 2;
    cfg.starts = 1;
    cfg.iterations = 60;
    cfg.seed = seed;
    return cfg;
}

inline AnalyticDisk random_bounded_disk(Rng& rng, const ModelDomain& dom) {
    AnalyticDisk d;
    d.center = ComplexVector(static_cast<std::size_t>(dom.dim()));
    d.center[0] = cplx(-rng.uniform(0.1, 0.4), 0.0);
    d.coeffs.resize(d.center.size());
    double scale = rng.uniform(0.01, 0.1);
    int deg = 1 + static_cast<int>(rng.uniform() * 4);
    for (std::size_t c = 0; c < d.center.size(); ++c)
        for (int k = 0; k < deg; ++k)
            d.coeffs[c].push_back(scale * rng.gaussian_cplx() / static_cast<double>(k + 1));
    d.radius = rng.uniform(0.3, 1.0);
    return d;
}
} // namespace detail

inline VerifyReport verify_lemma(const std::string& name, int trials, std::uint64_t seed) {
    VerifyReport rep;
    rep.lemma = name;
    Rng rng(seed);
    auto note_failure = [&rep](const std::string& msg) {
        ++rep.failures;
        if (rep.notes.size() < 16) rep.notes.push_back(msg);
    };
    auto track = [&rep](double slack) { rep.worst_slack = std::min(rep.worst_slack, slack); };

    if (name == "lemkob") {
        ModelDomain g = ModelDomain::half_parab();
        for (int t = 0; t < trials; ++t) {
            double delta = rng.log_uniform(1e-5, 1e-2);
            double c = rng.uniform(7.01, 80.0);
            cplx beta = rng.unit_phase();
            cplx alpha = rng.unit_phase() * (c * std::sqrt(delta) * std::abs(beta));
            LemkobResult lr = lemkob_bounds(delta, alpha, beta);
            MetricEstimate ke = kob_upper(g, base_point(g, delta), ComplexVector{alpha, beta},
                                          detail::verify_kob_cfg(seed + static_cast<std::uint64_t>(t)));
            ++rep.trials;
            track(ke.upper - lr.lower);
            if (!(lr.lower <= ke.upper * (1.0 + 1e-9)))
                note_failure("lower crossed upper at delta=" + std::to_string(delta));
        }
        return rep;
    }
    if (name == "modeps") {
        ModelDomain omega = ModelDomain::omega_xi(2.0);
        for (int t = 0; rep.trials < trials && t < 20 * trials; ++t) {
            double delta = rng.log_uniform(1e-5, 1e-2);
            double a = rng.uniform(0.05, 1.0);
            auto v = modeps_lower(2.0, 1.0, delta, cplx(a, 0), cplx(1, 0));
            if (!v) continue;
            MetricEstimate ke =
                kob_upper(omega, base_point(omega, delta), ComplexVector{cplx(a, 0), cplx(1, 0)},
                          detail::verify_kob_cfg(seed + static_cast<std::uint64_t>(t)));
            ++rep.trials;
            track(ke.upper - *v);
            if (!(*v <= ke.upper * (1.0 + 1e-9)))
                note_failure("modeps lower crossed upper at delta=" + std::to_string(delta));
        }
        return rep;
    }
    if (name == "realf") {
        for (int t = 0; t < trials; ++t) {
            int deg = 1 + static_cast<int>(rng.uniform() * 10);
            std::vector<cplx> coeffs(static_cast<std::size_t>(deg) + 1, cplx(0, 0));
            for (int k = 1; k <= deg; ++k)
                coeffs[static_cast<std::size_t>(k)] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            ++rep.trials;
            for (double r : {0.1, 0.3, 0.49}) {
                RealfReport rr = realf_bound(coeffs, r);
                track(rr.M - rr.bound);
                if (!rr.holds) note_failure("realf violated at r=" + std::to_string(r));
            }
        }
        return rep;
    }
    if (name == "basic") {
        ModelDomain omega = ModelDomain::omega_xi(2.0);
        for (int t = 0; rep.trials < trials && t < 20 * trials; ++t) {
            double delta = rng.log_uniform(1e-3, 1e-1);
            cplx alpha = rng.unit_phase() * rng.uniform(0.05, 1.0);
            cplx beta = rng.unit_phase();
            double cap = 0.9 * std::pow(delta, 0.75) / (std::numbers::sqrt2 * std::abs(alpha));
            double lam = rng.uniform(0.1, 1.0) * std::min(cap, 0.45);
            AnalyticDisk d = make_lambda_disk(delta, alpha, beta, lam * rng.unit_phase());
            if (!certify_containment(d, omega).valid) continue;
            BasicInequalityReport br = verify_basic_inequality(2.0, 1.0, d, rng.uniform(0.05, 0.49));
            ++rep.trials;
            for (const auto& item : br.items) track(item.slack);
            if (!br.pass) note_failure("basic inequality failed at delta=" + std::to_string(delta));
        }
        return rep;
    }
    if (name == "product") {
        ModelDomain d2 = ModelDomain::polydisk(2, {1.0});
        for (int t = 0; t < trials; ++t) {
            ComplexVector p{cplx(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)),
                            cplx(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))};
            ComplexVector X = rng.unit_vector(2);
            double oracle = closed_form_metric(d2, p, X);
            KobConfig cfg = detail::verify_kob_cfg(seed + static_cast<std::uint64_t>(t));
            cfg.degree = 8;
            cfg.iterations = 200;
            MetricEstimate ke = kob_upper(d2, p, X, cfg);
            ++rep.trials;
            track(1.03 * oracle - ke.upper);
            if (!(ke.upper <= 1.03 * oracle && ke.upper >= oracle * (1.0 - 1e-9)))
                note_failure("product mismatch: upper=" + std::to_string(ke.upper) +
                             " oracle=" + std::to_string(oracle));
        }
        return rep;
    }
    if (name == "inclusion") {
        struct Pair {
            ModelDomain inner, outer;
        };
        const Pair pairs[] = {
            {ModelDomain::ball(2, 0.8), ModelDomain::ball(2, 1.0)},
            {ModelDomain::half_parab(), ModelDomain::omega_xi(2.0)},
            {ModelDomain::half_parab(), ModelDomain::polydisk(2, {1.0})},
            {ModelDomain::ball(2, 1.0), ModelDomain::polydisk(2, {1.0})},
        };
        for (int t = 0; rep.trials < trials && t < 40 * trials; ++t) {
            const Pair& pr = pairs[rng.next_u64() % 4];
            AnalyticDisk d = detail::random_bounded_disk(rng, pr.inner);
            ContainmentCertificate inner = certify_containment(d, pr.inner, 16, 32, Margin(1e-7));
            if (!inner.valid) continue;
            ContainmentCertificate outer = certify_containment(d, pr.outer, 16, 32, Margin(1e-7));
            ++rep.trials;
            track(outer.slack);
            if (!outer.valid) note_failure("witness failed on the enclosing domain");
        }
        return rep;
    }
    if (name == "exhaustion") {
        // D_j = (1 - 1/j) D^2 exhausts the bidisk; estimates must decrease to
        // the closed form at the limit.
        double prev = std::numeric_limits<double>::infinity();
        ComplexVector origin(2);
        ComplexVector X{cplx(1, 0), cplx(0, 0)};
        for (int j : {2, 4, 8, 16, 32}) {
            ModelDomain dj = ModelDomain::polydisk(2, {1.0 - 1.0 / j});
            KobConfig cfg = detail::verify_kob_cfg(seed + static_cast<std::uint64_t>(j));
            cfg.degree = 4;
            MetricEstimate ke = kob_upper(dj, origin, X, cfg);
            ++rep.trials;
            track(prev - ke.upper);
            if (!(ke.upper <= prev * (1.0 + 1e-9)))
                note_failure("estimate not monotone at j=" + std::to_string(j));
            prev = ke.upper;
        }
        double limit = closed_form_metric(ModelDomain::polydisk(2, {1.0}), origin, X);
        track(1.05 * limit - prev);
        if (!(prev <= 1.05 * limit && prev >= limit * (1.0 - 1e-9)))
            note_failure("limit estimate " + std::to_string(prev) + " not within 5% of " +
                         std::to_string(limit));
        return rep;
    }
    throw configuration_error("verify_lemma: unknown name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Reporting. CSV columns, exactly:
//   delta,x_re[],x_im[],kind,lower,upper,method,margin,wallclock_ms
// x_re[]/x_im[] are semicolon-joined component lists. Infinities print as
// "inf". wallclock_ms is zeroed unless timings are explicitly requested, so
// seeded runs are byte-identical.
// ---------------------------------------------------------------------------

namespace detail {
inline std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join_components(const ComplexVector& v, bool real_part) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += fmt_double(real_part ? v[i].real() : v[i].imag());
    }
    return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw configuration_error("report: bad numeric field '" + s + "'");
    }
}
} // namespace detail

inline constexpr const char* kCsvHeader =
    "delta,x_re[],x_im[],kind,lower,upper,method,margin,wallclock_ms";

inline void write_rows_csv(std::ostream& os, const std::vector<ScanRow>& rows,
                           bool include_timings = false) {
    os << kCsvHeader << "\n";
    for (const ScanRow& r : rows) {
        os << detail::fmt_double(r.delta) << "," << detail::join_components(r.X, true) << ","
           << detail::join_components(r.X, false) << "," << to_string(r.kind) << ","
           << detail::fmt_double(r.lower) << "," << detail::fmt_double(r.upper) << "," << r.method
           << "," << detail::fmt_double(r.margin) << ","
           << detail::fmt_double(include_timings ? r.wallclock_ms : 0.0) << "\n";
    }
}

inline std::vector<ScanRow> rows_from_csv(std::istream& is) {
    std::vector<ScanRow> rows;
    std::string line;
    if (!std::getline(is, line)) throw configuration_error("report: empty CSV input");
    if (line != kCsvHeader) throw configuration_error("report: unexpected CSV header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = detail::split(line, ',');
        if (f.size() != 9) throw configuration_error("report: expected 9 CSV fields");
        ScanRow r;
        r.delta = detail::parse_double(f[0]);
        auto res = detail::split(f[1], ';');
        auto ims = detail::split(f[2], ';');
        if (res.size() != ims.size()) throw configuration_error("report: x_re[]/x_im[] mismatch");
        std::vector<cplx> comps;
        for (std::size_t i = 0; i < res.size(); ++i)
            if (!res[i].empty())
                comps.emplace_back(detail::parse_double(res[i]), detail::parse_double(ims[i]));
        r.X = ComplexVector(std::move(comps));
        r.kind = parse_metric_kind(f[3]);
        r.lower = detail::parse_double(f[4]);
        r.upper = detail::parse_double(f[5]);
        r.method = f[6];
        r.margin = detail::parse_double(f[7]);
        r.wallclock_ms = detail::parse_double(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline json rows_to_json(const std::vector<ScanRow>& rows, bool include_timings = false) {
    json arr = json::array();
    for (const ScanRow& r : rows) {
        arr.push_back({{"delta", r.delta},
                       {"x", to_json(r.X)},
                       {"kind", to_string(r.kind)},
                       {"lower", r.lower},
                       {"upper", bound_to_json(r.upper)},
                       {"method", r.method},
                       {"margin", r.margin},
                       {"wallclock_ms", include_timings ? r.wallclock_ms : 0.0},
                       {"error", r.error}});
    }
    return arr;
}

inline std::vector<ScanRow> rows_from_json(const json& arr) try {
    std::vector<ScanRow> rows;
    for (const auto& j : arr) {
        ScanRow r;
        r.delta = j.at("delta").get<double>();
        r.X = cvec_from_json(j.at("x"));
        r.kind = parse_metric_kind(j.at("kind").get<std::string>());
        r.lower = j.at("lower").get<double>();
        r.upper = bound_from_json(j.at("upper"));
        r.method = j.at("method").get<std::string>();
        r.margin = j.at("margin").get<double>();
        r.wallclock_ms = j.at("wallclock_ms").get<double>();
        if (j.contains("error")) r.error = j.at("error").get<std::string>();
        rows.push_back(std::move(r));
    }
    return rows;
} catch (const json::exception& e) {
    throw configuration_error(std::string("report rows: ") + e.what());
}

enum class ReportFormat { Csv, Json };

inline void emit_report(const std::vector<ScanRow>& rows, ReportFormat format,
                        const std::string& path, bool include_timings = false) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw configuration_error("emit_report: cannot open '" + path + "' for writing");
    if (format == ReportFormat::Csv)
        write_rows_csv(os, rows, include_timings);
    else
        os << rows_to_json(rows, include_timings).dump(2) << "\n";
    if (!os.good()) throw configuration_error("emit_report: write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Scan config JSON.
// ---------------------------------------------------------------------------

inline ScanConfig scan_config_from_json(const json& j) try {
    ScanConfig cfg;
    cfg.domain = j.at("domain").get<std::string>();
    if (j.contains("deltas")) {
        for (const auto& d : j.at("deltas")) cfg.deltas.push_back(d.get<double>());
    } else if (j.contains("delta_range")) {
        const auto& r = j.at("delta_range");
        cfg.deltas = log_spaced_deltas(r.at("min").get<double>(), r.at("max").get<double>(),
                                       r.at("count").get<int>());
    } else {
        throw configuration_error("scan config: need 'deltas' or 'delta_range'");
    }
    const auto& dir = j.at("direction");
    if (dir.contains("fixed"))
        cfg.direction.fixed = cvec_from_json(dir.at("fixed"));
    else if (dir.contains("family"))
        cfg.direction.family_c = dir.at("family").at("c").get<double>();
    else
        throw configuration_error("scan config: direction needs 'fixed' or 'family'");
    if (j.contains("kinds")) {
        cfg.kinds.clear();
        for (const auto& k : j.at("kinds")) cfg.kinds.push_back(parse_metric_kind(k.get<std::string>()));
    }
    if (j.contains("optimizer")) {
        const auto& o = j.at("optimizer");
        if (o.contains("degree")) cfg.optimizer.degree = o.at("degree").get<int>();
        if (o.contains("starts")) cfg.optimizer.starts = o.at("starts").get<int>();
        if (o.contains("iterations")) cfg.optimizer.iterations = o.at("iterations").get<int>();
    }
    if (j.contains("indicatrix_directions"))
        cfg.indicatrix_directions = j.at("indicatrix_directions").get<int>();
    if (j.contains("indicatrix_phases")) cfg.indicatrix_phases = j.at("indicatrix_phases").get<int>();
    if (j.contains("hartogs_safety")) cfg.hartogs_safety = j.at("hartogs_safety").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("functional_count")) cfg.functional_count = j.at("functional_count").get<int>();
    return cfg;
} catch (const json::exception& e) {
    throw configuration_error(std::string("scan config: ") + e.what());
}

} // namespace invmet
