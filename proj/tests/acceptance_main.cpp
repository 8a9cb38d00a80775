// acceptance_main.cpp - end-to-end acceptance suite; prints one line per
// criterion and exits with the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mtpsk/common.hpp"
#include "mtpsk/constellation.hpp"
#include "mtpsk/demod.hpp"
#include "mtpsk/freq_plan.hpp"
#include "mtpsk/harness.hpp"
#include "mtpsk/phase_stats.hpp"
#include "mtpsk/rectifier.hpp"
#include "mtpsk/spectrum.hpp"
#include "mtpsk/waveform.hpp"
#include "test_support.hpp"

using namespace mtpsk;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    const char* name;
    double budget_s;
    bool (*run)(std::string& detail);
};

bool check(bool ok, const char* what, std::string& detail) {
    if (!ok && detail.size() < 600) {
        detail += detail.empty() ? "" : "; ";
        detail += what;
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 1
bool c1_plans_exact(std::string& detail) {
    bool ok = true;
    const FrequencyPlan five = plan_frequencies(2.45e9, 5, 1e6, 0);
    ok &= check(five.spacings == std::vector<std::int64_t>{1, 2, 4, 5}, "5-tone spacings", detail);
    ok &= check(five.tones_hz() ==
                    std::vector<double>{2.444e9, 2.445e9, 2.447e9, 2.451e9, 2.456e9},
                "5-tone frequencies", detail);
    ok &= check(five.bw_hz() == 12e6, "5-tone bandwidth", detail);

    const FrequencyPlan six = plan_frequencies(2.45e9, 6, 1e6, 0);
    ok &= check(six.spacings == std::vector<std::int64_t>{1, 2, 4, 5, 8}, "6-tone spacings", detail);
    ok &= check(six.bw_hz() == 20e6, "6-tone bandwidth", detail);
    ok &= check(six.tones_hz() ==
                    std::vector<double>{2.440e9, 2.441e9, 2.443e9, 2.447e9, 2.452e9, 2.460e9},
                "6-tone frequencies", detail);
    return ok;
}

// ---------------------------------------------------------------- criterion 2
bool c2_collision_freeness(std::string& detail) {
    bool ok = true;
    for (int n = 2; n <= 16 && ok; ++n) {
        for (int r = 0; r <= 4 && ok; ++r) {
            const FrequencyPlan plan = plan_frequencies(2.45e9, n, 1e6, r);
            ok &= check(validate_plan(plan).ok, "validate_plan", detail);
            std::map<std::int64_t, int> counts;
            for (auto d : pair_differences(plan)) ++counts[d];
            for (auto k : plan.spacings)
                ok &= check(counts[k] == 1, "consecutive spacing not unique", detail);
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 3
bool c3_papr(std::string& detail) {
    bool ok = true;

    {  // single tone: PAPR 2.0 within 0.1%
        Waveform w;
        const std::vector<std::int64_t> bins = {2450};
        const std::vector<double> amp = {0.1};
        const std::vector<double> phase = {0.0};
        w.samples = synthesize_bins(16384, bins, amp, phase);
        w.sample_rate_hz = 16384e6;
        w.period_s = 1e-6;
        ok &= check(std::fabs(papr(w) - 2.0) <= 0.002, "single-tone PAPR", detail);
    }

    for (int n : {2, 4, 8, 16}) {  // aligned = 2N within 1%
        const FrequencyPlan plan = plan_frequencies(2.45e9, n, 1e6, 0);
        const Waveform w = synthesize(plan, PhaseVector(static_cast<std::size_t>(n), 0.0), -10.0,
                                      default_sample_rate(plan));
        ok &= check(std::fabs(papr(w) - 2.0 * n) <= 0.01 * 2.0 * n, "aligned PAPR", detail);
    }

    for (int n : {4, 8, 16}) {  // strict mean ordering over 1000 seeded streams
        TrialConfig base;
        base.n_tones = n;
        base.m_order = 4;
        base.p_in_dbm = -10.0;
        base.streams = 1000;
        base.seed = 2021;
        const std::vector<SweepAxis> axes = {{"delta_deg", {0.0, 90.0, 180.0, 360.0}}};
        const SweepReport report = sweep(base, axes, true);
        char line[160];
        std::snprintf(line, sizeof(line),
                      "N=%-2d mean PAPR: aligned %.3f  d90 %.3f  d180 %.3f  d360 %.3f", n,
                      report.points[0].mean_papr_linear, report.points[1].mean_papr_linear,
                      report.points[2].mean_papr_linear, report.points[3].mean_papr_linear);
        std::printf("      %s\n", line);
        for (int i = 0; i + 1 < 4; ++i)
            ok &= check(report.points[static_cast<std::size_t>(i)].mean_papr_linear >
                            report.points[static_cast<std::size_t>(i + 1)].mean_papr_linear,
                        "PAPR ordering", detail);
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 4
bool c4_square_law_oracle(std::string& detail) {
    bool ok = true;
    std::mt19937_64 eng(404);
    std::uniform_real_distribution<double> u(-180.0, 180.0);
    RectifierConfig cfg;
    for (int n = 2; n <= 6; ++n) {
        const FrequencyPlan plan = plan_frequencies(2.45e9, n, 1e6, 0);
        const double fs = default_sample_rate(plan);
        const double a = std::sqrt(2.0 * 50.0 * dbm_to_watts(-10.0) / n);
        for (int trial = 0; trial < 100; ++trial) {
            PhaseVector phases(static_cast<std::size_t>(n));
            for (double& p : phases) p = u(eng);
            const Waveform w = synthesize(plan, phases, -10.0, fs);
            const BasebandSignal b = rectify_square_law(w, cfg);
            const auto oracle = testsupport::square_law_oracle(plan, phases, a, cfg.k2_per_v);

            ok &= check(std::fabs(b.dc_v - oracle.dc) <= 1e-9 * oracle.dc, "DC", detail);
            const auto spec = real_fft(b.samples);
            for (const auto& [bin, expected] : oracle.tones) {
                const auto got =
                    bin_amplitude(spec, b.samples.size(), static_cast<std::size_t>(bin));
                ok &= check(std::fabs(std::abs(got) - std::abs(expected)) <=
                                1e-9 * std::abs(expected),
                            "IM2 amplitude", detail);
                const double phase_err =
                    wrapped_distance_deg(std::arg(got) * 180.0 / std::numbers::pi,
                                         std::arg(expected) * 180.0 / std::numbers::pi);
                ok &= check(phase_err <= 1e-6, "IM2 phase", detail);
            }
            if (!ok) return ok;
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 5
bool c5_loopback(std::string& detail) {
    bool ok = true;
    for (int n = 2; n <= 6; ++n) {
        for (int m : {2, 4, 8}) {
            for (double delta : {90.0, 180.0, 360.0}) {
                TrialConfig cfg;
                cfg.n_tones = n;
                cfg.m_order = m;
                cfg.delta_deg = delta;
                cfg.p_in_dbm = -10.0;
                cfg.streams = 1000;
                cfg.seed = 505;
                const SweepReport report = sweep(cfg, std::vector<SweepAxis>{}, true);
                ok &= check(report.points[0].ok, "point failed", detail);
                if (report.points[0].ok)
                    ok &= check(report.points[0].ber == 0.0 && report.points[0].ber_margin == 0.0,
                                "nonzero BER", detail);
                if (!ok) {
                    char buf[96];
                    std::snprintf(buf, sizeof(buf), " at N=%d M=%d delta=%g", n, m, delta);
                    detail += buf;
                    return ok;
                }
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 6
bool c6_combinatorics(std::string& detail) {
    bool ok = true;
    for (int m : {2, 4, 8}) {
        for (double delta : {90.0, 180.0, 360.0}) {
            const Constellation c = build_constellation(m, delta);
            for (int n = 2; n <= 8; ++n) {
                const PhaseSupport s = tone_phase_support(n, m, delta);
                const auto brute = testsupport::brute_force_support(n, c.phases_deg);
                ok &= check(s.values_deg.size() == brute.size(), "brute-force count", detail);
                const double cap = 360.0 * m / delta;
                ok &= check(static_cast<double>(s.values_deg.size()) ==
                                std::min(static_cast<double>((n - 1) * (m - 1) + 1), cap),
                            "count formula", detail);
                // 2M-1 third-tone phases whenever wrapping has not collided.
                if (n == 3 && (n - 1) * (m - 1) * delta / (2.0 * m) < 180.0)
                    ok &= check(static_cast<int>(s.values_deg.size()) == 2 * m - 1, "2M-1", detail);
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 7
bool c7_phase_distributions(std::string& detail) {
    bool ok = true;
    for (int n : {2, 4, 8, 16}) {
        for (double delta : {45.0, 90.0, 180.0, 270.0}) {
            const double total = testsupport::integrate_wrapped_pdf(n, delta);
            ok &= check(std::fabs(total - 1.0) <= 1e-6, "normalization", detail);
        }
        for (double x : {-179.0, -90.0, 0.0, 45.0, 180.0})
            ok &= check(wrapped_phase_pdf(n, 360.0, x) == 1.0 / 360.0, "uniform at delta=360",
                        detail);
    }

    // KS between 1e5 draws of the constellation sampler and the analytic
    // fold at n=8, M=16, delta=90.
    const Constellation c = build_constellation(16, 90.0);
    auto eng = make_engine(707);
    std::vector<double> samples(100000);
    for (double& s : samples) {
        double acc = 0.0;
        for (int i = 0; i < 7; ++i)
            acc += c.phases_deg[static_cast<std::size_t>(uniform_pow2_index(eng, 16))];
        s = wrap_deg(acc);
    }
    const double d_discrete = testsupport::ks_distance(
        samples, [](double x) { return wrapped_phase_cdf(8, 90.0, x); });

    // Diagnostic: the same statistic for the continuous-uniform idealization
    // the analytic fold models, and the lattice floor that bounds the
    // discrete sampler from below.
    std::uniform_real_distribution<double> u(-45.0, 45.0);
    std::vector<double> cont(100000);
    for (double& s : cont) {
        double acc = 0.0;
        for (int i = 0; i < 7; ++i) acc += u(eng);
        s = wrap_deg(acc);
    }
    const double d_cont = testsupport::ks_distance(
        cont, [](double x) { return wrapped_phase_cdf(8, 90.0, x); });
    const double lattice_floor = wrapped_phase_pdf(8, 90.0, 0.0) * (90.0 / 16.0) / 2.0;
    std::printf("      KS(constellation sampler) = %.4f, KS(continuous idealization) = %.4f, "
                "lattice floor ~ %.4f\n",
                d_discrete, d_cont, lattice_floor);

    char buf[96];
    std::snprintf(buf, sizeof(buf), "KS %.4f over 0.01 bound", d_discrete);
    ok &= check(d_discrete < 0.01, buf, detail);
    return ok;
}

// ---------------------------------------------------------------- criterion 8
bool c8_diode_trends(std::string& detail) {
    bool ok = true;

    {  // PCE gap: aligned vs delta=360 at 0 dBm, N=6, M=4, 100 streams
        TrialConfig base;
        base.n_tones = 6;
        base.m_order = 4;
        base.p_in_dbm = 0.0;
        base.streams = 100;
        base.seed = 808;
        base.rectifier.model = RectifierModel::diode_ode;
        const std::vector<SweepAxis> axes = {{"delta_deg", {0.0, 90.0, 180.0, 360.0}}};
        const SweepReport report = sweep(base, axes, true);
        for (const auto& p : report.points) ok &= check(p.ok, "diode point failed", detail);
        if (ok) {
            const double gap =
                report.points[0].mean_pce_pct - report.points[3].mean_pce_pct;
            std::printf("      PCE(aligned) = %.3f%%, PCE(d90) = %.3f%%, PCE(d180) = %.3f%%, "
                        "PCE(d360) = %.3f%% (gap %.3f points)\n",
                        report.points[0].mean_pce_pct, report.points[1].mean_pce_pct,
                        report.points[2].mean_pce_pct, report.points[3].mean_pce_pct, gap);
            ok &= check(gap > 0.0, "PCE gap sign", detail);
            for (int i = 0; i + 1 < 4; ++i)
                ok &= check(report.points[static_cast<std::size_t>(i)].mean_pce_pct >=
                                report.points[static_cast<std::size_t>(i + 1)].mean_pce_pct,
                            "PCE monotone in delta", detail);
        }
    }

    {  // BER non-decreasing in M at -6 dBm, N=3
        TrialConfig base;
        base.n_tones = 3;
        base.m_order = 2;
        base.delta_deg = 360.0;
        base.p_in_dbm = -6.0;
        base.streams = 100;
        base.seed = 809;
        base.rectifier.model = RectifierModel::diode_ode;
        const std::vector<SweepAxis> axes = {{"m_order", {2.0, 4.0, 8.0}}};
        const SweepReport report = sweep(base, axes, true);
        std::printf("      BER vs M {2,4,8}: %.4g %.4g %.4g\n", report.points[0].ber,
                    report.points[1].ber, report.points[2].ber);
        for (int i = 0; i + 1 < 3; ++i) {
            ok &= check(report.points[static_cast<std::size_t>(i)].ok, "M point failed", detail);
            ok &= check(report.points[static_cast<std::size_t>(i)].ber <=
                            report.points[static_cast<std::size_t>(i + 1)].ber,
                        "BER not monotone in M", detail);
        }
    }

    {  // BER non-decreasing in N at -6 dBm, M=4
        TrialConfig base;
        base.m_order = 4;
        base.delta_deg = 360.0;
        base.p_in_dbm = -6.0;
        base.streams = 100;
        base.seed = 810;
        base.rectifier.model = RectifierModel::diode_ode;
        const std::vector<SweepAxis> axes = {{"n_tones", {3.0, 4.0, 5.0, 6.0}}};
        const SweepReport report = sweep(base, axes, true);
        std::printf("      BER vs N {3,4,5,6}: %.4g %.4g %.4g %.4g\n", report.points[0].ber,
                    report.points[1].ber, report.points[2].ber, report.points[3].ber);
        for (int i = 0; i + 1 < 4; ++i) {
            ok &= check(report.points[static_cast<std::size_t>(i)].ok, "N point failed", detail);
            ok &= check(report.points[static_cast<std::size_t>(i)].ber <=
                            report.points[static_cast<std::size_t>(i + 1)].ber,
                        "BER not monotone in N", detail);
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 9
bool c9_throughput(std::string& detail) {
    bool ok = true;
    ok &= check(throughput_bps(plan_frequencies(2.45e9, 6, 1e6, 0), 4) == 10e6, "10 Mbit/s",
                detail);
    ok &= check(throughput_bps(plan_frequencies(2.45e9, 2, 1e6, 0), 2) == 1e6, "1 Mbit/s", detail);
    // Structural delta-independence: throughput takes no phase-range input.
    return ok;
}

// --------------------------------------------------------------- criterion 10
bool c10_determinism(std::string& detail) {
    TrialConfig base;
    base.n_tones = 5;
    base.m_order = 4;
    base.delta_deg = 180.0;
    base.streams = 32;
    base.seed = 1010;
    const std::vector<SweepAxis> axes = {{"p_in_dbm", {-15.0, -10.0}}, {"m_order", {2.0, 4.0}}};

    std::ostringstream a, b, c;
    write_sweep_csv(a, sweep(base, axes, true));
    write_sweep_csv(b, sweep(base, axes, true));
    write_sweep_csv(c, sweep(base, axes, false));
    bool ok = check(a.str() == b.str(), "re-run differs", detail);
    ok &= check(a.str() == c.str(), "serial/parallel differ", detail);
    return ok;
}

const Criterion kCriteria[] = {
    {"frequency plans exact", 1.0, c1_plans_exact},
    {"collision-freeness exhaustive (N<=16, r<=4)", 10.0, c2_collision_freeness},
    {"PAPR ceilings and phase-range ordering", 300.0, c3_papr},
    {"square-law trigonometric oracle", 120.0, c4_square_law_oracle},
    {"noiseless loopback BER = 0", 600.0, c5_loopback},
    {"constellation combinatorics", 60.0, c6_combinatorics},
    {"phase distributions", 120.0, c7_phase_distributions},
    {"diode-model trends", 900.0, c8_diode_trends},
    {"throughput", 60.0, c9_throughput},
    {"deterministic sweep output", 60.0, c10_determinism},
};

}  // namespace

int main() {
    std::printf("acceptance suite (%zu criteria)\n", std::size(kCriteria));
    int index = 0;
    for (const Criterion& c : kCriteria) {
        ++index;
        std::string detail;
        const auto t0 = clock_type::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(clock_type::now() - t0).count();
        if (elapsed > c.budget_s) {
            ok = false;
            detail += detail.empty() ? "" : "; ";
            detail += "over time budget";
        }
        std::printf("[%2d] %-46s %s (%.2f s%s%s)\n", index, c.name, ok ? "PASS" : "FAIL", elapsed,
                    detail.empty() ? "" : " - ", detail.c_str());
        if (!ok) ++g_failures;
    }
    std::printf("%d of %zu criteria passed\n",
                static_cast<int>(std::size(kCriteria)) - g_failures, std::size(kCriteria));
    return g_failures;
}
