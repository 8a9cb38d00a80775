#include "mtpsk/phase_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "mtpsk/common.hpp"
#include "mtpsk/constellation.hpp"

namespace mtpsk {

namespace {

constexpr int kNormalApproxOrder = 40;  // alternating sum is sound up to here

double pairwise_sum(const std::vector<double>& terms, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return terms[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

// pdf of the sum of nu standard uniforms at u in [0, nu], times (nu-1)!.
// Terms alternate in sign; summed pairwise for stability.
double ih01_pdf(int nu, double u) {
    if (u <= 0.0 || u >= static_cast<double>(nu)) return 0.0;
    std::vector<double> terms;
    double binom = 1.0;  // C(nu, k)
    for (int k = 0; k <= static_cast<int>(u); ++k) {
        const double term = binom * std::pow(u - k, nu - 1);
        terms.push_back((k % 2 == 0) ? term : -term);
        binom = binom * (nu - k) / (k + 1);
    }
    double sum = pairwise_sum(terms, 0, terms.size());
    double fact = 1.0;
    for (int i = 2; i <= nu - 1; ++i) fact *= i;
    return std::max(0.0, sum / fact);
}

double ih01_cdf(int nu, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= static_cast<double>(nu)) return 1.0;
    std::vector<double> terms;
    double binom = 1.0;
    for (int k = 0; k <= static_cast<int>(u); ++k) {
        const double term = binom * std::pow(u - k, nu);
        terms.push_back((k % 2 == 0) ? term : -term);
        binom = binom * (nu - k) / (k + 1);
    }
    double sum = pairwise_sum(terms, 0, terms.size());
    double fact = 1.0;
    for (int i = 2; i <= nu; ++i) fact *= i;
    return std::clamp(sum / fact, 0.0, 1.0);
}

double normal_pdf(double x, double sigma) {
    return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double x, double sigma) {
    return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

void check_tone_index(int n) {
    if (n < 2) throw config_error("phase_stats: tone index must be >= 2");
}

}  // namespace

double irwin_hall_pdf(int n, double delta_deg, double x_deg) {
    check_tone_index(n);
    if (!(delta_deg > 0.0)) throw config_error("irwin_hall_pdf: phase range must be positive");
    const int nu = n - 1;
    if (nu == 1) return (std::fabs(x_deg) <= delta_deg / 2.0) ? 1.0 / delta_deg : 0.0;
    if (nu > kNormalApproxOrder) {
        if (std::fabs(x_deg) >= nu * delta_deg / 2.0) return 0.0;
        return normal_pdf(x_deg, delta_deg * std::sqrt(nu / 12.0));
    }
    return ih01_pdf(nu, x_deg / delta_deg + nu / 2.0) / delta_deg;
}

double irwin_hall_cdf(int n, double delta_deg, double x_deg) {
    check_tone_index(n);
    if (!(delta_deg > 0.0)) throw config_error("irwin_hall_cdf: phase range must be positive");
    const int nu = n - 1;
    if (nu == 1) {
        if (x_deg <= -delta_deg / 2.0) return 0.0;
        if (x_deg >= delta_deg / 2.0) return 1.0;
        return x_deg / delta_deg + 0.5;
    }
    if (nu > kNormalApproxOrder) return normal_cdf(x_deg, delta_deg * std::sqrt(nu / 12.0));
    return ih01_cdf(nu, x_deg / delta_deg + nu / 2.0);
}

double wrapped_phase_pdf(int n, double delta_deg, double x_deg) {
    check_tone_index(n);
    // Folding a convolution that includes a full-circle uniform is uniform.
    if (delta_deg == 360.0) return 1.0 / 360.0;
    const double x = wrap_deg(x_deg);
    const int kmax = static_cast<int>(std::ceil((n - 1) * delta_deg / 720.0)) + 1;
    double acc = 0.0;
    for (int k = -kmax; k <= kmax; ++k) acc += irwin_hall_pdf(n, delta_deg, x + 360.0 * k);
    return acc;
}

double wrapped_phase_cdf(int n, double delta_deg, double x_deg) {
    check_tone_index(n);
    if (delta_deg == 360.0) return (wrap_deg(x_deg) + 180.0) / 360.0;
    const double x = wrap_deg(x_deg);
    const int kmax = static_cast<int>(std::ceil((n - 1) * delta_deg / 720.0)) + 1;
    double acc = 0.0;
    for (int k = -kmax; k <= kmax; ++k)
        acc += irwin_hall_cdf(n, delta_deg, x + 360.0 * k) -
               irwin_hall_cdf(n, delta_deg, -180.0 + 360.0 * k);
    return std::clamp(acc, 0.0, 1.0);
}

PhaseSupport tone_phase_support(int n, int m_order, double delta_deg) {
    check_tone_index(n);
    Constellation c = build_constellation(m_order, delta_deg);  // validates M and delta
    const int nu = n - 1;
    const double step = delta_deg / m_order;

    PhaseSupport s;
    s.tone_index = n;
    s.pre_wrap_count = nu * (m_order - 1) + 1;

    // Pre-wrap sums form a contiguous grid of step delta/M starting at
    // nu times the lowest symbol phase.
    std::vector<double> wrapped(static_cast<std::size_t>(s.pre_wrap_count));
    const double lo = static_cast<double>(nu) * c.phases_deg.front();
    for (int j = 0; j < s.pre_wrap_count; ++j) wrapped[static_cast<std::size_t>(j)] = wrap_deg(lo + j * step);
    std::sort(wrapped.begin(), wrapped.end());
    constexpr double tol = 1e-9;
    for (double v : wrapped)
        if (s.values_deg.empty() || v - s.values_deg.back() > tol) s.values_deg.push_back(v);
    return s;
}

PhaseHistogram empirical_phase_histogram(int n, int m_order, double delta_deg,
                                         std::uint64_t trials, std::uint64_t seed) {
    check_tone_index(n);
    if (trials < 1) throw config_error("empirical_phase_histogram: need at least one trial");
    Constellation c = build_constellation(m_order, delta_deg);

    PhaseHistogram h;
    h.counts.assign(PhaseHistogram::bins, 0);
    h.trials = trials;
    auto eng = make_engine(seed);
    const int nu = n - 1;
    for (std::uint64_t t = 0; t < trials; ++t) {
        double sum = 0.0;
        for (int i = 0; i < nu; ++i)
            sum += c.phases_deg[static_cast<std::size_t>(uniform_pow2_index(eng, m_order))];
        const double x = wrap_deg(sum);
        int idx = static_cast<int>(std::ceil((x + 180.0) / PhaseHistogram::bin_width_deg)) - 1;
        idx = std::clamp(idx, 0, PhaseHistogram::bins - 1);
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

void write_density_csv(std::ostream& os, int n, double delta_deg, double step_deg) {
    os << "phase_deg,density,normalized\n";
    char row[96];
    for (double x = -180.0 + step_deg; x <= 180.0 + 1e-9; x += step_deg) {
        const double d = wrapped_phase_pdf(n, delta_deg, x);
        std::snprintf(row, sizeof(row), "%.6f,%.9g,%.9g\n", x, d, d);
        os << row;
    }
}

void write_histogram_csv(std::ostream& os, const PhaseHistogram& h) {
    os << "phase_deg,count,normalized\n";
    char row[96];
    for (int i = 0; i < PhaseHistogram::bins; ++i) {
        std::snprintf(row, sizeof(row), "%.6f,%llu,%.9g\n", h.bin_center_deg(i),
                      static_cast<unsigned long long>(h.counts[static_cast<std::size_t>(i)]),
                      h.density(i));
        os << row;
    }
}

}  // namespace mtpsk
