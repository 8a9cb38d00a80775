// phase_stats.hpp - achievable tone-phase sets, Irwin-Hall densities, circular wrapping
//
// The analytic densities use the continuous-uniform idealization of the
// symbol distribution; the empirical sampler draws from the actual discrete
// constellation. The two agree where the constellation grid is fine
// relative to the evaluation bins.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mtpsk {

// Distinct achievable phases of tone n (cumulative sum of n-1 symbols),
// wrapped into (-180, 180].
struct PhaseSupport {
    int tone_index = 0;      // n >= 2
    int pre_wrap_count = 0;  // (n-1)(M-1) + 1 distinct sums before wrapping
    std::vector<double> values_deg;  // sorted distinct wrapped values
};

PhaseSupport tone_phase_support(int n, int m_order, double delta_deg);

// Density/CDF of the sum of (n-1) independent uniforms on [-delta/2, delta/2]
// (piecewise-polynomial form with pairwise summation; normal approximation
// beyond n-1 = 40 where the alternating sum loses precision).
double irwin_hall_pdf(int n, double delta_deg, double x_deg);
double irwin_hall_cdf(int n, double delta_deg, double x_deg);

// The same density folded onto the circle: sum over +-360 k shifts, truncated
// at |k| <= ceil((n-1) delta / 720) + 1 outside of which terms are zero.
// delta = 360 folds a full-circle uniform and is exactly 1/360 everywhere.
double wrapped_phase_pdf(int n, double delta_deg, double x_deg);

// P(wrapped phase <= x) on (-180, 180].
double wrapped_phase_cdf(int n, double delta_deg, double x_deg);

// 72 bins of 5 degrees across (-180, 180], left-open right-closed.
struct PhaseHistogram {
    static constexpr int bins = 72;
    static constexpr double bin_width_deg = 5.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t trials = 0;

    double bin_center_deg(int i) const { return -180.0 + (i + 0.5) * bin_width_deg; }
    // Per-degree density estimate for bin i.
    double density(int i) const {
        return static_cast<double>(counts[static_cast<std::size_t>(i)]) /
               (static_cast<double>(trials) * bin_width_deg);
    }
};

// Draws `trials` independent (n-1)-symbol sequences uniformly from the
// constellation and accumulates the wrapped cumulative phase of tone n.
PhaseHistogram empirical_phase_histogram(int n, int m_order, double delta_deg,
                                         std::uint64_t trials, std::uint64_t seed);

// CSV exports: phase_deg, density|count, normalized (per-degree density).
void write_density_csv(std::ostream& os, int n, double delta_deg, double step_deg);
void write_histogram_csv(std::ostream& os, const PhaseHistogram& h);

}  // namespace mtpsk
