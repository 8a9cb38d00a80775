// freq_plan.hpp - collision-free tone spacing search and frequency plan bookkeeping
//
// Tone spacings are chosen so the N-1 difference tones produced by mixing
// consecutive carriers land on unique baseband bins that no other carrier
// pair occupies. Spacings are kept as exact integers in GCD units; Hz values
// are always derived from them so the collision checks stay in exact
// integer arithmetic.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mtpsk {

struct FrequencyPlan {
    double f_c_hz = 0.0;   // carrier (band centre)
    double gcd_hz = 0.0;   // base spacing unit; 1/gcd is the symbol period
    int r = 0;             // bandwidth spreading factor
    int n_tones = 0;       // N >= 2
    std::vector<std::int64_t> spacings;  // k_1..k_{N-1} in gcd units, k_1 = 1

    std::int64_t bw_units() const;
    double bw_hz() const { return static_cast<double>(bw_units()) * gcd_hz; }
    std::vector<double> spacings_hz() const;
    // f_1..f_N with f_1 = f_c - bw/2 (tones symmetric around the carrier).
    std::vector<double> tones_hz() const;
};

// Greedy spacing search: k_1 = 1; each next spacing is the first candidate,
// stepping by k_1 + r, that is not already a contiguous-run sum of the
// chosen spacings. The result always passes validate_plan.
FrequencyPlan plan_frequencies(double f_c_hz, int n_tones, double gcd_hz, int r);

// Every pairwise tone difference f_j - f_i (j > i) in gcd units, i.e. all
// contiguous-run sums of the spacings. Sorted, multiplicity preserved:
// exactly N(N-1)/2 entries.
std::vector<std::int64_t> pair_differences(const FrequencyPlan& plan);

struct PlanCheck {
    bool ok = true;
    std::string message;      // human-readable description of the violation
    int run_begin = -1;       // colliding run [run_begin, run_end] (spacing indices, 0-based)
    int run_end = -1;
    int spacing_index = -1;   // spacing it collides with
};

// ok iff consecutive spacings are pairwise distinct and no contiguous-run
// sum of length >= 2 equals a single spacing. Reports the first collision
// found; never throws.
PlanCheck validate_plan(const FrequencyPlan& plan);

// JSON document { f_c_hz, gcd_hz, r, n, spacings_gcd_units[], tones_hz[], bw_hz }.
std::string plan_to_json(const FrequencyPlan& plan);
FrequencyPlan plan_from_json(const std::string& text);

}  // namespace mtpsk
