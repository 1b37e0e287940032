#pragma once

#include <vector>

namespace rblda {

enum class Alternative { less, greater };

enum class TestMethod { exact, normal_approx };

/// One-sided Wilcoxon signed-rank result. `statistic` is W+, the rank sum
/// of the positive differences after zero removal; for alternative `less`
/// the p-value is P(W+ <= w), for `greater` P(W+ >= w).
struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int n_effective = 0;
    TestMethod method = TestMethod::exact;
};

/// Signed-rank test of H0: median difference = 0 against the one-sided
/// alternative. Zero differences are dropped and tied magnitudes receive
/// average ranks. The exact null distribution (enumeration over sign
/// patterns) is used for n_effective <= 25 when the magnitudes are
/// tie-free; ties and larger samples use the normal approximation with
/// tie-corrected variance and no continuity correction.
TestResult wilcoxon_one_sided(const std::vector<double>& deltas, Alternative alternative);

enum class ComparisonOutcome { first_lower, first_higher, not_significant };

/// Two-step decision on paired differences delta = e_first - e_second:
/// test H1: delta < 0 at level alpha; if not rejected test H1: delta > 0;
/// if neither rejects, the methods are declared not significantly
/// different.
ComparisonOutcome two_step_comparison(const std::vector<double>& deltas, double alpha);

} // namespace rblda
