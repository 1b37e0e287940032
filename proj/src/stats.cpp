#include "rblda/stats.hpp"

#include "rblda/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace rblda {

namespace {

struct RankedDeltas {
    std::vector<double> ranks; // average ranks of |delta|, aligned with signs
    std::vector<bool> positive;
    bool has_ties = false;
};

RankedDeltas rank_magnitudes(const std::vector<double>& deltas) {
    std::vector<double> magnitudes;
    RankedDeltas out;
    for (double d : deltas) {
        if (d == 0.0) continue; // zeros carry no sign information
        magnitudes.push_back(std::abs(d));
        out.positive.push_back(d > 0.0);
    }
    if (magnitudes.empty()) {
        throw input_error("wilcoxon: all differences are zero");
    }

    const std::size_t n = magnitudes.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return magnitudes[a] < magnitudes[b];
    });

    out.ranks.assign(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = avg;
        if (j > i) out.has_ties = true;
        i = j + 1;
    }
    return out;
}

/// Exact null distribution of W+ for tie-free integer ranks 1..n:
/// counts[s] = number of sign patterns with rank sum s.
std::vector<double> exact_counts(int n) {
    const int max_sum = n * (n + 1) / 2;
    std::vector<double> counts(static_cast<std::size_t>(max_sum) + 1, 0.0);
    counts[0] = 1.0;
    for (int rank = 1; rank <= n; ++rank) {
        for (int s = max_sum; s >= rank; --s) {
            counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - rank)];
        }
    }
    return counts;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

TestResult wilcoxon_one_sided(const std::vector<double>& deltas, Alternative alternative) {
    const RankedDeltas ranked = rank_magnitudes(deltas);
    const int n = static_cast<int>(ranked.ranks.size());

    double w_plus = 0.0;
    for (std::size_t i = 0; i < ranked.ranks.size(); ++i) {
        if (ranked.positive[i]) w_plus += ranked.ranks[i];
    }

    TestResult result;
    result.statistic = w_plus;
    result.n_effective = n;

    if (n <= 25 && !ranked.has_ties) {
        result.method = TestMethod::exact;
        const std::vector<double> counts = exact_counts(n);
        const double total = std::ldexp(1.0, n); // 2^n patterns
        const auto w = static_cast<std::size_t>(std::llround(w_plus));
        double mass = 0.0;
        if (alternative == Alternative::less) {
            for (std::size_t s = 0; s <= w && s < counts.size(); ++s) mass += counts[s];
        } else {
            for (std::size_t s = w; s < counts.size(); ++s) mass += counts[s];
        }
        result.p_value = mass / total;
    } else {
        result.method = TestMethod::normal_approx;
        const double dn = static_cast<double>(n);
        const double mean = dn * (dn + 1.0) / 4.0;
        double variance = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0;
        // Tie correction: subtract sum(t^3 - t)/48 over tied groups.
        std::vector<double> sorted = ranked.ranks;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            variance -= (t * t * t - t) / 48.0;
            i = j + 1;
        }
        if (!(variance > 0.0)) {
            throw degeneracy_error("wilcoxon: null variance is zero");
        }
        const double z = (w_plus - mean) / std::sqrt(variance);
        result.p_value = alternative == Alternative::less ? normal_cdf(z) : 1.0 - normal_cdf(z);
    }
    return result;
}

ComparisonOutcome two_step_comparison(const std::vector<double>& deltas, double alpha) {
    if (!(alpha > 0.0) || alpha >= 1.0) {
        throw input_error("two_step_comparison: alpha must lie in (0, 1)");
    }
    if (wilcoxon_one_sided(deltas, Alternative::less).p_value < alpha) {
        return ComparisonOutcome::first_lower;
    }
    if (wilcoxon_one_sided(deltas, Alternative::greater).p_value < alpha) {
        return ComparisonOutcome::first_higher;
    }
    return ComparisonOutcome::not_significant;
}

} // namespace rblda
