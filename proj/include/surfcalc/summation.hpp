#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace surfcalc {

/// Pairwise (cascade) summation with a fixed split order, so results are reproducible
/// regardless of how the caller produced the terms.
inline double pairwise_sum(std::span<const double> terms) {
    const std::size_t n = terms.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : terms) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(terms.subspan(0, half)) + pairwise_sum(terms.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& terms) {
    return pairwise_sum(std::span<const double>(terms.data(), terms.size()));
}

}  // namespace surfcalc
