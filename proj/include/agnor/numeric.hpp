#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace agnor {

/// Median with the even-count convention of averaging the two middle values.
inline double median(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of an empty list");
    }
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    return (lower + upper) / 2.0;
}

}  // namespace agnor
