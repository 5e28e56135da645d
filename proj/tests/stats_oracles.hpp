#pragma once

// Textbook reference formulas, written independently of the library so tests
// can compare against them.

#include <cmath>
#include <vector>

namespace agnor::testing {

/// Fleiss' kappa from the per-item agreement formula.
inline double kappa_oracle(const std::vector<std::vector<int>>& counts) {
    const double n_items = static_cast<double>(counts.size());
    const std::size_t cats = counts.front().size();
    double raters = 0;
    for (int v : counts.front()) {
        raters += v;
    }
    std::vector<double> p(cats, 0.0);
    double p_bar = 0;
    for (const auto& row : counts) {
        double agree = 0;
        for (std::size_t j = 0; j < cats; ++j) {
            agree += row[j] * (row[j] - 1.0);
            p[j] += row[j] / (n_items * raters);
        }
        p_bar += agree / (raters * (raters - 1.0)) / n_items;
    }
    double p_e = 0;
    for (double pj : p) {
        p_e += pj * pj;
    }
    return (p_bar - p_e) / (1.0 - p_e);
}

struct IccOracle {
    double msr;
    double msc;
    double mse;
    double icc_2_1;
    double icc_2_k;
};

/// Two-way ANOVA decomposition around the grand mean.
inline IccOracle icc_oracle(const std::vector<std::vector<double>>& t) {
    const std::size_t n = t.size();
    const std::size_t k = t.front().size();
    double grand = 0;
    for (const auto& row : t) {
        for (double v : row) {
            grand += v;
        }
    }
    grand /= static_cast<double>(n * k);
    double ssr = 0;
    double ssc = 0;
    double sst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = 0;
        for (double v : t[i]) {
            m += v;
            sst += (v - grand) * (v - grand);
        }
        m /= static_cast<double>(k);
        ssr += k * (m - grand) * (m - grand);
    }
    for (std::size_t j = 0; j < k; ++j) {
        double m = 0;
        for (std::size_t i = 0; i < n; ++i) {
            m += t[i][j];
        }
        m /= static_cast<double>(n);
        ssc += n * (m - grand) * (m - grand);
    }
    const double sse = sst - ssr - ssc;
    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    IccOracle o;
    o.msr = ssr / (dn - 1);
    o.msc = ssc / (dk - 1);
    o.mse = sse / ((dn - 1) * (dk - 1));
    o.icc_2_1 = (o.msr - o.mse) / (o.msr + (dk - 1) * o.mse + dk * (o.msc - o.mse) / dn);
    o.icc_2_k = (o.msr - o.mse) / (o.msr + (o.msc - o.mse) / dn);
    return o;
}

}  // namespace agnor::testing
