#include "agnor/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace agnor {

RatingMatrix::RatingMatrix(const std::vector<std::vector<int>>& counts) {
    if (counts.size() < 2) {
        throw ValidationError("rating matrix needs at least 2 items");
    }
    items_ = counts.size();
    categories_ = counts.front().size();
    if (categories_ < 2) {
        throw ValidationError("rating matrix needs at least 2 categories");
    }
    counts_.reserve(items_ * categories_);
    for (std::size_t i = 0; i < items_; ++i) {
        if (counts[i].size() != categories_) {
            throw ValidationError("rating matrix row " + std::to_string(i) + " has " +
                                  std::to_string(counts[i].size()) + " categories, expected " +
                                  std::to_string(categories_));
        }
        int row_sum = 0;
        for (int c : counts[i]) {
            if (c < 0) {
                throw ValidationError("rating matrix row " + std::to_string(i) + " has a negative count");
            }
            row_sum += c;
            counts_.push_back(c);
        }
        if (i == 0) {
            raters_ = row_sum;
        } else if (row_sum != raters_) {
            throw ValidationError("rating matrix row " + std::to_string(i) + " sums to " + std::to_string(row_sum) +
                                  ", expected " + std::to_string(raters_));
        }
    }
    if (raters_ < 2) {
        throw ValidationError("rating matrix needs at least 2 raters per item");
    }
}

ValueTable::ValueTable(const std::vector<std::vector<double>>& values) {
    if (values.size() < 2) {
        throw ValidationError("value table needs at least 2 items");
    }
    items_ = values.size();
    raters_ = values.front().size();
    if (raters_ < 2) {
        throw ValidationError("value table needs at least 2 raters");
    }
    values_.reserve(items_ * raters_);
    for (std::size_t i = 0; i < items_; ++i) {
        if (values[i].size() != raters_) {
            throw ValidationError("value table row " + std::to_string(i) + " is incomplete");
        }
        for (double v : values[i]) {
            if (!std::isfinite(v)) {
                throw ValidationError("value table row " + std::to_string(i) + " holds a non-finite value");
            }
            values_.push_back(v);
        }
    }
}

KappaResult fleiss_kappa(const RatingMatrix& m) {
    const auto n = static_cast<long long>(m.items());
    const long long r = m.raters_per_item();
    if (r < 2) {
        throw ValidationError("Fleiss' kappa needs at least 2 raters per item");
    }

    long long sum_sq = 0;
    std::vector<long long> totals(m.categories(), 0);
    for (std::size_t i = 0; i < m.items(); ++i) {
        for (std::size_t j = 0; j < m.categories(); ++j) {
            const long long c = m(i, j);
            sum_sq += c * c;
            totals[j] += c;
        }
    }
    const long long all = n * r;
    if (std::any_of(totals.begin(), totals.end(), [&](long long t) { return t == all; })) {
        throw DegenerateError("Fleiss' kappa undefined: every rating falls into one category");
    }

    KappaResult out;
    out.p_bar = static_cast<double>(sum_sq - all) / static_cast<double>(all * (r - 1));
    long long totals_sq = 0;
    for (long long t : totals) {
        totals_sq += t * t;
    }
    out.p_e = static_cast<double>(totals_sq) / (static_cast<double>(all) * static_cast<double>(all));
    out.kappa = (out.p_bar - out.p_e) / (1.0 - out.p_e);
    return out;
}

IccResult icc(const ValueTable& v) {
    const std::size_t n = v.items();
    const std::size_t k = v.raters();
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);

    bool constant = true;
    for (std::size_t i = 0; i < n && constant; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (v(i, j) != v(0, 0)) {
                constant = false;
                break;
            }
        }
    }
    if (constant) {
        throw DegenerateError("ICC undefined: all ratings are equal (zero total variance)");
    }

    // Between-items sum of squares from the raw row means.
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            row_mean[i] += v(i, j);
        }
        grand += row_mean[i];
        row_mean[i] /= kd;
    }
    grand /= nd * kd;
    double ss_rows = 0.0;
    for (double m : row_mean) {
        ss_rows += (m - grand) * (m - grand);
    }
    ss_rows *= kd;

    // Rater and residual sums of squares are invariant to per-item shifts, so
    // they are taken on ratings relative to the first rater. Identical raters
    // then give exactly zero.
    std::vector<double> shifted(n * k);
    std::vector<double> srow(n, 0.0);
    std::vector<double> scol(k, 0.0);
    double sgrand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double y = v(i, j) - v(i, 0);
            shifted[i * k + j] = y;
            srow[i] += y;
            scol[j] += y;
            sgrand += y;
        }
    }
    for (auto& s : srow) {
        s /= kd;
    }
    for (auto& s : scol) {
        s /= nd;
    }
    sgrand /= nd * kd;

    double ss_cols = 0.0;
    for (double c : scol) {
        ss_cols += (c - sgrand) * (c - sgrand);
    }
    ss_cols *= nd;
    double ss_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double e = shifted[i * k + j] - srow[i] - scol[j] + sgrand;
            ss_err += e * e;
        }
    }

    IccResult out;
    out.items = n;
    out.raters = k;
    out.msr = ss_rows / (nd - 1.0);
    out.msc = ss_cols / (kd - 1.0);
    out.mse = ss_err / ((nd - 1.0) * (kd - 1.0));

    const double den_single = out.msr + (kd - 1.0) * out.mse + (kd / nd) * (out.msc - out.mse);
    const double den_average = out.msr + (out.msc - out.mse) / nd;
    if (!(den_single > 0.0) || !(den_average > 0.0)) {
        throw DegenerateError("ICC denominator not positive (MSR=" + std::to_string(out.msr) +
                              ", MSC=" + std::to_string(out.msc) + ", MSE=" + std::to_string(out.mse) + ")");
    }
    out.icc_2_1 = (out.msr - out.mse) / den_single;
    out.icc_2_k = (out.msr - out.mse) / den_average;
    return out;
}

AgreementBand interpret_kappa(double kappa) {
    if (kappa < 0.0) {
        return AgreementBand::poor;
    }
    if (kappa <= 0.20) {
        return AgreementBand::slight;
    }
    if (kappa <= 0.40) {
        return AgreementBand::fair;
    }
    if (kappa <= 0.60) {
        return AgreementBand::moderate;
    }
    if (kappa <= 0.80) {
        return AgreementBand::substantial;
    }
    return AgreementBand::almost_perfect;
}

std::string_view to_string(AgreementBand band) {
    switch (band) {
        case AgreementBand::poor: return "poor";
        case AgreementBand::slight: return "slight";
        case AgreementBand::fair: return "fair";
        case AgreementBand::moderate: return "moderate";
        case AgreementBand::substantial: return "substantial";
        case AgreementBand::almost_perfect: return "almost perfect";
    }
    return "unknown";
}

RatingInputs build_rating_inputs(std::span<const NucleusCluster> clusters, std::span<const std::string> rater_ids,
                                 double overflow_value) {
    if (rater_ids.size() < 2) {
        throw InsufficientDataError("agreement statistics need at least 2 raters");
    }
    std::vector<std::vector<int>> counts;
    std::vector<std::vector<double>> values;
    for (const auto& cluster : clusters) {
        const bool complete = std::all_of(rater_ids.begin(), rater_ids.end(),
                                          [&](const std::string& id) { return cluster.members.contains(id); });
        if (!complete) {
            continue;
        }
        std::vector<int> row(AgnorClass::kCount, 0);
        std::vector<double> vals;
        for (const auto& id : rater_ids) {
            const auto c = cluster.members.at(id).agnor_class;
            ++row[c.value()];
            vals.push_back(class_value(c, overflow_value));
        }
        counts.push_back(std::move(row));
        values.push_back(std::move(vals));
    }
    if (counts.size() < 2) {
        throw InsufficientDataError("agreement statistics need at least 2 nuclei annotated by all " +
                                    std::to_string(rater_ids.size()) + " raters, found " +
                                    std::to_string(counts.size()));
    }
    return {RatingMatrix(counts), ValueTable(values), std::vector<std::string>(rater_ids.begin(), rater_ids.end())};
}

RatingInputs build_rating_inputs(std::span<const NucleusCluster> clusters, int required_raters,
                                 double overflow_value) {
    std::set<std::string> ids;
    for (const auto& cluster : clusters) {
        for (const auto& [id, _] : cluster.members) {
            ids.insert(id);
        }
    }
    if (ids.size() != static_cast<std::size_t>(required_raters)) {
        throw InsufficientDataError("expected " + std::to_string(required_raters) + " raters, clusters name " +
                                    std::to_string(ids.size()));
    }
    const std::vector<std::string> list(ids.begin(), ids.end());
    return build_rating_inputs(clusters, list, overflow_value);
}

ReliabilityResult assess_reliability(const RatingInputs& inputs) {
    ReliabilityResult out;
    out.items = inputs.matrix.items();
    out.raters = inputs.matrix.raters_per_item();
    try {
        out.kappa = fleiss_kappa(inputs.matrix);
        out.interpretation = interpret_kappa(out.kappa->kappa);
    } catch (const DegenerateError& e) {
        out.errors.emplace_back(e.what());
    }
    try {
        out.icc = icc(inputs.values);
    } catch (const DegenerateError& e) {
        out.errors.emplace_back(e.what());
    }
    return out;
}

nlohmann::ordered_json to_json(const ReliabilityResult& result) {
    nlohmann::ordered_json doc;
    doc["items"] = result.items;
    doc["raters"] = result.raters;
    if (result.kappa) {
        doc["fleiss_kappa"] = {{"kappa", result.kappa->kappa},
                               {"p_bar", result.kappa->p_bar},
                               {"p_e", result.kappa->p_e},
                               {"interpretation", to_string(*result.interpretation)}};
    } else {
        doc["fleiss_kappa"] = nullptr;
    }
    if (result.icc) {
        doc["icc"] = {{"icc_2_1", result.icc->icc_2_1},
                      {"icc_2_k", result.icc->icc_2_k},
                      {"msr", result.icc->msr},
                      {"msc", result.icc->msc},
                      {"mse", result.icc->mse}};
    } else {
        doc["icc"] = nullptr;
    }
    doc["errors"] = result.errors;
    return doc;
}

}  // namespace agnor
