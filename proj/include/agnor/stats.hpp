#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agnor/consensus.hpp"
#include "json.hpp"

namespace agnor {

/// Items x categories table of vote counts; every row sums to the same number
/// of raters.
class RatingMatrix {
public:
    /// Row-major counts. Throws ValidationError on ragged rows, negative counts,
    /// rows with different sums, or fewer than 2 items/categories/raters.
    explicit RatingMatrix(const std::vector<std::vector<int>>& counts);

    std::size_t items() const { return items_; }
    std::size_t categories() const { return categories_; }
    int raters_per_item() const { return raters_; }
    int operator()(std::size_t item, std::size_t category) const { return counts_[item * categories_ + category]; }

private:
    std::size_t items_ = 0;
    std::size_t categories_ = 0;
    int raters_ = 0;
    std::vector<int> counts_;
};

/// Complete items x raters table of numeric ratings.
class ValueTable {
public:
    /// Throws ValidationError on ragged or non-finite input, or fewer than 2
    /// items or raters.
    explicit ValueTable(const std::vector<std::vector<double>>& values);

    std::size_t items() const { return items_; }
    std::size_t raters() const { return raters_; }
    double operator()(std::size_t item, std::size_t rater) const { return values_[item * raters_ + rater]; }

private:
    std::size_t items_ = 0;
    std::size_t raters_ = 0;
    std::vector<double> values_;
};

struct KappaResult {
    double kappa = 0.0;
    double p_bar = 0.0;  // mean per-item agreement
    double p_e = 0.0;    // chance agreement
};

/// Fleiss' kappa. Throws DegenerateError when every rating falls into one
/// category (chance agreement of 1).
KappaResult fleiss_kappa(const RatingMatrix& m);

struct IccResult {
    double icc_2_1 = 0.0;
    double icc_2_k = 0.0;
    double msr = 0.0;  // between items
    double msc = 0.0;  // between raters
    double mse = 0.0;  // residual
    std::size_t items = 0;
    std::size_t raters = 0;
};

/// Two-way random-effects intraclass correlation, single rater and average of
/// k raters. Throws DegenerateError when all cells are equal or a denominator
/// is not positive.
IccResult icc(const ValueTable& v);

enum class AgreementBand { poor, slight, fair, moderate, substantial, almost_perfect };

/// Landis-Koch verbal band. Each band includes its upper edge: 0.20 is
/// slight, 0.40 fair, 0.60 moderate, 0.80 substantial.
AgreementBand interpret_kappa(double kappa);
std::string_view to_string(AgreementBand band);

struct RatingInputs {
    RatingMatrix matrix;
    ValueTable values;
    std::vector<std::string> rater_ids;  // ValueTable column order
};

/// Keeps only clusters annotated by every listed rater and tabulates their
/// votes (12 categories) and class values. Throws InsufficientDataError when
/// fewer than two clusters qualify.
RatingInputs build_rating_inputs(std::span<const NucleusCluster> clusters, std::span<const std::string> rater_ids,
                                 double overflow_value = 11.0);

/// Same, with the rater list taken as the union of cluster members; the union
/// must contain exactly required_raters ids.
RatingInputs build_rating_inputs(std::span<const NucleusCluster> clusters, int required_raters,
                                 double overflow_value = 11.0);

/// Kappa and ICC over the same items. A statistic that is undefined for the
/// data is left empty and its reason recorded in `errors`.
struct ReliabilityResult {
    std::size_t items = 0;
    int raters = 0;
    std::optional<KappaResult> kappa;
    std::optional<AgreementBand> interpretation;
    std::optional<IccResult> icc;
    std::vector<std::string> errors;

    bool complete() const { return kappa.has_value() && icc.has_value(); }
};

ReliabilityResult assess_reliability(const RatingInputs& inputs);

nlohmann::ordered_json to_json(const ReliabilityResult& result);

}  // namespace agnor
