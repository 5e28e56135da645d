#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agnor/data_model.hpp"
#include "agnor/sampling.hpp"
#include "json.hpp"

namespace agnor {

/// Raised when a source has no sampled nuclei on an image.
class EmptySampleError : public std::runtime_error {
public:
    EmptySampleError() : std::runtime_error("no nuclei sampled") {}
};

/// Mean class value over the sampled nuclei.
double image_score(const SamplingResult& sampled, double overflow_value = 11.0);

enum class StdConvention { population, sample };

StdConvention parse_std_convention(std::string_view text);
std::string_view to_string(StdConvention convention);

struct PanelValue {
    double mean = 0.0;
    double std = 0.0;
};

/// Mean and standard deviation of the per-rater scores for one image. The
/// sample convention needs at least two scores.
PanelValue expert_panel_value(std::span<const double> scores,
                              StdConvention convention = StdConvention::population);

/// Median of the per-model scores; even counts average the two middle values.
double ensemble_aggregate(std::span<const double> per_model_scores);

struct ErrorMetrics {
    double mse = 0.0;
    double mae = 0.0;
};

/// Mean squared and mean absolute difference over images. Both maps must
/// share the same non-empty key set; a mismatch raises ValidationError listing
/// the missing image ids.
ErrorMetrics error_metrics(const std::map<std::string, double>& model_scores,
                           const std::map<std::string, double>& reference_scores);

struct ScoreOptions {
    GridSpec grid;
    int quota = 100;
    double overflow_value = 11.0;
    StdConvention std_convention = StdConvention::population;
};

/// Diagnostics for one (source, image) sampling run.
struct SampleRecord {
    std::string source_id;
    SourceKind source_kind = SourceKind::human;
    std::string image_id;
    std::size_t n_sampled = 0;
    std::vector<int> fields_used;
    bool exhausted = false;
    std::optional<double> score;
    std::string error;
};

struct ScoreReport {
    using SourceImage = std::pair<std::string, std::string>;

    std::vector<std::pair<std::string, SourceKind>> sources;  // input order
    std::vector<std::string> image_ids;                        // sorted
    std::map<SourceImage, double> per_source_scores;
    std::map<std::string, double> expert_mean;
    std::map<std::string, double> expert_std;
    std::map<std::string, double> ensemble_score;
    std::optional<ErrorMetrics> errors;
    std::vector<std::string> unpaired_images;
    std::vector<SampleRecord> samples;

    bool has_human() const;
    bool has_model() const;
    std::size_t failed_pairs() const;
};

/// Runs the sampling protocol for every (source, image) pair, scores each
/// sample, and aggregates: expert mean/std over human sources, ensemble median
/// over model sources, and error metrics over images that have both. Empty
/// samples are recorded in `samples` rather than thrown. Duplicate source ids
/// or inconsistent image dimensions across sets raise ValidationError.
ScoreReport score_sources(std::span<const AnnotationSet> sets, const ScoreOptions& options = {});

nlohmann::ordered_json to_json(const ScoreReport& report);

/// One row per image, then mse/mae footer rows when available.
std::string to_csv(const ScoreReport& report);

}  // namespace agnor
