#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "agnor/data_model.hpp"
#include "json.hpp"

namespace agnor {

using ClassWeights = std::array<double, AgnorClass::kCount>;
using ConfusionMatrix = std::array<ClassWeights, AgnorClass::kCount>;

/// Nucleus counts per class in the reference CCMCT annotation set.
inline constexpr ClassWeights kReferenceClassCounts = {5124, 9634, 4620, 1951, 886, 403,
                                                       209,  78,   48,   28,   26,  29};

ConfusionMatrix identity_confusion();

/// Each class c >= first_class is relabelled c-1 with probability `probability`
/// and kept otherwise; lower classes are untouched.
ConfusionMatrix downshift_confusion(int first_class, double probability);

struct SynthConfig {
    std::uint64_t seed = 0;
    int n_images = 10;
    int image_width = 1569;
    int image_height = 1177;
    int nuclei_per_image = 300;
    ClassWeights class_distribution = kReferenceClassCounts;
    double box_min = 20.0;
    double box_max = 40.0;
    double rater_noise = 0.0;       // P(label off by one class)
    double rater_miss_rate = 0.0;
    double detector_miss_rate = 0.0;
    ConfusionMatrix detector_confusion = identity_confusion();
    double jitter_px = 0.0;         // max displacement of each box edge
    int max_placement_attempts = 1000;

    /// Throws ValidationError on any out-of-domain field.
    void validate() const;

    static SynthConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

/// Ground-truth layout: non-overlapping boxes placed uniformly inside each
/// image, classes drawn from the configured distribution. source_id "truth".
/// Throws ValidationError when boxes cannot be placed within the retry cap.
AnnotationSet generate_ground_truth(const SynthConfig& cfg);

/// Raters "rater_1".."rater_n": each independently misses nuclei, jitters box
/// edges, and mislabels by +-1 class (clamped to [0, 11]).
std::vector<AnnotationSet> simulate_raters(const AnnotationSet& truth, const SynthConfig& cfg, int n_raters);

/// Model-kind detections: misses nuclei, relabels through the confusion
/// matrix, and reports confidence in (0.9, 1].
AnnotationSet simulate_detector(const AnnotationSet& truth, const SynthConfig& cfg, const std::string& model_id);

/// Reproducibility record written alongside generated files.
nlohmann::ordered_json make_manifest(const SynthConfig& cfg, int n_raters, int n_models,
                                     const std::vector<std::string>& files);

}  // namespace agnor
