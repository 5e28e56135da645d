#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agnor/consensus.hpp"
#include "agnor/data_model.hpp"
#include "json.hpp"

namespace agnor {

struct MatchOptions {
    double iou_threshold = 0.5;
    bool class_aware = true;
    // Classes >= merge_from share one evaluation bucket.
    int merge_from = 6;
};

/// Evaluation bucket of a class: the class itself below merge_from, merge_from above.
int class_bucket(AgnorClass c, int merge_from);

struct MatchedPair {
    std::size_t detection = 0;
    std::size_t ground_truth = 0;
    double iou = 0.0;
    AgnorClass detection_class;
    AgnorClass truth_class;
};

struct UnmatchedItem {
    std::size_t index = 0;
    AgnorClass agnor_class;
};

struct MatchResult {
    std::vector<MatchedPair> matched_pairs;
    std::vector<UnmatchedItem> unmatched_detections;    // false positives
    std::vector<UnmatchedItem> unmatched_ground_truth;  // false negatives
};

/// Greedy matching by descending confidence (ties by input order). Each
/// detection claims the unclaimed ground-truth nucleus of highest IoU at or
/// above the threshold, restricted to the same class bucket when class_aware.
/// Every detection must carry a confidence.
MatchResult match(std::span<const NucleusAnnotation> detections, std::span<const ConsensusNucleus> ground_truth,
                  const MatchOptions& options = {});

struct BucketMetrics {
    std::string label;  // "0".."5", ">=6"
    int n_gt = 0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool supported = false;  // any ground truth or detection fell here
};

struct ClassMetrics {
    int merge_from = 6;
    std::vector<BucketMetrics> buckets;  // index = bucket
};

/// Tallies matches into buckets: a matched pair is a true positive when both
/// classes share a bucket, otherwise a false positive in the detection's bucket
/// and a false negative in the truth's. Buckets are merged before tallying.
ClassMetrics class_metrics(std::span<const MatchResult> matches, int merge_from = 6);
ClassMetrics class_metrics(const MatchResult& m, int merge_from = 6);

/// Mean F1 per bucket across models, over the models where the bucket is supported.
struct EnsembleSummary {
    int merge_from = 6;
    std::vector<std::string> labels;
    std::vector<std::optional<double>> mean_f1;
    std::vector<int> supporting_models;
};

EnsembleSummary summarize_models(std::span<const ClassMetrics> per_model);

nlohmann::ordered_json to_json(const ClassMetrics& metrics);
std::string to_csv(const ClassMetrics& metrics);
nlohmann::ordered_json to_json(const EnsembleSummary& summary);
std::string to_csv(const EnsembleSummary& summary);

}  // namespace agnor
