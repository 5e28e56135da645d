#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "agnor/data_model.hpp"

namespace agnor {

/// One rater's annotations for a single image (typically restricted to one field).
struct RaterAnnotations {
    std::string rater_id;
    std::vector<NucleusAnnotation> annotations;
};

/// Annotations from different raters believed to mark the same nucleus.
struct NucleusCluster {
    std::map<std::string, NucleusAnnotation> members;  // keyed by rater id
    BoundingBox representative_box;                    // coordinate-wise median of members
};

struct ConsensusNucleus {
    std::string image_id;
    BoundingBox bbox;
    AgnorClass agnor_class;
    int support = 0;  // raters voting for agnor_class
};

/// Greedy agglomerative matching across raters.
///
/// All cross-rater pairs with IoU >= iou_threshold are visited in descending
/// IoU order; equal IoUs are ordered by (rater_id, input index) of the pair's
/// lesser endpoint, then of the other endpoint. Each pair merges its two
/// clusters unless the union would hold two annotations from one rater.
/// Leftover annotations become singletons. Clusters are returned ordered by
/// their earliest member in (rater_id, input index) order.
std::vector<NucleusCluster> cluster_annotations(std::span<const RaterAnnotations> raters,
                                                double iou_threshold = 0.5);

/// Majority-vote ground truth. Clusters smaller than min_raters are dropped, as
/// are clusters whose top vote count is shared by several classes or is below
/// two. min_raters must be at least 2.
std::vector<ConsensusNucleus> derive_consensus(std::span<const NucleusCluster> clusters, int min_raters = 2);

/// Coordinate-wise median box.
BoundingBox median_box(std::span<const BoundingBox> boxes);

}  // namespace agnor
