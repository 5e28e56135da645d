#include "agnor/consensus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "agnor/numeric.hpp"

namespace agnor {

BoundingBox median_box(std::span<const BoundingBox> boxes) {
    std::vector<double> x0, y0, x1, y1;
    for (const auto& b : boxes) {
        x0.push_back(b.x_min);
        y0.push_back(b.y_min);
        x1.push_back(b.x_max);
        y1.push_back(b.y_max);
    }
    return {median(x0), median(y0), median(x1), median(y1)};
}

namespace {

struct Node {
    std::size_t rater;  // index into the id-sorted rater list
    const NucleusAnnotation* annotation;
};

struct Candidate {
    double iou;
    std::size_t lo;  // node ranks, lo < hi
    std::size_t hi;
};

class DisjointSets {
public:
    explicit DisjointSets(const std::vector<Node>& nodes) : parent_(nodes.size()), raters_(nodes.size()) {
        std::iota(parent_.begin(), parent_.end(), 0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            raters_[i].insert(nodes[i].rater);
        }
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    // Merges unless the two clusters share a rater.
    void try_merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        auto& ra = raters_[a];
        auto& rb = raters_[b];
        for (auto r : rb) {
            if (ra.contains(r)) {
                return;
            }
        }
        // Keep the lower rank as root so cluster order is stable.
        if (b < a) {
            std::swap(a, b);
        }
        parent_[b] = a;
        raters_[a].insert(raters_[b].begin(), raters_[b].end());
        raters_[b].clear();
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::set<std::size_t>> raters_;
};

}  // namespace

std::vector<NucleusCluster> cluster_annotations(std::span<const RaterAnnotations> raters, double iou_threshold) {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
        throw std::invalid_argument("iou_threshold must lie in (0, 1]");
    }

    std::vector<const RaterAnnotations*> sorted;
    for (const auto& r : raters) {
        sorted.push_back(&r);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->rater_id < b->rater_id; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->rater_id == sorted[i - 1]->rater_id) {
            throw std::invalid_argument("rater \"" + sorted[i]->rater_id + "\" listed twice");
        }
    }

    // Node index doubles as the (rater_id, input index) rank.
    std::vector<Node> nodes;
    const std::string* image_id = nullptr;
    for (std::size_t r = 0; r < sorted.size(); ++r) {
        for (const auto& a : sorted[r]->annotations) {
            if (image_id == nullptr) {
                image_id = &a.image_id;
            } else if (a.image_id != *image_id) {
                throw std::invalid_argument("cannot cluster annotations from different images");
            }
            nodes.push_back({r, &a});
        }
    }

    // Sweep along x: only boxes overlapping in x can have positive IoU.
    std::vector<std::size_t> by_x(nodes.size());
    std::iota(by_x.begin(), by_x.end(), 0);
    std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) {
        return nodes[a].annotation->bbox.x_min < nodes[b].annotation->bbox.x_min ||
               (nodes[a].annotation->bbox.x_min == nodes[b].annotation->bbox.x_min && a < b);
    });
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < by_x.size(); ++i) {
        const auto& a = nodes[by_x[i]];
        for (std::size_t j = i + 1; j < by_x.size(); ++j) {
            const auto& b = nodes[by_x[j]];
            if (b.annotation->bbox.x_min >= a.annotation->bbox.x_max) {
                break;
            }
            if (a.rater == b.rater) {
                continue;
            }
            const double v = iou(a.annotation->bbox, b.annotation->bbox);
            if (v >= iou_threshold) {
                candidates.push_back({v, std::min(by_x[i], by_x[j]), std::max(by_x[i], by_x[j])});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) {
            return a.iou > b.iou;
        }
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    });

    DisjointSets sets(nodes);
    for (const auto& c : candidates) {
        sets.try_merge(c.lo, c.hi);
    }

    std::vector<NucleusCluster> clusters;
    std::vector<std::size_t> slot(nodes.size(), SIZE_MAX);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto root = sets.find(i);
        if (slot[root] == SIZE_MAX) {
            slot[root] = clusters.size();
            clusters.emplace_back();
        }
        clusters[slot[root]].members.emplace(sorted[nodes[i].rater]->rater_id, *nodes[i].annotation);
    }
    for (auto& cluster : clusters) {
        std::vector<BoundingBox> boxes;
        for (const auto& [_, a] : cluster.members) {
            boxes.push_back(a.bbox);
        }
        cluster.representative_box = median_box(boxes);
    }
    return clusters;
}

std::vector<ConsensusNucleus> derive_consensus(std::span<const NucleusCluster> clusters, int min_raters) {
    if (min_raters < 2) {
        throw std::invalid_argument("min_raters must be at least 2");
    }
    std::vector<ConsensusNucleus> out;
    for (const auto& cluster : clusters) {
        if (cluster.members.size() < static_cast<std::size_t>(min_raters)) {
            continue;
        }
        int votes[AgnorClass::kCount] = {};
        for (const auto& [_, a] : cluster.members) {
            ++votes[a.agnor_class.value()];
        }
        const int* top = std::max_element(std::begin(votes), std::end(votes));
        if (*top < 2 || std::count(std::begin(votes), std::end(votes), *top) > 1) {
            continue;
        }
        out.push_back({cluster.members.begin()->second.image_id, cluster.representative_box,
                       AgnorClass(static_cast<int>(top - std::begin(votes))), *top});
    }
    return out;
}

}  // namespace agnor
