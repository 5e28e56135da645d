#include "agnor/detection_eval.hpp"

#include <algorithm>
#include <numeric>

#include "agnor/report_format.hpp"

namespace agnor {

namespace {

void check_merge_from(int merge_from) {
    if (merge_from < 1 || merge_from > AgnorClass::kOverflow) {
        throw std::invalid_argument("merge_from must lie in [1, 11]");
    }
}

double ratio(int num, int den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / den;
}

std::string bucket_label(int bucket, int merge_from) {
    if (bucket < merge_from) {
        return std::to_string(bucket);
    }
    return merge_from == AgnorClass::kOverflow ? std::string(">10") : ">=" + std::to_string(merge_from);
}

}  // namespace

int class_bucket(AgnorClass c, int merge_from) {
    return std::min(c.value(), merge_from);
}

MatchResult match(std::span<const NucleusAnnotation> detections, std::span<const ConsensusNucleus> ground_truth,
                  const MatchOptions& options) {
    if (!(options.iou_threshold > 0.0 && options.iou_threshold <= 1.0)) {
        throw std::invalid_argument("iou_threshold must lie in (0, 1]");
    }
    check_merge_from(options.merge_from);
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (!detections[i].confidence) {
            throw ValidationError("detection " + std::to_string(i) + " has no confidence");
        }
    }

    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *detections[a].confidence > *detections[b].confidence;
    });

    MatchResult out;
    std::vector<bool> claimed(ground_truth.size(), false);
    for (const auto d : order) {
        const auto& det = detections[d];
        std::size_t best = ground_truth.size();
        double best_iou = 0.0;
        for (std::size_t g = 0; g < ground_truth.size(); ++g) {
            if (claimed[g]) {
                continue;
            }
            if (options.class_aware && class_bucket(det.agnor_class, options.merge_from) !=
                                           class_bucket(ground_truth[g].agnor_class, options.merge_from)) {
                continue;
            }
            const double v = iou(det.bbox, ground_truth[g].bbox);
            if (v >= options.iou_threshold && v > best_iou) {
                best = g;
                best_iou = v;
            }
        }
        if (best == ground_truth.size()) {
            out.unmatched_detections.push_back({d, det.agnor_class});
        } else {
            claimed[best] = true;
            out.matched_pairs.push_back({d, best, best_iou, det.agnor_class, ground_truth[best].agnor_class});
        }
    }
    std::sort(out.unmatched_detections.begin(), out.unmatched_detections.end(),
              [](const auto& a, const auto& b) { return a.index < b.index; });
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
        if (!claimed[g]) {
            out.unmatched_ground_truth.push_back({g, ground_truth[g].agnor_class});
        }
    }
    return out;
}

ClassMetrics class_metrics(std::span<const MatchResult> matches, int merge_from) {
    check_merge_from(merge_from);
    ClassMetrics out;
    out.merge_from = merge_from;
    out.buckets.resize(static_cast<std::size_t>(merge_from) + 1);
    for (int b = 0; b <= merge_from; ++b) {
        out.buckets[b].label = bucket_label(b, merge_from);
    }
    for (const auto& m : matches) {
        for (const auto& p : m.matched_pairs) {
            const int db = class_bucket(p.detection_class, merge_from);
            const int gb = class_bucket(p.truth_class, merge_from);
            if (db == gb) {
                ++out.buckets[gb].tp;
            } else {
                ++out.buckets[db].fp;
                ++out.buckets[gb].fn;
            }
        }
        for (const auto& u : m.unmatched_detections) {
            ++out.buckets[class_bucket(u.agnor_class, merge_from)].fp;
        }
        for (const auto& u : m.unmatched_ground_truth) {
            ++out.buckets[class_bucket(u.agnor_class, merge_from)].fn;
        }
    }
    for (auto& b : out.buckets) {
        b.n_gt = b.tp + b.fn;
        b.supported = b.tp + b.fp + b.fn > 0;
        b.precision = ratio(b.tp, b.tp + b.fp);
        b.recall = ratio(b.tp, b.tp + b.fn);
        const double s = b.precision + b.recall;
        b.f1 = s > 0.0 ? 2.0 * b.precision * b.recall / s : 0.0;
    }
    return out;
}

ClassMetrics class_metrics(const MatchResult& m, int merge_from) {
    return class_metrics(std::span<const MatchResult>(&m, 1), merge_from);
}

EnsembleSummary summarize_models(std::span<const ClassMetrics> per_model) {
    EnsembleSummary out;
    if (per_model.empty()) {
        return out;
    }
    out.merge_from = per_model.front().merge_from;
    const auto n_buckets = per_model.front().buckets.size();
    for (const auto& m : per_model) {
        if (m.merge_from != out.merge_from) {
            throw std::invalid_argument("models evaluated with different merge_from");
        }
    }
    for (std::size_t b = 0; b < n_buckets; ++b) {
        out.labels.push_back(per_model.front().buckets[b].label);
        double sum = 0.0;
        int count = 0;
        for (const auto& m : per_model) {
            if (m.buckets[b].supported) {
                sum += m.buckets[b].f1;
                ++count;
            }
        }
        out.supporting_models.push_back(count);
        out.mean_f1.push_back(count > 0 ? std::optional<double>(sum / count) : std::nullopt);
    }
    return out;
}

nlohmann::ordered_json to_json(const ClassMetrics& metrics) {
    nlohmann::ordered_json doc;
    doc["merge_from"] = metrics.merge_from;
    auto buckets = nlohmann::ordered_json::array();
    for (const auto& b : metrics.buckets) {
        buckets.push_back({{"bucket", b.label},
                           {"n_gt", b.n_gt},
                           {"tp", b.tp},
                           {"fp", b.fp},
                           {"fn", b.fn},
                           {"precision", b.precision},
                           {"recall", b.recall},
                           {"f1", b.f1},
                           {"supported", b.supported}});
    }
    doc["buckets"] = std::move(buckets);
    return doc;
}

std::string to_csv(const ClassMetrics& metrics) {
    std::string out = csv_row({"bucket", "n_gt", "tp", "fp", "fn", "precision", "recall", "f1"});
    for (const auto& b : metrics.buckets) {
        out += csv_row({b.label, std::to_string(b.n_gt), std::to_string(b.tp), std::to_string(b.fp),
                        std::to_string(b.fn), format_number(b.precision), format_number(b.recall),
                        format_number(b.f1)});
    }
    return out;
}

nlohmann::ordered_json to_json(const EnsembleSummary& summary) {
    nlohmann::ordered_json doc;
    doc["merge_from"] = summary.merge_from;
    auto buckets = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < summary.labels.size(); ++b) {
        buckets.push_back({{"bucket", summary.labels[b]},
                           {"mean_f1", summary.mean_f1[b] ? nlohmann::ordered_json(*summary.mean_f1[b])
                                                           : nlohmann::ordered_json(nullptr)},
                           {"supporting_models", summary.supporting_models[b]}});
    }
    doc["buckets"] = std::move(buckets);
    return doc;
}

std::string to_csv(const EnsembleSummary& summary) {
    std::string out = csv_row({"bucket", "mean_f1", "supporting_models"});
    for (std::size_t b = 0; b < summary.labels.size(); ++b) {
        out += csv_row({summary.labels[b], format_number(summary.mean_f1[b]),
                        std::to_string(summary.supporting_models[b])});
    }
    return out;
}

}  // namespace agnor
