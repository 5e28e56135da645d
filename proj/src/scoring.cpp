#include "agnor/scoring.hpp"

#include <cmath>
#include <set>

#include "agnor/numeric.hpp"
#include "agnor/report_format.hpp"

namespace agnor {

double image_score(const SamplingResult& sampled, double overflow_value) {
    if (sampled.sampled.empty()) {
        throw EmptySampleError();
    }
    double sum = 0.0;
    for (const auto& a : sampled.sampled) {
        sum += class_value(a.agnor_class, overflow_value);
    }
    return sum / static_cast<double>(sampled.sampled.size());
}

StdConvention parse_std_convention(std::string_view text) {
    if (text == "population") {
        return StdConvention::population;
    }
    if (text == "sample") {
        return StdConvention::sample;
    }
    throw ParseError("std convention must be population or sample, got \"" + std::string(text) + "\"");
}

std::string_view to_string(StdConvention convention) {
    return convention == StdConvention::population ? "population" : "sample";
}

PanelValue expert_panel_value(std::span<const double> scores, StdConvention convention) {
    if (scores.empty()) {
        throw std::invalid_argument("expert panel needs at least one score");
    }
    const auto n = static_cast<double>(scores.size());
    if (convention == StdConvention::sample && scores.size() < 2) {
        throw std::invalid_argument("sample standard deviation needs at least two scores");
    }
    // Deviations from the first score, so equal scores reproduce it exactly.
    const double origin = scores.front();
    double shift = 0.0;
    for (double s : scores) {
        shift += s - origin;
    }
    shift /= n;
    const double mean = origin + shift;
    double ss = 0.0;
    for (double s : scores) {
        const double d = (s - origin) - shift;
        ss += d * d;
    }
    const double divisor = convention == StdConvention::population ? n : n - 1.0;
    return {mean, std::sqrt(ss / divisor)};
}

double ensemble_aggregate(std::span<const double> per_model_scores) {
    if (per_model_scores.empty()) {
        throw std::invalid_argument("ensemble needs at least one model score");
    }
    return median(per_model_scores);
}

ErrorMetrics error_metrics(const std::map<std::string, double>& model_scores,
                           const std::map<std::string, double>& reference_scores) {
    std::string missing;
    for (const auto& [id, _] : model_scores) {
        if (!reference_scores.contains(id)) {
            missing += (missing.empty() ? "" : ", ") + id + " (reference)";
        }
    }
    for (const auto& [id, _] : reference_scores) {
        if (!model_scores.contains(id)) {
            missing += (missing.empty() ? "" : ", ") + id + " (model)";
        }
    }
    if (!missing.empty()) {
        throw ValidationError("image sets differ; missing: " + missing);
    }
    if (model_scores.empty()) {
        throw std::invalid_argument("error metrics need at least one image");
    }
    double se = 0.0;
    double ae = 0.0;
    for (const auto& [id, m] : model_scores) {
        const double d = m - reference_scores.at(id);
        se += d * d;
        ae += std::abs(d);
    }
    const auto n = static_cast<double>(model_scores.size());
    return {se / n, ae / n};
}

bool ScoreReport::has_human() const {
    for (const auto& [_, kind] : sources) {
        if (kind == SourceKind::human) {
            return true;
        }
    }
    return false;
}

bool ScoreReport::has_model() const {
    for (const auto& [_, kind] : sources) {
        if (kind == SourceKind::model) {
            return true;
        }
    }
    return false;
}

std::size_t ScoreReport::failed_pairs() const {
    std::size_t n = 0;
    for (const auto& s : samples) {
        n += s.score ? 0 : 1;
    }
    return n;
}

ScoreReport score_sources(std::span<const AnnotationSet> sets, const ScoreOptions& options) {
    if (options.quota <= 0) {
        throw std::invalid_argument("quota must be positive");
    }
    ScoreReport report;

    std::map<std::string, ImageRecord> images;
    std::set<std::string> source_ids;
    for (const auto& set : sets) {
        if (!source_ids.insert(set.source_id).second) {
            throw ValidationError("duplicate source_id \"" + set.source_id + "\"");
        }
        report.sources.emplace_back(set.source_id, set.source_kind);
        for (const auto& img : set.images) {
            const auto [it, inserted] = images.emplace(img.image.image_id, img.image);
            if (!inserted && (it->second.width_px != img.image.width_px ||
                              it->second.height_px != img.image.height_px)) {
                throw ValidationError("image \"" + img.image.image_id + "\" has dimensions " +
                                      std::to_string(img.image.width_px) + "x" +
                                      std::to_string(img.image.height_px) + " in source \"" + set.source_id +
                                      "\" but " + std::to_string(it->second.width_px) + "x" +
                                      std::to_string(it->second.height_px) + " elsewhere");
            }
        }
    }
    for (const auto& [id, _] : images) {
        report.image_ids.push_back(id);
    }

    for (const auto& set : sets) {
        for (const auto& img : set.images) {
            SampleRecord rec;
            rec.source_id = set.source_id;
            rec.source_kind = set.source_kind;
            rec.image_id = img.image.image_id;
            const auto sampled = sequential_sample(img.annotations, img.image, options.grid, options.quota);
            rec.n_sampled = sampled.sampled.size();
            rec.fields_used = sampled.fields_used;
            rec.exhausted = sampled.exhausted;
            try {
                rec.score = image_score(sampled, options.overflow_value);
                report.per_source_scores[{set.source_id, rec.image_id}] = *rec.score;
            } catch (const EmptySampleError& e) {
                rec.error = e.what();
            }
            report.samples.push_back(std::move(rec));
        }
    }

    for (const auto& image_id : report.image_ids) {
        std::vector<double> human;
        std::vector<double> model;
        for (const auto& [source_id, kind] : report.sources) {
            const auto it = report.per_source_scores.find({source_id, image_id});
            if (it == report.per_source_scores.end()) {
                continue;
            }
            (kind == SourceKind::human ? human : model).push_back(it->second);
        }
        if (!human.empty()) {
            report.expert_mean[image_id] = expert_panel_value(human, StdConvention::population).mean;
            if (options.std_convention == StdConvention::population || human.size() >= 2) {
                report.expert_std[image_id] = expert_panel_value(human, options.std_convention).std;
            }
        }
        if (!model.empty()) {
            report.ensemble_score[image_id] = ensemble_aggregate(model);
        }
    }

    if (report.has_human() && report.has_model()) {
        std::map<std::string, double> model_side;
        std::map<std::string, double> expert_side;
        for (const auto& image_id : report.image_ids) {
            const auto m = report.ensemble_score.find(image_id);
            const auto e = report.expert_mean.find(image_id);
            if (m != report.ensemble_score.end() && e != report.expert_mean.end()) {
                model_side[image_id] = m->second;
                expert_side[image_id] = e->second;
            } else {
                report.unpaired_images.push_back(image_id);
            }
        }
        if (!model_side.empty()) {
            report.errors = error_metrics(model_side, expert_side);
        }
    }
    return report;
}

namespace {

template <typename Map>
nlohmann::ordered_json optional_value(const Map& map, const typename Map::key_type& key) {
    const auto it = map.find(key);
    return it == map.end() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(it->second);
}

template <typename Map>
std::optional<double> lookup(const Map& map, const typename Map::key_type& key) {
    const auto it = map.find(key);
    return it == map.end() ? std::nullopt : std::optional<double>(it->second);
}

}  // namespace

nlohmann::ordered_json to_json(const ScoreReport& report) {
    nlohmann::ordered_json doc;
    auto sources = nlohmann::ordered_json::array();
    for (const auto& [id, kind] : report.sources) {
        sources.push_back({{"source_id", id}, {"source_kind", to_string(kind)}});
    }
    doc["sources"] = std::move(sources);

    auto images = nlohmann::ordered_json::array();
    for (const auto& image_id : report.image_ids) {
        nlohmann::ordered_json j;
        j["image_id"] = image_id;
        nlohmann::ordered_json scores = nlohmann::ordered_json::object();
        for (const auto& [source_id, _] : report.sources) {
            scores[source_id] = optional_value(report.per_source_scores, std::make_pair(source_id, image_id));
        }
        j["scores"] = std::move(scores);
        if (report.has_human()) {
            j["expert_mean"] = optional_value(report.expert_mean, image_id);
            j["expert_std"] = optional_value(report.expert_std, image_id);
        }
        if (report.has_model()) {
            j["ensemble_score"] = optional_value(report.ensemble_score, image_id);
        }
        images.push_back(std::move(j));
    }
    doc["images"] = std::move(images);

    auto samples = nlohmann::ordered_json::array();
    for (const auto& s : report.samples) {
        nlohmann::ordered_json j;
        j["source_id"] = s.source_id;
        j["image_id"] = s.image_id;
        j["n_sampled"] = s.n_sampled;
        j["fields_used"] = s.fields_used;
        j["exhausted"] = s.exhausted;
        if (s.score) {
            j["score"] = *s.score;
        } else {
            j["error"] = s.error;
        }
        samples.push_back(std::move(j));
    }
    doc["samples"] = std::move(samples);

    if (report.errors) {
        doc["error_metrics"] = {{"mse", report.errors->mse},
                                {"mae", report.errors->mae},
                                {"n_images", report.image_ids.size() - report.unpaired_images.size()},
                                {"unpaired_images", report.unpaired_images}};
    }
    return doc;
}

std::string to_csv(const ScoreReport& report) {
    std::vector<std::string> header{"image_id"};
    for (const auto& [source_id, _] : report.sources) {
        header.push_back(source_id);
    }
    if (report.has_human()) {
        header.emplace_back("expert_mean");
        header.emplace_back("expert_std");
    }
    if (report.has_model()) {
        header.emplace_back("ensemble_score");
    }
    std::string out = csv_row(header);
    for (const auto& image_id : report.image_ids) {
        std::vector<std::string> row{image_id};
        for (const auto& [source_id, _] : report.sources) {
            row.push_back(format_number(lookup(report.per_source_scores, {source_id, image_id})));
        }
        if (report.has_human()) {
            row.push_back(format_number(lookup(report.expert_mean, image_id)));
            row.push_back(format_number(lookup(report.expert_std, image_id)));
        }
        if (report.has_model()) {
            row.push_back(format_number(lookup(report.ensemble_score, image_id)));
        }
        out += csv_row(row);
    }
    if (report.errors) {
        out += csv_row({"mse", format_number(report.errors->mse)});
        out += csv_row({"mae", format_number(report.errors->mae)});
    }
    return out;
}

}  // namespace agnor
