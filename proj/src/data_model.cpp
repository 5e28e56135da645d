#include "agnor/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

namespace agnor {

bool BoundingBox::well_formed() const {
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min < x_max && y_min < y_max;
}

bool BoundingBox::intersects(const ImageRecord& image) const {
    return x_min < image.width_px && x_max > 0.0 && y_min < image.height_px && y_max > 0.0;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0.0 || iy <= 0.0) {
        return 0.0;
    }
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

AgnorClass::AgnorClass(int value) : value_(value) {
    if (value < kMin || value > kOverflow) {
        throw ValidationError("AgNOR class " + std::to_string(value) + " outside [0, 11]");
    }
}

AgnorClass AgnorClass::from_token(std::string_view token) {
    if (token == ">10") {
        return AgnorClass(kOverflow);
    }
    int v = -1;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (token.empty() || ec != std::errc() || ptr != end || v < 0 || v > 10) {
        throw ValidationError("unknown agnor_count token \"" + std::string(token) + "\"");
    }
    return AgnorClass(v);
}

std::string AgnorClass::token() const {
    return is_overflow() ? std::string(">10") : std::to_string(value_);
}

double class_value(AgnorClass c, double overflow_value) {
    if (!(overflow_value >= AgnorClass::kOverflow)) {
        throw std::invalid_argument("overflow_value must be >= 11");
    }
    return c.is_overflow() ? overflow_value : static_cast<double>(c.value());
}

std::string_view to_string(SourceKind kind) {
    return kind == SourceKind::model ? "model" : "human";
}

const ImageAnnotations* AnnotationSet::find(std::string_view image_id) const {
    for (const auto& img : images) {
        if (img.image.image_id == image_id) {
            return &img;
        }
    }
    return nullptr;
}

std::size_t AnnotationSet::annotation_count() const {
    std::size_t n = 0;
    for (const auto& img : images) {
        n += img.annotations.size();
    }
    return n;
}

namespace {

std::string where(const std::string& image_id, std::size_t index) {
    return "image \"" + image_id + "\" annotation " + std::to_string(index) + ": ";
}

}  // namespace

void validate(const AnnotationSet& set) {
    if (set.source_id.empty()) {
        throw ValidationError("source_id must be non-empty");
    }
    std::set<std::string> seen_ids;
    for (const auto& img : set.images) {
        const auto& rec = img.image;
        if (rec.image_id.empty()) {
            throw ValidationError("image_id must be non-empty");
        }
        if (!seen_ids.insert(rec.image_id).second) {
            throw ValidationError("duplicate image_id \"" + rec.image_id + "\"");
        }
        if (rec.width_px <= 0 || rec.height_px <= 0) {
            throw ValidationError("image \"" + rec.image_id + "\": width and height must be positive");
        }
        if (rec.microns_per_pixel && !(*rec.microns_per_pixel > 0.0)) {
            throw ValidationError("image \"" + rec.image_id + "\": microns_per_pixel must be positive");
        }

        std::set<std::tuple<double, double, double, double>> boxes;
        for (std::size_t i = 0; i < img.annotations.size(); ++i) {
            const auto& a = img.annotations[i];
            if (a.image_id != rec.image_id) {
                throw ValidationError(where(rec.image_id, i) + "attributed to image \"" + a.image_id + "\"");
            }
            const auto& b = a.bbox;
            if (!b.well_formed()) {
                throw ValidationError(where(rec.image_id, i) + "bbox requires x_min < x_max and y_min < y_max");
            }
            if (!b.intersects(rec)) {
                throw ValidationError(where(rec.image_id, i) + "bbox lies outside the image");
            }
            if (a.confidence) {
                if (!(*a.confidence >= 0.0 && *a.confidence <= 1.0)) {
                    throw ValidationError(where(rec.image_id, i) + "confidence outside [0, 1]");
                }
            } else if (set.source_kind == SourceKind::model) {
                throw ValidationError(where(rec.image_id, i) + "model annotations require a confidence");
            }
            if (a.support && *a.support < 1) {
                throw ValidationError(where(rec.image_id, i) + "support must be positive");
            }
            if (!boxes.emplace(b.x_min, b.y_min, b.x_max, b.y_max).second) {
                throw ValidationError(where(rec.image_id, i) + "exact duplicate bbox from the same source");
            }
        }
    }
}

}  // namespace agnor
