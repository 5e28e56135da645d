#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agnor {

/// Malformed input syntax (JSON, CSV, flag values).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is syntactically fine but violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A statistic is mathematically undefined for the given data.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too little usable data to compute a result.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ImageRecord {
    std::string image_id;
    int width_px = 0;
    int height_px = 0;
    std::optional<double> microns_per_pixel;
    std::optional<std::string> case_id;

    friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned box in pixel coordinates, origin top-left.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    Point center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }

    /// Positive extent on both axes, all coordinates finite.
    bool well_formed() const;
    /// Positive-area overlap with the [0,w]x[0,h] image rectangle.
    bool intersects(const ImageRecord& image) const;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Intersection over union; 0 for disjoint or degenerate boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Number of AgNORs in a nucleus. 0..10 are literal counts, 11 stands for ">10".
class AgnorClass {
public:
    static constexpr int kMin = 0;
    static constexpr int kOverflow = 11;
    static constexpr int kCount = 12;

    constexpr AgnorClass() = default;
    /// Throws ValidationError outside [0, 11].
    explicit AgnorClass(int value);

    constexpr int value() const { return value_; }
    constexpr bool is_overflow() const { return value_ == kOverflow; }

    /// Accepts "0".."10" and ">10".
    static AgnorClass from_token(std::string_view token);
    /// "0".."10" or ">10".
    std::string token() const;

    friend constexpr auto operator<=>(AgnorClass, AgnorClass) = default;

private:
    int value_ = 0;
};

/// Numeric value of a class for averaging. The ">10" class maps to overflow_value,
/// which must be at least 11.
double class_value(AgnorClass c, double overflow_value = 11.0);

struct NucleusAnnotation {
    std::string image_id;
    BoundingBox bbox;
    AgnorClass agnor_class;
    std::optional<double> confidence;
    // Only populated on consensus output: number of raters voting for agnor_class.
    std::optional<int> support;

    friend bool operator==(const NucleusAnnotation&, const NucleusAnnotation&) = default;
};

enum class SourceKind { human, model };

std::string_view to_string(SourceKind kind);

struct ImageAnnotations {
    ImageRecord image;
    std::vector<NucleusAnnotation> annotations;

    friend bool operator==(const ImageAnnotations&, const ImageAnnotations&) = default;
};

struct AnnotationSet {
    std::string source_id;
    SourceKind source_kind = SourceKind::human;
    std::vector<ImageAnnotations> images;

    const ImageAnnotations* find(std::string_view image_id) const;
    std::size_t annotation_count() const;

    friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

/// Checks every invariant of the set: positive image sizes, unique image ids,
/// well-formed boxes intersecting their image, annotations attributed to their
/// image, confidences in [0,1] and present for model sources, no exact
/// duplicate boxes within an image. Throws ValidationError naming the image and
/// annotation index.
void validate(const AnnotationSet& set);

}  // namespace agnor
