#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agnor/data_model.hpp"

namespace agnor {

enum class Numbering { row_major, column_major };

/// Partition of an image into cols x rows equally sized fields, numbered from 1
/// at the top-left.
struct GridSpec {
    int cols = 4;
    int rows = 3;
    Numbering numbering = Numbering::row_major;

    int field_count() const { return cols * rows; }
    /// The study protocol uses twelve fields.
    bool is_standard() const { return field_count() == 12; }

    /// Parses "COLSxROWS", e.g. "4x3".
    static GridSpec parse(std::string_view text, Numbering numbering = Numbering::row_major);
    std::string to_string() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

Numbering parse_numbering(std::string_view text);
std::string_view to_string(Numbering numbering);

/// 1-based field containing the box center. A center lying exactly on an
/// interior grid line goes to the field with the larger index along that axis;
/// centers outside the image clamp to the nearest field.
int assign_field(const BoundingBox& bbox, const ImageRecord& image, const GridSpec& grid);

/// Annotations whose center falls in `field`, in input order.
std::vector<NucleusAnnotation> annotations_in_field(std::span<const NucleusAnnotation> annotations,
                                                    const ImageRecord& image, const GridSpec& grid,
                                                    int field);

struct SamplingResult {
    std::vector<NucleusAnnotation> sampled;
    std::vector<int> fields_used;
    bool exhausted = false;
};

/// Consumes fields in numbering order, taking every nucleus of each consumed
/// field, and stops after the first field at which the running total reaches
/// `quota`. When the quota is never reached every field is consumed and the
/// result is marked exhausted. Output order is field order, then input order.
SamplingResult sequential_sample(std::span<const NucleusAnnotation> annotations, const ImageRecord& image,
                                 const GridSpec& grid, int quota = 100);

}  // namespace agnor
