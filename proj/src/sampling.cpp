#include "agnor/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace agnor {

namespace {

// Index of the band containing `coord` when [0, extent) is cut into `bands`
// equal bands. Multiplying before dividing keeps exact grid lines exact.
int band_index(double coord, int extent, int bands) {
    const double scaled = std::floor(coord * bands / extent);
    if (!(scaled >= 0.0)) {
        return 0;
    }
    return static_cast<int>(std::min<double>(scaled, bands - 1));
}

}  // namespace

GridSpec GridSpec::parse(std::string_view text, Numbering numbering) {
    const auto sep = text.find_first_of("xX");
    GridSpec g;
    g.numbering = numbering;
    auto parse_int = [&](std::string_view s, int& out) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
    };
    if (sep == std::string_view::npos || !parse_int(text.substr(0, sep), g.cols) ||
        !parse_int(text.substr(sep + 1), g.rows)) {
        throw ParseError("grid must look like COLSxROWS, got \"" + std::string(text) + "\"");
    }
    if (g.cols <= 0 || g.rows <= 0) {
        throw ValidationError("grid dimensions must be positive");
    }
    return g;
}

std::string GridSpec::to_string() const {
    return std::to_string(cols) + "x" + std::to_string(rows);
}

Numbering parse_numbering(std::string_view text) {
    if (text == "row-major" || text == "row_major") {
        return Numbering::row_major;
    }
    if (text == "column-major" || text == "column_major") {
        return Numbering::column_major;
    }
    throw ParseError("numbering must be row-major or column-major, got \"" + std::string(text) + "\"");
}

std::string_view to_string(Numbering numbering) {
    return numbering == Numbering::row_major ? "row-major" : "column-major";
}

int assign_field(const BoundingBox& bbox, const ImageRecord& image, const GridSpec& grid) {
    const Point c = bbox.center();
    const int col = band_index(c.x, image.width_px, grid.cols);
    const int row = band_index(c.y, image.height_px, grid.rows);
    if (grid.numbering == Numbering::row_major) {
        return row * grid.cols + col + 1;
    }
    return col * grid.rows + row + 1;
}

std::vector<NucleusAnnotation> annotations_in_field(std::span<const NucleusAnnotation> annotations,
                                                    const ImageRecord& image, const GridSpec& grid,
                                                    int field) {
    std::vector<NucleusAnnotation> out;
    for (const auto& a : annotations) {
        if (assign_field(a.bbox, image, grid) == field) {
            out.push_back(a);
        }
    }
    return out;
}

SamplingResult sequential_sample(std::span<const NucleusAnnotation> annotations, const ImageRecord& image,
                                 const GridSpec& grid, int quota) {
    if (quota <= 0) {
        throw std::invalid_argument("quota must be positive");
    }
    if (grid.cols <= 0 || grid.rows <= 0) {
        throw std::invalid_argument("grid dimensions must be positive");
    }

    std::vector<std::vector<const NucleusAnnotation*>> by_field(grid.field_count());
    for (const auto& a : annotations) {
        if (a.image_id != image.image_id) {
            throw std::invalid_argument("annotation for image \"" + a.image_id + "\" passed while sampling \"" +
                                        image.image_id + "\"");
        }
        by_field[assign_field(a.bbox, image, grid) - 1].push_back(&a);
    }

    SamplingResult result;
    result.exhausted = true;
    for (int f = 1; f <= grid.field_count(); ++f) {
        result.fields_used.push_back(f);
        for (const auto* a : by_field[f - 1]) {
            result.sampled.push_back(*a);
        }
        if (result.sampled.size() >= static_cast<std::size_t>(quota)) {
            result.exhausted = false;
            break;
        }
    }
    return result;
}

}  // namespace agnor
