#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "agnor/data_model.hpp"
#include "json.hpp"

namespace agnor {

inline constexpr int kSchemaVersion = 1;

/// Parses an annotation/detection document (schema_version 1) and validates it.
///
/// Syntax errors raise ParseError carrying line and column. Structural or
/// invariant violations raise ValidationError. Unknown top-level keys are
/// tolerated and reported through `warnings` when given; unknown keys inside an
/// annotation are an error. `agnor_count` accepts an integer 0..10, the string
/// ">10", or the integer 11 as an alias for ">10".
AnnotationSet parse_annotation_json(std::string_view text,
                                    std::vector<std::string>* warnings = nullptr);

AnnotationSet load_annotation_file(const std::filesystem::path& path,
                                   std::vector<std::string>* warnings = nullptr);

nlohmann::ordered_json to_json(const AnnotationSet& set);

/// Serialized document text, two-space indented with a trailing newline.
std::string serialize_annotation_set(const AnnotationSet& set);

void write_annotation_file(const AnnotationSet& set, const std::filesystem::path& path);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Writes text verbatim, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace agnor
