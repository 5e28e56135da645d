#include "agnor/annotation_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace agnor {

using nlohmann::json;

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(ctx + "missing required key \"" + key + "\"");
    }
    return *it;
}

int require_int(const json& obj, const char* key, const std::string& ctx) {
    const auto& v = require(obj, key, ctx);
    if (!v.is_number_integer()) {
        throw ValidationError(ctx + "\"" + key + "\" must be an integer");
    }
    const auto wide = v.get<long long>();
    if (wide < INT32_MIN || wide > INT32_MAX) {
        throw ValidationError(ctx + "\"" + key + "\" out of range");
    }
    return static_cast<int>(wide);
}

AgnorClass parse_class(const json& v, const std::string& ctx) {
    try {
        if (v.is_string()) {
            return AgnorClass::from_token(v.get<std::string>());
        }
        if (v.is_number_integer()) {
            const auto wide = v.get<long long>();
            if (wide < AgnorClass::kMin || wide > AgnorClass::kOverflow) {
                throw ValidationError("class value " + std::to_string(wide) + " outside [0, 11]");
            }
            return AgnorClass(static_cast<int>(wide));
        }
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + e.what());
    }
    throw ValidationError(ctx + "agnor_count must be an integer or \">10\"");
}

NucleusAnnotation parse_annotation(const json& a, const std::string& image_id, const std::string& ctx) {
    if (!a.is_object()) {
        throw ValidationError(ctx + "annotation must be an object");
    }
    for (const auto& [key, _] : a.items()) {
        if (key != "bbox" && key != "agnor_count" && key != "confidence" && key != "support") {
            throw ValidationError(ctx + "unknown key \"" + key + "\"");
        }
    }
    NucleusAnnotation out;
    out.image_id = image_id;

    const auto& bbox = require(a, "bbox", ctx);
    if (!bbox.is_array() || bbox.size() != 4) {
        throw ValidationError(ctx + "bbox must be an array of four numbers");
    }
    double c[4];
    for (std::size_t i = 0; i < 4; ++i) {
        if (!bbox[i].is_number()) {
            throw ValidationError(ctx + "bbox must be an array of four numbers");
        }
        c[i] = bbox[i].get<double>();
    }
    out.bbox = {c[0], c[1], c[2], c[3]};
    out.agnor_class = parse_class(require(a, "agnor_count", ctx), ctx);

    if (const auto it = a.find("confidence"); it != a.end()) {
        if (!it->is_number()) {
            throw ValidationError(ctx + "confidence must be a number");
        }
        out.confidence = it->get<double>();
    }
    if (const auto it = a.find("support"); it != a.end()) {
        if (!it->is_number_integer()) {
            throw ValidationError(ctx + "support must be an integer");
        }
        out.support = it->get<int>();
    }
    return out;
}

}  // namespace

AnnotationSet parse_annotation_json(std::string_view text, std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                         e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("document root must be an object");
    }

    const auto& version = require(doc, "schema_version", "");
    if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion) {
        throw ValidationError("unsupported schema_version " + version.dump() + " (expected 1)");
    }

    for (const auto& [key, _] : doc.items()) {
        // "parameters" carries the flag echo of files written by this toolkit.
        if (key != "schema_version" && key != "source_id" && key != "source_kind" && key != "images" &&
            key != "parameters" && warnings != nullptr) {
            warnings->push_back("ignoring unknown top-level key \"" + key + "\"");
        }
    }

    AnnotationSet set;
    const auto& source_id = require(doc, "source_id", "");
    if (!source_id.is_string()) {
        throw ValidationError("source_id must be a string");
    }
    set.source_id = source_id.get<std::string>();

    const auto& kind = require(doc, "source_kind", "");
    if (kind == "human") {
        set.source_kind = SourceKind::human;
    } else if (kind == "model") {
        set.source_kind = SourceKind::model;
    } else {
        throw ValidationError("source_kind must be \"human\" or \"model\"");
    }

    const auto& images = require(doc, "images", "");
    if (!images.is_array()) {
        throw ValidationError("images must be an array");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& img = images[i];
        const std::string ictx = "images[" + std::to_string(i) + "]: ";
        if (!img.is_object()) {
            throw ValidationError(ictx + "image must be an object");
        }
        ImageAnnotations entry;
        const auto& id = require(img, "image_id", ictx);
        if (!id.is_string()) {
            throw ValidationError(ictx + "image_id must be a string");
        }
        entry.image.image_id = id.get<std::string>();
        entry.image.width_px = require_int(img, "width", ictx);
        entry.image.height_px = require_int(img, "height", ictx);
        for (const auto& [key, val] : img.items()) {
            if (key == "microns_per_pixel") {
                if (!val.is_number()) {
                    throw ValidationError(ictx + "microns_per_pixel must be a number");
                }
                entry.image.microns_per_pixel = val.get<double>();
            } else if (key == "case_id") {
                if (!val.is_string()) {
                    throw ValidationError(ictx + "case_id must be a string");
                }
                entry.image.case_id = val.get<std::string>();
            } else if (key != "image_id" && key != "width" && key != "height" && key != "annotations" &&
                       warnings != nullptr) {
                warnings->push_back(ictx + "ignoring unknown key \"" + key + "\"");
            }
        }

        const auto& anns = require(img, "annotations", ictx);
        if (!anns.is_array()) {
            throw ValidationError(ictx + "annotations must be an array");
        }
        entry.annotations.reserve(anns.size());
        for (std::size_t k = 0; k < anns.size(); ++k) {
            const std::string actx =
                "image \"" + entry.image.image_id + "\" annotation " + std::to_string(k) + ": ";
            entry.annotations.push_back(parse_annotation(anns[k], entry.image.image_id, actx));
        }
        set.images.push_back(std::move(entry));
    }

    validate(set);
    return set;
}

AnnotationSet load_annotation_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    return parse_annotation_json(read_text_file(path), warnings);
}

nlohmann::ordered_json to_json(const AnnotationSet& set) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["source_id"] = set.source_id;
    doc["source_kind"] = to_string(set.source_kind);
    auto images = nlohmann::ordered_json::array();
    for (const auto& img : set.images) {
        nlohmann::ordered_json j;
        j["image_id"] = img.image.image_id;
        j["width"] = img.image.width_px;
        j["height"] = img.image.height_px;
        if (img.image.microns_per_pixel) {
            j["microns_per_pixel"] = *img.image.microns_per_pixel;
        }
        if (img.image.case_id) {
            j["case_id"] = *img.image.case_id;
        }
        auto anns = nlohmann::ordered_json::array();
        for (const auto& a : img.annotations) {
            nlohmann::ordered_json aj;
            aj["bbox"] = {a.bbox.x_min, a.bbox.y_min, a.bbox.x_max, a.bbox.y_max};
            if (a.agnor_class.is_overflow()) {
                aj["agnor_count"] = a.agnor_class.token();
            } else {
                aj["agnor_count"] = a.agnor_class.value();
            }
            if (a.confidence) {
                aj["confidence"] = *a.confidence;
            }
            if (a.support) {
                aj["support"] = *a.support;
            }
            anns.push_back(std::move(aj));
        }
        j["annotations"] = std::move(anns);
        images.push_back(std::move(j));
    }
    doc["images"] = std::move(images);
    return doc;
}

std::string serialize_annotation_set(const AnnotationSet& set) {
    return to_json(set).dump(2) + "\n";
}

void write_annotation_file(const AnnotationSet& set, const std::filesystem::path& path) {
    write_text_file(path, serialize_annotation_set(set));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace agnor
