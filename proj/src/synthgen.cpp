#include "agnor/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace agnor {

namespace {

// Per-stream seeds are derived by hashing (seed, stream, image), so every
// image can be generated independently of the others.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t image) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ image);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t kTruthStream = 0x7472757468ULL;
constexpr std::uint64_t kRaterStream = 0x7261746572ULL;
constexpr std::uint64_t kModelStream = 0x6d6f64656cULL;

// mt19937_64's output sequence is fixed by the standard; the library
// distributions are not, so conversions are done here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }

    int categorical(const ClassWeights& weights) {
        double total = 0.0;
        for (double w : weights) {
            total += w;
        }
        const double target = uniform() * total;
        double cum = 0.0;
        int last_positive = 0;
        for (int c = 0; c < AgnorClass::kCount; ++c) {
            if (weights[c] <= 0.0) {
                continue;
            }
            last_positive = c;
            cum += weights[c];
            if (target < cum) {
                return c;
            }
        }
        return last_positive;
    }

private:
    std::mt19937_64 engine_;
};

double round_centi(double v) {
    return std::round(v * 100.0) / 100.0;
}

std::string image_name(int index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 3) {
        digits.insert(0, 3 - digits.size(), '0');
    }
    return "synth_" + digits;
}

bool overlaps(const BoundingBox& a, const BoundingBox& b) {
    return a.x_min < b.x_max && b.x_min < a.x_max && a.y_min < b.y_max && b.y_min < a.y_max;
}

ImageAnnotations place_image(const SynthConfig& cfg, int index) {
    Rng rng(derive_seed(cfg.seed, kTruthStream, static_cast<std::uint64_t>(index)));
    ImageAnnotations img;
    img.image = {image_name(index), cfg.image_width, cfg.image_height, std::nullopt, std::nullopt};

    // Buckets keyed by the cell of each box's top-left corner; cell size is the
    // largest box extent, so overlap candidates lie in neighbouring cells.
    const double cell = cfg.box_max;
    const auto cell_key = [](long cx, long cy) { return (static_cast<std::int64_t>(cx) << 32) ^ (cy & 0xffffffff); };
    std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;

    for (int n = 0; n < cfg.nuclei_per_image; ++n) {
        bool placed = false;
        for (int attempt = 0; attempt < cfg.max_placement_attempts && !placed; ++attempt) {
            const double w = rng.uniform(cfg.box_min, cfg.box_max);
            const double h = rng.uniform(cfg.box_min, cfg.box_max);
            const double x = rng.uniform(0.0, cfg.image_width - w);
            const double y = rng.uniform(0.0, cfg.image_height - h);
            const BoundingBox box{round_centi(x), round_centi(y), round_centi(x + w), round_centi(y + h)};

            bool clear = true;
            const long cx0 = static_cast<long>(std::floor((box.x_min - cell) / cell));
            const long cx1 = static_cast<long>(std::floor(box.x_max / cell));
            const long cy0 = static_cast<long>(std::floor((box.y_min - cell) / cell));
            const long cy1 = static_cast<long>(std::floor(box.y_max / cell));
            for (long cx = cx0; cx <= cx1 && clear; ++cx) {
                for (long cy = cy0; cy <= cy1 && clear; ++cy) {
                    const auto it = grid.find(cell_key(cx, cy));
                    if (it == grid.end()) {
                        continue;
                    }
                    for (auto idx : it->second) {
                        if (overlaps(box, img.annotations[idx].bbox)) {
                            clear = false;
                            break;
                        }
                    }
                }
            }
            if (!clear) {
                continue;
            }
            const auto key = cell_key(static_cast<long>(std::floor(box.x_min / cell)),
                                      static_cast<long>(std::floor(box.y_min / cell)));
            grid[key].push_back(img.annotations.size());
            img.annotations.push_back({img.image.image_id, box, AgnorClass(0), std::nullopt, std::nullopt});
            placed = true;
        }
        if (!placed) {
            throw ValidationError("could not place nucleus " + std::to_string(n) + " on " + img.image.image_id +
                                  " after " + std::to_string(cfg.max_placement_attempts) +
                                  " attempts; use fewer nuclei_per_image or smaller boxes");
        }
    }
    // Classes are drawn after placement so the class sequence does not depend
    // on how many placement attempts were rejected.
    for (auto& a : img.annotations) {
        a.agnor_class = AgnorClass(rng.categorical(cfg.class_distribution));
    }
    return img;
}

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
    if (const auto it = j.find(key); it != j.end()) {
        out = it->get<T>();
    }
}

}  // namespace

ConfusionMatrix identity_confusion() {
    ConfusionMatrix m{};
    for (int c = 0; c < AgnorClass::kCount; ++c) {
        m[c][c] = 1.0;
    }
    return m;
}

ConfusionMatrix downshift_confusion(int first_class, double probability) {
    if (first_class < 1 || first_class > AgnorClass::kOverflow) {
        throw std::invalid_argument("first_class must lie in [1, 11]");
    }
    check_unit(probability, "downshift probability");
    ConfusionMatrix m = identity_confusion();
    for (int c = first_class; c < AgnorClass::kCount; ++c) {
        m[c][c] = 1.0 - probability;
        m[c][c - 1] = probability;
    }
    return m;
}

void SynthConfig::validate() const {
    if (n_images < 0) {
        throw ValidationError("n_images must be non-negative");
    }
    if (image_width <= 0 || image_height <= 0) {
        throw ValidationError("image_size must be positive");
    }
    if (nuclei_per_image < 0) {
        throw ValidationError("nuclei_per_image must be non-negative");
    }
    double total = 0.0;
    for (double w : class_distribution) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ValidationError("class_distribution weights must be finite and non-negative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw ValidationError("class_distribution must have a positive sum");
    }
    if (!(box_min >= 1.0 && box_min <= box_max)) {
        throw ValidationError("nucleus_box_size must satisfy 1 <= min <= max");
    }
    if (box_max > image_width || box_max > image_height) {
        throw ValidationError("nucleus_box_size max exceeds the image");
    }
    check_unit(rater_noise, "rater_noise");
    check_unit(rater_miss_rate, "rater_miss_rate");
    check_unit(detector_miss_rate, "detector_miss_rate");
    for (int r = 0; r < AgnorClass::kCount; ++r) {
        double sum = 0.0;
        for (double p : detector_confusion[r]) {
            if (!(p >= 0.0)) {
                throw ValidationError("detector_confusion entries must be non-negative");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ValidationError("detector_confusion row " + std::to_string(r) + " sums to " + std::to_string(sum));
        }
    }
    if (!(jitter_px >= 0.0) || !(jitter_px < box_min / 2.0)) {
        throw ValidationError("jitter_px must lie in [0, box_min / 2)");
    }
    if (max_placement_attempts <= 0) {
        throw ValidationError("max_placement_attempts must be positive");
    }
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ValidationError("synth config must be a JSON object");
    }
    static const char* const known[] = {"seed",
                                        "n_images",
                                        "image_size",
                                        "nuclei_per_image",
                                        "class_distribution",
                                        "nucleus_box_size",
                                        "rater_noise",
                                        "rater_miss_rate",
                                        "detector_miss_rate",
                                        "detector_confusion",
                                        "jitter_px",
                                        "max_placement_attempts"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw ValidationError("unknown synth config key \"" + key + "\"");
        }
    }
    SynthConfig cfg;
    try {
        read_opt(j, "seed", cfg.seed);
        read_opt(j, "n_images", cfg.n_images);
        read_opt(j, "nuclei_per_image", cfg.nuclei_per_image);
        read_opt(j, "rater_noise", cfg.rater_noise);
        read_opt(j, "rater_miss_rate", cfg.rater_miss_rate);
        read_opt(j, "detector_miss_rate", cfg.detector_miss_rate);
        read_opt(j, "jitter_px", cfg.jitter_px);
        read_opt(j, "max_placement_attempts", cfg.max_placement_attempts);
        if (const auto it = j.find("image_size"); it != j.end()) {
            const auto v = it->get<std::array<int, 2>>();
            cfg.image_width = v[0];
            cfg.image_height = v[1];
        }
        if (const auto it = j.find("nucleus_box_size"); it != j.end()) {
            const auto v = it->get<std::array<double, 2>>();
            cfg.box_min = v[0];
            cfg.box_max = v[1];
        }
        read_opt(j, "class_distribution", cfg.class_distribution);
        read_opt(j, "detector_confusion", cfg.detector_confusion);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("synth config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::ordered_json SynthConfig::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["n_images"] = n_images;
    j["image_size"] = {image_width, image_height};
    j["nuclei_per_image"] = nuclei_per_image;
    j["class_distribution"] = class_distribution;
    j["nucleus_box_size"] = {box_min, box_max};
    j["rater_noise"] = rater_noise;
    j["rater_miss_rate"] = rater_miss_rate;
    j["detector_miss_rate"] = detector_miss_rate;
    j["detector_confusion"] = detector_confusion;
    j["jitter_px"] = jitter_px;
    j["max_placement_attempts"] = max_placement_attempts;
    return j;
}

AnnotationSet generate_ground_truth(const SynthConfig& cfg) {
    cfg.validate();
    AnnotationSet truth;
    truth.source_id = "truth";
    truth.source_kind = SourceKind::human;
    for (int i = 0; i < cfg.n_images; ++i) {
        truth.images.push_back(place_image(cfg, i));
    }
    return truth;
}

std::vector<AnnotationSet> simulate_raters(const AnnotationSet& truth, const SynthConfig& cfg, int n_raters) {
    cfg.validate();
    std::vector<AnnotationSet> raters;
    for (int r = 1; r <= n_raters; ++r) {
        AnnotationSet set;
        set.source_id = "rater_" + std::to_string(r);
        set.source_kind = SourceKind::human;
        for (std::size_t i = 0; i < truth.images.size(); ++i) {
            const auto& src = truth.images[i];
            Rng rng(derive_seed(cfg.seed, kRaterStream + static_cast<std::uint64_t>(r), i));
            ImageAnnotations img{src.image, {}};
            const double w = src.image.width_px;
            const double h = src.image.height_px;
            for (const auto& a : src.annotations) {
                const bool missed = rng.bernoulli(cfg.rater_miss_rate);
                double d[4];
                for (double& v : d) {
                    v = rng.uniform(-cfg.jitter_px, cfg.jitter_px);
                }
                const bool mislabel = rng.bernoulli(cfg.rater_noise);
                const int step = rng.bernoulli(0.5) ? 1 : -1;
                if (missed) {
                    continue;
                }
                NucleusAnnotation out = a;
                out.support.reset();
                out.confidence.reset();
                if (cfg.jitter_px > 0.0) {
                    out.bbox = {std::clamp(round_centi(a.bbox.x_min + d[0]), 0.0, w),
                                std::clamp(round_centi(a.bbox.y_min + d[1]), 0.0, h),
                                std::clamp(round_centi(a.bbox.x_max + d[2]), 0.0, w),
                                std::clamp(round_centi(a.bbox.y_max + d[3]), 0.0, h)};
                }
                if (mislabel) {
                    out.agnor_class = AgnorClass(std::clamp(a.agnor_class.value() + step, 0, AgnorClass::kOverflow));
                }
                img.annotations.push_back(std::move(out));
            }
            set.images.push_back(std::move(img));
        }
        raters.push_back(std::move(set));
    }
    return raters;
}

AnnotationSet simulate_detector(const AnnotationSet& truth, const SynthConfig& cfg, const std::string& model_id) {
    cfg.validate();
    AnnotationSet set;
    set.source_id = model_id;
    set.source_kind = SourceKind::model;
    const auto stream = kModelStream ^ fnv1a(model_id);
    for (std::size_t i = 0; i < truth.images.size(); ++i) {
        const auto& src = truth.images[i];
        Rng rng(derive_seed(cfg.seed, stream, i));
        ImageAnnotations img{src.image, {}};
        for (const auto& a : src.annotations) {
            const bool missed = rng.bernoulli(cfg.detector_miss_rate);
            const int label = rng.categorical(cfg.detector_confusion[a.agnor_class.value()]);
            const double confidence = 1.0 - 0.1 * rng.uniform();
            if (missed) {
                continue;
            }
            NucleusAnnotation out = a;
            out.support.reset();
            out.agnor_class = AgnorClass(label);
            out.confidence = confidence;
            img.annotations.push_back(std::move(out));
        }
        set.images.push_back(std::move(img));
    }
    return set;
}

nlohmann::ordered_json make_manifest(const SynthConfig& cfg, int n_raters, int n_models,
                                     const std::vector<std::string>& files) {
    nlohmann::ordered_json j;
    j["generator"] = "agnor-bench synth";
    j["seed"] = cfg.seed;
    j["config"] = cfg.to_json();
    j["n_raters"] = n_raters;
    j["n_models"] = n_models;
    j["files"] = files;
    return j;
}

}  // namespace agnor
