#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "agnor/annotation_io.hpp"
#include "agnor/synthgen.hpp"

using namespace agnor;

namespace {

SynthConfig small_config() {
    SynthConfig cfg;
    cfg.seed = 42;
    cfg.n_images = 3;
    cfg.nuclei_per_image = 120;
    return cfg;
}

double mean_class(const AnnotationSet& set) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& img : set.images) {
        for (const auto& a : img.annotations) {
            sum += class_value(a.agnor_class);
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("ground truth is deterministic and valid") {
    const auto cfg = small_config();
    const auto a = generate_ground_truth(cfg);
    const auto b = generate_ground_truth(cfg);
    CHECK(serialize_annotation_set(a) == serialize_annotation_set(b));
    CHECK_NOTHROW(validate(a));
    REQUIRE(a.images.size() == 3);
    CHECK(a.images[0].image.image_id == "synth_000");
    CHECK(a.images[0].image.width_px == 1569);
    for (const auto& img : a.images) {
        CHECK(img.annotations.size() == 120);
        for (std::size_t i = 0; i < img.annotations.size(); ++i) {
            const auto& box = img.annotations[i].bbox;
            CHECK(box.x_min >= 0.0);
            CHECK(box.y_min >= 0.0);
            CHECK(box.x_max <= 1569.0);
            CHECK(box.y_max <= 1177.0);
            CHECK(box.width() >= 20.0 - 0.01);
            CHECK(box.width() <= 40.0 + 0.01);
            for (std::size_t j = 0; j < i; ++j) {
                CHECK(iou(box, img.annotations[j].bbox) == 0.0);
            }
        }
    }

    auto other = cfg;
    other.seed = 43;
    CHECK(serialize_annotation_set(generate_ground_truth(other)) != serialize_annotation_set(a));

    // Adding images does not disturb earlier ones.
    auto more = cfg;
    more.n_images = 4;
    CHECK(generate_ground_truth(more).images[1] == a.images[1]);
}

TEST_CASE("class distribution follows the reference table") {
    SynthConfig cfg;
    cfg.seed = 7;
    cfg.n_images = 50;
    cfg.nuclei_per_image = 1000;
    cfg.image_width = 4000;
    cfg.image_height = 4000;
    const auto truth = generate_ground_truth(cfg);

    std::array<double, 12> observed{};
    std::size_t n = 0;
    for (const auto& img : truth.images) {
        for (const auto& a : img.annotations) {
            observed[a.agnor_class.value()] += 1;
            ++n;
        }
    }
    REQUIRE(n == 50000);
    CHECK(std::abs(mean_class(truth) - 1.4456) < 0.05);

    const double table_total = std::accumulate(kReferenceClassCounts.begin(), kReferenceClassCounts.end(), 0.0);
    double chi2 = 0;
    for (int c = 0; c < 12; ++c) {
        const double expected = n * kReferenceClassCounts[c] / table_total;
        chi2 += (observed[c] - expected) * (observed[c] - expected) / expected;
    }
    // 99.9th percentile of chi-square with 11 degrees of freedom.
    CHECK(chi2 < 31.26);
}

TEST_CASE("noise-free raters and detectors reproduce the truth") {
    const auto cfg = small_config();
    const auto truth = generate_ground_truth(cfg);
    const auto raters = simulate_raters(truth, cfg, 3);
    REQUIRE(raters.size() == 3);
    CHECK(raters[2].source_id == "rater_3");
    for (const auto& r : raters) {
        CHECK(r.source_kind == SourceKind::human);
        CHECK(r.images == truth.images);
    }

    const auto model = simulate_detector(truth, cfg, "model_1");
    CHECK(model.source_kind == SourceKind::model);
    CHECK_NOTHROW(validate(model));
    for (std::size_t i = 0; i < truth.images.size(); ++i) {
        REQUIRE(model.images[i].annotations.size() == truth.images[i].annotations.size());
        for (std::size_t k = 0; k < truth.images[i].annotations.size(); ++k) {
            const auto& m = model.images[i].annotations[k];
            CHECK(m.bbox == truth.images[i].annotations[k].bbox);
            CHECK(m.agnor_class == truth.images[i].annotations[k].agnor_class);
            REQUIRE(m.confidence.has_value());
            CHECK(*m.confidence > 0.9);
            CHECK(*m.confidence <= 1.0);
        }
    }
}

TEST_CASE("noise settings") {
    auto cfg = small_config();
    const auto truth = generate_ground_truth(cfg);

    SUBCASE("miss rate 1 leaves every image empty") {
        cfg.rater_miss_rate = 1.0;
        cfg.detector_miss_rate = 1.0;
        for (const auto& img : simulate_raters(truth, cfg, 2)[0].images) {
            CHECK(img.annotations.empty());
        }
        for (const auto& img : simulate_detector(truth, cfg, "m").images) {
            CHECK(img.annotations.empty());
        }
    }
    SUBCASE("rater noise moves labels by one class at most") {
        cfg.rater_noise = 0.5;
        cfg.jitter_px = 3.0;
        const auto r = simulate_raters(truth, cfg, 1)[0];
        CHECK_NOTHROW(validate(r));
        int changed = 0;
        for (std::size_t i = 0; i < truth.images.size(); ++i) {
            for (std::size_t k = 0; k < truth.images[i].annotations.size(); ++k) {
                const int d = r.images[i].annotations[k].agnor_class.value() -
                              truth.images[i].annotations[k].agnor_class.value();
                CHECK(std::abs(d) <= 1);
                changed += d != 0 ? 1 : 0;
            }
        }
        CHECK(changed > 0);
    }
    SUBCASE("downshift lowers the mean class") {
        cfg.detector_confusion = downshift_confusion(1, 1.0);
        const auto m = simulate_detector(truth, cfg, "m");
        CHECK(mean_class(m) < mean_class(truth));
        for (std::size_t i = 0; i < truth.images.size(); ++i) {
            for (std::size_t k = 0; k < truth.images[i].annotations.size(); ++k) {
                const int t = truth.images[i].annotations[k].agnor_class.value();
                CHECK(m.images[i].annotations[k].agnor_class.value() == std::max(0, t - 1));
            }
        }
    }
}

TEST_CASE("confusion matrices") {
    const auto id = identity_confusion();
    CHECK(id[3][3] == 1.0);
    CHECK(id[3][2] == 0.0);
    const auto d = downshift_confusion(6, 0.25);
    CHECK(d[5][5] == 1.0);
    CHECK(d[6][5] == 0.25);
    CHECK(d[6][6] == 0.75);
    CHECK_THROWS_AS(downshift_confusion(0, 0.5), std::invalid_argument);
}

TEST_CASE("config validation and JSON") {
    SynthConfig cfg = small_config();
    cfg.image_width = 50;
    cfg.image_height = 50;
    cfg.box_min = 20;
    cfg.box_max = 20;
    cfg.nuclei_per_image = 100;
    CHECK_THROWS_AS(generate_ground_truth(cfg), ValidationError);

    SynthConfig bad;
    bad.rater_noise = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = SynthConfig{};
    bad.jitter_px = 10.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    auto round = small_config();
    round.detector_confusion = downshift_confusion(6, 0.3);
    const auto j = nlohmann::json::parse(round.to_json().dump());
    const auto back = SynthConfig::from_json(j);
    CHECK(back.to_json() == round.to_json());

    CHECK_THROWS_AS(SynthConfig::from_json(nlohmann::json{{"seeds", 1}}), ValidationError);
    CHECK_THROWS_AS(SynthConfig::from_json(nlohmann::json{{"image_size", "big"}}), ValidationError);
}

TEST_CASE("generated files round-trip through the annotation parser") {
    auto cfg = small_config();
    cfg.rater_noise = 0.2;
    cfg.jitter_px = 2.0;
    const auto truth = generate_ground_truth(cfg);
    const auto rater = simulate_raters(truth, cfg, 1)[0];
    CHECK(parse_annotation_json(serialize_annotation_set(rater)) == rater);
    const auto model = simulate_detector(truth, cfg, "model_1");
    CHECK(parse_annotation_json(serialize_annotation_set(model)) == model);
}
