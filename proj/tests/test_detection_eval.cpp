#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "agnor/detection_eval.hpp"

using namespace agnor;

namespace {

NucleusAnnotation det(double x, double y, int cls, double conf, double w = 10) {
    return {"img", {x, y, x + w, y + w}, AgnorClass(cls), conf, std::nullopt};
}

ConsensusNucleus gt(double x, double y, int cls, double w = 10) {
    return {"img", {x, y, x + w, y + w}, AgnorClass(cls), 2};
}

int total(const ClassMetrics& m, int BucketMetrics::*field) {
    int s = 0;
    for (const auto& b : m.buckets) {
        s += b.*field;
    }
    return s;
}

}  // namespace

TEST_CASE("class buckets") {
    CHECK(class_bucket(AgnorClass(3), 6) == 3);
    CHECK(class_bucket(AgnorClass(6), 6) == 6);
    CHECK(class_bucket(AgnorClass(11), 6) == 6);
    CHECK(class_bucket(AgnorClass(11), 11) == 11);
    const auto m = class_metrics(MatchResult{}, 6);
    REQUIRE(m.buckets.size() == 7);
    CHECK(m.buckets[0].label == "0");
    CHECK(m.buckets[6].label == ">=6");
    CHECK(class_metrics(MatchResult{}, 11).buckets.back().label == ">10");
}

TEST_CASE("detections equal to ground truth") {
    const std::vector<ConsensusNucleus> truth{gt(0, 0, 1), gt(20, 0, 2), gt(40, 0, 7), gt(60, 0, 11)};
    std::vector<NucleusAnnotation> dets;
    for (const auto& g : truth) {
        dets.push_back({"img", g.bbox, g.agnor_class, 0.9, std::nullopt});
    }
    const auto r = match(dets, truth);
    CHECK(r.matched_pairs.size() == 4);
    const auto m = class_metrics(r);
    for (const auto& b : m.buckets) {
        if (b.supported) {
            CHECK(b.precision == 1.0);
            CHECK(b.recall == 1.0);
            CHECK(b.f1 == 1.0);
        }
    }
    CHECK(m.buckets[6].tp == 2);
    CHECK_FALSE(m.buckets[0].supported);
}

TEST_CASE("zero detections") {
    const std::vector<ConsensusNucleus> truth{gt(0, 0, 1), gt(20, 0, 1)};
    const auto m = class_metrics(match({}, truth));
    CHECK(m.buckets[1].fn == 2);
    CHECK(m.buckets[1].tp == 0);
    CHECK(m.buckets[1].recall == 0.0);
    CHECK(m.buckets[1].precision == 0.0);
    CHECK(m.buckets[1].f1 == 0.0);
}

TEST_CASE("greedy order follows confidence") {
    // Shifts give IoU 0.8 and 0.6 against the single truth box.
    const std::vector<ConsensusNucleus> truth{gt(0, 0, 2)};
    const std::vector<NucleusAnnotation> dets{det(10.0 / 9.0, 0, 2, 0.9), det(2.5, 0, 2, 0.95)};
    REQUIRE(iou(dets[0].bbox, truth[0].bbox) == doctest::Approx(0.8));
    REQUIRE(iou(dets[1].bbox, truth[0].bbox) == doctest::Approx(0.6));
    const auto r = match(dets, truth);
    REQUIRE(r.matched_pairs.size() == 1);
    CHECK(r.matched_pairs[0].detection == 1);
    REQUIRE(r.unmatched_detections.size() == 1);
    CHECK(r.unmatched_detections[0].index == 0);
}

TEST_CASE("class-aware and class-agnostic matching") {
    const std::vector<ConsensusNucleus> truth{gt(0, 0, 8)};
    const std::vector<NucleusAnnotation> dets{det(0, 0, 7, 0.9)};

    SUBCASE("merged bucket counts as a true positive") {
        MatchOptions o;
        o.class_aware = false;
        const auto m = class_metrics(match(dets, truth, o));
        CHECK(m.buckets[6].tp == 1);
        CHECK(m.buckets[6].fp == 0);
    }
    SUBCASE("class-aware matching also uses buckets") {
        const auto m = class_metrics(match(dets, truth));
        CHECK(m.buckets[6].tp == 1);
    }
    SUBCASE("without merging the classes disagree") {
        MatchOptions o;
        o.class_aware = false;
        o.merge_from = 11;
        const auto m = class_metrics(match(dets, truth, o), 11);
        CHECK(m.buckets[7].fp == 1);
        CHECK(m.buckets[8].fn == 1);
        CHECK(total(m, &BucketMetrics::tp) == 0);
    }
    SUBCASE("class-aware refuses a cross-class match") {
        const std::vector<ConsensusNucleus> t{gt(0, 0, 2)};
        const std::vector<NucleusAnnotation> d{det(0, 0, 3, 0.9)};
        const auto r = match(d, t);
        CHECK(r.matched_pairs.empty());
        const auto m = class_metrics(r);
        CHECK(m.buckets[3].fp == 1);
        CHECK(m.buckets[2].fn == 1);
    }
}

TEST_CASE("detections without confidence are rejected") {
    const std::vector<ConsensusNucleus> truth{gt(0, 0, 1)};
    const std::vector<NucleusAnnotation> dets{{"img", {0, 0, 10, 10}, AgnorClass(1), std::nullopt, std::nullopt}};
    CHECK_THROWS_AS(match(dets, truth), ValidationError);
}

TEST_CASE("ensemble summary") {
    ClassMetrics a = class_metrics(MatchResult{});
    ClassMetrics b = a;
    a.buckets[1].supported = true;
    a.buckets[1].f1 = 0.5;
    b.buckets[1].supported = true;
    b.buckets[1].f1 = 1.0;
    b.buckets[2].supported = true;
    b.buckets[2].f1 = 0.25;
    const std::vector<ClassMetrics> models{a, b};
    const auto s = summarize_models(models);
    CHECK(*s.mean_f1[1] == 0.75);
    CHECK(*s.mean_f1[2] == 0.25);
    CHECK(s.supporting_models[2] == 1);
    CHECK_FALSE(s.mean_f1[0].has_value());
    CHECK(to_json(s)["buckets"][0]["mean_f1"].is_null());
}

namespace {

struct Scene {
    std::vector<ConsensusNucleus> truth;
    std::vector<NucleusAnnotation> dets;
};

Scene random_scene(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Scene s;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
        s.truth.push_back(gt((i % 8) * 25.0, (i / 8) * 25.0, static_cast<int>(rng() % 12), 15));
    }
    const int m = static_cast<int>(rng() % 50);
    for (int i = 0; i < m; ++i) {
        const int slot = static_cast<int>(rng() % 48);
        s.dets.push_back(det((slot % 8) * 25.0 + (u(rng) - 0.5) * 8, (slot / 8) * 25.0 + (u(rng) - 0.5) * 8,
                             static_cast<int>(rng() % 12), u(rng), 15));
    }
    return s;
}

}  // namespace

TEST_CASE("matching properties on random scenes") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_scene(rng);
        for (const bool aware : {true, false}) {
            MatchOptions o;
            o.class_aware = aware;
            const auto r = match(s.dets, s.truth, o);
            CHECK(r.matched_pairs.size() + r.unmatched_ground_truth.size() == s.truth.size());
            CHECK(r.matched_pairs.size() + r.unmatched_detections.size() == s.dets.size());
            const auto m = class_metrics(r);
            CHECK(total(m, &BucketMetrics::tp) + total(m, &BucketMetrics::fn) == static_cast<int>(s.truth.size()));
            CHECK(total(m, &BucketMetrics::tp) + total(m, &BucketMetrics::fp) == static_cast<int>(s.dets.size()));

            // A strictly monotone transform of confidence changes nothing.
            auto squashed = s.dets;
            for (auto& d : squashed) {
                d.confidence = 0.1 + 0.5 * *d.confidence * *d.confidence;
            }
            const auto r2 = match(squashed, s.truth, o);
            REQUIRE(r2.matched_pairs.size() == r.matched_pairs.size());
            for (std::size_t i = 0; i < r.matched_pairs.size(); ++i) {
                CHECK(r2.matched_pairs[i].detection == r.matched_pairs[i].detection);
                CHECK(r2.matched_pairs[i].ground_truth == r.matched_pairs[i].ground_truth);
            }
        }

        // Raising the threshold never adds matches when at most one truth box
        // can reach any detection.
        MatchOptions lo;
        lo.iou_threshold = 0.3;
        MatchOptions hi;
        hi.iou_threshold = 0.7;
        CHECK(match(s.dets, s.truth, hi).matched_pairs.size() <= match(s.dets, s.truth, lo).matched_pairs.size());
    }
}
