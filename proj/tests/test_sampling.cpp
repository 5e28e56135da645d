#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "agnor/sampling.hpp"
#include "sampling_properties.hpp"

using namespace agnor;

namespace {

const ImageRecord kImage{"img", 1569, 1177, std::nullopt, std::nullopt};

// A small box centred on (cx, cy).
NucleusAnnotation at(double cx, double cy, int cls = 1) {
    return {kImage.image_id, {cx - 2, cy - 2, cx + 2, cy + 2}, AgnorClass(cls), std::nullopt, std::nullopt};
}

// Center of field f (1-based, row-major 4x3), nudged by k so boxes differ.
NucleusAnnotation in_field(int f, int k) {
    const int col = (f - 1) % 4;
    const int row = (f - 1) / 4;
    const double cw = 1569.0 / 4;
    const double ch = 1177.0 / 3;
    return at(col * cw + 20 + (k % 30) * 10, row * ch + 20 + (k / 30) * 10);
}

}  // namespace

TEST_CASE("assign_field by box center") {
    const GridSpec grid;
    CHECK(assign_field(at(10, 10).bbox, kImage, grid) == 1);
    CHECK(assign_field(at(1560, 1170).bbox, kImage, grid) == 12);
    SUBCASE("interior grid line goes to the larger index") {
        CHECK(assign_field(at(1569.0 / 4, 10).bbox, kImage, grid) == 2);
        const ImageRecord even{"img", 1569, 1200, std::nullopt, std::nullopt};
        CHECK(assign_field(at(10, 400).bbox, even, grid) == 5);
        CHECK(assign_field(at(10, 399.5).bbox, even, grid) == 1);
    }
    SUBCASE("centers outside the image clamp") {
        const BoundingBox left{-30, 5, -2, 15};
        CHECK(assign_field(left, kImage, grid) == 1);
        const BoundingBox far{1560, 1170, 1600, 1200};
        CHECK(assign_field(far, kImage, grid) == 12);
    }
    SUBCASE("column-major numbering") {
        GridSpec cm;
        cm.numbering = Numbering::column_major;
        CHECK(assign_field(at(10, 10).bbox, kImage, cm) == 1);
        CHECK(assign_field(at(10, 500).bbox, kImage, cm) == 2);
        CHECK(assign_field(at(500, 10).bbox, kImage, cm) == 4);
        CHECK(assign_field(at(1560, 1170).bbox, kImage, cm) == 12);
    }
}

TEST_CASE("GridSpec parsing") {
    const auto g = GridSpec::parse("4x3");
    CHECK(g.cols == 4);
    CHECK(g.rows == 3);
    CHECK(g.is_standard());
    CHECK_FALSE(GridSpec::parse("2x2").is_standard());
    CHECK_THROWS_AS(GridSpec::parse("4by3"), ParseError);
    CHECK_THROWS_AS(GridSpec::parse("0x3"), ValidationError);
    CHECK(parse_numbering("column-major") == Numbering::column_major);
    CHECK_THROWS_AS(parse_numbering("diagonal"), ParseError);
}

TEST_CASE("sequential_sample worked examples") {
    const GridSpec grid;
    SUBCASE("30 nuclei in each of 12 fields") {
        std::vector<NucleusAnnotation> anns;
        for (int f = 1; f <= 12; ++f) {
            for (int k = 0; k < 30; ++k) {
                anns.push_back(in_field(f, k));
            }
        }
        const auto r = sequential_sample(anns, kImage, grid, 100);
        CHECK(r.fields_used == std::vector<int>{1, 2, 3, 4});
        CHECK(r.sampled.size() == 120);
        CHECK_FALSE(r.exhausted);
    }
    SUBCASE("quota met exactly in the first field") {
        std::vector<NucleusAnnotation> anns;
        for (int k = 0; k < 100; ++k) {
            anns.push_back(in_field(1, k));
        }
        const auto r = sequential_sample(anns, kImage, grid, 100);
        CHECK(r.fields_used == std::vector<int>{1});
        CHECK(r.sampled.size() == 100);
        CHECK_FALSE(r.exhausted);
    }
    SUBCASE("no nuclei") {
        const auto r = sequential_sample({}, kImage, grid, 100);
        CHECK(r.sampled.empty());
        CHECK(r.fields_used.size() == 12);
        CHECK(r.exhausted);
    }
    SUBCASE("quota reached in the last field is not exhausted") {
        std::vector<NucleusAnnotation> anns;
        for (int k = 0; k < 5; ++k) {
            anns.push_back(in_field(12, k));
        }
        const auto r = sequential_sample(anns, kImage, grid, 5);
        CHECK(r.fields_used.size() == 12);
        CHECK_FALSE(r.exhausted);
    }
    SUBCASE("annotations from another image are rejected") {
        auto a = in_field(1, 0);
        a.image_id = "other";
        std::vector<NucleusAnnotation> anns{a};
        CHECK_THROWS_AS(sequential_sample(anns, kImage, grid, 100), std::invalid_argument);
    }
}

TEST_CASE("sampled order is field order then input order") {
    std::vector<NucleusAnnotation> anns{in_field(2, 0), in_field(1, 0), in_field(2, 1), in_field(1, 1)};
    const auto r = sequential_sample(anns, kImage, GridSpec{}, 4);
    REQUIRE(r.sampled.size() == 4);
    CHECK(r.sampled[0] == anns[1]);
    CHECK(r.sampled[1] == anns[3]);
    CHECK(r.sampled[2] == anns[0]);
    CHECK(r.sampled[3] == anns[2]);
}


TEST_CASE("protocol invariants on random layouts") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto layout = agnor::testing::random_layout(rng);
        const auto problem = agnor::testing::check_sampling_invariants(layout, rng);
        CHECK_MESSAGE(problem.empty(), "trial " << trial << ": " << problem);
    }
}
