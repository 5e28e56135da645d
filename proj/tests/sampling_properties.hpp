#pragma once

// Shared property checks for the sequential sampling protocol, used by the unit
// tests and the acceptance suite.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "agnor/sampling.hpp"

namespace agnor::testing {

struct RandomLayout {
    ImageRecord image;
    GridSpec grid;
    int quota = 100;
    std::vector<NucleusAnnotation> annotations;
};

inline RandomLayout random_layout(std::mt19937_64& rng) {
    RandomLayout l;
    std::uniform_int_distribution<int> dim(50, 2000);
    l.image = {"img", dim(rng), dim(rng), std::nullopt, std::nullopt};
    std::uniform_int_distribution<int> side(1, 5);
    l.grid.cols = side(rng);
    l.grid.rows = side(rng);
    l.grid.numbering = rng() % 2 == 0 ? Numbering::row_major : Numbering::column_major;
    l.quota = std::uniform_int_distribution<int>(1, 150)(rng);
    const int n = std::uniform_int_distribution<int>(0, 300)(rng);
    // Clustered layouts so some fields are empty and some crowded.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double hot_x = u(rng) * l.image.width_px;
    const double hot_y = u(rng) * l.image.height_px;
    for (int i = 0; i < n; ++i) {
        double cx;
        double cy;
        if (u(rng) < 0.5) {
            cx = hot_x + (u(rng) - 0.5) * l.image.width_px * 0.3;
            cy = hot_y + (u(rng) - 0.5) * l.image.height_px * 0.3;
        } else {
            cx = u(rng) * l.image.width_px;
            cy = u(rng) * l.image.height_px;
        }
        const double half = 1.0 + u(rng) * 10.0;
        l.annotations.push_back({"img",
                                 {cx - half, cy - half, cx + half + i * 1e-6, cy + half},
                                 AgnorClass(static_cast<int>(rng() % 12)),
                                 std::nullopt,
                                 std::nullopt});
    }
    return l;
}

using BoxKey = std::tuple<double, double, double, double, int>;

inline std::multiset<BoxKey> as_set(const std::vector<NucleusAnnotation>& v) {
    std::multiset<BoxKey> s;
    for (const auto& a : v) {
        s.emplace(a.bbox.x_min, a.bbox.y_min, a.bbox.x_max, a.bbox.y_max, a.agnor_class.value());
    }
    return s;
}

/// Empty string when all protocol invariants hold, otherwise a description.
inline std::string check_sampling_invariants(const RandomLayout& l, std::mt19937_64& rng) {
    const auto r = sequential_sample(l.annotations, l.image, l.grid, l.quota);

    for (std::size_t i = 0; i < r.fields_used.size(); ++i) {
        if (r.fields_used[i] != static_cast<int>(i) + 1) {
            return "fields_used is not a prefix of the traversal order";
        }
    }
    if (r.fields_used.empty() || r.fields_used.size() > static_cast<std::size_t>(l.grid.field_count())) {
        return "fields_used has invalid length";
    }
    if (!r.exhausted && r.sampled.size() < static_cast<std::size_t>(l.quota)) {
        return "quota not met although not exhausted";
    }
    if (r.exhausted && (r.sampled.size() >= static_cast<std::size_t>(l.quota) ||
                        r.fields_used.size() != static_cast<std::size_t>(l.grid.field_count()))) {
        return "exhausted flag inconsistent";
    }
    // Stop rule: without the last consumed field the quota was not yet met.
    if (!r.exhausted) {
        const int last = r.fields_used.back();
        std::size_t before = 0;
        for (const auto& a : l.annotations) {
            before += assign_field(a.bbox, l.image, l.grid) < last ? 1 : 0;
        }
        if (before >= static_cast<std::size_t>(l.quota)) {
            return "kept consuming fields after the quota was reached";
        }
    }

    const std::set<int> used(r.fields_used.begin(), r.fields_used.end());
    std::vector<NucleusAnnotation> expected;
    for (const auto& a : l.annotations) {
        if (used.contains(assign_field(a.bbox, l.image, l.grid))) {
            expected.push_back(a);
        }
    }
    if (as_set(expected) != as_set(r.sampled)) {
        return "sampled set differs from the nuclei of the consumed fields";
    }

    auto shuffled = l.annotations;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto r2 = sequential_sample(shuffled, l.image, l.grid, l.quota);
    if (as_set(r2.sampled) != as_set(r.sampled) || r2.fields_used != r.fields_used ||
        r2.exhausted != r.exhausted) {
        return "result depends on input order";
    }
    return {};
}

}  // namespace agnor::testing
