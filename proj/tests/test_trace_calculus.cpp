#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ivton/trace_calculus.hpp"
#include "oracles.hpp"

using namespace ivton;

TEST_CASE("compute_trace basics") {
    std::mt19937 rng(41);
    oracles::RandomMaps maps = oracles::random_partition_maps(rng, 32, 32);

    const BinaryMask none(maps.body.width, maps.body.height, false);
    CHECK(compute_trace(maps.body, none, MapKind::body_parts).labels.empty());

    const BinaryMask all(maps.body.width, maps.body.height, true);
    Trace full_body = compute_trace(maps.body, all, MapKind::body_parts);
    CHECK(full_body.labels ==
          oracles::trace_labels(maps.body, all, MapKind::body_parts));
    for (int id : full_body.labels) CHECK(id != 0);

    // Full cover on a clothing map: every non-background label with the
    // unclothed area included on explicit request only.
    Trace c_default = compute_trace(maps.clothing, all, MapKind::clothing);
    CHECK_FALSE(c_default.labels.count(clothing_label::unclothed));
    TraceOptions with_c0;
    with_c0.include_unclothed = true;
    Trace c_all = compute_trace(maps.clothing, all, MapKind::clothing, with_c0);
    CHECK(c_all.labels == oracles::trace_labels(maps.clothing, all, MapKind::clothing, true));
    if (area(mask_intersect(maps.figure, all)) > 0)
        CHECK(c_all.labels.count(clothing_label::unclothed));
}

TEST_CASE("compute_trace exact membership on a synthetic fixture") {
    LabelRaster r;
    r.width = 6;
    r.height = 2;
    r.labels = {0, 2, 2, 5, 5, 3, 0, 2, 2, 5, 5, 3};
    r.legend = {{0, "background"}, {2, "b"}, {3, "c"}, {5, "e"}};
    BinaryMask v(6, 2);
    v.set(1, 0, true); // touches 2
    v.set(3, 1, true); // touches 5
    Trace t = compute_trace(r, v, MapKind::body_parts);
    CHECK(t.labels == std::set<int>{2, 5});
    CHECK(t.labels == oracles::trace_labels(r, v, MapKind::body_parts));
}

TEST_CASE("compute_trace monotonicity and noise threshold") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 30; ++iter) {
        oracles::RandomMaps maps = oracles::random_partition_maps(rng, 48, 48);
        BinaryMask v1 = oracles::random_mask(rng, maps.body.width, maps.body.height);
        BinaryMask v2 = mask_union(v1, oracles::random_mask(rng, maps.body.width,
                                                            maps.body.height));
        Trace t1 = compute_trace(maps.body, v1, MapKind::body_parts);
        Trace t2 = compute_trace(maps.body, v2, MapKind::body_parts);
        for (int id : t1.labels) CHECK(t2.labels.count(id));
    }

    LabelRaster r;
    r.width = 4;
    r.height = 1;
    r.labels = {2, 2, 2, 3};
    r.legend = {{0, "background"}, {2, "b"}, {3, "c"}};
    BinaryMask v(4, 1, true);
    TraceOptions strict;
    strict.noise_threshold = 1; // needs > 1 px overlap
    CHECK(compute_trace(r, v, MapKind::body_parts, strict).labels == std::set<int>{2});

    BinaryMask wrong(5, 1);
    CHECK_THROWS_AS(compute_trace(r, wrong, MapKind::body_parts), ContractError);
}

TEST_CASE("optimal_mask") {
    std::mt19937 rng(43);
    oracles::RandomMaps maps = oracles::random_partition_maps(rng, 32, 32);
    const int w = maps.clothing.width, h = maps.clothing.height;

    CHECK(area(optimal_mask(maps.clothing, BinaryMask(w, h, false))) == 0);

    // v inside the unclothed area only -> exactly v.
    BinaryMask v_skin(w, h);
    bool found = false;
    for (int y = 0; y < h && !found; ++y)
        for (int x = 0; x < w && !found; ++x)
            if (maps.clothing.at(x, y) == clothing_label::unclothed) {
                v_skin.set(x, y, true);
                found = true;
            }
    if (found) CHECK(optimal_mask(maps.clothing, v_skin) == v_skin);

    for (int iter = 0; iter < 40; ++iter) {
        oracles::RandomMaps m = oracles::random_partition_maps(rng, 48, 48);
        BinaryMask v = oracles::random_mask(rng, m.clothing.width, m.clothing.height);
        BinaryMask ours = optimal_mask(m.clothing, v);
        CHECK(ours == oracles::optimal_mask(m.clothing, v));
        CHECK(is_subset(v, ours)); // containment
    }
}

TEST_CASE("optimal_mask covers a partially grazed segment fully") {
    LabelRaster cloth;
    cloth.width = 6;
    cloth.height = 1;
    cloth.labels = {0, 1, 2, 2, 2, 1};
    cloth.legend = {{0, "background"}, {1, "unclothed"}, {2, "shirt"}};
    cloth.categories[2] = ClothingCategory::upper_garment;
    BinaryMask v(6, 1);
    v.set(2, 0, true); // grazes one shirt pixel
    BinaryMask m = optimal_mask(cloth, v);
    CHECK(m.at(2, 0));
    CHECK(m.at(3, 0));
    CHECK(m.at(4, 0)); // whole shirt joins
    CHECK_FALSE(m.at(1, 0));
    CHECK(area(m) == 3);
}

TEST_CASE("estimated_mask") {
    std::mt19937 rng(44);
    for (int iter = 0; iter < 40; ++iter) {
        oracles::RandomMaps maps = oracles::random_partition_maps(rng, 48, 48);
        Trace b{MapKind::body_parts, {}};
        Trace c{MapKind::clothing, {}};
        for (const auto& [id, _] : maps.body.legend)
            if (id != 0 && rng() % 2) b.labels.insert(id);
        for (const auto& [id, _] : maps.clothing.legend)
            if (id >= clothing_label::first_segment && rng() % 2) c.labels.insert(id);
        BinaryMask ours = estimated_mask(maps.body, maps.clothing, b, c);
        CHECK(ours == oracles::estimated_mask(maps.body, maps.clothing, b.labels, c.labels));
        // superset of each constituent region
        for (int id : b.labels) CHECK(is_subset(region_of(maps.body, {id}), ours));
        for (int id : c.labels) CHECK(is_subset(region_of(maps.clothing, {id}), ours));
    }
}

TEST_CASE("estimated_mask kind and dimension errors") {
    std::mt19937 rng(45);
    oracles::RandomMaps maps = oracles::random_partition_maps(rng, 16, 16);
    Trace b{MapKind::body_parts, {}};
    Trace c{MapKind::clothing, {}};
    CHECK_THROWS_AS(estimated_mask(maps.body, maps.clothing, c, b), ContractError);
    Trace swapped_b{MapKind::clothing, {}};
    CHECK_THROWS_AS(estimated_mask(maps.body, maps.clothing, swapped_b, c), ContractError);

    Trace empty_b{MapKind::body_parts, {}};
    Trace empty_c{MapKind::clothing, {}};
    CHECK(area(estimated_mask(maps.body, maps.clothing, empty_b, empty_c)) == 0);
}

TEST_CASE("single-region estimated_mask") {
    std::mt19937 rng(46);
    oracles::RandomMaps maps = oracles::random_partition_maps(rng, 32, 32);
    // pick a body label present in the raster
    int label = -1;
    for (std::uint8_t l : maps.body.labels)
        if (l != 0) {
            label = l;
            break;
        }
    REQUIRE(label > 0);
    Trace b{MapKind::body_parts, {label}};
    Trace c{MapKind::clothing, {}};
    CHECK(estimated_mask(maps.body, maps.clothing, b, c) == region_of(maps.body, {label}));
}

TEST_CASE("mask_efficiency") {
    CHECK(mask_efficiency(BinaryMask(10, 10, true)).efficiency == 0.0);
    CHECK(mask_efficiency(BinaryMask(10, 10, false)).efficiency == 1.0);

    BinaryMask half(10, 10);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 10; ++x)
            half.set(x, y, true);
    MaskReport r = mask_efficiency(half);
    CHECK(r.mask_area == 50);
    CHECK(r.total_area == 100);
    CHECK(r.efficiency == 0.5);

    BinaryMask zero;
    CHECK_THROWS_AS(mask_efficiency(zero), ContractError);

    nlohmann::json j = r;
    CHECK(j["mask_area"] == 50);
    CHECK(j["total_area"] == 100);
    CHECK(j["efficiency"] == 0.5);
    MaskReport back = j.get<MaskReport>();
    CHECK(back.mask_area == r.mask_area);
    CHECK(back.efficiency == r.efficiency);
}

TEST_CASE("efficiency bounds and monotonicity") {
    std::mt19937 rng(47);
    for (int iter = 0; iter < 200; ++iter) {
        const int w = oracles::rnd(rng, 1, 32), h = oracles::rnd(rng, 1, 32);
        BinaryMask m2 = oracles::random_mask(rng, w, h);
        BinaryMask m1 = mask_intersect(m2, oracles::random_mask(rng, w, h)); // m1 subset m2
        const double e1 = mask_efficiency(m1).efficiency;
        const double e2 = mask_efficiency(m2).efficiency;
        CHECK(e1 >= 0.0);
        CHECK(e1 <= 1.0);
        CHECK(e1 >= e2);
    }
}
