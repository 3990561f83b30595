#include "doctest.h"
#include "entroflow/lattice.hpp"

#include <cstdlib>
#include <set>

using namespace entroflow;

TEST_CASE("enumeration order is base-q little-endian in site order") {
    TorusGeometry g(1, {2}, 2);
    const auto configs = enumerate_configs(g);
    REQUIRE(configs.size() == 4);
    CHECK(configs[0].states == std::vector<int>{0, 0});
    CHECK(configs[1].states == std::vector<int>{1, 0});
    CHECK(configs[2].states == std::vector<int>{0, 1});
    CHECK(configs[3].states == std::vector<int>{1, 1});
}

TEST_CASE("single site, q = 3") {
    TorusGeometry g(1, {1}, 3);
    CHECK(enumerate_configs(g).size() == 3);
}

TEST_CASE("2x2 torus decode") {
    TorusGeometry g(2, {2, 2}, 2);
    const auto configs = enumerate_configs(g);
    REQUIRE(configs.size() == 16);
    CHECK(configs[5].states == std::vector<int>{1, 0, 1, 0});
    // decode oracle: repeated div/mod by q
    ConfigIndex idx = 5;
    for (int s = 0; s < 4; ++s) {
        CHECK(configs[5].states[static_cast<std::size_t>(s)] == static_cast<int>(idx % 2));
        idx /= 2;
    }
}

TEST_CASE("decode/encode bijection on several geometries") {
    for (const auto& g : {TorusGeometry(1, {5}, 2), TorusGeometry(2, {2, 3}, 2),
                          TorusGeometry(1, {3}, 3)}) {
        const ConfigIndex n = g.num_configs();
        for (ConfigIndex i = 0; i < n; ++i) CHECK(encode_config(decode_config(g, i)) == i);
    }
}

TEST_CASE("site indexing is row-major with axis 1 fastest") {
    TorusGeometry g(2, {3, 4}, 2);
    CHECK(g.site({1, 0}) == 1);
    CHECK(g.site({0, 1}) == 3);
    CHECK(g.site({2, 3}) == 11);
    for (std::int64_t s = 0; s < g.num_sites(); ++s) CHECK(g.site(g.coords(s)) == s);
}

TEST_CASE("translate identity, shift, periodicity") {
    TorusGeometry g(1, {4}, 2);
    SpinConfig cfg(g, {1, 0, 0, 0});
    CHECK(translate(cfg, {0}).states == cfg.states);
    CHECK(translate(cfg, {1}).states == std::vector<int>{0, 1, 0, 0});
    SpinConfig cur = cfg;
    for (int k = 0; k < 4; ++k) cur = translate(cur, {1});
    CHECK(cur.states == cfg.states);
}

TEST_CASE("translate composes additively") {
    TorusGeometry g(2, {3, 3}, 2);
    SpinConfig cfg = decode_config(g, 0b101100110);
    const auto a = translate(translate(cfg, {1, 2}), {2, 2});
    const auto b = translate(cfg, {3, 4});
    CHECK(a.states == b.states);
}

TEST_CASE("translation orbit size divides the volume") {
    TorusGeometry g(1, {6}, 2);
    const ConfigIndex n = g.num_configs();
    for (ConfigIndex i = 0; i < n; ++i) {
        const SpinConfig cfg = decode_config(g, i);
        std::set<ConfigIndex> orbit;
        for (int v = 0; v < 6; ++v) orbit.insert(encode_config(translate(cfg, {v})));
        CHECK(6 % orbit.size() == 0);
    }
}

TEST_CASE("patch") {
    TorusGeometry g(1, {3}, 2);
    SpinConfig cfg(g, {0, 0, 0});
    CHECK(patch(cfg, {}, {}).states == cfg.states);
    CHECK(patch(cfg, {0, 1, 2}, {1, 1, 0}).states == std::vector<int>{1, 1, 0});
    CHECK(patch(cfg, {1}, {1}).states == std::vector<int>{0, 1, 0});
    CHECK_THROWS_AS(patch(cfg, {1}, {2}), BadValue);
}

TEST_CASE("enumeration cap") {
    TorusGeometry g(1, {30}, 2);  // 30 bits > default 24
    CHECK_THROWS_AS(g.num_configs(), CapExceeded);
    TorusGeometry ok(1, {24}, 2);
    CHECK(ok.num_configs() == (ConfigIndex{1} << 24));
}

TEST_CASE("shape validation and wrap overlap") {
    CHECK_THROWS_AS(Shape(std::vector<std::vector<int>>{{1}}), BadValue);  // missing zero
    CHECK_THROWS_AS(Shape(std::vector<std::vector<int>>{{0}, {0}}), BadValue);  // duplicate
    Shape pair({{0}, {1}});
    TorusGeometry g1(1, {1}, 2);
    CHECK_THROWS_AS(pair.sites_at(g1, 0), RangeError);  // wraps onto itself
    TorusGeometry g4(1, {4}, 2);
    CHECK(pair.sites_at(g4, 3) == std::vector<std::int64_t>{3, 0});
}

TEST_CASE("local assignment round trip") {
    const std::vector<std::int64_t> region{2, 0, 5};
    TorusGeometry g(1, {6}, 3);
    for (ConfigIndex x = 0; x < 27; ++x) {
        const auto vals = local_assignment(3, 3, x);
        SpinConfig cfg = patch(SpinConfig::constant(g, 0), region, vals);
        CHECK(local_index(3, region, cfg.states) == x);
    }
}
