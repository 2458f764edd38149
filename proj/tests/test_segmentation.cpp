#include <sstream>

#include "doctest.h"
#include "granmorph/segmentation.hpp"
#include "helpers.hpp"

using namespace granmorph;

TEST_CASE("spectral band sends binder greys to background") {
    const GreyImage img = testutil::image_from(5, 1, {0, 100, 101, 150, 255});
    const BinaryImage m = spectral_segment(img, {0, 100});
    CHECK(m.at(0, 0) == 0);    // band edge low
    CHECK(m.at(1, 0) == 0);    // band edge high, inclusive
    CHECK(m.at(2, 0) == 1);
    CHECK(m.at(3, 0) == 1);
    CHECK(m.at(4, 0) == 1);
}

TEST_CASE("pcnn on two flat regions yields exactly two pulse groups") {
    // 4x4, left half grey 50, right half grey 200, no linking.
    std::vector<int> rows(16);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) rows[std::size_t(y) * 4 + x] = x < 2 ? 50 : 200;
    const GreyImage img = testutil::image_from(4, 4, rows);
    PcnnParams p;
    p.linking_strength = 0;
    const PcnnTrace trace = pcnn_run(img, p);
    REQUIRE(trace.converged);
    const PulseGroups groups = pcnn_pulse_groups(trace);
    CHECK(groups.count == 2);
    // Brighter region pulses earlier.
    CHECK(trace.first_epoch[2] < trace.first_epoch[0]);

    const BinaryImage m = pcnn_segment(img, p, {0, 100});
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(int(m.at(x, y)) == (x < 2 ? 0 : 1));
}

TEST_CASE("pcnn smoothing is a fixpoint on constant images") {
    const GreyImage img = testutil::image_from(4, 3, std::vector<int>(12, 77));
    PcnnParams p;
    p.mode = PcnnParams::Mode::smooth;
    const GreyImage out = pcnn_smooth(img, p);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 4; ++x) CHECK(out.at(x, y) == 77);
}

TEST_CASE("pcnn smoothing removes an isolated impulse") {
    std::vector<int> rows(25, 0);
    rows[12] = 255;  // center of a 5x5 zero field
    const GreyImage img = testutil::image_from(5, 5, rows);
    PcnnParams p;
    p.mode = PcnnParams::Mode::smooth;
    const GreyImage out = pcnn_smooth(img, p);
    CHECK(out.at(2, 2) == 0);
}

TEST_CASE("pcnn smoothing preserves flat regions and is deterministic") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> grey(0, 255);
    std::vector<int> rows(64);
    for (auto& v : rows) v = grey(rng);
    const GreyImage img = testutil::image_from(8, 8, rows);
    PcnnParams p;
    p.mode = PcnnParams::Mode::smooth;
    const GreyImage a = pcnn_smooth(img, p);
    const GreyImage b = pcnn_smooth(img, p);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) CHECK(a.at(x, y) == b.at(x, y));
}

TEST_CASE("pcnn parameter validation") {
    PcnnParams p;
    p.linking_radius = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.feed_decay = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.max_iterations = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("mask round trip through pgm") {
    const BinaryImage m = testutil::mask_from(3, 1, {1, 0, 1});
    std::stringstream buf;
    write_mask_pgm(m, buf);
    const BinaryImage back = mask_from_grey(read_greyscale(buf));
    CHECK(back.at(0, 0) == 1);
    CHECK(back.at(1, 0) == 0);
    CHECK(back.at(2, 0) == 1);
}
