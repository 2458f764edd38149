#include <sstream>

#include "doctest.h"
#include "granmorph/raster.hpp"
#include "helpers.hpp"

using namespace granmorph;

TEST_CASE("ascii and binary pgm round trip") {
    const GreyImage img = testutil::image_from(3, 2, {0, 128, 255, 7, 42, 200});
    std::stringstream buf;
    write_pgm(img, buf);
    const GreyImage back = read_greyscale(buf);
    REQUIRE(back.width() == 3);
    REQUIRE(back.height() == 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 3; ++x) CHECK(back.at(x, y) == img.at(x, y));
}

TEST_CASE("ascii pgm with comments and odd whitespace") {
    std::stringstream in("P2 # format\n# a comment line\n 2 1\n255\n 10\t20\n");
    const GreyImage img = read_greyscale(in);
    CHECK(img.at(0, 0) == 10);
    CHECK(img.at(1, 0) == 20);
}

TEST_CASE("wide maxval rescales linearly to 8 bits") {
    std::stringstream in("P2\n2 1\n1023\n0 1023\n");
    const GreyImage img = read_greyscale(in);
    CHECK(img.at(0, 0) == 0);
    CHECK(img.at(1, 0) == 255);
}

TEST_CASE("ppm collapses channels by average") {
    std::stringstream in("P3\n1 1\n255\n10 20 30\n");
    const GreyImage img = read_greyscale(in);
    CHECK(img.at(0, 0) == 20);
}

TEST_CASE("malformed image input throws") {
    std::stringstream junk("PX\n2 2\n255\n");
    CHECK_THROWS_AS((void)read_greyscale(junk), std::runtime_error);
    std::stringstream truncated("P2\n2 2\n255\n1 2 3");
    CHECK_THROWS_AS((void)read_greyscale(truncated), std::runtime_error);
}

TEST_CASE("grey histogram counts every pixel") {
    const GreyImage img = testutil::image_from(2, 2, {5, 5, 9, 250});
    const Histogram h = grey_histogram(img);
    CHECK(h.bins[5] == 2);
    CHECK(h.bins[9] == 1);
    CHECK(h.bins[250] == 1);
    std::stringstream out;
    write_histogram_csv(h, out);
    CHECK(out.str().substr(0, 11) == "grey,count\n");
}
