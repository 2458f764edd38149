#include <cmath>
#include <sstream>

#include "doctest.h"
#include "granmorph/cat.hpp"
#include "granmorph/morphology.hpp"
#include "granmorph/tessellate.hpp"
#include "helpers.hpp"

using namespace granmorph;
using namespace testutil;

namespace {

GreyImage dumbbell_image(int left_grey, int right_grey) {
    // Two 8x8 squares joined by a 2-pixel-wide neck.
    const int W = 24, H = 12;
    std::vector<int> rows(std::size_t(W) * H, 0);
    auto set = [&](int x, int y, int g) { rows[std::size_t(y) * W + x] = g; };
    for (int y = 2; y < 10; ++y) {
        for (int x = 1; x < 9; ++x) set(x, y, left_grey);
        for (int x = 15; x < 23; ++x) set(x, y, right_grey);
    }
    for (int y = 5; y < 7; ++y)
        for (int x = 9; x < 15; ++x) set(x, y, (left_grey + right_grey) / 2);
    return image_from(W, H, rows);
}

ContourSet dumbbell_contours(const GreyImage& img) {
    return extract_contours(spectral_segment(img, {0, 100}), 0.25);
}

int outer_count(const ContourSet& cs) {
    int n = 0;
    for (const Contour& c : cs.contours)
        if (c.kind == Contour::Kind::outer) ++n;
    return n;
}

double total_area(const ContourSet& cs) {
    double a = 0;
    for (const Contour& c : cs.contours) a += signed_area(c);
    return a;
}

}  // namespace

TEST_CASE("triangle mean grey averages covered pixel centers") {
    const GreyImage img = image_from(4, 2, {100, 200, 0, 0, 100, 200, 0, 0});
    ContourSet cs;
    cs.width = 4;
    cs.height = 2;
    SUBCASE("one triangle covering centers with greys 100 and 200") {
        cs.contours.push_back(
            {{{0, 0}, {2, 0}, {1, 1.2}}, Contour::Kind::outer, -1});
        const GreyMesh gm = triangle_mean_grey(constrained_delaunay(cs), img);
        REQUIRE(gm.grey.size() == 1);
        CHECK(gm.grey[0] == doctest::Approx(150.0).epsilon(1e-12));
    }
    SUBCASE("uniform coverage reproduces the grey") {
        cs.contours.push_back(
            {{{1, 0}, {2, 0}, {1.5, 1.2}}, Contour::Kind::outer, -1});
        const GreyMesh gm = triangle_mean_grey(constrained_delaunay(cs), img);
        REQUIRE(gm.grey.size() == 1);
        CHECK(gm.grey[0] == doctest::Approx(200.0).epsilon(1e-12));
    }
    SUBCASE("sliver with no center inherits its centroid pixel grey") {
        cs.contours.clear();
        cs.contours.push_back(
            {{{1.1, 0.8}, {1.9, 0.8}, {1.5, 0.9}}, Contour::Kind::outer, -1});
        const GreyMesh gm = triangle_mean_grey(constrained_delaunay(cs), img);
        REQUIRE(gm.grey.size() == 1);
        CHECK(gm.grey[0] == 200);  // centroid falls in pixel (1, 0)
    }
}

TEST_CASE("fluctuation modes") {
    GreyMesh gm;
    gm.grey = {200, 195, 188};
    ChainComplex c;
    c.kind = ChainComplex::Kind::free_chain;
    c.triangles = {0, 1, 2};
    c.end_a = 0;
    c.end_b = 2;
    CHECK(torso_fluctuation(c, gm, FluctuationMode::range) == doctest::Approx(12));
    CHECK(torso_fluctuation(c, gm, FluctuationMode::max_step) == doctest::Approx(7));
    gm.grey = {200, 120};
    c.triangles = {0, 1};
    c.end_b = 1;
    CHECK(torso_fluctuation(c, gm, FluctuationMode::range) == doctest::Approx(80));
    // Single-triangle torso bounded by equal-grey junctions.
    gm.grey = {150, 150, 150};
    c.kind = ChainComplex::Kind::torso;
    c.triangles = {1};
    c.end_a = 0;
    c.end_b = 2;
    CHECK(torso_fluctuation(c, gm, FluctuationMode::range) == doctest::Approx(0));
}

TEST_CASE("grain separation splits the dumbbell on grey contrast") {
    SeparationConfig cfg;
    SUBCASE("contrast 80 separates") {
        const GreyImage img = dumbbell_image(200, 120);
        const ContourSet cs = dumbbell_contours(img);
        REQUIRE(outer_count(cs) == 1);
        const double before = total_area(cs);
        const ContourSet refined = separate_grains(cs, img, cfg);
        CHECK(outer_count(refined) == 2);
        CHECK(total_area(refined) == doctest::Approx(before).epsilon(1e-9));
        // Idempotence: a second run makes no further cuts.
        const ContourSet again = separate_grains(refined, img, cfg);
        CHECK(outer_count(again) == 2);
        std::stringstream a, b;
        write_contours(refined, a);
        write_contours(again, b);
        CHECK(a.str() == b.str());
    }
    SUBCASE("contrast 15 stays whole") {
        const GreyImage img = dumbbell_image(200, 185);
        const ContourSet cs = dumbbell_contours(img);
        const ContourSet refined = separate_grains(cs, img, cfg);
        CHECK(outer_count(refined) == 1);
    }
    SUBCASE("uniform grey is untouched") {
        const GreyImage img = dumbbell_image(200, 200);
        const ContourSet cs = dumbbell_contours(img);
        const ContourSet refined = separate_grains(cs, img, cfg);
        std::stringstream a, b;
        write_contours(cs, a);
        write_contours(refined, b);
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("particle classification uses the binder band") {
    const GreyImage img = image_from(8, 4, {
        200, 200, 200, 0, 0, 50, 50, 50,
        200, 200, 200, 0, 0, 50, 50, 50,
        200, 200, 200, 0, 0, 50, 50, 50,
        200, 200, 200, 0, 0, 50, 50, 50,
    });
    // Segment by nonzero so the dark blob survives to classification.
    const ContourSet cs = extract_contours(mask_from_grey(img), 0.25);
    REQUIRE(outer_count(cs) == 2);
    const TriMesh m = constrained_delaunay(cs);
    const auto classes = classify_particles(triangle_mean_grey(m, img), {0, 100});
    REQUIRE(classes.size() == 2);
    CHECK(classes[0] == ParticleClass::grain);
    CHECK(classes[1] == ParticleClass::binder);
}

TEST_CASE("hole removal respects particle class") {
    ContourSet cs;
    cs.width = cs.height = 16;
    cs.contours.push_back(
        {{{0, 0}, {8, 0}, {8, 8}, {0, 8}}, Contour::Kind::outer, -1});
    cs.contours.push_back(
        {{{3, 3}, {3, 5}, {5, 5}, {5, 3}}, Contour::Kind::hole, 0});
    cs.contours.push_back(
        {{{10, 10}, {14, 10}, {14, 14}, {10, 14}}, Contour::Kind::outer, -1});
    SUBCASE("grain loses its hole") {
        const ContourSet out =
            remove_holes(cs, {ParticleClass::grain, ParticleClass::grain});
        REQUIRE(out.contours.size() == 2);
        CHECK(out.contours[0].kind == Contour::Kind::outer);
        CHECK(out.contours[1].kind == Contour::Kind::outer);
    }
    SUBCASE("binder keeps its hole") {
        const ContourSet out =
            remove_holes(cs, {ParticleClass::binder, ParticleClass::grain});
        REQUIRE(out.contours.size() == 3);
        CHECK(out.contours[1].kind == Contour::Kind::hole);
        CHECK(out.contours[1].parent == 0);
    }
    SUBCASE("no holes is the identity") {
        ContourSet plain;
        plain.width = plain.height = 16;
        plain.contours.push_back(cs.contours[2]);
        const ContourSet out = remove_holes(plain, {ParticleClass::grain});
        CHECK(out.contours.size() == 1);
    }
}

TEST_CASE("unit square particle statistics") {
    ContourSet cs;
    cs.width = cs.height = 4;
    cs.contours.push_back(
        {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, Contour::Kind::outer, -1});
    const TriMesh m = constrained_delaunay(cs);
    const CatSkeleton skel = build_skeleton(m, classify_triangles(m));
    const CatSkeleton pruned = prune_skeleton(m, skel, 1.0);
    const auto stats =
        particle_statistics(m, pruned, cs, {ParticleClass::grain});
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats[0].centroid.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stats[0].centroid.y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stats[0].orientation == doctest::Approx(0.0));  // isotropic tie
    CHECK(stats[0].length >= stats[0].width);
    CHECK(stats[0].holes == 0);
}

TEST_CASE("4x1 rectangle statistics (frozen goldens)") {
    BinaryImage m = make_binary(4, 1, 1);
    GreyImage img(4, 1, 200);
    const ContourSet cs = extract_contours(m, 0.25);
    const TriMesh mesh = constrained_delaunay(cs);
    const CatSkeleton pruned =
        prune_skeleton(mesh, build_skeleton(mesh, classify_triangles(mesh)), 1.0);
    const auto stats =
        particle_statistics(mesh, pruned, cs, {ParticleClass::grain});
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].area == doctest::Approx(4.5 * 1.5).epsilon(1e-12));
    CHECK(stats[0].orientation == doctest::Approx(0.0).epsilon(0.5));
    CHECK(stats[0].length >= stats[0].width);
    // The native free chain is prune-exempt; its skeleton runs along the two
    // diagonal chords, so length and width are the frozen values below rather
    // than the rectangle's side lengths.
    CHECK(stats[0].length == doctest::Approx(std::hypot(4.5, 1.5)).epsilon(1e-9));
    CHECK(stats[0].width ==
          doctest::Approx(std::hypot(4.5, 1.5) / 2).epsilon(1e-9));
}

TEST_CASE("area equals refined contour shoelace area") {
    std::mt19937 rng(15);
    const ContourSet cs = extract_contours(random_mask(10, 10, 0.5, rng), 0.25);
    const TriMesh m = constrained_delaunay(cs);
    const CatSkeleton pruned =
        prune_skeleton(m, build_skeleton(m, classify_triangles(m)), 1.0);
    const auto stats = particle_statistics(
        m, pruned, cs, std::vector<ParticleClass>(std::size_t(m.blob_count),
                                                  ParticleClass::grain));
    std::vector<double> blob_area(std::size_t(m.blob_count), 0);
    int b = -1;
    for (const Contour& c : cs.contours) {
        if (c.kind == Contour::Kind::outer) ++b;
        blob_area[std::size_t(b)] += signed_area(c);
    }
    for (const auto& p : stats)
        CHECK(p.area ==
              doctest::Approx(blob_area[std::size_t(p.id)]).epsilon(1e-9));
}

TEST_CASE("statistics are identical across worker counts") {
    std::mt19937 rng(21);
    const ContourSet cs = extract_contours(random_mask(12, 12, 0.5, rng), 0.25);
    const TriMesh m = constrained_delaunay(cs);
    const CatSkeleton pruned =
        prune_skeleton(m, build_skeleton(m, classify_triangles(m)), 1.0);
    const std::vector<ParticleClass> classes(std::size_t(m.blob_count),
                                             ParticleClass::grain);
    const auto one = particle_statistics(m, pruned, cs, classes, 1);
    const auto four = particle_statistics(m, pruned, cs, classes, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].area == four[i].area);
        CHECK(one[i].length == four[i].length);
        CHECK(one[i].width == four[i].width);
        CHECK(one[i].orientation == four[i].orientation);
    }
}

TEST_CASE("scene statistics") {
    SUBCASE("one grain of area 75 in a 10x10 image") {
        ParticleStats p;
        p.cls = ParticleClass::grain;
        p.area = 75;
        const SceneStats s = scene_statistics({p}, 10, 10);
        CHECK(s.grain_count == 1);
        CHECK(s.binder_count == 0);
        CHECK(s.area_fraction == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("zero particles") {
        const SceneStats s = scene_statistics({}, 10, 10);
        CHECK(s.grain_count == 0);
        CHECK(s.area_fraction == 0);
        CHECK(s.bins.empty());
    }
    SUBCASE("counts per class and histogram binning") {
        ParticleStats g1, g2, b1;
        g1.cls = g2.cls = ParticleClass::grain;
        b1.cls = ParticleClass::binder;
        g1.area = 3.14159265358979 * 2.25 * 2.25;  // diameter 4.5
        g2.area = 3.14159265358979 * 2.25 * 2.25;
        b1.area = 100;
        const SceneStats s = scene_statistics({g1, g2, b1}, 100, 100, 1.0);
        CHECK(s.grain_count == 2);
        CHECK(s.binder_count == 1);
        REQUIRE(s.bins.size() == 5);
        CHECK(s.bins[4] == 2);
        CHECK(s.area_fraction == doctest::Approx((g1.area + g2.area) / 10000));
    }
}
