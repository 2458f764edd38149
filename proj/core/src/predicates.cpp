#include "granmorph/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace granmorph {
namespace {

using BigRational = boost::multiprecision::cpp_rational;

// Static filter constants after Shewchuk, "Adaptive Precision Floating-Point
// Arithmetic and Fast Robust Geometric Predicates".
constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kOrientErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleErrBound = (10.0 + 96.0 * kEps) * kEps;

BigRational exact(double v) { return BigRational(v); }

int sign_of(const BigRational& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

double orient2d_exact(Vec2 a, Vec2 b, Vec2 c) {
    BigRational det = (exact(a.x) - exact(c.x)) * (exact(b.y) - exact(c.y)) -
                      (exact(a.y) - exact(c.y)) * (exact(b.x) - exact(c.x));
    return static_cast<double>(sign_of(det));
}

double incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    BigRational adx = exact(a.x) - exact(d.x), ady = exact(a.y) - exact(d.y);
    BigRational bdx = exact(b.x) - exact(d.x), bdy = exact(b.y) - exact(d.y);
    BigRational cdx = exact(c.x) - exact(d.x), cdy = exact(c.y) - exact(d.y);
    BigRational alift = adx * adx + ady * ady;
    BigRational blift = bdx * bdx + bdy * bdy;
    BigRational clift = cdx * cdx + cdy * cdy;
    BigRational det = alift * (bdx * cdy - bdy * cdx) +
                      blift * (cdx * ady - cdy * adx) +
                      clift * (adx * bdy - ady * bdx);
    return static_cast<double>(sign_of(det));
}

}  // namespace

double orient2d(Vec2 a, Vec2 b, Vec2 c) {
    double detleft = (a.x - c.x) * (b.y - c.y);
    double detright = (a.y - c.y) * (b.x - c.x);
    double det = detleft - detright;

    double detsum;
    if (detleft > 0) {
        if (detright <= 0) return det;
        detsum = detleft + detright;
    } else if (detleft < 0) {
        if (detright >= 0) return det;
        detsum = -detleft - detright;
    } else {
        return det;
    }
    if (std::abs(det) >= kOrientErrBound * detsum) return det;
    return orient2d_exact(a, b, c);
}

double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double adx = a.x - d.x, ady = a.y - d.y;
    double bdx = b.x - d.x, bdy = b.y - d.y;
    double cdx = c.x - d.x, cdy = c.y - d.y;

    double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    double cdxady = cdx * ady, adxcdy = adx * cdy;
    double adxbdy = adx * bdy, bdxady = bdx * ady;
    double alift = adx * adx + ady * ady;
    double blift = bdx * bdx + bdy * bdy;
    double clift = cdx * cdx + cdy * cdy;

    double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                 clift * (adxbdy - bdxady);
    double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                       (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                       (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    if (std::abs(det) > kIncircleErrBound * permanent) return det;
    return incircle_exact(a, b, c, d);
}

double polygon_signed_area(std::span<const Vec2> pts) {
    double acc = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return acc / 2;
}

int winding_number(std::span<const Vec2> pts, Vec2 p) {
    int wn = 0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = pts[i];
        Vec2 b = pts[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && orient2d(a, b, p) > 0) ++wn;
        } else {
            if (b.y <= p.y && orient2d(a, b, p) < 0) --wn;
        }
    }
    return wn;
}

namespace {

bool point_on_boundary(std::span<const Vec2> pts, Vec2 p) {
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = pts[i];
        Vec2 b = pts[(i + 1) % n];
        if (orient2d(a, b, p) != 0) continue;
        if (p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
            p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y))
            return true;
    }
    return false;
}

}  // namespace

bool point_strictly_inside(std::span<const Vec2> pts, Vec2 p) {
    if (point_on_boundary(pts, p)) return false;
    return winding_number(pts, p) != 0;
}

bool point_inside_or_on(std::span<const Vec2> pts, Vec2 p) {
    if (point_on_boundary(pts, p)) return true;
    return winding_number(pts, p) != 0;
}

}  // namespace granmorph
