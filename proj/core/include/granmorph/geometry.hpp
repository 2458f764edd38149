#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace granmorph {

// Image coordinate frame: pixel (i,j) covers [i,i+1)x[j,j+1), its center is
// (i+0.5, j+0.5), y grows downward. Signed areas are plain shoelace values in
// this frame; "CCW" below always means positive shoelace.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Sign-exact orientation test: >0 iff c lies to the left of a->b (positive
// shoelace triangle a,b,c). Filtered double evaluation with an exact rational
// fallback when the static error bound cannot certify the sign.
double orient2d(Vec2 a, Vec2 b, Vec2 c);

// Sign-exact in-circle test for a CCW triangle a,b,c: >0 iff d lies strictly
// inside the circumcircle, 0 iff cocircular.
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

double polygon_signed_area(std::span<const Vec2> pts);

// Winding number of a closed polygon around p; p must not lie on the boundary
// for the result to be meaningful.
int winding_number(std::span<const Vec2> pts, Vec2 p);

// Strictly-inside test via winding number (points on the boundary count as
// outside).
bool point_strictly_inside(std::span<const Vec2> pts, Vec2 p);

// Inside-or-on-boundary test.
bool point_inside_or_on(std::span<const Vec2> pts, Vec2 p);

inline Vec2 midpoint(Vec2 a, Vec2 b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

inline double triangle_area(Vec2 a, Vec2 b, Vec2 c) {
    return cross(b - a, c - a) / 2;
}

inline Vec2 triangle_centroid(Vec2 a, Vec2 b, Vec2 c) {
    return {(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3};
}

}  // namespace granmorph
