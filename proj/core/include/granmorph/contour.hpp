#pragma once

#include <iosfwd>
#include <vector>

#include "granmorph/geometry.hpp"
#include "granmorph/segmentation.hpp"

namespace granmorph {

// Closed, simple polyline at subpixel coordinates. Outer contours have
// positive shoelace area in the image frame, holes negative.
struct Contour {
    enum class Kind { outer, hole };

    std::vector<Vec2> points;
    Kind kind = Kind::outer;
    int parent = -1;  // enclosing outer contour index, holes only
};

struct ContourSet {
    std::vector<Contour> contours;
    int width = 0;   // source raster dimensions
    int height = 0;
};

// Boundary polygons of the union of axis-aligned squares of side 1+2*dilation
// centered on foreground pixel centers. Requires 0 < dilation < 0.5; the
// dilation is snapped to the nearest rational k/128 so all geometry lives on
// an exact sub-pixel lattice. Collinear boundary runs are merged, so contour
// vertices are exactly the corner points. Contours are ordered by their
// topmost-leftmost vertex, each outer followed by its holes.
ContourSet extract_contours(const BinaryImage& mask, double dilation = 0.25);

// Shoelace area; throws std::runtime_error for degenerate (<3 point) input.
double signed_area(const Contour& c);

// Line-based text format: one record per contour,
//   kind npoints x1 y1 x2 y2 ...
// with 6-decimal fixed-point coordinates.
void write_contours(const ContourSet& cs, std::ostream& out);
ContourSet read_contours(std::istream& in);

}  // namespace granmorph
