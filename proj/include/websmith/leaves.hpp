#pragma once

// Leaf polylines of real foliations: level curves u = c traced by adaptive
// Runge-Kutta (Dormand-Prince 5(4)) in arc length along (u_y, -u_x)/|grad u|,
// with a Newton projection back onto u = c after every step.

#include <websmith/webs.hpp>

#include <array>
#include <string>
#include <vector>

namespace websmith {

struct Box {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    bool contains(double x, double y) const noexcept { return x >= xmin && x <= xmax && y >= ymin && y <= ymax; }
};

struct LeafOptions {
    Box box;
    double max_step = 0.02;   // arc-length cap per step (output spacing)
    double tolerance = 1e-10; // local error per step
    int max_points = 20000;   // per direction
};

struct Leaf {
    int foliation = 0;
    std::string name;
    double level = 0.0;
    std::vector<std::array<double, 2>> points;
    bool truncated = false;  // stopped at a singularity, the point cap, or no start
    std::string reason;      // "box", "closed", "singular", "no start", "cap"
};

/// Traces u = level through the box. A complete leaf either leaves the box at
/// both ends ("box") or closes up ("closed"); anything else flags the
/// polyline as truncated. Throws DomainError if u is not real on the real
/// plane.
Leaf trace_leaf(const Foliation& u, double level, const LeafOptions& options);

/// u(p) - level after projection, max over the polyline.
double leaf_residual(const Foliation& u, const Leaf& leaf);

}  // namespace websmith
