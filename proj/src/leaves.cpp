#include <websmith/leaves.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace websmith {

namespace {

using Vec = std::array<double, 2>;

struct Local {
    double value, ux, uy;
};

// Value and gradient at a real point; nullopt at a singularity.
std::optional<Local> local(const Foliation& u, Vec p) {
    Jet2 j;
    try {
        j = u.jet({p[0], p[1]}, 1);
    } catch (const Error&) {
        return std::nullopt;
    }
    const cplx v = j.value(), gx = j.dx(), gy = j.dy();
    const double scale = std::abs(v) + std::abs(gx) + std::abs(gy);
    if (!std::isfinite(scale)) return std::nullopt;
    if (std::abs(v.imag()) + std::abs(gx.imag()) + std::abs(gy.imag()) > 1e-9 * (1.0 + scale))
        throw DomainError("trace_leaf: foliation is not real on the real plane");
    if (std::hypot(gx.real(), gy.real()) < 1e-12) return std::nullopt;
    return Local{v.real(), gx.real(), gy.real()};
}

std::optional<Vec> tangent(const Foliation& u, Vec p, double sign) {
    const auto l = local(u, p);
    if (!l) return std::nullopt;
    const double n = std::hypot(l->ux, l->uy);
    return Vec{sign * l->uy / n, -sign * l->ux / n};
}

// Newton along the gradient onto u = level.
std::optional<Vec> project(const Foliation& u, Vec p, double level, int iterations = 8) {
    for (int i = 0; i < iterations; ++i) {
        const auto l = local(u, p);
        if (!l) return std::nullopt;
        const double r = l->value - level, g2 = l->ux * l->ux + l->uy * l->uy;
        if (std::abs(r) <= 1e-15 * (1.0 + std::abs(level))) return p;
        p = {p[0] - r * l->ux / g2, p[1] - r * l->uy / g2};
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) return std::nullopt;
    }
    const auto l = local(u, p);
    if (!l || std::abs(l->value - level) > 1e-11 * (1.0 + std::abs(level))) return std::nullopt;
    return p;
}

// Dormand-Prince 5(4) tableau; the field is autonomous, so the nodes c_i are unused.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct StepResult {
    Vec next;
    double error;
};

std::optional<StepResult> dp_step(const Foliation& u, Vec p, double h, double sign) {
    auto f = [&](Vec q) { return tangent(u, q, sign); };
    auto add = [](Vec a, double s, Vec b) { return Vec{a[0] + s * b[0], a[1] + s * b[1]}; };
    const auto k1 = f(p);
    if (!k1) return std::nullopt;
    const auto k2 = f(add(p, h * a21, *k1));
    if (!k2) return std::nullopt;
    const auto k3 = f({p[0] + h * (a31 * (*k1)[0] + a32 * (*k2)[0]), p[1] + h * (a31 * (*k1)[1] + a32 * (*k2)[1])});
    if (!k3) return std::nullopt;
    Vec q4{}, q5{}, q6{};
    for (int i = 0; i < 2; ++i) q4[i] = p[i] + h * (a41 * (*k1)[i] + a42 * (*k2)[i] + a43 * (*k3)[i]);
    const auto k4 = f(q4);
    if (!k4) return std::nullopt;
    for (int i = 0; i < 2; ++i) q5[i] = p[i] + h * (a51 * (*k1)[i] + a52 * (*k2)[i] + a53 * (*k3)[i] + a54 * (*k4)[i]);
    const auto k5 = f(q5);
    if (!k5) return std::nullopt;
    for (int i = 0; i < 2; ++i)
        q6[i] = p[i] + h * (a61 * (*k1)[i] + a62 * (*k2)[i] + a63 * (*k3)[i] + a64 * (*k4)[i] + a65 * (*k5)[i]);
    const auto k6 = f(q6);
    if (!k6) return std::nullopt;
    Vec y{};
    for (int i = 0; i < 2; ++i)
        y[i] = p[i] + h * (b1 * (*k1)[i] + b3 * (*k3)[i] + b4 * (*k4)[i] + b5 * (*k5)[i] + b6 * (*k6)[i]);
    const auto k7 = f(y);
    if (!k7) return std::nullopt;
    double err = 0.0;
    for (int i = 0; i < 2; ++i)
        err = std::max(err, std::abs(h * (e1 * (*k1)[i] + e3 * (*k3)[i] + e4 * (*k4)[i] + e5 * (*k5)[i] + e6 * (*k6)[i] +
                                          e7 * (*k7)[i])));
    return StepResult{y, err};
}

struct HalfLeaf {
    std::vector<Vec> points;
    std::string reason;
};

HalfLeaf trace_direction(const Foliation& u, Vec start, double level, double sign, const LeafOptions& o) {
    HalfLeaf out;
    Vec p = start;
    double h = o.max_step, length = 0.0;
    for (int n = 0; n < o.max_points; ++n) {
        std::optional<StepResult> s;
        for (int tries = 0; tries < 40; ++tries) {
            s = dp_step(u, p, h, sign);
            if (s && s->error <= o.tolerance) break;
            h *= s ? std::clamp(0.9 * std::pow(o.tolerance / s->error, 0.2), 0.1, 0.5) : 0.25;
            s.reset();
            if (h < 1e-12) break;
        }
        // A collapsed step size means the leaf runs into a singular point.
        if (!s || h < 1e-7 * o.max_step) {
            out.reason = "singular";
            return out;
        }
        const auto q = project(u, s->next, level);
        if (!q) {
            out.reason = "singular";
            return out;
        }
        if (!o.box.contains((*q)[0], (*q)[1])) {
            out.reason = "box";
            return out;
        }
        const double moved = std::hypot((*q)[0] - p[0], (*q)[1] - p[1]);
        if (moved < 1e-7 * o.max_step) {
            out.reason = "singular";
            return out;
        }
        length += moved;
        out.points.push_back(*q);
        p = *q;
        if (length > 4.0 * o.max_step && std::hypot(p[0] - start[0], p[1] - start[1]) < 0.5 * o.max_step) {
            out.points.push_back(start);
            out.reason = "closed";
            return out;
        }
        const double grow = s->error > 0.0 ? 0.9 * std::pow(o.tolerance / s->error, 0.2) : 5.0;
        h = std::min(o.max_step, h * std::clamp(grow, 0.2, 5.0));
    }
    out.reason = "cap";
    return out;
}

}  // namespace

Leaf trace_leaf(const Foliation& u, double level, const LeafOptions& o) {
    Leaf leaf;
    leaf.name = u.name();
    leaf.level = level;
    const Box& b = o.box;
    const Vec center{0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)};

    // Start from the Newton-projected grid point nearest to the box center.
    std::optional<Vec> start;
    double best = INFINITY;
    constexpr int n = 9;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Vec seed{b.xmin + (b.xmax - b.xmin) * (i + 0.5) / n, b.ymin + (b.ymax - b.ymin) * (j + 0.5) / n};
            const auto q = project(u, seed, level, 30);
            if (!q || !b.contains((*q)[0], (*q)[1])) continue;
            const double d = std::hypot((*q)[0] - center[0], (*q)[1] - center[1]);
            if (d < best) {
                best = d;
                start = q;
            }
        }
    if (!start) {
        leaf.truncated = true;
        leaf.reason = "no start";
        return leaf;
    }

    const HalfLeaf fwd = trace_direction(u, *start, level, 1.0, o);
    const HalfLeaf back = fwd.reason == "closed" ? HalfLeaf{{}, "closed"} : trace_direction(u, *start, level, -1.0, o);
    leaf.points.assign(back.points.rbegin(), back.points.rend());
    leaf.points.push_back(*start);
    leaf.points.insert(leaf.points.end(), fwd.points.begin(), fwd.points.end());
    if (back.reason != "box") leaf.reason = back.reason;
    if (fwd.reason != "box") leaf.reason = fwd.reason;
    if (leaf.reason.empty()) leaf.reason = "box";
    leaf.truncated = leaf.reason != "box" && leaf.reason != "closed";
    return leaf;
}

double leaf_residual(const Foliation& u, const Leaf& leaf) {
    double worst = 0.0;
    for (const auto& p : leaf.points) worst = std::max(worst, std::abs(u.value({p[0], p[1]}) - leaf.level));
    return worst;
}

}  // namespace websmith
