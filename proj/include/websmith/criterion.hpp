#pragma once

// Differential criterion for maximal rank of T(x, y, x+y, x-y, u) and the
// classifier for u = v(x) + w(y).
//
// With X_1..X_p the vector fields killing the pencils and
//   X_1 ... X_p f(u) = sum_k a_k f^(k)(u),
// the web has maximal rank iff X_u(a_k / a_p) = 0 for all k, where
// X_u = u_y d/dx - u_x d/dy is tangent to the leaves of u.

#include <websmith/webs.hpp>

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace websmith {

/// Taylor series of a slope (v_x or w_y) at t.
using SlopeProvider = std::function<Series1(cplx, int)>;

SlopeProvider slope_of(const Univariate& f);

/// Vector fields killing the pencils x, y, x+y, x-y: d/dy, d/dx, d/dx - d/dy, d/dx + d/dy.
std::vector<Direction> t0_directions();

/// Default classifier samples: x_i = 0.31 + 0.05 i, y_i = 0.17 + 0.03 i, i < 12.
std::vector<Point> default_line_samples();

struct SystemCheck {
    bool passed = false;
    double residual = 0.0;
};

/// Max over samples of max_k |X_u b_k| / (|grad u| max_k(|b_k| + |grad b_k|)),
/// b_k = a_k / a_p; passes below 1e-7.
SystemCheck max_rank_system_check(const Foliation& u, std::span<const Direction> directions,
                                  const std::vector<Point>& samples);

struct Eq12Check {
    bool eq1 = false;
    bool eq2 = false;
    double residual1 = 0.0;
    double residual2 = 0.0;
};

/// E1 = (v_xx - w_yy) / (v_x^2 - w_y^2),
/// E2 = (w_y v_xxx - v_x w_yyy) / (v_x w_y (v_x^2 - w_y^2));
/// each flag is true iff X_u E vanishes (normalized, 1e-8) at every sample.
Eq12Check check_eq1_eq2(const SlopeProvider& vx, const SlopeProvider& wy, const std::vector<Point>& samples);

/// Fit diagnostics for (z')^2 = p z^4 + q z^2 + r.
struct QuarticFit {
    cplx p{}, q{}, r{};
    double residual = 0.0;
    bool p_zero = false, q_zero = false, r_zero = false;
};

/// Raised when the samples cannot determine (p, q, r) (z constant).
class ConstantSlope : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct SlopeSample {
    cplx z, dz, d2z;
};

/// Least squares on the stacked rows (z^4, z^2, 1) -> z'^2 and
/// (2z^3, z, 0) -> z''. Needs at least 6 samples.
QuarticFit fit_quartic_ode(const std::vector<SlopeSample>& samples);

enum class WebLabel { Algebraic, TypeA, TypeB, TypeC, TypeD, TypeE, EllipticFamily, NotMaxRank, Indeterminate };

std::string label_name(WebLabel label);

struct WebClass {
    WebLabel label = WebLabel::Indeterminate;
    std::string case_id;
    std::optional<cplx> modulus;  // EllipticFamily only
    std::optional<int> sign;      // for sign-resolved branches
    std::optional<QuarticFit> fit_v, fit_w;
    std::string note;
};

/// Decision tree over the cases 1, 2/3 and 4-a .. 4-e(k).
WebClass classify(const SlopeProvider& vx, const SlopeProvider& wy, const std::vector<Point>& samples);

nlohmann::json to_json(const WebClass& c);

/// l in {±k, ±1/k, ±(1-k)/(1+k), ±(1+k)/(1-k)} within 1e-10.
bool equivalence_moduli(cplx k, cplx l);
std::vector<cplx> equivalent_moduli(cplx k);

}  // namespace websmith
