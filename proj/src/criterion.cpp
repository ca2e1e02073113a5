#include <websmith/criterion.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace websmith {

namespace {

double norm2(cplx a, cplx b) { return std::sqrt(std::norm(a) + std::norm(b)); }

// (X_u E)(p) normalized by |grad u| (|E| + |grad E|); zero for vanishing E.
double normalized_tangent(const Jet2& e, cplx ux, cplx uy) {
    const double size = std::abs(e.value()) + norm2(e.dx(), e.dy());
    if (size < 1e-13) return 0.0;
    return std::abs(uy * e.dx() - ux * e.dy()) / (norm2(ux, uy) * size);
}

Jet2 slope_jet_x(const SlopeProvider& f, Point p, int m) { return jet_compose(f(p.x, m), Jet2::variable_x(p, m)); }
Jet2 slope_jet_y(const SlopeProvider& f, Point p, int m) { return jet_compose(f(p.y, m), Jet2::variable_y(p, m)); }

void require_transverse(cplx vx, cplx wy) {
    const double n = norm2(vx, wy);
    if (!(std::abs(vx * wy * (vx * vx - wy * wy)) > 1e-9 * n * n * n * n))
        throw TransversalityError("v_x w_y (v_x^2 - w_y^2) vanishes at a sample");
}

}  // namespace

SlopeProvider slope_of(const Univariate& f) {
    return [f](cplx t, int order) { return f.series(t, order); };
}

std::vector<Direction> t0_directions() { return {{0.0, 1.0}, {1.0, 0.0}, {1.0, -1.0}, {1.0, 1.0}}; }

std::vector<Point> default_line_samples() {
    std::vector<Point> s;
    for (int i = 0; i < 12; ++i) s.push_back({0.31 + 0.05 * i, 0.17 + 0.03 * i});
    return s;
}

// ---------------------------------------------------------------------------
// General criterion
// ---------------------------------------------------------------------------

SystemCheck max_rank_system_check(const Foliation& u, std::span<const Direction> directions,
                                  const std::vector<Point>& samples) {
    if (samples.empty()) throw StructuralError("max_rank_system_check: no samples");
    const int p = static_cast<int>(directions.size());
    SystemCheck out;
    for (const Point& s : samples) {
        const Jet2 uj = u.jet(s, p + 2);
        const OperatorExpansion ex = operator_coefficients(uj, directions);
        const Jet2& ap = ex.coefficient(p);
        const double gu = norm2(uj.dx(), uj.dy());
        if (std::abs(ap.value()) <= 1e-9 * std::pow(gu, p))
            throw TransversalityError("leading coefficient a_p vanishes at a sample");
        double num = 0.0, size = 0.0;
        for (int k = 1; k < p; ++k) {
            const Jet2 b = ex.coefficient(k) / ap;
            num = std::max(num, std::abs(uj.dy() * b.dx() - uj.dx() * b.dy()));
            size = std::max(size, std::abs(b.value()) + norm2(b.dx(), b.dy()));
        }
        if (size < 1e-13) continue;
        out.residual = std::max(out.residual, num / (gu * size));
    }
    out.passed = out.residual < 1e-7;
    return out;
}

// ---------------------------------------------------------------------------
// Specialization to u = v(x) + w(y)
// ---------------------------------------------------------------------------

Eq12Check check_eq1_eq2(const SlopeProvider& vx, const SlopeProvider& wy, const std::vector<Point>& samples) {
    if (samples.empty()) throw StructuralError("check_eq1_eq2: no samples");
    Eq12Check out;
    constexpr int m = 5;
    for (const Point& s : samples) {
        const Jet2 a = slope_jet_x(vx, s, m), b = slope_jet_y(wy, s, m);
        require_transverse(a.value(), b.value());
        const Jet2 axx = partial_x(a), byy = partial_y(b);
        const Jet2 axxx = partial_x(axx), byyy = partial_y(byy);
        const int o = axxx.order();
        const Jet2 a3 = a.truncated(o), b3 = b.truncated(o);
        const Jet2 diff = a3 * a3 - b3 * b3;
        const Jet2 e1 = (axx.truncated(o) - byy.truncated(o)) / diff;
        const Jet2 e2 = (b3 * axxx - a3 * byyy) / (a3 * b3 * diff);
        out.residual1 = std::max(out.residual1, normalized_tangent(e1, a.value(), b.value()));
        out.residual2 = std::max(out.residual2, normalized_tangent(e2, a.value(), b.value()));
    }
    out.eq1 = out.residual1 < 1e-8;
    out.eq2 = out.residual2 < 1e-8;
    return out;
}

QuarticFit fit_quartic_ode(const std::vector<SlopeSample>& samples) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    if (n < 6) throw StructuralError("fit_quartic_ode: need at least 6 samples");
    Eigen::MatrixXcd a(2 * n, 3);
    Eigen::VectorXcd rhs(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const SlopeSample& s = samples[static_cast<std::size_t>(i)];
        const cplx z2 = s.z * s.z;
        a.row(i) << z2 * z2, z2, 1.0;
        rhs(i) = s.dz * s.dz;
        a.row(n + i) << 2.0 * z2 * s.z, s.z, 0.0;
        rhs(n + i) = s.d2z;
    }
    // Equilibrate rows so both row sets weigh alike.
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        const double w = std::max(a.row(i).norm(), std::abs(rhs(i)));
        if (w > 0.0) {
            a.row(i) /= w;
            rhs(i) /= w;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(2) < 1e-10 * sv(0)) throw ConstantSlope("fit_quartic_ode: samples do not determine (p, q, r)");
    const Eigen::VectorXcd c = svd.solve(rhs);

    QuarticFit fit;
    fit.p = c(0);
    fit.q = c(1);
    fit.r = c(2);
    double scale = 0.0, worst = 0.0, zmax = 0.0;
    for (const SlopeSample& s : samples) {
        const cplx z2 = s.z * s.z;
        scale = std::max(scale, std::norm(s.dz));
        zmax = std::max(zmax, std::abs(s.z));
        worst = std::max(worst, std::abs(s.dz * s.dz - (fit.p * z2 * z2 + fit.q * z2 + fit.r)));
    }
    fit.residual = scale > 0.0 ? worst / scale : worst;
    // A coefficient is degenerate when its monomial never matters at the
    // sample scale.
    const double ref = std::max({scale, std::abs(fit.p) * std::pow(zmax, 4), std::abs(fit.q) * zmax * zmax,
                                 std::abs(fit.r)});
    fit.p_zero = std::abs(fit.p) * std::pow(zmax, 4) < 1e-9 * ref;
    fit.q_zero = std::abs(fit.q) * zmax * zmax < 1e-9 * ref;
    fit.r_zero = std::abs(fit.r) < 1e-9 * ref;
    if (fit.p_zero) fit.p = 0.0;
    if (fit.q_zero) fit.q = 0.0;
    if (fit.r_zero) fit.r = 0.0;
    return fit;
}

std::string label_name(WebLabel label) {
    switch (label) {
    case WebLabel::Algebraic: return "Algebraic";
    case WebLabel::TypeA: return "TypeA";
    case WebLabel::TypeB: return "TypeB";
    case WebLabel::TypeC: return "TypeC";
    case WebLabel::TypeD: return "TypeD";
    case WebLabel::TypeE: return "TypeE";
    case WebLabel::EllipticFamily: return "EllipticFamily";
    case WebLabel::NotMaxRank: return "NotMaxRank";
    case WebLabel::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

namespace {

constexpr double kConstTol = 1e-9;
constexpr double kFitTol = 1e-8;
constexpr double kAgreeTol = 2e-8;

bool is_constant(const std::vector<SlopeSample>& s) {
    return std::all_of(s.begin(), s.end(), [](const SlopeSample& z) { return std::abs(z.dz) < kConstTol * (1.0 + std::abs(z.z)); });
}

std::vector<SlopeSample> sample_slope(const SlopeProvider& f, const std::vector<cplx>& ts) {
    std::vector<SlopeSample> out;
    for (const cplx t : ts) {
        const Series1 s = f(t, 2);
        out.push_back({s[0], s[1], 2.0 * s[2]});
    }
    return out;
}

// Case 2/3: z' = k (c^2 - z^2) with c the other (constant) slope.
bool fits_case2(const std::vector<SlopeSample>& s, cplx c) {
    cplx num = 0.0;
    double den = 0.0, scale = 0.0;
    for (const SlopeSample& z : s) {
        const cplx g = c * c - z.z * z.z;
        num += std::conj(g) * z.dz;
        den += std::norm(g);
        scale = std::max(scale, std::abs(z.dz));
    }
    if (den == 0.0 || scale == 0.0) return false;
    const cplx k = num / den;
    double worst = 0.0;
    for (const SlopeSample& z : s) worst = std::max(worst, std::abs(z.dz - k * (c * c - z.z * z.z)));
    return worst < kFitTol * scale;
}

// Ratio z' / G(z) averaged over samples: constant (up to sign) when
// (z')^2 = c G(z)^2, so its sign compares two slopes.
cplx normalized_slope(const std::vector<SlopeSample>& s, const std::function<cplx(cplx)>& g) {
    cplx acc = 0.0;
    for (const SlopeSample& z : s) acc += z.dz / g(z.z);
    return acc / static_cast<double>(s.size());
}

int sign_between(const std::vector<SlopeSample>& v, const std::vector<SlopeSample>& w,
                 const std::function<cplx(cplx)>& g) {
    const cplx ratio = normalized_slope(v, g) / normalized_slope(w, g);
    return ratio.real() >= 0.0 ? 1 : -1;
}

}  // namespace

WebClass classify(const SlopeProvider& vx, const SlopeProvider& wy, const std::vector<Point>& samples) {
    if (samples.size() < 6) throw StructuralError("classify: need at least 6 samples");
    std::vector<cplx> xs, ys;
    for (const Point& p : samples) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const auto v = sample_slope(vx, xs), w = sample_slope(wy, ys);

    WebClass out;
    const bool vc = is_constant(v), wc = is_constant(w);
    if (vc && wc) {
        // u is linear, so T[u] consists of pencils of lines whatever the constants.
        out.label = WebLabel::Algebraic;
        out.case_id = "1";
        out.note = "both slopes constant";
        try {
            require_transverse(v.front().z, w.front().z);
        } catch (const TransversalityError&) {
            out.note += "; u repeats a pencil of T0, so T[u] is degenerate";
        }
        return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) require_transverse(v[i].z, w[i].z);
    if (vc || wc) {
        out.case_id = vc ? "2" : "3";
        const cplx c = vc ? v.front().z : w.front().z;
        const bool ok = fits_case2(vc ? w : v, c);
        out.label = ok ? WebLabel::TypeC : WebLabel::NotMaxRank;
        out.note = ok ? "z' = k (c^2 - z^2)" : "non-constant slope fails z' = k (c^2 - z^2)";
        return out;
    }

    QuarticFit fv, fw;
    try {
        fv = fit_quartic_ode(v);
        fw = fit_quartic_ode(w);
    } catch (const ConstantSlope&) {
        out.label = WebLabel::Indeterminate;
        out.case_id = "4";
        out.note = "ill-conditioned quartic fit";
        return out;
    }
    out.fit_v = fv;
    out.fit_w = fw;
    out.case_id = "4";
    if (fv.residual > kFitTol || fw.residual > kFitTol) {
        out.label = WebLabel::NotMaxRank;
        out.note = "slope does not satisfy (z')^2 = p z^4 + q z^2 + r";
        return out;
    }
    const double size = std::max({std::abs(fv.p), std::abs(fv.q), std::abs(fv.r), std::abs(fw.p), std::abs(fw.q),
                                  std::abs(fw.r)});
    const double gap = std::max({std::abs(fv.p - fw.p), std::abs(fv.q - fw.q), std::abs(fv.r - fw.r)});
    if (gap > kAgreeTol * size) {
        out.label = WebLabel::NotMaxRank;
        out.note = "(p, q, r) differ between v_x and w_y";
        return out;
    }
    const bool p0 = fv.p_zero && fw.p_zero, q0 = fv.q_zero && fw.q_zero, r0 = fv.r_zero && fw.r_zero;
    const cplx p = 0.5 * (fv.p + fw.p), q = 0.5 * (fv.q + fw.q), r = 0.5 * (fv.r + fw.r);

    if (p0 && q0) {
        out.case_id = "4-a";
        out.sign = sign_between(v, w, [](cplx) { return cplx{1.0}; });
        out.label = *out.sign > 0 ? WebLabel::TypeE : WebLabel::TypeD;
        return out;
    }
    if (p0 && r0) {
        out.case_id = "4-b";
        out.label = WebLabel::TypeC;
        return out;
    }
    if (p0) {
        out.case_id = "4-c";
        out.label = WebLabel::TypeB;
        return out;
    }
    if (q0 && r0) {
        out.case_id = "4-d";
        out.sign = sign_between(v, w, [](cplx z) { return z * z; });
        out.label = *out.sign > 0 ? WebLabel::TypeD : WebLabel::Algebraic;
        return out;
    }
    if (r0) {
        out.case_id = "4-e(i)";
        out.label = WebLabel::TypeA;
        return out;
    }
    const cplx disc = q * q - 4.0 * p * r;
    if (std::abs(disc) < kAgreeTol * std::max(std::norm(q), std::abs(4.0 * p * r))) {
        const cplx alpha = -q / (2.0 * p);
        out.case_id = "4-e(j)";
        out.sign = sign_between(v, w, [alpha](cplx z) { return z * z - alpha; });
        out.label = *out.sign > 0 ? WebLabel::TypeB : WebLabel::TypeA;
        return out;
    }
    // (z')^2 = p (z^2 - alpha)(z^2 - beta); sn_k has alpha = 1, beta = 1/k^2.
    const cplx sq = std::sqrt(disc);
    cplx alpha = (-q + sq) / (2.0 * p), beta = (-q - sq) / (2.0 * p);
    if (std::abs(alpha) > std::abs(beta)) std::swap(alpha, beta);
    const cplx k = std::sqrt(alpha / beta);
    out.case_id = "4-e(k)";
    out.label = WebLabel::EllipticFamily;
    out.modulus = (1.0 - k) / (1.0 + k);
    out.note = "slope modulus k = " + format_complex(k);
    return out;
}

nlohmann::json to_json(const WebClass& c) {
    using nlohmann::json;
    json j;
    j["label"] = label_name(c.label);
    j["case_id"] = c.case_id;
    if (c.modulus) j["modulus"] = json::array({c.modulus->real(), c.modulus->imag()});
    if (c.sign) j["sign"] = *c.sign;
    auto fit = [](const QuarticFit& f) {
        return json{{"p", {f.p.real(), f.p.imag()}},
                    {"q", {f.q.real(), f.q.imag()}},
                    {"r", {f.r.real(), f.r.imag()}},
                    {"residual", f.residual},
                    {"p_zero", f.p_zero},
                    {"q_zero", f.q_zero},
                    {"r_zero", f.r_zero}};
    };
    if (c.fit_v) j["fit_v"] = fit(*c.fit_v);
    if (c.fit_w) j["fit_w"] = fit(*c.fit_w);
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

std::vector<cplx> equivalent_moduli(cplx k) {
    const cplx k2 = k * k;
    if (std::abs(k2) < 1e-14 || std::abs(k2 - 1.0) < 1e-14) throw DomainError("degenerate modulus: k^2 in {0, 1}");
    const cplx a = (1.0 - k) / (1.0 + k);
    return {k, -k, 1.0 / k, -1.0 / k, a, -a, 1.0 / a, -1.0 / a};
}

bool equivalence_moduli(cplx k, cplx l) {
    const cplx l2 = l * l;
    if (std::abs(l2) < 1e-14 || std::abs(l2 - 1.0) < 1e-14) throw DomainError("degenerate modulus: l^2 in {0, 1}");
    const auto values = equivalent_moduli(k);
    return std::any_of(values.begin(), values.end(), [l](cplx v) { return std::abs(v - l) < 1e-10; });
}

}  // namespace websmith
