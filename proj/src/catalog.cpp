#include <websmith/catalog.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace websmith {

namespace {

using Values = std::vector<cplx>;
using Sides = std::pair<cplx, cplx>;

const double kSqrt2 = std::numbers::sqrt2;
const double kPi = std::numbers::pi;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Foliation named(const FormulaSpec& s, const std::string& name) { return Foliation::from_spec(s, name); }
Foliation pencil(cplx a, cplx b, const std::string& name) { return named({"linear", {a, b}, {}, {}}, name); }

std::vector<Foliation> t0_foliations() {
    return {pencil(1, 0, "x"), pencil(0, 1, "y"), pencil(1, 1, "x+y"), pencil(1, -1, "x-y")};
}

std::vector<Foliation> with_fifth(const FormulaSpec& u) {
    auto f = t0_foliations();
    f.push_back(named(u, "u"));
    return f;
}

KnownRelation additive(std::string name, std::string text, std::function<Sides(const Values&)> sides) {
    return {std::move(name), std::move(text), RelationForm::Additive, std::move(sides)};
}

KnownRelation multiplicative(std::string name, std::string text, std::function<Sides(const Values&)> sides) {
    return {std::move(name), std::move(text), RelationForm::Multiplicative, std::move(sides)};
}

cplx sq(cplx z) { return z * z; }

std::vector<KnownRelation> t0_relations() {
    return {
        additive("T0.1", "x + y = (x+y)", [](const Values& u) { return Sides{u[0] + u[1], u[2]}; }),
        additive("T0.2", "x - y = (x-y)", [](const Values& u) { return Sides{u[0] - u[1], u[3]}; }),
        additive("T0.3", "2x^2 + 2y^2 = (x+y)^2 + (x-y)^2",
                 [](const Values& u) { return Sides{2.0 * sq(u[0]) + 2.0 * sq(u[1]), sq(u[2]) + sq(u[3])}; }),
    };
}

std::vector<KnownRelation> relations_a() {
    return {
        multiplicative("A.1", "u = tanh x tanh y",
                       [](const Values& u) { return Sides{u[4], std::tanh(u[0]) * std::tanh(u[1])}; }),
        multiplicative("A.2", "(1 + u) cosh x cosh y = cosh(x+y)",
                       [](const Values& u) { return Sides{(1.0 + u[4]) * std::cosh(u[0]) * std::cosh(u[1]), std::cosh(u[2])}; }),
        multiplicative("A.3", "(1 - u) cosh x cosh y = cosh(x-y)",
                       [](const Values& u) { return Sides{(1.0 - u[4]) * std::cosh(u[0]) * std::cosh(u[1]), std::cosh(u[3])}; }),
        multiplicative("A.model", "u (xi + 1)(eta + 1) = (xi - 1)(eta - 1), xi = e^{2x}, eta = e^{2y}",
                       [](const Values& u) {
                           const cplx xi = std::exp(2.0 * u[0]), eta = std::exp(2.0 * u[1]);
                           return Sides{u[4] * (xi + 1.0) * (eta + 1.0), (xi - 1.0) * (eta - 1.0)};
                       }),
    };
}

std::vector<KnownRelation> relations_b() {
    return {
        multiplicative("B.1", "u = sin x sin y",
                       [](const Values& u) { return Sides{u[4], std::sin(u[0]) * std::sin(u[1])}; }),
        additive("B.2", "2u = cos(x-y) - cos(x+y)",
                 [](const Values& u) { return Sides{2.0 * u[4], std::cos(u[3]) - std::cos(u[2])}; }),
        additive("B.3", "4u^2 = cos^2(x-y) + cos^2(x+y) - cos 2x - cos 2y", [](const Values& u) {
            return Sides{4.0 * sq(u[4]), sq(std::cos(u[3])) + sq(std::cos(u[2])) - std::cos(2.0 * u[0]) - std::cos(2.0 * u[1])};
        }),
    };
}

std::vector<KnownRelation> relations_c() {
    return {
        additive("C.1", "u = e^x + e^y", [](const Values& u) { return Sides{u[4], std::exp(u[0]) + std::exp(u[1])}; }),
        additive("C.2", "u^2 = e^{2x} + e^{2y} + 2 e^{x+y}", [](const Values& u) {
            return Sides{sq(u[4]), std::exp(2.0 * u[0]) + std::exp(2.0 * u[1]) + 2.0 * std::exp(u[2])};
        }),
        multiplicative("C.3", "u = 2 e^{(x+y)/2} cosh((x-y)/2)", [](const Values& u) {
            return Sides{u[4], 2.0 * std::exp(0.5 * u[2]) * std::cosh(0.5 * u[3])};
        }),
    };
}

std::vector<KnownRelation> relations_d() {
    return {
        additive("D.1", "u = x^2 - y^2", [](const Values& u) { return Sides{u[4], sq(u[0]) - sq(u[1])}; }),
        additive("D.2", "6u^2 = 8x^4 + 8y^4 - (x+y)^4 - (x-y)^4", [](const Values& u) {
            return Sides{6.0 * sq(u[4]), 8.0 * std::pow(u[0], 4) + 8.0 * std::pow(u[1], 4) - std::pow(u[2], 4) - std::pow(u[3], 4)};
        }),
        multiplicative("D.3", "u = (x+y)(x-y)", [](const Values& u) { return Sides{u[4], u[2] * u[3]}; }),
    };
}

std::vector<KnownRelation> relations_e() {
    return {
        additive("E.1", "u = x^2 + y^2", [](const Values& u) { return Sides{u[4], sq(u[0]) + sq(u[1])}; }),
        additive("E.2", "6u^2 = 4x^4 + 4y^4 + (x+y)^4 + (x-y)^4", [](const Values& u) {
            return Sides{6.0 * sq(u[4]), 4.0 * std::pow(u[0], 4) + 4.0 * std::pow(u[1], 4) + std::pow(u[2], 4) + std::pow(u[3], 4)};
        }),
        additive("E.3", "10u^3 = 8x^6 + 8y^6 + (x+y)^6 + (x-y)^6", [](const Values& u) {
            return Sides{10.0 * std::pow(u[4], 3),
                         8.0 * std::pow(u[0], 6) + 8.0 * std::pow(u[1], 6) + std::pow(u[2], 6) + std::pow(u[3], 6)};
        }),
    };
}

// dn - k cn.
cplx dn_kcn(cplx t, const EllipticContext& ctx) { return dn(t, ctx) - ctx.k() * cn(t, ctx); }

std::vector<KnownRelation> relations_family(const EllipticContext& ctx) {
    const cplx k = ctx.k(), tau = ctx.tau(), half = 0.5 * ctx.tau();
    const cplx s3 = ctx.theta3_null() * ctx.theta3_null();
    auto th = [](int i, cplx x, cplx t) { return theta(i, x, t); };
    return {
        multiplicative("Family.e4bis", "(1 + k u)(dn - k cn)(x-y) = (1 - k u)(dn - k cn)(x+y)",
                       [ctx, k](const Values& u) {
                           return Sides{(1.0 + k * u[4]) * dn_kcn(u[3], ctx), (1.0 - k * u[4]) * dn_kcn(u[2], ctx)};
                       }),
        multiplicative("Family.1-u",
                       "(1 - k u) theta_4(X) theta_4(Y) = theta_3((X+Y)/2, tau/2) theta_4((X-Y)/2, tau/2), X = x/theta_3^2",
                       [=](const Values& u) {
                           return Sides{(1.0 - k * u[4]) * th(4, u[0] / s3, tau) * th(4, u[1] / s3, tau),
                                        th(3, 0.5 * u[2] / s3, half) * th(4, 0.5 * u[3] / s3, half)};
                       }),
        multiplicative("Family.1+u",
                       "(1 + k u) theta_4(X) theta_4(Y) = theta_3((X-Y)/2, tau/2) theta_4((X+Y)/2, tau/2), X = x/theta_3^2",
                       [=](const Values& u) {
                           return Sides{(1.0 + k * u[4]) * th(4, u[0] / s3, tau) * th(4, u[1] / s3, tau),
                                        th(3, 0.5 * u[3] / s3, half) * th(4, 0.5 * u[2] / s3, half)};
                       }),
        multiplicative("Family.e4", "(1 - k u) theta_4(S) theta_3(D) = (1 + k u) theta_3(S) theta_4(D) at tau/2",
                       [=](const Values& u) {
                           const cplx s = 0.5 * u[2] / s3, d = 0.5 * u[3] / s3;
                           return Sides{(1.0 - k * u[4]) * th(4, s, half) * th(3, d, half),
                                        (1.0 + k * u[4]) * th(3, s, half) * th(4, d, half)};
                       }),
    };
}

std::vector<KnownRelation> relations_quartic(cplx k) {
    auto g = [k](cplx t) { return std::sqrt(1.0 - k * k * t) - k * std::sqrt(1.0 - t); };
    return {
        additive("Quartic.sum", "u_+ + u_- = 2 (A(xi, eta) + A(eta, xi))", [k](const Values& u) {
            return Sides{u[2] + u[3], 2.0 * (quartic_a(u[0], u[1], k) + quartic_a(u[1], u[0], k))};
        }),
        additive("Quartic.product", "u_+ u_- = (A(xi, eta) - A(eta, xi))^2", [k](const Values& u) {
            return Sides{u[2] * u[3], sq(quartic_a(u[0], u[1], k) - quartic_a(u[1], u[0], k))};
        }),
        additive("Quartic.difference", "A(xi, eta) - A(eta, xi) = (xi - eta) / (1 - k^2 xi eta)", [k](const Values& u) {
            return Sides{quartic_a(u[0], u[1], k) - quartic_a(u[1], u[0], k), (u[0] - u[1]) / (1.0 - k * k * u[0] * u[1])};
        }),
        multiplicative("Quartic.e4bis", "(1 + k sqrt(xi eta)) g(u_-) = (1 - k sqrt(xi eta)) g(u_+), g(t) = sqrt(1 - k^2 t) - k sqrt(1 - t)",
                       [k, g](const Values& u) {
                           const cplx r = std::sqrt(u[4]);
                           return Sides{(1.0 + k * r) * g(u[3]), (1.0 - k * r) * g(u[2])};
                       }),
    };
}

struct SigmaData {
    Symmetry dilatation;
    std::function<cplx(cplx)> phi;
};

SigmaData sigma_data(const std::string& key, cplx k = 0.0) {
    const double r = 1.0 / kSqrt2;
    if (key == "a") return {Symmetry::dilatation(r), [](cplx s) { return (s - 1.0) / (s + 1.0); }};
    if (key == "b") return {Symmetry::dilatation(r, 0.0, kPi / kSqrt2), [](cplx s) { return -0.5 * s; }};
    if (key == "c") return {Symmetry::dilatation(kSqrt2), [](cplx s) { return 2.0 * s; }};
    if (key == "d") return {Symmetry::dilatation(kSqrt2), [](cplx s) { return 4.0 * s; }};
    if (key == "e") return {Symmetry::dilatation(kSqrt2), [](cplx s) { return 2.0 * s; }};
    if (key == "family") return {Symmetry::dilatation(r), [k](cplx s) { return (s - 1.0) / (k * (s + 1.0)); }};
    throw StructuralError("no sigma variant for '" + key + "'");
}

// Relations of X carried to its sigma variant: the X coordinates at
// sigma(D(p)) are each a function of one sigma-web foliation.
std::vector<KnownRelation> transported(const std::vector<KnownRelation>& rels, const SigmaData& sd) {
    const cplx lam = sd.dilatation.linear[0], tx = sd.dilatation.translation[0], ty = sd.dilatation.translation[1];
    std::vector<KnownRelation> out;
    for (const KnownRelation& r : rels) {
        KnownRelation t = r;
        t.name = "sigma." + r.name;
        t.text = "sigma-transported: " + r.text;
        t.sides = [inner = r.sides, lam, tx, ty, phi = sd.phi](const Values& v) {
            const Values w{(lam * v[2] + tx + ty) / kSqrt2, (lam * v[3] + tx - ty) / kSqrt2, kSqrt2 * (lam * v[0] + tx),
                           kSqrt2 * (lam * v[1] + ty), phi(v[4])};
            return inner(w);
        };
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<KnownRelation> relations_for(const std::string& key) {
    std::vector<KnownRelation> r;
    if (key == "a") r = relations_a();
    if (key == "b") r = relations_b();
    if (key == "c") r = relations_c();
    if (key == "d") r = relations_d();
    if (key == "e") r = relations_e();
    return r;
}

FormulaSpec fifth_spec(const std::string& key) {
    if (key == "a") return {"fg", {}, {"tanh", "tanh"}, {}};
    if (key == "b") return {"fg", {}, {"sin", "sin"}, {}};
    if (key == "c") return {"vw", {}, {"exp", "exp"}, {}};
    if (key == "d") return {"bipoly", {2, 0, 1.0, 0, 2, -1.0}, {}, {}};
    if (key == "e") return {"bipoly", {2, 0, 1.0, 0, 2, 1.0}, {}, {}};
    if (key == "sigmaa") return {"fg_ratio", {}, {"cosh", "cosh"}, {}};
    if (key == "sigmab") return {"vw", {}, {"-sin", "-sin"}, {}};
    if (key == "sigmac") return {"fg", {}, {"exp", "cosh"}, {}};
    if (key == "sigmad") return {"bipoly", {1, 1, 1.0}, {}, {}};
    if (key == "sigmae") return {"bipoly", {2, 0, 1.0, 0, 2, 1.0}, {}, {}};
    throw StructuralError("unknown catalog id '" + key + "'");
}

Web bol_web(Point base) {
    const FormulaSpec x{"bipoly", {1, 0, 1.0}, {}, {}}, y{"bipoly", {0, 1, 1.0}, {}, {}};
    const FormulaSpec omx{"linear", {-1, 0, 1.0}, {}, {}}, omy{"linear", {0, -1, 1.0}, {}, {}};
    const FormulaSpec xmxy{"bipoly", {1, 0, 1.0, 1, 1, -1.0}, {}, {}}, ymxy{"bipoly", {0, 1, 1.0, 1, 1, -1.0}, {}, {}};
    return Web("Bol",
               {pencil(1, 0, "x"), pencil(0, 1, "y"), named({"quotient", {}, {}, {y, x}}, "y/x"),
                named({"quotient", {}, {}, {omy, omx}}, "(1-y)/(1-x)"),
                named({"quotient", {}, {}, {xmxy, ymxy}}, "(x-xy)/(y-xy)")},
               base);
}

EllipticContext family_context(const CatalogParams& p) {
    if (p.tau) {
        if (p.tau->imag() <= kTauMin) throw DomainError("Family: Im tau too small");
        return context_from_tau(*p.tau);
    }
    return context_from_k(p.k.value_or(0.5));
}

}  // namespace

std::string form_name(RelationForm form) { return form == RelationForm::Additive ? "additive" : "multiplicative"; }

std::vector<std::string> catalog_ids() {
    return {"T0", "Bol", "Family", "A", "B", "C", "D", "E", "SigmaA", "SigmaB", "SigmaC", "SigmaD", "SigmaE", "QuarticModel"};
}

std::string catalog_description(const std::string& id) {
    static const std::map<std::string, std::string> d{
        {"t0", "T(x, y, x+y, x-y)"},
        {"bol", "T(x, y, y/x, (1-y)/(1-x), (x-xy)/(y-xy))"},
        {"family", "T[sn_k x sn_k y] (params k or tau)"},
        {"a", "T[tanh x tanh y]"},
        {"b", "T[sin x sin y]"},
        {"c", "T[e^x + e^y]"},
        {"d", "T[x^2 - y^2]"},
        {"e", "T[x^2 + y^2]"},
        {"sigmaa", "T[cosh x / cosh y]"},
        {"sigmab", "T[cos x + cos y]"},
        {"sigmac", "T[e^x cosh y]"},
        {"sigmad", "T[x y]"},
        {"sigmae", "T[x^2 + y^2]"},
        {"quarticmodel", "T(xi, eta, u_+, u_-, xi eta) with u_+- = sn_k^2(x +- y) (param k)"},
    };
    const auto it = d.find(lower(id));
    if (it == d.end()) throw StructuralError("unknown catalog id '" + id + "'");
    return it->second;
}

NamedWeb make_named_web(const std::string& id, const CatalogParams& params) {
    const std::string key = lower(id);
    const auto canonical = [&] {
        for (const std::string& c : catalog_ids())
            if (lower(c) == key) return c;
        throw StructuralError("unknown catalog id '" + id + "'");
    }();

    if (key == "t0") {
        const Point base = params.base.value_or(kGenericBase);
        return {canonical, Web("T0", t0_foliations(), base), t0_relations(), std::nullopt, std::nullopt};
    }
    if (key == "bol") return {canonical, bol_web(params.base.value_or(kGenericBase)), {}, std::nullopt, std::nullopt};

    if (key == "family") {
        const EllipticContext ctx = family_context(params);
        const std::string arg = params.tau ? "snt:" + format_complex(ctx.tau()) : "sn:" + format_complex(ctx.k());
        NamedWeb nw{canonical, Web("Family", with_fifth({"fg", {}, {arg, arg}, {}}), params.base.value_or(kEllipticBase)),
                    t0_relations(), ctx.k(), std::nullopt};
        if (params.tau) nw.tau = ctx.tau();
        const auto fam = relations_family(ctx);
        nw.known_relations.insert(nw.known_relations.end(), fam.begin(), fam.end());
        return nw;
    }

    if (key == "quarticmodel") {
        const EllipticContext ctx = context_from_k(params.k.value_or(0.5));
        const cplx k = ctx.k();
        const Point base = params.base.value_or(Point{sq(sn(kEllipticBase.x, ctx)), sq(sn(kEllipticBase.y, ctx))});
        Web w("QuarticModel",
              {pencil(1, 0, "xi"), pencil(0, 1, "eta"), named({"quartic_root", {k, 1.0}, {}, {}}, "u+"),
               named({"quartic_root", {k, -1.0}, {}, {}}, "u-"), named({"bipoly", {1, 1, 1.0}, {}, {}}, "xi eta")},
              base);
        return {canonical, std::move(w), relations_quartic(k), k, std::nullopt};
    }

    const Point base = params.base.value_or(kGenericBase);
    NamedWeb nw{canonical, Web(canonical, with_fifth(fifth_spec(key)), base), t0_relations(), std::nullopt, std::nullopt};
    std::vector<KnownRelation> extra;
    if (key.size() == 1) {
        extra = relations_for(key);
    } else {
        const std::string x = key.substr(5);
        extra = transported(relations_for(x), sigma_data(x));
    }
    nw.known_relations.insert(nw.known_relations.end(), extra.begin(), extra.end());
    return nw;
}

std::vector<Point> validation_samples(const NamedWeb& nw) {
    const double radius = nw.id == "Bol" ? 0.02 : 0.1;
    return disc_samples(nw.web.base(), radius, 64, sample_seed());
}

std::vector<RelationResidual> verify_relations(const NamedWeb& nw, const std::vector<Point>& samples) {
    std::vector<RelationResidual> out;
    for (const KnownRelation& r : nw.known_relations) out.push_back({r.name, r.text, r.form, 0.0, 0});
    if (out.empty()) return out;
    int usable = 0;
    for (const Point& p : samples) {
        Values u;
        try {
            for (const Foliation& f : nw.web.foliations()) u.push_back(f.value(p));
        } catch (const Error&) {
            continue;
        }
        bool any = false;
        for (std::size_t i = 0; i < nw.known_relations.size(); ++i) {
            Sides s;
            try {
                s = nw.known_relations[i].sides(u);
            } catch (const Error&) {
                continue;
            }
            const double d = std::abs(s.first - s.second);
            if (!std::isfinite(d)) continue;
            out[i].residual = std::max(out[i].residual, d);
            ++out[i].used;
            any = true;
        }
        if (any) ++usable;
    }
    if (usable == 0) throw NumericalError("verify_relations: every sample is singular");
    return out;
}

nlohmann::json to_json(const NamedWeb& nw) {
    nlohmann::json j = to_json(nw.web);
    j["id"] = nw.id;
    if (nw.modulus) j["k"] = {nw.modulus->real(), nw.modulus->imag()};
    if (nw.tau) j["tau"] = {nw.tau->real(), nw.tau->imag()};
    nlohmann::json rel = nlohmann::json::array();
    for (const KnownRelation& r : nw.known_relations)
        rel.push_back({{"name", r.name}, {"text", r.text}, {"form", form_name(r.form)}});
    j["known_relations"] = rel;
    return j;
}

Symmetry sigma_normalization(const std::string& id) {
    const std::string key = lower(id);
    if (key == "family") return sigma_data("family", 1.0).dilatation;
    return sigma_data(key).dilatation;
}

Foliation family_sigma_foliation(cplx k) {
    const std::string arg = "dnkcn:" + format_complex(k);
    return Foliation::from_spec({"fg_ratio", {}, {arg, arg}, {}}, "v");
}

// ---------------------------------------------------------------------------
// Quartic model
// ---------------------------------------------------------------------------

cplx quartic_a(cplx xi, cplx eta, cplx k) {
    const cplx k2 = k * k;
    return xi * (1.0 - eta) * (1.0 - k2 * eta) / sq(1.0 - k2 * xi * eta);
}

QuarticRoots quartic_roots(cplx xi, cplx eta, cplx k) {
    const cplx k2 = k * k;
    const cplx a = sq(1.0 - k2 * xi * eta);
    if (std::abs(a) == 0.0) throw DomainError("quartic_roots: 1 - k^2 xi eta = 0");
    const cplx b = xi * (1.0 - eta) * (1.0 - k2 * eta) + eta * (1.0 - xi) * (1.0 - k2 * xi);
    const cplx c = sq(xi - eta);
    const cplx s = std::sqrt(b * b - a * c);
    const cplx qp = b + s, qm = b - s;
    QuarticRoots r;
    r.a_xi_eta = quartic_a(xi, eta, k);
    r.a_eta_xi = quartic_a(eta, xi, k);
    if (qp == 0.0 && qm == 0.0) {
        r.u_plus = r.u_minus = 0.0;
    } else if (std::abs(qp) >= std::abs(qm)) {
        r.u_plus = qp / a;
        r.u_minus = c / qp;
    } else {
        r.u_plus = c / qm;
        r.u_minus = qm / a;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Limits
// ---------------------------------------------------------------------------

namespace {

template <class F>
double box_max(F f, int n = 21) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -1.0 + 2.0 * i / (n - 1), y = -1.0 + 2.0 * j / (n - 1);
            worst = std::max(worst, f(x, y));
        }
    return worst;
}

// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double exponential_limit_deviation(double k) {
    return box_max([k](double x, double y) {
        const double lim = 2.0 * std::exp(-k) * (std::cosh(x + k) + std::cosh(y + k));
        return std::abs(lim - (std::exp(x) + std::exp(y)));
    });
}

double epsilon_limit_deviation(double eps, int sign) {
    // cosh(t) - 1 = 2 sinh^2(t / 2) avoids cancellation.
    auto cm1 = [](double t) { return 2.0 * std::pow(std::sinh(0.5 * t), 2); };
    const double s = sign >= 0 ? 1.0 : -1.0;
    return box_max([=](double x, double y) {
        const double lim = 2.0 / (eps * eps) * (cm1(eps * x) + s * cm1(eps * y));
        return std::abs(lim - (x * x + s * y * y));
    });
}

double sn_limit_deviation(double k, bool to_tanh) {
    const EllipticContext ctx = context_from_k(k);
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double x = -1.0 + 0.05 * i;
        const cplx target = to_tanh ? std::tanh(x) : std::sin(x);
        worst = std::max(worst, std::abs(sn(x, ctx) - target));
    }
    return worst;
}

LimitReport family_limit_checks() {
    LimitReport r;
    std::vector<double> ks, lk, le, lp;
    for (double k = 5.0; k <= 15.0 + 1e-12; k += 2.5) {
        const double d = exponential_limit_deviation(k);
        r.exponential.push_back({k, d});
        ks.push_back(k);
        lk.push_back(std::log(d));
    }
    for (const double eps : {1e-3, 2e-3, 5e-3, 1e-2}) {
        const double dp = epsilon_limit_deviation(eps, 1), dm = epsilon_limit_deviation(eps, -1);
        r.epsilon_plus.push_back({eps, dp});
        r.epsilon_minus.push_back({eps, dm});
        le.push_back(std::log(eps));
        lp.push_back(std::log(std::max(dp, dm)));
    }
    r.exponential_order = -slope(ks, lk);
    r.epsilon_order = slope(le, lp);
    r.sn_to_sin = sn_limit_deviation(1e-4, false);
    r.sn_to_tanh = sn_limit_deviation(1.0 - 1e-6, true);
    return r;
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

ThetaFunction perturbed_theta(double eps) {
    return [eps](int i, cplx x, cplx tau) {
        const cplx v = theta(i, x, tau);
        return i == 3 ? v * (1.0 + eps) : v;
    };
}

std::vector<std::string> identity_names() {
    return {"form", "e4", "e4bis", "sn-cn", "dn-sn", "addition-sn", "addition-cn", "addition-dn", "quartic-A", "k-complement"};
}

namespace {

// Jacobi functions assembled from an arbitrary theta evaluator.
struct ThetaJacobi {
    ThetaFunction th;
    cplx tau, t2, t3, t4, k;

    ThetaJacobi(ThetaFunction f, cplx tau_) : th(std::move(f)), tau(tau_) {
        t2 = th(2, 0.0, tau);
        t3 = th(3, 0.0, tau);
        t4 = th(4, 0.0, tau);
        k = t2 * t2 / (t3 * t3);
    }
    cplx z(cplx x) const { return x / (t3 * t3); }
    cplx sn(cplx x) const { return t3 / t2 * th(1, z(x), tau) / th(4, z(x), tau); }
    cplx cn(cplx x) const { return t4 / t2 * th(2, z(x), tau) / th(4, z(x), tau); }
    cplx dn(cplx x) const { return t4 / t3 * th(3, z(x), tau) / th(4, z(x), tau); }
};

class PointSource {
public:
    explicit PointSource(unsigned long seed) : gen_(0x5eedULL + seed) {}
    cplx next(double re, double im) {
        std::uniform_real_distribution<double> a(-re, re), b(-im, im);
        const double x = a(gen_);
        return {x, b(gen_)};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace

std::vector<IdentityResult> identity_suite(const ThetaFunction& th, const IdentityOptions& options) {
    const auto names = identity_names();
    if (options.only && std::find(names.begin(), names.end(), *options.only) == names.end())
        throw StructuralError("unknown identity '" + *options.only + "'");
    auto wanted = [&](const std::string& n) { return !options.only || *options.only == n; };
    const int n = options.points;
    const std::vector<cplx> taus{cplx{0.0, 1.0}, cplx{0.3, 1.1}, cplx{-0.4, 0.7}};

    std::vector<ThetaJacobi> jac;
    for (const double k : options.moduli) jac.emplace_back(th, context_from_k(k).tau());

    std::vector<IdentityResult> out;
    auto run = [&](const std::string& name, double tol, const std::function<double(PointSource&, int)>& one) {
        if (!wanted(name)) return;
        PointSource src(options.seed);
        IdentityResult r{name, 0.0, tol, n};
        for (int i = 0; i < n; ++i) r.residual = std::max(r.residual, one(src, i));
        out.push_back(r);
    };

    run("form", 1e-10, [&](PointSource& s, int i) {
        const cplx tau = taus[static_cast<std::size_t>(i) % taus.size()];
        const cplx x = s.next(1.5, 0.5), y = s.next(1.5, 0.5);
        const cplx lhs = th(3, 0.5 * (x + y), 0.5 * tau) * th(4, 0.5 * (x - y), 0.5 * tau);
        const cplx a = th(4, x, tau) * th(4, y, tau), b = th(1, x, tau) * th(1, y, tau);
        return std::abs(lhs - (a - b)) / std::max({1.0, std::abs(a), std::abs(b)});
    });
    run("e4", 1e-10, [&](PointSource& s, int i) {
        const cplx tau = taus[static_cast<std::size_t>(i) % taus.size()], half = 0.5 * tau;
        const cplx x = s.next(1.5, 0.5), y = s.next(1.5, 0.5);
        const cplx p = th(4, x, tau) * th(4, y, tau), q = th(1, x, tau) * th(1, y, tau);
        const cplx sp = 0.5 * (x + y), dm = 0.5 * (x - y);
        const cplx lhs = (p - q) * th(4, sp, half) * th(3, dm, half);
        const cplx rhs = (p + q) * th(3, sp, half) * th(4, dm, half);
        return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
    });
    run("e4bis", 1e-10, [&](PointSource& s, int i) {
        const ThetaJacobi& j = jac[static_cast<std::size_t>(i) % jac.size()];
        const cplx x = s.next(1.0, 0.2), y = s.next(1.0, 0.2);
        const cplx u = j.sn(x) * j.sn(y);
        const cplx lhs = (1.0 + j.k * u) * (j.dn(x - y) - j.k * j.cn(x - y));
        const cplx rhs = (1.0 - j.k * u) * (j.dn(x + y) - j.k * j.cn(x + y));
        return std::abs(lhs - rhs);
    });
    run("sn-cn", 1e-11, [&](PointSource& s, int i) {
        const ThetaJacobi& j = jac[static_cast<std::size_t>(i) % jac.size()];
        const cplx x = s.next(1.0, 0.3);
        return std::abs(sq(j.sn(x)) + sq(j.cn(x)) - 1.0);
    });
    run("dn-sn", 1e-11, [&](PointSource& s, int i) {
        const ThetaJacobi& j = jac[static_cast<std::size_t>(i) % jac.size()];
        const cplx x = s.next(1.0, 0.3);
        return std::abs(sq(j.dn(x)) + j.k * j.k * sq(j.sn(x)) - 1.0);
    });
    auto addition = [&](JacobiKind kind) {
        return [&, kind](PointSource& s, int i) {
            const ThetaJacobi& j = jac[static_cast<std::size_t>(i) % jac.size()];
            const cplx x = s.next(0.8, 0.2), y = s.next(0.8, 0.2);
            const cplx sx = j.sn(x), cx = j.cn(x), dx = j.dn(x), sy = j.sn(y), cy = j.cn(y), dy = j.dn(y);
            const cplx den = 1.0 - j.k * j.k * sx * sx * sy * sy;
            cplx lhs, rhs;
            switch (kind) {
            case JacobiKind::sn:
                lhs = j.sn(x + y);
                rhs = (sx * cy * dy + sy * cx * dx) / den;
                break;
            case JacobiKind::cn:
                lhs = j.cn(x + y);
                rhs = (cx * cy - sx * sy * dx * dy) / den;
                break;
            case JacobiKind::dn:
                lhs = j.dn(x + y);
                rhs = (dx * dy - j.k * j.k * sx * sy * cx * cy) / den;
                break;
            }
            return std::abs(lhs - rhs);
        };
    };
    run("addition-sn", 1e-10, addition(JacobiKind::sn));
    run("addition-cn", 1e-10, addition(JacobiKind::cn));
    run("addition-dn", 1e-10, addition(JacobiKind::dn));
    run("quartic-A", 1e-12, [&](PointSource& s, int i) {
        const cplx k = options.moduli[static_cast<std::size_t>(i) % options.moduli.size()];
        const cplx xi = s.next(0.9, 0.3), eta = s.next(0.9, 0.3);
        return std::abs(quartic_a(xi, eta, k) - quartic_a(eta, xi, k) - (xi - eta) / (1.0 - k * k * xi * eta));
    });
    run("k-complement", 1e-12, [&](PointSource&, int i) {
        const std::size_t m = static_cast<std::size_t>(i) % (taus.size() + jac.size());
        const cplx tau = m < taus.size() ? taus[m] : jac[m - taus.size()].tau;
        const cplx t2 = th(2, 0.0, tau), t3 = th(3, 0.0, tau), t4 = th(4, 0.0, tau);
        const cplx k = t2 * t2 / (t3 * t3), kp = t4 * t4 / (t3 * t3);
        return std::abs(k * k + kp * kp - 1.0);
    });
    return out;
}

}  // namespace websmith
