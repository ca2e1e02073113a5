#include <websmith/webs.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace websmith {

using nlohmann::json;

namespace {

double norm2(const std::array<cplx, 2>& g) { return std::sqrt(std::norm(g[0]) + std::norm(g[1])); }

double normalized_wedge(const std::array<cplx, 2>& a, const std::array<cplx, 2>& b) {
    const double na = norm2(a), nb = norm2(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(a[0] * b[1] - a[1] * b[0]) / (na * nb);
}

void require_params(const FormulaSpec& s, std::size_t n) {
    if (s.params.size() < n)
        throw StructuralError("formula '" + s.formula + "' needs " + std::to_string(n) + " parameters");
}
void require_args(const FormulaSpec& s, std::size_t n) {
    if (s.args.size() != n) throw StructuralError("formula '" + s.formula + "' needs " + std::to_string(n) + " args");
}
void require_inner(const FormulaSpec& s, std::size_t n) {
    if (s.inner.size() != n)
        throw StructuralError("formula '" + s.formula + "' needs " + std::to_string(n) + " inner formulas");
}

json complex_to_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_string()) return parse_complex(j.get<std::string>());
    throw StructuralError("bad complex value in JSON: " + j.dump());
}

Foliation::JetProvider provider_for(const FormulaSpec& s);

// Quadratic A t^2 - 2 B t + C = 0 of the quartic model, solved on jets.
Jet2 quartic_root_jet(Point p, int m, cplx k, double sign) {
    const Jet2 xi = Jet2::variable_x(p, m), eta = Jet2::variable_y(p, m);
    const cplx k2 = k * k;
    const Jet2 lead = 1.0 - k2 * xi * eta;
    const Jet2 a = lead * lead;
    const Jet2 b = xi * (1.0 - eta) * (1.0 - k2 * eta) + eta * (1.0 - xi) * (1.0 - k2 * xi);
    const Jet2 c = (xi - eta) * (xi - eta);
    if (std::abs(a.value()) == 0.0) throw PoleError("quartic model: 1 - k^2 xi eta = 0", p.x);
    const Jet2 disc = b * b - a * c;
    if (std::abs(disc.value()) <= 1e-14 * std::abs(b.value() * b.value()))
        throw PoleError("quartic model: double root", p.x);
    const Jet2 s = sqrt(disc);
    const Jet2 qp = b + s, qm = b - s;
    // Use the larger of B +- sqrt(D) directly and Vieta for the other root.
    if (std::abs(qp.value()) >= std::abs(qm.value())) return sign > 0 ? qp / a : c / qp;
    return sign > 0 ? c / qm : qm / a;
}

Foliation::JetProvider provider_for(const FormulaSpec& s) {
    const std::string& f = s.formula;
    if (f == "linear") {
        require_params(s, 2);
        const cplx a = s.params[0], b = s.params[1], c = s.params.size() > 2 ? s.params[2] : 0.0;
        return [a, b, c](Point p, int m) { return Jet2::affine(p, m, a, b, c); };
    }
    if (f == "bipoly") {
        if (s.params.empty() || s.params.size() % 3 != 0) throw StructuralError("bipoly needs (i, j, coeff) triples");
        struct Mono {
            int i, j;
            cplx c;
        };
        std::vector<Mono> monos;
        for (std::size_t t = 0; t < s.params.size(); t += 3) {
            const int i = static_cast<int>(std::lround(s.params[t].real()));
            const int j = static_cast<int>(std::lround(s.params[t + 1].real()));
            if (i < 0 || j < 0) throw StructuralError("bipoly: negative exponent");
            monos.push_back({i, j, s.params[t + 2]});
        }
        return [monos](Point p, int m) {
            Jet2 r(p, m);
            for (const Mono& mo : monos) {
                Jet2 term = Jet2::constant(p, m, mo.c);
                for (int k = 0; k < mo.i; ++k) term *= Jet2::variable_x(p, m);
                for (int k = 0; k < mo.j; ++k) term *= Jet2::variable_y(p, m);
                r += term;
            }
            return r;
        };
    }
    if (f == "vw") {
        require_args(s, 2);
        const Univariate v = Univariate::parse(s.args[0]), w = Univariate::parse(s.args[1]);
        return [v, w](Point p, int m) {
            return jet_compose(v.primitive_series(p.x, m), Jet2::variable_x(p, m)) +
                   jet_compose(w.primitive_series(p.y, m), Jet2::variable_y(p, m));
        };
    }
    if (f == "fg" || f == "fg_ratio") {
        require_args(s, 2);
        const Univariate v = Univariate::parse(s.args[0]), w = Univariate::parse(s.args[1]);
        const bool ratio = f == "fg_ratio";
        return [v, w, ratio](Point p, int m) {
            const Jet2 a = jet_compose(v.series(p.x, m), Jet2::variable_x(p, m));
            const Jet2 b = jet_compose(w.series(p.y, m), Jet2::variable_y(p, m));
            return ratio ? a / b : a * b;
        };
    }
    if (f == "sum" || f == "product" || f == "quotient") {
        require_inner(s, 2);
        const auto a = provider_for(s.inner[0]), b = provider_for(s.inner[1]);
        const int op = f == "sum" ? 0 : (f == "product" ? 1 : 2);
        return [a, b, op](Point p, int m) {
            const Jet2 x = a(p, m), y = b(p, m);
            if (op == 0) return x + y;
            if (op == 1) return x * y;
            return x / y;
        };
    }
    if (f == "quartic_root") {
        require_params(s, 2);
        const cplx k = s.params[0];
        const double sign = s.params[1].real() >= 0.0 ? 1.0 : -1.0;
        return [k, sign](Point p, int m) { return quartic_root_jet(p, m, k, sign); };
    }
    if (f == "pullback") {
        require_params(s, 6);
        require_inner(s, 1);
        Symmetry g;
        g.linear = {s.params[0], s.params[1], s.params[2], s.params[3]};
        g.translation = {s.params[4], s.params[5]};
        if (std::abs(g.determinant()) == 0.0) throw StructuralError("pullback: singular linear part");
        const auto inner = provider_for(s.inner[0]);
        return [g, inner](Point p, int m) { return jet_affine_pullback(inner(g.apply(p), m), g.linear, p); };
    }
    throw StructuralError("unknown formula '" + f + "'");
}

std::string describe(const FormulaSpec& s) {
    std::string out = s.formula + "(";
    bool first = true;
    for (const cplx& z : s.params) {
        out += (first ? "" : ",") + format_complex(z);
        first = false;
    }
    for (const std::string& a : s.args) {
        out += (first ? "" : ",") + a;
        first = false;
    }
    for (const FormulaSpec& i : s.inner) {
        out += (first ? "" : ",") + describe(i);
        first = false;
    }
    return out + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// FormulaSpec JSON
// ---------------------------------------------------------------------------

json to_json(const FormulaSpec& spec) {
    json j;
    j["formula"] = spec.formula;
    json params = json::array();
    for (const cplx& z : spec.params) params.push_back(complex_to_json(z));
    j["params"] = params;
    if (!spec.args.empty()) j["args"] = spec.args;
    if (!spec.inner.empty()) {
        json inner = json::array();
        for (const FormulaSpec& s : spec.inner) inner.push_back(to_json(s));
        j["inner"] = inner;
    }
    return j;
}

FormulaSpec formula_from_json(const json& j) {
    if (!j.is_object() || !j.contains("formula")) throw StructuralError("formula object needs a 'formula' field");
    FormulaSpec s;
    s.formula = j.at("formula").get<std::string>();
    if (j.contains("params"))
        for (const json& p : j.at("params")) s.params.push_back(complex_from_json(p));
    if (j.contains("args"))
        for (const json& a : j.at("args")) s.args.push_back(a.get<std::string>());
    if (j.contains("inner"))
        for (const json& i : j.at("inner")) s.inner.push_back(formula_from_json(i));
    return s;
}

// ---------------------------------------------------------------------------
// Foliation
// ---------------------------------------------------------------------------

Foliation::Foliation(std::string name, Kind kind, JetProvider provider, std::optional<FormulaSpec> spec)
    : name_(std::move(name)), kind_(kind), provider_(std::move(provider)), spec_(std::move(spec)) {
    if (!provider_) throw StructuralError("foliation '" + name_ + "' has no jet provider");
}

Foliation Foliation::from_spec(const FormulaSpec& spec, std::string name) {
    const Kind kind = spec.formula == "linear" ? Kind::LinearPencil : Kind::ClosedForm;
    if (name.empty()) name = describe(spec);
    return Foliation(std::move(name), kind, provider_for(spec), spec);
}

std::array<cplx, 2> Foliation::gradient(Point p) const {
    const Jet2 j = provider_(p, 1);
    return {j.dx(), j.dy()};
}

std::string kind_name(Foliation::Kind kind) {
    switch (kind) {
    case Foliation::Kind::LinearPencil: return "linear-pencil";
    case Foliation::Kind::ClosedForm: return "closed-form";
    case Foliation::Kind::Tabulated: return "tabulated";
    }
    return "tabulated";
}

bool transversality_check(const Foliation& u, Point p) {
    const auto g = u.gradient(p);
    const double n = norm2(g);
    if (n == 0.0) return false;
    return std::abs(g[0] * g[1] * (g[0] * g[0] - g[1] * g[1])) > 1e-9 * n * n * n * n;
}

// ---------------------------------------------------------------------------
// Web
// ---------------------------------------------------------------------------

double min_normalized_wedge(const std::vector<Foliation>& foliations, Point p) {
    std::vector<std::array<cplx, 2>> grads;
    try {
        for (const Foliation& f : foliations) grads.push_back(f.gradient(p));
    } catch (const Error&) {
        return 0.0;
    }
    double best = 1.0;
    for (std::size_t a = 0; a < grads.size(); ++a)
        for (std::size_t b = a + 1; b < grads.size(); ++b) best = std::min(best, normalized_wedge(grads[a], grads[b]));
    return best;
}

Web::Web(std::string name, std::vector<Foliation> foliations, Point base)
    : name_(std::move(name)), foliations_(std::move(foliations)), base_(base) {
    if (foliations_.size() < 3) throw StructuralError("a web needs at least 3 foliations");
    if (min_normalized_wedge(foliations_, base_) <= kWedgeTolerance)
        throw TransversalityError("web '" + name_ + "' is not transverse at the base point");
}

Web Web::at(Point base) const { return Web(name_, foliations_, base); }

Point admissible_base(const std::vector<Foliation>& foliations, Point preferred) {
    constexpr double kStep = 0.05;
    constexpr double kGolden = 0.6180339887498949;
    Point p = preferred;
    for (int attempt = 0; attempt <= 20; ++attempt) {
        if (min_normalized_wedge(foliations, p) > kWedgeTolerance) return p;
        const double angle = 2.0 * std::numbers::pi * std::fmod(0.5 + kGolden * (attempt + 1), 1.0);
        p = {p.x + kStep * std::cos(angle), p.y + kStep * std::sin(angle)};
    }
    throw TransversalityError("no admissible base point near the requested one");
}

json to_json(const Foliation& f) {
    if (!f.spec()) throw StructuralError("foliation '" + f.name() + "' has no formula and cannot be serialized");
    json j = to_json(*f.spec());
    j["name"] = f.name();
    j["kind"] = kind_name(f.kind());
    return j;
}

json to_json(const Web& web) {
    json j;
    j["name"] = web.name();
    json fs = json::array();
    for (const Foliation& f : web.foliations()) fs.push_back(to_json(f));
    j["foliations"] = fs;
    const Point b = web.base();
    j["base"] = json::array({b.x.real(), b.x.imag(), b.y.real(), b.y.imag()});
    return j;
}

Foliation foliation_from_json(const json& j) {
    const FormulaSpec spec = formula_from_json(j);
    return Foliation::from_spec(spec, j.value("name", std::string{}));
}

Web web_from_json(const json& j) {
    if (!j.is_object() || !j.contains("foliations")) throw StructuralError("web JSON needs 'foliations'");
    std::vector<Foliation> fs;
    for (const json& f : j.at("foliations")) fs.push_back(foliation_from_json(f));
    Point base = kGenericBase;
    bool explicit_base = false;
    if (j.contains("base")) {
        const json& b = j.at("base");
        if (!b.is_array() || (b.size() != 4 && b.size() != 2)) throw StructuralError("base must be [re,im,re,im]");
        base = b.size() == 4 ? Point{{b[0].get<double>(), b[1].get<double>()}, {b[2].get<double>(), b[3].get<double>()}}
                             : Point{b[0].get<double>(), b[1].get<double>()};
        explicit_base = true;
    }
    if (!explicit_base) base = admissible_base(fs, base);
    return Web(j.value("name", std::string{"web"}), std::move(fs), base);
}

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

Symmetry Symmetry::identity() { return {}; }

Symmetry Symmetry::rho() {
    Symmetry g;
    g.linear = {0.0, 1.0, 1.0, 0.0};
    g.tag = "rho";
    return g;
}

Symmetry Symmetry::sigma() {
    const double r = std::numbers::sqrt2 / 2.0;
    Symmetry g;
    g.linear = {r, r, r, -r};
    g.tag = "sigma";
    return g;
}

Symmetry Symmetry::dilatation(cplx lambda, cplx tx, cplx ty) {
    if (lambda == cplx{}) throw StructuralError("dilatation by zero");
    Symmetry g;
    g.linear = {lambda, 0.0, 0.0, lambda};
    g.translation = {tx, ty};
    g.tag = "dil(" + format_complex(lambda) + ")";
    return g;
}

Point Symmetry::apply(Point p) const {
    return {linear[0] * p.x + linear[1] * p.y + translation[0], linear[2] * p.x + linear[3] * p.y + translation[1]};
}

cplx Symmetry::determinant() const { return linear[0] * linear[3] - linear[1] * linear[2]; }

Symmetry Symmetry::inverse() const {
    const cplx d = determinant();
    if (d == cplx{}) throw StructuralError("symmetry with singular linear part");
    Symmetry g;
    g.linear = {linear[3] / d, -linear[1] / d, -linear[2] / d, linear[0] / d};
    g.translation = {-(g.linear[0] * translation[0] + g.linear[1] * translation[1]),
                     -(g.linear[2] * translation[0] + g.linear[3] * translation[1])};
    g.tag = tag + "^-1";
    return g;
}

Symmetry Symmetry::compose(const Symmetry& o) const {
    Symmetry g;
    const auto& a = linear;
    const auto& b = o.linear;
    g.linear = {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3]};
    g.translation = {a[0] * o.translation[0] + a[1] * o.translation[1] + translation[0],
                     a[2] * o.translation[0] + a[3] * o.translation[1] + translation[1]};
    g.tag = tag + "." + o.tag;
    return g;
}

bool Symmetry::approx_equal(const Symmetry& o, double tol) const {
    for (int i = 0; i < 4; ++i)
        if (std::abs(linear[static_cast<std::size_t>(i)] - o.linear[static_cast<std::size_t>(i)]) > tol) return false;
    return std::abs(translation[0] - o.translation[0]) <= tol && std::abs(translation[1] - o.translation[1]) <= tol;
}

std::vector<Symmetry> d8_elements() {
    const double r = std::numbers::sqrt2 / 2.0;
    struct Base {
        std::array<double, 4> m;
        const char* row0;
        const char* row1;
    };
    const std::array<Base, 4> bases{Base{{1, 0, 0, 1}, "x", "y"}, Base{{0, 1, 1, 0}, "y", "x"},
                                    Base{{r, r, r, -r}, "(x+y)/r2", "(x-y)/r2"},
                                    Base{{r, -r, r, r}, "(x-y)/r2", "(x+y)/r2"}};
    std::vector<Symmetry> out;
    for (const Base& b : bases)
        for (const double s0 : {1.0, -1.0})
            for (const double s1 : {1.0, -1.0}) {
                Symmetry g;
                g.linear = {s0 * b.m[0], s0 * b.m[1], s1 * b.m[2], s1 * b.m[3]};
                g.tag = std::string("(") + (s0 > 0 ? "+" : "-") + b.row0 + "," + (s1 > 0 ? "+" : "-") + b.row1 + ")";
                out.push_back(g);
            }
    return out;
}

Foliation apply_symmetry(const Symmetry& g, const Foliation& f) {
    if (std::abs(g.determinant()) == 0.0) throw StructuralError("apply_symmetry: singular map");
    std::optional<FormulaSpec> spec;
    if (f.spec()) {
        FormulaSpec s;
        s.formula = "pullback";
        s.params = {g.linear[0], g.linear[1], g.linear[2], g.linear[3], g.translation[0], g.translation[1]};
        s.inner = {*f.spec()};
        spec = s;
    }
    auto provider = [g, f](Point p, int m) { return jet_affine_pullback(f.jet(g.apply(p), m), g.linear, p); };
    const auto kind = f.kind() == Foliation::Kind::Tabulated ? Foliation::Kind::Tabulated : f.kind();
    return Foliation(g.tag + "*" + f.name(), kind, provider, spec);
}

Web apply_symmetry(const Symmetry& g, const Web& web) {
    std::vector<Foliation> fs;
    for (const Foliation& f : web.foliations()) fs.push_back(apply_symmetry(g, f));
    return Web(web.name() + "*" + g.tag, std::move(fs), g.inverse().apply(web.base()));
}

// ---------------------------------------------------------------------------
// Foliation equality
// ---------------------------------------------------------------------------

std::vector<Point> disc_samples(Point center, double radius, int count, unsigned long seed) {
    // Plastic-number R2 sequence mapped area-uniformly onto the disc.
    constexpr double g = 1.32471795724474602596;
    const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double n = static_cast<double>(seed) + i + 1;
        const double u = std::fmod(0.5 + a1 * n, 1.0), v = std::fmod(0.5 + a2 * n, 1.0);
        const double rr = radius * std::sqrt(u), th = 2.0 * std::numbers::pi * v;
        out.push_back({center.x + rr * std::cos(th), center.y + rr * std::sin(th)});
    }
    return out;
}

unsigned long sample_seed() {
    const char* env = std::getenv("WEBSMITH_SEED");
    if (env == nullptr || *env == '\0') return 0;
    try {
        return std::stoul(env);
    } catch (const std::exception&) {
        throw DomainError(std::string("WEBSMITH_SEED is not an unsigned integer: ") + env);
    }
}

double foliation_distance(const Foliation& a, const Foliation& b, const std::vector<Point>& samples) {
    if (samples.empty()) throw StructuralError("foliation_equal: no samples");
    double worst = 0.0;
    std::size_t skipped = 0;
    for (const Point& p : samples) {
        std::array<cplx, 2> ga, gb;
        try {
            ga = a.gradient(p);
            gb = b.gradient(p);
        } catch (const Error&) {
            ++skipped;
            continue;
        }
        const double na = norm2(ga), nb = norm2(gb);
        if (!std::isfinite(na) || !std::isfinite(nb) || na < 1e-13 || nb < 1e-13) {
            ++skipped;
            continue;
        }
        worst = std::max(worst, normalized_wedge(ga, gb));
    }
    if (2 * skipped > samples.size())
        throw NumericalError("foliation_equal: more than half of the samples are singular");
    return worst;
}

bool foliation_equal(const Foliation& a, const Foliation& b, const std::vector<Point>& samples) {
    return foliation_distance(a, b, samples) < 1e-8;
}

}  // namespace websmith
