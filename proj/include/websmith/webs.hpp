#pragma once

// Foliations, webs, the symmetry group of T0 = T(x, y, x+y, x-y), and
// numerical foliation equality.

#include <websmith/jets.hpp>
#include <websmith/univariate.hpp>

#include <json.hpp>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace websmith {

// ---------------------------------------------------------------------------
// Formula descriptions
// ---------------------------------------------------------------------------

/// Serializable description of a defining function.
///
///   linear        params a, b[, c]                a x + b y + c
///   bipoly        params (i, j, coeff) triples    sum coeff x^i y^j
///   vw            args vx, wy                     V(x) + W(y), V' = vx, W' = wy
///   fg            args f, g                       f(x) g(y)
///   fg_ratio      args f, g                       f(x) / g(y)
///   sum, product, quotient   inner a, b
///   quartic_root  params k, sign (+1/-1)          root of the quartic model in t
///   pullback      params m00 m01 m10 m11 t0 t1, inner F    u_F(m (x, y) + t)
struct FormulaSpec {
    std::string formula;
    std::vector<cplx> params;
    std::vector<std::string> args;
    std::vector<FormulaSpec> inner;
};

nlohmann::json to_json(const FormulaSpec& spec);
FormulaSpec formula_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Foliation
// ---------------------------------------------------------------------------

class Foliation {
public:
    enum class Kind { LinearPencil, ClosedForm, Tabulated };
    using JetProvider = std::function<Jet2(Point, int)>;

    Foliation(std::string name, Kind kind, JetProvider provider, std::optional<FormulaSpec> spec = std::nullopt);

    /// Build from a formula description (kind LinearPencil for "linear").
    static Foliation from_spec(const FormulaSpec& spec, std::string name = {});

    const std::string& name() const noexcept { return name_; }
    Kind kind() const noexcept { return kind_; }
    const std::optional<FormulaSpec>& spec() const noexcept { return spec_; }

    Jet2 jet(Point base, int order) const { return provider_(base, order); }
    cplx value(Point p) const { return provider_(p, 0).value(); }
    std::array<cplx, 2> gradient(Point p) const;

private:
    std::string name_;
    Kind kind_;
    JetProvider provider_;
    std::optional<FormulaSpec> spec_;
};

std::string kind_name(Foliation::Kind kind);

/// |u_x u_y (u_x^2 - u_y^2)| > 1e-9 |grad u|^4: u is transverse to the four
/// pencils of T0 at p.
bool transversality_check(const Foliation& u, Point p);

// ---------------------------------------------------------------------------
// Web
// ---------------------------------------------------------------------------

inline constexpr double kWedgeTolerance = 1e-9;

class Web {
public:
    /// Throws StructuralError for d < 3 and TransversalityError when two
    /// foliations are tangent at base.
    Web(std::string name, std::vector<Foliation> foliations, Point base);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Foliation>& foliations() const noexcept { return foliations_; }
    int size() const noexcept { return static_cast<int>(foliations_.size()); }
    Point base() const noexcept { return base_; }

    /// Same foliations at another base point (validated).
    Web at(Point base) const;

private:
    std::string name_;
    std::vector<Foliation> foliations_;
    Point base_;
};

/// Smallest normalized wedge |du_j ^ du_k| / (|du_j| |du_k|) over pairs at p;
/// zero when a gradient vanishes or a jet cannot be evaluated.
double min_normalized_wedge(const std::vector<Foliation>& foliations, Point p);

/// First point of preferred, preferred + quasi-random 0.05 steps (up to 20
/// tries) where the foliations are pairwise transverse.
Point admissible_base(const std::vector<Foliation>& foliations, Point preferred);

inline constexpr Point kGenericBase{0.31, 0.17};
inline constexpr Point kEllipticBase{0.7, 0.4};

nlohmann::json to_json(const Foliation& f);
nlohmann::json to_json(const Web& web);
Foliation foliation_from_json(const nlohmann::json& j);
Web web_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

/// Affine map g(x, y) = L (x, y) + t.
struct Symmetry {
    std::array<cplx, 4> linear{1.0, 0.0, 0.0, 1.0};  // row-major L
    std::array<cplx, 2> translation{0.0, 0.0};
    std::string tag = "id";

    static Symmetry identity();
    static Symmetry rho();
    static Symmetry sigma();
    /// (x, y) -> (lambda x + tx, lambda y + ty); preserves T0.
    static Symmetry dilatation(cplx lambda, cplx tx = 0.0, cplx ty = 0.0);

    Point apply(Point p) const;
    Symmetry inverse() const;
    cplx determinant() const;
    /// this o other.
    Symmetry compose(const Symmetry& other) const;
    bool approx_equal(const Symmetry& other, double tol = 1e-12) const;
};

/// The 16 linear maps of D8: (±x, ±y), (±y, ±x), (±(x+y)/√2, ±(x−y)/√2),
/// (±(x−y)/√2, ±(x+y)/√2).
std::vector<Symmetry> d8_elements();

/// Foliation defined by u o g. This is a right action:
/// apply_symmetry(g o h, F) = apply_symmetry(h, apply_symmetry(g, F)).
Foliation apply_symmetry(const Symmetry& g, const Foliation& f);

/// Every foliation pulled back by g; the base moves to g^{-1}(base).
Web apply_symmetry(const Symmetry& g, const Web& web);

// ---------------------------------------------------------------------------
// Foliation equality
// ---------------------------------------------------------------------------

/// Quasi-random (R2 sequence) points in the disc of the given radius.
/// The sequence start is offset by `seed`.
std::vector<Point> disc_samples(Point center, double radius, int count, unsigned long seed = 0);

/// Seed from WEBSMITH_SEED, or 0.
unsigned long sample_seed();

/// True iff |u1x u2y - u1y u2x| < 1e-8 |grad u1| |grad u2| at every usable
/// sample. Singular samples are skipped; more than half skipped throws.
bool foliation_equal(const Foliation& a, const Foliation& b, const std::vector<Point>& samples);

/// Largest normalized gradient wedge over the usable samples.
double foliation_distance(const Foliation& a, const Foliation& b, const std::vector<Point>& samples);

}  // namespace websmith
