#pragma once

// Truncated Taylor algebra.
//
// Series1 is a univariate truncated power series in (t - center); Jet2 is a
// bivariate one in (x - x0, y - y0), truncated at total degree `order`. All
// arithmetic truncates; two jets combine only when base and order agree.

#include <websmith/error.hpp>

#include <array>
#include <complex>
#include <map>
#include <span>
#include <vector>

namespace websmith {

using cplx = std::complex<double>;

struct Point {
    cplx x{};
    cplx y{};

    friend bool operator==(const Point&, const Point&) = default;
};

/// Constant-coefficient vector field alpha * d/dx + beta * d/dy.
struct Direction {
    cplx dx{};
    cplx dy{};
};

// ---------------------------------------------------------------------------
// Series1
// ---------------------------------------------------------------------------

class Series1 {
public:
    Series1() = default;
    Series1(cplx center, int order);
    Series1(cplx center, std::vector<cplx> coeffs);

    static Series1 constant(cplx center, int order, cplx value);
    /// The identity function t, expanded at `center`.
    static Series1 identity(cplx center, int order);

    cplx center() const noexcept { return center_; }
    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const cplx> coeffs() const noexcept { return coeffs_; }

    cplx& operator[](int n) { return coeffs_[static_cast<std::size_t>(n)]; }
    cplx operator[](int n) const { return coeffs_[static_cast<std::size_t>(n)]; }

    cplx value() const { return coeffs_.front(); }
    /// n-th derivative at the center (n! * c_n).
    cplx derivative_at_center(int n) const;
    /// Evaluate the truncated polynomial at t.
    cplx evaluate(cplx t) const;

    Series1 truncated(int order) const;
    /// d/dt; the result has order - 1.
    Series1 derivative() const;
    /// Antiderivative with the given constant term; the result has order + 1.
    Series1 integral(cplx constant_term) const;

    Series1& operator+=(const Series1& rhs);
    Series1& operator-=(const Series1& rhs);
    Series1& operator*=(cplx s);

    friend Series1 operator+(Series1 a, const Series1& b) { return a += b; }
    friend Series1 operator-(Series1 a, const Series1& b) { return a -= b; }
    friend Series1 operator*(Series1 a, cplx s) { return a *= s; }
    friend Series1 operator*(cplx s, Series1 a) { return a *= s; }
    friend Series1 operator*(const Series1& a, const Series1& b);
    friend Series1 operator/(const Series1& a, const Series1& b);
    Series1 operator-() const;

private:
    void require_compatible(const Series1& other) const;

    cplx center_{};
    std::vector<cplx> coeffs_;
};

/// Taylor series of elementary functions at `center`, to the given order.
namespace series {
Series1 exp(cplx center, int order);
Series1 log(cplx center, int order);
Series1 sin(cplx center, int order);
Series1 cos(cplx center, int order);
Series1 sinh(cplx center, int order);
Series1 cosh(cplx center, int order);
Series1 tanh(cplx center, int order);
Series1 reciprocal(cplx center, int order);
Series1 sqrt(cplx center, int order);
/// t^p for integer p >= 0.
Series1 power(cplx center, int order, int p);
}  // namespace series

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

class Jet2 {
public:
    Jet2() = default;
    /// The zero jet.
    Jet2(Point base, int order);

    static Jet2 constant(Point base, int order, cplx value);
    /// Jet of the coordinate function x.
    static Jet2 variable_x(Point base, int order);
    /// Jet of the coordinate function y.
    static Jet2 variable_y(Point base, int order);
    /// Jet of a * x + b * y + c.
    static Jet2 affine(Point base, int order, cplx a, cplx b, cplx c = 0.0);

    Point base() const noexcept { return base_; }
    int order() const noexcept { return order_; }

    /// Coefficient of (x - x0)^i (y - y0)^j; requires i + j <= order.
    cplx& operator()(int i, int j);
    cplx operator()(int i, int j) const;
    /// Coefficient, or zero when i + j exceeds the order.
    cplx coeff(int i, int j) const;

    cplx value() const { return coeffs_.front(); }
    cplx dx() const { return order_ >= 1 ? (*this)(1, 0) : cplx{}; }
    cplx dy() const { return order_ >= 1 ? (*this)(0, 1) : cplx{}; }
    /// Largest coefficient modulus in the homogeneous part of degree n.
    double degree_norm(int n) const;
    double max_abs() const;

    std::span<const cplx> raw() const noexcept { return coeffs_; }

    Jet2 truncated(int order) const;
    /// Evaluate the truncated polynomial at p.
    cplx evaluate(Point p) const;

    Jet2& operator+=(const Jet2& rhs);
    Jet2& operator-=(const Jet2& rhs);
    Jet2& operator*=(const Jet2& rhs);
    Jet2& operator+=(cplx s);
    Jet2& operator-=(cplx s);
    Jet2& operator*=(cplx s);
    Jet2& operator/=(cplx s);
    Jet2 operator-() const;

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);
    friend Jet2 operator+(Jet2 a, cplx s) { return a += s; }
    friend Jet2 operator+(cplx s, Jet2 a) { return a += s; }
    friend Jet2 operator-(Jet2 a, cplx s) { return a -= s; }
    friend Jet2 operator-(cplx s, const Jet2& a) { return -a + s; }
    friend Jet2 operator*(Jet2 a, cplx s) { return a *= s; }
    friend Jet2 operator*(cplx s, Jet2 a) { return a *= s; }
    friend Jet2 operator/(Jet2 a, cplx s) { return a /= s; }
    friend Jet2 operator/(cplx s, const Jet2& a);

    static constexpr std::size_t index(int i, int j) noexcept {
        const int n = i + j;
        return static_cast<std::size_t>(n * (n + 1) / 2 + j);
    }
    static constexpr std::size_t size_for(int order) noexcept {
        return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
    }

private:
    void require_compatible(const Jet2& other) const;

    Point base_{};
    int order_ = 0;
    std::vector<cplx> coeffs_{cplx{}};
};

Jet2 jet_add(const Jet2& a, const Jet2& b);
Jet2 jet_mul(const Jet2& a, const Jet2& b);

/// Jet of f(u), where f is expanded at u(base). Throws StructuralError on a
/// center mismatch; f is truncated or u's order is used, whichever is smaller.
Jet2 jet_compose(const Series1& f, const Jet2& u);

/// Jet of alpha * da/dx + beta * da/dy; the result has order - 1.
Jet2 jet_directional(Direction d, const Jet2& a);
Jet2 partial_x(const Jet2& a);
Jet2 partial_y(const Jet2& a);

/// Re-expand a jet of a function of (x, y) as a jet of u(g(X, Y)), where g is
/// the affine map (X, Y) -> (m00 X + m01 Y + t0, m10 X + m11 Y + t1) and
/// new_base is mapped by g onto a.base(). Exact for the truncated polynomial.
Jet2 jet_affine_pullback(const Jet2& a, const std::array<cplx, 4>& linear, Point new_base);

// Elementary functions applied to jets (composition with Series1 at u(base)).
Jet2 exp(const Jet2& u);
Jet2 log(const Jet2& u);
Jet2 sin(const Jet2& u);
Jet2 cos(const Jet2& u);
Jet2 sinh(const Jet2& u);
Jet2 cosh(const Jet2& u);
Jet2 tanh(const Jet2& u);
Jet2 sqrt(const Jet2& u);
Jet2 reciprocal(const Jet2& u);
Jet2 pow(const Jet2& u, int p);

// ---------------------------------------------------------------------------
// Operator calculus
// ---------------------------------------------------------------------------

/// X_1 ... X_p f(u) = sum_k a_k(x, y) f^(k)(u), for a symbolic univariate f.
struct OperatorExpansion {
    std::map<int, Jet2> terms;  // k -> a_k, k = 1..p

    int top_order() const { return terms.empty() ? 0 : terms.rbegin()->first; }
    const Jet2& coefficient(int k) const { return terms.at(k); }
};

/// Formal expansion of X_1 ... X_p f(u) for constant vector fields X_k, using
/// X(a f^(k)(u)) = a (Xu) f^(k+1)(u) + (Xa) f^(k)(u), applied X_p first. The
/// coefficients have order order(u) - p.
OperatorExpansion operator_coefficients(const Jet2& u, std::span<const Direction> directions);

}  // namespace websmith
