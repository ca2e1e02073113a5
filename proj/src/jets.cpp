#include <websmith/jets.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace websmith {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

bool same_point(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

}  // namespace

// ---------------------------------------------------------------------------
// Series1
// ---------------------------------------------------------------------------

Series1::Series1(cplx center, int order)
    : center_(center), coeffs_(static_cast<std::size_t>(std::max(order, 0) + 1)) {
    if (order < 0) throw StructuralError("Series1: negative order");
}

Series1::Series1(cplx center, std::vector<cplx> coeffs) : center_(center), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw StructuralError("Series1: empty coefficient list");
}

Series1 Series1::constant(cplx center, int order, cplx value) {
    Series1 s(center, order);
    s[0] = value;
    return s;
}

Series1 Series1::identity(cplx center, int order) {
    Series1 s(center, order);
    s[0] = center;
    if (order >= 1) s[1] = 1.0;
    return s;
}

cplx Series1::derivative_at_center(int n) const {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return (*this)[n] * f;
}

cplx Series1::evaluate(cplx t) const {
    const cplx h = t - center_;
    cplx r = coeffs_.back();
    for (int n = order() - 1; n >= 0; --n) r = r * h + (*this)[n];
    return r;
}

Series1 Series1::truncated(int order) const {
    if (order > this->order()) throw StructuralError("Series1: cannot extend by truncation");
    return Series1(center_, std::vector<cplx>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

Series1 Series1::derivative() const {
    if (order() < 1) throw StructuralError("Series1: derivative of an order-0 series");
    Series1 d(center_, order() - 1);
    for (int n = 0; n < order(); ++n) d[n] = static_cast<double>(n + 1) * (*this)[n + 1];
    return d;
}

Series1 Series1::integral(cplx constant_term) const {
    Series1 s(center_, order() + 1);
    s[0] = constant_term;
    for (int n = 0; n <= order(); ++n) s[n + 1] = (*this)[n] / static_cast<double>(n + 1);
    return s;
}

void Series1::require_compatible(const Series1& other) const {
    if (center_ != other.center_ || order() != other.order())
        throw StructuralError("Series1: mismatched center or order");
}

Series1& Series1::operator+=(const Series1& rhs) {
    require_compatible(rhs);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += rhs.coeffs_[n];
    return *this;
}

Series1& Series1::operator-=(const Series1& rhs) {
    require_compatible(rhs);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= rhs.coeffs_[n];
    return *this;
}

Series1& Series1::operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

Series1 Series1::operator-() const {
    Series1 r = *this;
    r *= -1.0;
    return r;
}

Series1 operator*(const Series1& a, const Series1& b) {
    a.require_compatible(b);
    Series1 r(a.center(), a.order());
    for (int i = 0; i <= a.order(); ++i)
        for (int j = 0; i + j <= a.order(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Series1 operator/(const Series1& a, const Series1& b) {
    a.require_compatible(b);
    if (b[0] == cplx{}) throw PoleError("Series1: division by a series vanishing at its center", b.center());
    Series1 q(a.center(), a.order());
    for (int n = 0; n <= a.order(); ++n) {
        cplx acc = a[n];
        for (int k = 0; k < n; ++k) acc -= q[k] * b[n - k];
        q[n] = acc / b[0];
    }
    return q;
}

namespace series {

Series1 exp(cplx center, int order) {
    Series1 s(center, order);
    const cplx e = std::exp(center);
    double f = 1.0;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) f *= n;
        s[n] = e / f;
    }
    return s;
}

Series1 log(cplx center, int order) {
    if (center == cplx{}) throw PoleError("log series at 0", center);
    Series1 s(center, order);
    s[0] = std::log(center);
    cplx p = center;
    for (int n = 1; n <= order; ++n) {
        s[n] = ((n % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(n) * p);
        p *= center;
    }
    return s;
}

namespace {
// Series from a 4-cycle (or 2-cycle) of derivative values.
Series1 cyclic(cplx center, int order, const std::array<cplx, 4>& derivs) {
    Series1 s(center, order);
    double f = 1.0;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) f *= n;
        s[n] = derivs[static_cast<std::size_t>(n % 4)] / f;
    }
    return s;
}
}  // namespace

Series1 sin(cplx center, int order) {
    const cplx s = std::sin(center), c = std::cos(center);
    return cyclic(center, order, {s, c, -s, -c});
}

Series1 cos(cplx center, int order) {
    const cplx s = std::sin(center), c = std::cos(center);
    return cyclic(center, order, {c, -s, -c, s});
}

Series1 sinh(cplx center, int order) {
    const cplx s = std::sinh(center), c = std::cosh(center);
    return cyclic(center, order, {s, c, s, c});
}

Series1 cosh(cplx center, int order) {
    const cplx s = std::sinh(center), c = std::cosh(center);
    return cyclic(center, order, {c, s, c, s});
}

Series1 tanh(cplx center, int order) { return sinh(center, order) / cosh(center, order); }

Series1 reciprocal(cplx center, int order) {
    if (center == cplx{}) throw PoleError("reciprocal series at 0", center);
    Series1 s(center, order);
    cplx p = center;
    for (int n = 0; n <= order; ++n) {
        s[n] = ((n % 2 == 0) ? 1.0 : -1.0) / p;
        p *= center;
    }
    return s;
}

Series1 sqrt(cplx center, int order) {
    if (center == cplx{}) throw PoleError("sqrt series at its branch point", center);
    Series1 s(center, order);
    const cplx r = std::sqrt(center);
    cplx p = 1.0;
    double binom = 1.0;  // binom(1/2, n)
    for (int n = 0; n <= order; ++n) {
        if (n > 0) {
            binom *= (0.5 - (n - 1)) / n;
            p /= center;
        }
        s[n] = r * binom * p;
    }
    return s;
}

Series1 power(cplx center, int order, int p) {
    if (p < 0) throw DomainError("power series: negative exponent");
    Series1 s(center, order);
    for (int n = 0; n <= std::min(order, p); ++n) s[n] = binomial(p, n) * std::pow(center, p - n);
    return s;
}

}  // namespace series

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

Jet2::Jet2(Point base, int order) : base_(base), order_(order), coeffs_(size_for(order)) {
    if (order < 0) throw StructuralError("Jet2: negative order");
}

Jet2 Jet2::constant(Point base, int order, cplx value) {
    Jet2 j(base, order);
    j.coeffs_[0] = value;
    return j;
}

Jet2 Jet2::variable_x(Point base, int order) { return affine(base, order, 1.0, 0.0); }

Jet2 Jet2::variable_y(Point base, int order) { return affine(base, order, 0.0, 1.0); }

Jet2 Jet2::affine(Point base, int order, cplx a, cplx b, cplx c) {
    Jet2 j(base, order);
    j.coeffs_[0] = a * base.x + b * base.y + c;
    if (order >= 1) {
        j(1, 0) = a;
        j(0, 1) = b;
    }
    return j;
}

cplx& Jet2::operator()(int i, int j) {
    if (i < 0 || j < 0 || i + j > order_) throw StructuralError("Jet2: coefficient index out of range");
    return coeffs_[index(i, j)];
}

cplx Jet2::operator()(int i, int j) const {
    if (i < 0 || j < 0 || i + j > order_) throw StructuralError("Jet2: coefficient index out of range");
    return coeffs_[index(i, j)];
}

cplx Jet2::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i + j > order_) return {};
    return coeffs_[index(i, j)];
}

double Jet2::degree_norm(int n) const {
    if (n > order_) return 0.0;
    double m = 0.0;
    for (int j = 0; j <= n; ++j) m = std::max(m, std::abs(coeffs_[index(n - j, j)]));
    return m;
}

double Jet2::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Jet2 Jet2::truncated(int order) const {
    if (order > order_) throw StructuralError("Jet2: cannot extend by truncation");
    Jet2 r(base_, order);
    std::copy_n(coeffs_.begin(), size_for(order), r.coeffs_.begin());
    return r;
}

cplx Jet2::evaluate(Point p) const {
    const cplx hx = p.x - base_.x, hy = p.y - base_.y;
    // Horner in total degree: sum over n of homogeneous parts.
    cplx total{};
    for (int n = order_; n >= 0; --n) {
        cplx part{};
        cplx px = 1.0;
        std::vector<cplx> ypow(static_cast<std::size_t>(n + 1), 1.0);
        for (int j = 1; j <= n; ++j) ypow[static_cast<std::size_t>(j)] = ypow[static_cast<std::size_t>(j - 1)] * hy;
        for (int i = 0; i <= n; ++i) {
            part += coeffs_[index(i, n - i)] * px * ypow[static_cast<std::size_t>(n - i)];
            px *= hx;
        }
        total += part;
    }
    return total;
}

void Jet2::require_compatible(const Jet2& other) const {
    if (order_ != other.order_) throw StructuralError("Jet2: mismatched orders");
    if (!same_point(base_, other.base_)) throw StructuralError("Jet2: mismatched base points");
}

Jet2& Jet2::operator+=(const Jet2& rhs) {
    require_compatible(rhs);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += rhs.coeffs_[n];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& rhs) {
    require_compatible(rhs);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= rhs.coeffs_[n];
    return *this;
}

Jet2& Jet2::operator*=(const Jet2& rhs) { return *this = *this * rhs; }

Jet2& Jet2::operator+=(cplx s) {
    coeffs_[0] += s;
    return *this;
}

Jet2& Jet2::operator-=(cplx s) {
    coeffs_[0] -= s;
    return *this;
}

Jet2& Jet2::operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

Jet2& Jet2::operator/=(cplx s) {
    for (auto& c : coeffs_) c /= s;
    return *this;
}

Jet2 Jet2::operator-() const {
    Jet2 r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    a.require_compatible(b);
    const int m = a.order_;
    Jet2 r(a.base_, m);
    for (int n1 = 0; n1 <= m; ++n1) {
        for (int j1 = 0; j1 <= n1; ++j1) {
            const cplx ca = a.coeffs_[Jet2::index(n1 - j1, j1)];
            if (ca == cplx{}) continue;
            for (int n2 = 0; n1 + n2 <= m; ++n2) {
                const std::size_t out_row = Jet2::index(n1 + n2 - j1, j1);  // index(i1+i2, j1+0)
                const std::size_t in_row = Jet2::index(n2, 0);
                for (int j2 = 0; j2 <= n2; ++j2) r.coeffs_[out_row + static_cast<std::size_t>(j2)] += ca * b.coeffs_[in_row + static_cast<std::size_t>(j2)];
            }
        }
    }
    return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

Jet2 operator/(cplx s, const Jet2& a) { return reciprocal(a) * s; }

Jet2 jet_add(const Jet2& a, const Jet2& b) { return a + b; }

Jet2 jet_mul(const Jet2& a, const Jet2& b) { return a * b; }

Jet2 jet_compose(const Series1& f, const Jet2& u) {
    const cplx u0 = u.value();
    if (std::abs(f.center() - u0) > 1e-12 * (1.0 + std::abs(u0)))
        throw StructuralError("jet_compose: series center does not match u(base)");
    const int m = std::min(f.order(), u.order());
    Jet2 du = u.truncated(m);
    du -= u0;
    Jet2 r = Jet2::constant(u.base(), m, f[m]);
    for (int n = m - 1; n >= 0; --n) {
        r = r * du;
        r += f[n];
    }
    return r;
}

Jet2 jet_directional(Direction d, const Jet2& a) {
    if (a.order() < 1) throw StructuralError("jet_directional: order-0 jet");
    const int m = a.order() - 1;
    Jet2 r(a.base(), m);
    for (int n = 0; n <= m; ++n) {
        for (int j = 0; j <= n; ++j) {
            const int i = n - j;
            r(i, j) = d.dx * static_cast<double>(i + 1) * a(i + 1, j) + d.dy * static_cast<double>(j + 1) * a(i, j + 1);
        }
    }
    return r;
}

Jet2 partial_x(const Jet2& a) { return jet_directional({1.0, 0.0}, a); }

Jet2 partial_y(const Jet2& a) { return jet_directional({0.0, 1.0}, a); }

Jet2 jet_affine_pullback(const Jet2& a, const std::array<cplx, 4>& linear, Point new_base) {
    const int m = a.order();
    // (x - x0) and (y - y0) as jets in the new coordinates.
    const Jet2 hx = Jet2::affine(new_base, m, linear[0], linear[1], -(linear[0] * new_base.x + linear[1] * new_base.y));
    const Jet2 hy = Jet2::affine(new_base, m, linear[2], linear[3], -(linear[2] * new_base.x + linear[3] * new_base.y));
    std::vector<Jet2> ypow{Jet2::constant(new_base, m, 1.0)};
    for (int j = 1; j <= m; ++j) ypow.push_back(ypow.back() * hy);
    Jet2 r(new_base, m);
    Jet2 xpow = Jet2::constant(new_base, m, 1.0);
    for (int i = 0; i <= m; ++i) {
        Jet2 column(new_base, m);
        for (int j = 0; i + j <= m; ++j) {
            const cplx c = a(i, j);
            if (c != cplx{}) column += ypow[static_cast<std::size_t>(j)] * c;
        }
        r += xpow * column;
        if (i < m) xpow = xpow * hx;
    }
    return r;
}

Jet2 exp(const Jet2& u) { return jet_compose(series::exp(u.value(), u.order()), u); }
Jet2 log(const Jet2& u) { return jet_compose(series::log(u.value(), u.order()), u); }
Jet2 sin(const Jet2& u) { return jet_compose(series::sin(u.value(), u.order()), u); }
Jet2 cos(const Jet2& u) { return jet_compose(series::cos(u.value(), u.order()), u); }
Jet2 sinh(const Jet2& u) { return jet_compose(series::sinh(u.value(), u.order()), u); }
Jet2 cosh(const Jet2& u) { return jet_compose(series::cosh(u.value(), u.order()), u); }
Jet2 tanh(const Jet2& u) { return jet_compose(series::tanh(u.value(), u.order()), u); }
Jet2 sqrt(const Jet2& u) { return jet_compose(series::sqrt(u.value(), u.order()), u); }
Jet2 reciprocal(const Jet2& u) { return jet_compose(series::reciprocal(u.value(), u.order()), u); }
Jet2 pow(const Jet2& u, int p) { return jet_compose(series::power(u.value(), u.order(), p), u); }

// ---------------------------------------------------------------------------
// Operator calculus
// ---------------------------------------------------------------------------

OperatorExpansion operator_coefficients(const Jet2& u, std::span<const Direction> directions) {
    const int p = static_cast<int>(directions.size());
    if (p < 1) throw StructuralError("operator_coefficients: no directions");
    if (u.order() < p + 1)
        throw StructuralError("operator_coefficients: jet order " + std::to_string(u.order()) + " < p + 1 = " +
                              std::to_string(p + 1));

    // terms[k] holds the coefficient of f^(k)(u); start from f(u) itself.
    std::map<int, Jet2> terms;
    terms.emplace(0, Jet2::constant(u.base(), u.order(), 1.0));
    int current = u.order();
    for (auto it = directions.rbegin(); it != directions.rend(); ++it) {
        const int next = current - 1;
        const Jet2 xu = jet_directional(*it, u).truncated(next);
        std::map<int, Jet2> updated;
        auto accumulate = [&](int k, const Jet2& j) {
            auto [pos, inserted] = updated.try_emplace(k, j);
            if (!inserted) pos->second += j;
        };
        for (const auto& [k, a] : terms) {
            accumulate(k + 1, a.truncated(next) * xu);
            accumulate(k, jet_directional(*it, a));
        }
        terms = std::move(updated);
        current = next;
    }

    OperatorExpansion out;
    for (int k = 1; k <= p; ++k) {
        auto pos = terms.find(k);
        out.terms.emplace(k, pos != terms.end() ? pos->second : Jet2(u.base(), current));
    }
    return out;
}

}  // namespace websmith
