#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <websmith/jets.hpp>

#include <cmath>
#include <random>

using namespace websmith;

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// k-th derivative of sin at t, closed form.
double dsin(int k, double t) { return std::sin(t + k * M_PI / 2.0); }

Jet2 random_jet(std::mt19937_64& rng, Point base, int order) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Jet2 j(base, order);
    for (int n = 0; n <= order; ++n)
        for (int i = 0; i <= n; ++i) j(n - i, i) = cplx(u(rng), u(rng));
    return j;
}

double jet_distance(const Jet2& a, const Jet2& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.raw().size(); ++i) d = std::max(d, std::abs(a.raw()[i] - b.raw()[i]));
    return d;
}

}  // namespace

TEST_CASE("sum of separable functions matches closed-form Taylor coefficients") {
    const Point p{0.3, 0.17};
    const int m = 4;
    const Jet2 u = sin(Jet2::variable_x(p, m)) + sin(Jet2::variable_y(p, m));
    for (int n = 0; n <= m; ++n) {
        for (int j = 0; j <= n; ++j) {
            const int i = n - j;
            double expected = 0.0;
            if (j == 0) expected += dsin(i, 0.3) / factorial(i);
            if (i == 0) expected += dsin(j, 0.17) / factorial(j);
            if (i == 0 && j == 0) expected = std::sin(0.3) + std::sin(0.17);
            CHECK(std::abs(u(i, j) - expected) < 1e-14);
        }
    }
}

TEST_CASE("product jet matches product of Taylor coefficients") {
    const Point p{0.3, 0.17};
    const int m = 6;
    const Jet2 u = sin(Jet2::variable_x(p, m)) * sin(Jet2::variable_y(p, m));
    for (int n = 0; n <= m; ++n)
        for (int j = 0; j <= n; ++j) {
            const int i = n - j;
            const double expected = dsin(i, 0.3) / factorial(i) * dsin(j, 0.17) / factorial(j);
            CHECK(std::abs(u(i, j) - expected) < 1e-13);
        }
}

TEST_CASE("composition exp(x + y)") {
    const Point p{0.1, 0.2};
    const int m = 8;
    const Jet2 u = exp(Jet2::affine(p, m, 1.0, 1.0));
    for (int n = 0; n <= m; ++n)
        for (int j = 0; j <= n; ++j) {
            const int i = n - j;
            const double expected = std::exp(0.3) / (factorial(i) * factorial(j));
            CHECK(std::abs(u(i, j) - expected) < 1e-12);
        }
}

TEST_CASE("directional derivative of sin x sin y along (1, -1)") {
    // (d/dx - d/dy)(sin x sin y) = cos x sin y - sin x cos y = sin(y - x).
    const Point p{0.3, 0.17};
    const int m = 6;
    const Jet2 u = sin(Jet2::variable_x(p, m)) * sin(Jet2::variable_y(p, m));
    const Jet2 d = jet_directional({1.0, -1.0}, u);
    const Jet2 expected = sin(Jet2::affine(p, m - 1, -1.0, 1.0));
    CHECK(d.order() == m - 1);
    CHECK(jet_distance(d, expected) < 1e-13);
}

TEST_CASE("series helpers agree with closed forms") {
    const cplx c{0.4, 0.1};
    const Series1 t = series::tanh(c, 5);
    CHECK(std::abs(t[0] - std::tanh(c)) < 1e-15);
    CHECK(std::abs(t[1] - (1.0 - std::tanh(c) * std::tanh(c))) < 1e-14);
    const Series1 l = series::log(c, 4);
    CHECK(std::abs(l[3] - 1.0 / (3.0 * c * c * c)) < 1e-12);
    const Series1 s = series::sqrt(c, 3);
    CHECK(std::abs(s[2] - (-0.125 * std::pow(c, -1.5))) < 1e-13);
    const Series1 q = s * s;
    CHECK(std::abs(q[0] - c) < 1e-15);
    CHECK(std::abs(q[1] - 1.0) < 1e-14);
    CHECK(std::abs(q[2]) < 1e-14);
    CHECK_THROWS_AS(series::exp(c, 3) + series::exp(0.0, 3), StructuralError);
    CHECK_THROWS_AS(Series1::identity(0.0, 3) / Series1::identity(0.0, 3), PoleError);
}

TEST_CASE("structural errors on incompatible jets") {
    const Jet2 a = Jet2::variable_x({0.1, 0.2}, 4);
    const Jet2 b = Jet2::variable_x({0.1, 0.3}, 4);
    const Jet2 c = Jet2::variable_x({0.1, 0.2}, 3);
    CHECK_THROWS_AS(a + b, StructuralError);
    CHECK_THROWS_AS(a * c, StructuralError);
    CHECK_THROWS_AS(jet_compose(series::exp(0.5, 4), a), StructuralError);
}

TEST_CASE("ring axioms on random jets") {
    std::mt19937_64 rng(20240611);
    const Point p{0.2, -0.4};
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + trial % 8;
        const Jet2 a = random_jet(rng, p, m), b = random_jet(rng, p, m), c = random_jet(rng, p, m);
        CHECK(jet_distance(a * b, b * a) < 1e-13);
        CHECK(jet_distance((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(jet_distance(a * (b + c), a * b + a * c) < 1e-12);
        CHECK(jet_distance(a + b, jet_add(b, a)) == 0.0);
    }
}

TEST_CASE("quotient inverts product") {
    std::mt19937_64 rng(7);
    const Point p{0.0, 0.5};
    for (int trial = 0; trial < 50; ++trial) {
        const Jet2 a = random_jet(rng, p, 6);
        Jet2 b = random_jet(rng, p, 6);
        b(0, 0) += 3.0;
        CHECK(jet_distance((a * b) / b, a) < 1e-12);
    }
}

TEST_CASE("evaluate reproduces truncated Taylor polynomial") {
    const Point p{0.1, 0.2};
    const Jet2 u = exp(Jet2::affine(p, 12, 1.0, 1.0));
    const Point q{0.13, 0.18};
    CHECK(std::abs(u.evaluate(q) - std::exp(0.31)) < 1e-15);
}

TEST_CASE("affine pullback agrees with composing the map") {
    const Point p{0.3, 0.17};
    const int m = 7;
    const Jet2 u = sin(Jet2::variable_x(p, m)) * exp(Jet2::variable_y(p, m));
    // g(X, Y) = (2X - Y + 0.1, X + 3Y - 0.2); choose the new base so g(base) = p.
    const std::array<cplx, 4> lin{2.0, -1.0, 1.0, 3.0};
    const cplx t0 = 0.1, t1 = -0.2;
    // Solve [2 -1; 1 3] (X, Y) = (0.2, 0.37).
    const cplx det = 7.0;
    const cplx X = (3.0 * (p.x - t0) + 1.0 * (p.y - t1)) / det;
    const cplx Y = (-1.0 * (p.x - t0) + 2.0 * (p.y - t1)) / det;
    const Point nb{X, Y};
    const Jet2 pulled = jet_affine_pullback(u, lin, nb);
    const Jet2 gx = Jet2::affine(nb, m, 2.0, -1.0, t0);
    const Jet2 gy = Jet2::affine(nb, m, 1.0, 3.0, t1);
    const Jet2 direct = sin(gx) * exp(gy);
    CHECK(jet_distance(pulled, direct) < 1e-12);
}

TEST_CASE("operator coefficients for two directions") {
    // X1 = d/dy, X2 = d/dx on f(u): X1 X2 f(u) = u_x u_y f'' + u_xy f'.
    const Point p{0.3, 0.17};
    const Jet2 u = sin(Jet2::variable_x(p, 6)) * exp(Jet2::variable_y(p, 6));
    const std::array<Direction, 2> dirs{Direction{0.0, 1.0}, Direction{1.0, 0.0}};
    const OperatorExpansion ex = operator_coefficients(u, dirs);
    CHECK(ex.top_order() == 2);
    const Jet2 ux = partial_x(u), uy = partial_y(u);
    const Jet2 a2 = ux.truncated(4) * uy.truncated(4);
    const Jet2 a1 = partial_y(ux).truncated(4);
    CHECK(jet_distance(ex.coefficient(2), a2) < 1e-13);
    CHECK(jet_distance(ex.coefficient(1), a1) < 1e-13);
}

TEST_CASE("operator coefficients for separable u with four harmonic directions") {
    // u = v(x) + w(y): the mixed operator annihilates f' terms below the top.
    const Point p{0.3, 0.17};
    const Jet2 u = sin(Jet2::variable_x(p, 8)) + cosh(Jet2::variable_y(p, 8));
    const std::array<Direction, 4> dirs{Direction{0.0, 1.0}, Direction{1.0, 0.0}, Direction{1.0, -1.0},
                                        Direction{1.0, 1.0}};
    const OperatorExpansion ex = operator_coefficients(u, dirs);
    CHECK(ex.top_order() == 4);
    // Top coefficient: product of X_k u.
    const double vx = std::cos(0.3), wy = std::sinh(0.17);
    const double top = wy * vx * (vx - wy) * (vx + wy);
    CHECK(std::abs(ex.coefficient(4).value() - top) < 1e-13);
    CHECK(ex.coefficient(1).order() == 4);
}
