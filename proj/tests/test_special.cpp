#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <websmith/special.hpp>

#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <cmath>
#include <numbers>

using namespace websmith;

namespace {

const cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Jacobi triple product forms, independent of the Fourier series.
cplx theta3_product(cplx x, cplx tau) {
    const cplx q = std::exp(I * kPi * tau);
    cplx p = 1.0;
    cplx q2n = 1.0;
    for (int n = 1; n < 400; ++n) {
        q2n *= q * q;
        const cplx qodd = q2n / q;
        p *= (1.0 - q2n) * (1.0 + 2.0 * qodd * std::cos(2.0 * x) + qodd * qodd);
        if (std::abs(qodd) < 1e-18) break;
    }
    return p;
}

cplx theta1_product(cplx x, cplx tau) {
    const cplx q = std::exp(I * kPi * tau);
    cplx p = 2.0 * std::exp(I * kPi * tau / 4.0) * std::sin(x);
    cplx q2n = 1.0;
    for (int n = 1; n < 400; ++n) {
        q2n *= q * q;
        p *= (1.0 - q2n) * (1.0 - 2.0 * q2n * std::cos(2.0 * x) + q2n * q2n);
        if (std::abs(q2n) < 1e-18) break;
    }
    return p;
}

// Taylor coefficient n of f at x0 via the trapezoid rule on a circle.
template <typename F>
cplx cauchy_coefficient(F f, cplx x0, int n, double radius, int points = 256) {
    cplx sum = 0.0;
    for (int k = 0; k < points; ++k) {
        const cplx w = std::exp(I * (2.0 * kPi * k / points));
        sum += f(x0 + radius * w) * std::pow(w, -n);
    }
    return sum / (static_cast<double>(points) * std::pow(radius, n));
}

}  // namespace

TEST_CASE("theta null value at tau = i") {
    // theta_3(0, i) = pi^{1/4} / Gamma(3/4)
    const double expected = std::pow(kPi, 0.25) / std::tgamma(0.75);
    CHECK(std::abs(theta(3, 0.0, I) - expected) < 1e-14);
    CHECK(std::abs(expected - 1.0864348112133080) < 1e-15);
}

TEST_CASE("theta series agree with triple products") {
    for (const cplx tau : {cplx{0.0, 1.0}, cplx{0.3, 0.8}, cplx{-0.2, 0.4}, cplx{0.1, 2.5}}) {
        for (const cplx x : {cplx{0.1, 0.0}, cplx{0.37, 0.2}, cplx{-1.1, -0.3}}) {
            CHECK(std::abs(theta(3, x, tau) - theta3_product(x, tau)) < 1e-13 * (1.0 + std::abs(theta3_product(x, tau))));
            CHECK(std::abs(theta(1, x, tau) - theta1_product(x, tau)) < 1e-13 * (1.0 + std::abs(theta1_product(x, tau))));
        }
    }
}

TEST_CASE("Jacobi identity theta_3^4 = theta_2^4 + theta_4^4") {
    for (const cplx tau : {cplx{0.0, 1.0}, cplx{0.25, 0.6}, cplx{0.0, 0.2}}) {
        const cplx t2 = theta(2, 0.0, tau), t3 = theta(3, 0.0, tau), t4 = theta(4, 0.0, tau);
        CHECK(std::abs(std::pow(t3, 4) - std::pow(t2, 4) - std::pow(t4, 4)) < 1e-12 * std::abs(std::pow(t3, 4)));
    }
}

TEST_CASE("theta derivative series by contour quadrature") {
    const cplx tau{0.2, 0.9};
    const cplx x0{0.3, 0.1};
    const Series1 s = theta_series(2, x0, tau, 6);
    for (int n = 0; n <= 6; ++n) {
        const cplx c = cauchy_coefficient([&](cplx z) { return theta(2, z, tau); }, x0, n, 0.5);
        CHECK(std::abs(s[n] - c) < 1e-12);
    }
}

TEST_CASE("domain check on tau") {
    CHECK_THROWS_AS(theta(3, 0.0, cplx{0.0, 0.01}), DomainError);
    CHECK_THROWS_AS(context_from_tau(cplx{0.0, -1.0}), DomainError);
    CHECK_THROWS_AS(context_from_k(0.0), DomainError);
    CHECK_THROWS_AS(context_from_k(1.0), DomainError);
    CHECK_THROWS_AS(context_from_k(-1.0), DomainError);
}

TEST_CASE("sn, cn, dn against boost for real modulus") {
    for (const double k : {0.2, 0.6, 0.95}) {
        const EllipticContext ctx = context_from_k(k);
        CHECK(std::abs(ctx.k() - k) < 1e-14);
        for (const double x : {0.1, 0.5, 1.3, 2.7, -0.8}) {
            double cn_ref = 0.0, dn_ref = 0.0;
            const double sn_ref = boost::math::jacobi_elliptic(k, x, &cn_ref, &dn_ref);
            CHECK(std::abs(sn(x, ctx) - sn_ref) < 1e-13);
            CHECK(std::abs(cn(x, ctx) - cn_ref) < 1e-13);
            CHECK(std::abs(dn(x, ctx) - dn_ref) < 1e-13);
        }
    }
}

TEST_CASE("modulus round trip for tau = 1.3 i") {
    const EllipticContext a = context_from_tau(cplx{0.0, 1.3});
    const EllipticContext b = context_from_k(a.k());
    CHECK(std::abs(b.tau() - cplx{0.0, 1.3}) < 1e-12);
}

TEST_CASE("complex and negative moduli") {
    for (const cplx k : {cplx{0.5, 0.3}, cplx{-0.6, 0.0}, cplx{0.3, -0.7}, cplx{1.4, 0.2}}) {
        const EllipticContext ctx = context_from_k(k);
        CHECK(std::abs(ctx.k() - k) < 1e-12);
        const cplx x{0.21, 0.05};
        const cplx s = sn(x, ctx), c = cn(x, ctx), d = dn(x, ctx);
        CHECK(std::abs(s * s + c * c - 1.0) < 1e-12);
        CHECK(std::abs(k * k * s * s + d * d - 1.0) < 1e-12);
    }
}

TEST_CASE("half-period translation") {
    for (const cplx tau : {cplx{0.0, 1.0}, cplx{0.3, 0.7}, cplx{-0.4, 1.6}}) {
        const EllipticContext ctx = context_from_tau(tau);
        const cplx T = ctx.half_period_T();
        for (const cplx x : {cplx{0.3, 0.0}, cplx{-0.2, 0.1}, cplx{0.77, -0.05}}) {
            CHECK(std::abs(ctx.k() * sn(x + T, ctx) * sn(x, ctx) - 1.0) < 1e-10);
        }
    }
    const EllipticContext ctx = context_from_tau(I);
    CHECK(std::abs(ctx.half_period_T() - I * ctx.quarter_period()) < 1e-12);
}

TEST_CASE("pole detection") {
    const EllipticContext ctx = context_from_tau(I);
    CHECK_THROWS_AS(sn(ctx.half_period_T(), ctx), PoleError);
}

TEST_CASE("dn jet against contour quadrature") {
    const EllipticContext ctx = context_from_k(0.6);
    const cplx x0{0.4, 0.0};
    const Series1 s = jacobi_jet(JacobiKind::dn, x0, ctx, 6);
    for (int n = 0; n <= 6; ++n) {
        const cplx c = cauchy_coefficient([&](cplx z) { return dn(z, ctx); }, x0, n, 0.4);
        CHECK(std::abs(s[n] - c) < 1e-7);
        CHECK(std::abs(s[n] - c) < 1e-12);
    }
}

TEST_CASE("Jacobi derivatives and addition formulas") {
    const EllipticContext ctx = context_from_k(cplx{0.6, 0.1});
    const cplx k = ctx.k();
    const cplx x{0.31, 0.02}, y{-0.17, 0.04};
    const Series1 s = jacobi_jet(JacobiKind::sn, x, ctx, 2);
    CHECK(std::abs(s[1] - cn(x, ctx) * dn(x, ctx)) < 1e-13);
    const cplx sx = sn(x, ctx), cx = cn(x, ctx), dx = dn(x, ctx);
    const cplx sy = sn(y, ctx), cy = cn(y, ctx), dy = dn(y, ctx);
    const cplx den = 1.0 - k * k * sx * sx * sy * sy;
    CHECK(std::abs(sn(x + y, ctx) - (sx * cy * dy + sy * cx * dx) / den) < 1e-13);
    CHECK(std::abs(cn(x + y, ctx) - (cx * cy - sx * sy * dx * dy) / den) < 1e-13);
    CHECK(std::abs(dn(x + y, ctx) - (dx * dy - k * k * sx * sy * cx * cy) / den) < 1e-13);
}
