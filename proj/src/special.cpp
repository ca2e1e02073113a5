#include <websmith/special.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace websmith {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesRelTol = 1e-18;
constexpr int kMaxTerms = 200;
const cplx kI{0.0, 1.0};

void require_tau(cplx tau) {
    if (!(tau.imag() > kTauMin))
        throw DomainError("theta: Im(tau) = " + std::to_string(tau.imag()) + " is not above " + std::to_string(kTauMin));
}

// One summand of the q-series, as (coefficient exponent, frequency): the
// term is sign * exp(i pi tau e + i w x).
struct Term {
    double sign;
    double exponent;  // (n + 1/2)^2 or n^2
    double frequency; // 2n + 1 or 2n
};

Term term(int index, int n) {
    switch (index) {
    case 1: return {(n % 2 == 0) ? 1.0 : -1.0, (n + 0.5) * (n + 0.5), 2.0 * n + 1.0};
    case 2: return {1.0, (n + 0.5) * (n + 0.5), 2.0 * n + 1.0};
    case 3: return {1.0, static_cast<double>(n) * n, 2.0 * n};
    case 4: return {(n % 2 == 0) ? 1.0 : -1.0, static_cast<double>(n) * n, 2.0 * n};
    default: throw DomainError("theta: index must be 1..4");
    }
}

}  // namespace

Series1 theta_series(int index, cplx x, cplx tau, int order) {
    require_tau(tau);
    if (index < 1 || index > 4) throw DomainError("theta: index must be 1..4");

    Series1 s(x, order);
    std::vector<double> inv_fact(static_cast<std::size_t>(order + 1), 1.0);
    for (int j = 1; j <= order; ++j) inv_fact[static_cast<std::size_t>(j)] = inv_fact[static_cast<std::size_t>(j - 1)] / j;

    double scale = 0.0;
    int quiet = 0;
    auto add = [&](int n) {
        const Term t = term(index, n);
        const cplx base = t.sign * std::exp(kI * kPi * tau * t.exponent + kI * t.frequency * x);
        const cplx iw = kI * t.frequency;
        cplx p = 1.0;
        double weight = 0.0;
        for (int j = 0; j <= order; ++j) {
            const cplx c = base * p * inv_fact[static_cast<std::size_t>(j)];
            s[j] += c;
            weight = std::max(weight, std::abs(c));
            p *= iw;
        }
        return weight;
    };

    // Symmetric index range: n = 0, then the pairs (m, -m) or (m, -m - 1).
    const bool half = (index == 1 || index == 2);
    for (int m = 0; m < kMaxTerms; ++m) {
        double w = 0.0;
        if (half) {
            w += add(m);
            w += add(-m - 1);
        } else if (m == 0) {
            w += add(0);
        } else {
            w += add(m);
            w += add(-m);
        }
        scale = std::max(scale, w);
        quiet = (w < kSeriesRelTol * scale) ? quiet + 1 : 0;
        if (quiet >= 2) break;
    }
    if (index == 1) s *= -kI;
    return s;
}

cplx theta(int index, cplx x, cplx tau) { return theta_series(index, x, tau, 0)[0]; }

cplx modulus_from_tau(cplx tau) {
    const cplx t2 = theta(2, 0.0, tau), t3 = theta(3, 0.0, tau);
    return t2 * t2 / (t3 * t3);
}

cplx agm(cplx a, cplx b) {
    for (int it = 0; it < 100; ++it) {
        const cplx a1 = 0.5 * (a + b);
        cplx b1 = std::sqrt(a * b);
        if (std::abs(a1 - b1) > std::abs(a1 + b1)) b1 = -b1;
        a = a1;
        b = b1;
        if (std::abs(a - b) <= 1e-16 * std::abs(a)) break;
    }
    return a;
}

// ---------------------------------------------------------------------------
// EllipticContext
// ---------------------------------------------------------------------------

cplx EllipticContext::quarter_period() const noexcept { return 0.5 * kPi * theta3_ * theta3_; }

EllipticContext EllipticContext::from_tau(cplx tau) {
    require_tau(tau);
    EllipticContext c;
    c.tau_ = tau;
    c.q_ = std::exp(kI * kPi * tau);
    c.theta2_ = theta(2, 0.0, tau);
    c.theta3_ = theta(3, 0.0, tau);
    c.theta4_ = theta(4, 0.0, tau);
    const cplx t3sq = c.theta3_ * c.theta3_;
    c.k_ = c.theta2_ * c.theta2_ / t3sq;
    c.k_prime_ = c.theta4_ * c.theta4_ / t3sq;
    c.solve_half_period();
    return c;
}

EllipticContext EllipticContext::from_k(cplx k) {
    const cplx k2 = k * k;
    if (std::abs(k2) < 1e-14 || std::abs(k2 - 1.0) < 1e-14)
        throw DomainError("elliptic modulus must satisfy k^2 != 0, 1");

    // Initial guess tau = i K'/K from the AGM; Newton on k(tau) - k refines it
    // (and handles complex moduli).
    cplx kp = std::sqrt(1.0 - k2);
    if (kp.real() < 0.0) kp = -kp;
    const cplx big_k = kPi / (2.0 * agm(1.0, kp));
    const cplx big_kp = kPi / (2.0 * agm(1.0, k));
    cplx tau = kI * big_kp / big_k;
    if (tau.imag() <= kTauMin) tau = cplx(tau.real(), 2.0 * kTauMin);
    // k(tau + 2) = -k(tau).
    if (std::abs(modulus_from_tau(tau) + k) < std::abs(modulus_from_tau(tau) - k)) tau += 2.0;

    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        const cplx f = modulus_from_tau(tau) - k;
        if (std::abs(f) < 1e-14 * (1.0 + std::abs(k))) {
            converged = true;
            break;
        }
        const double h = 1e-6 * std::max(1.0, std::abs(tau));
        const cplx df = (modulus_from_tau(tau + h) - modulus_from_tau(tau - h)) / (2.0 * h);
        cplx step = f / df;
        // Damp steps that would leave the admissible half-plane.
        while ((tau - step).imag() <= kTauMin && std::abs(step) > 1e-16) step *= 0.5;
        tau -= step;
        if (std::abs(step) < 1e-15 * std::abs(tau)) {
            converged = std::abs(modulus_from_tau(tau) - k) < 1e-10 * (1.0 + std::abs(k));
            break;
        }
    }
    if (!converged) throw ConvergenceError("context_from_k: modulus inversion did not converge");
    return from_tau(tau);
}

void EllipticContext::solve_half_period() {
    // Exact value is (pi/2) tau theta_3^2 = tau K; the guess below agrees with it
    // on the imaginary axis and Newton takes care of the rest.
    const cplx x0{0.3711, 0.1173};
    const cplx sn0 = sn(x0, *this);
    auto solve = [&](cplx t) {
        for (int it = 0; it < 50; ++it) {
            const cplx s = sn(x0 + t, *this);
            const cplx g = k_ * s * sn0 - 1.0;
            const cplx dg = k_ * sn0 * cn(x0 + t, *this) * dn(x0 + t, *this);
            const cplx step = g / dg;
            t -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
        }
        return t;
    };
    auto valid = [&](cplx t) {
        static constexpr std::array<cplx, 10> probes{cplx{0.11, 0.02}, cplx{0.27, -0.05}, cplx{-0.33, 0.08},
                                                     cplx{0.52, 0.13},  cplx{0.71, -0.09}, cplx{-0.64, -0.11},
                                                     cplx{0.05, 0.31},  cplx{0.43, 0.27},  cplx{-0.19, -0.24},
                                                     cplx{0.88, 0.04}};
        for (const cplx x : probes) {
            try {
                if (std::abs(k_ * sn(x + t, *this) * sn(x, *this) - 1.0) > 1e-9) return false;
            } catch (const PoleError&) {
                return false;
            }
        }
        return true;
    };

    const cplx t3sq = theta3_ * theta3_;
    for (const cplx guess : {kI * tau_.imag() * t3sq * kPi / 2.0, tau_ * t3sq * kPi / 2.0}) {
        try {
            const cplx t = solve(guess);
            if (valid(t)) {
                half_period_T_ = t;
                return;
            }
        } catch (const PoleError&) {
        }
    }
    throw ConvergenceError("EllipticContext: could not determine the translation T");
}

// ---------------------------------------------------------------------------
// Jacobi functions
// ---------------------------------------------------------------------------

namespace {

int numerator_theta(JacobiKind fn) {
    switch (fn) {
    case JacobiKind::sn: return 1;
    case JacobiKind::cn: return 2;
    case JacobiKind::dn: return 3;
    }
    return 1;
}

cplx prefactor(JacobiKind fn, const EllipticContext& ctx) {
    switch (fn) {
    case JacobiKind::sn: return ctx.theta3_null() / ctx.theta2_null();
    case JacobiKind::cn: return ctx.theta4_null() / ctx.theta2_null();
    case JacobiKind::dn: return ctx.theta4_null() / ctx.theta3_null();
    }
    return 1.0;
}

}  // namespace

cplx jacobi(JacobiKind fn, cplx x, const EllipticContext& ctx) {
    const cplx z = x / (ctx.theta3_null() * ctx.theta3_null());
    const cplx num = theta(numerator_theta(fn), z, ctx.tau());
    const cplx den = theta(4, z, ctx.tau());
    const double scale = std::max({std::abs(theta(1, z, ctx.tau())), std::abs(theta(2, z, ctx.tau())),
                                   std::abs(theta(3, z, ctx.tau())), std::abs(den)});
    if (std::abs(den) <= 1e-13 * scale) throw PoleError("Jacobi function pole", x);
    return prefactor(fn, ctx) * num / den;
}

Series1 jacobi_jet(JacobiKind fn, cplx x, const EllipticContext& ctx, int order) {
    const cplx t3sq = ctx.theta3_null() * ctx.theta3_null();
    const cplx z = x / t3sq;
    Series1 num = theta_series(numerator_theta(fn), z, ctx.tau(), order);
    Series1 den = theta_series(4, z, ctx.tau(), order);
    const double scale = std::max(std::abs(num[0]), std::abs(den[0]));
    if (std::abs(den[0]) <= 1e-13 * std::max(scale, std::abs(theta(1, z, ctx.tau()))))
        throw PoleError("Jacobi function pole", x);
    // Series in (z - z0) -> series in (x - x0): coefficient j picks up theta_3^{-2j}.
    std::vector<cplx> n(static_cast<std::size_t>(order + 1)), d(static_cast<std::size_t>(order + 1));
    cplx f = 1.0;
    for (int j = 0; j <= order; ++j) {
        n[static_cast<std::size_t>(j)] = num[j] * f;
        d[static_cast<std::size_t>(j)] = den[j] * f;
        f /= t3sq;
    }
    Series1 out = Series1(x, std::move(n)) / Series1(x, std::move(d));
    out *= prefactor(fn, ctx);
    return out;
}

}  // namespace websmith
