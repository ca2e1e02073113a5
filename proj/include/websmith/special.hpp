#pragma once

// Theta functions, Jacobi elliptic functions and modulus/nome conversions.
//
//   theta_1(x, tau) = -i sum_n (-1)^n q^{(n+1/2)^2} e^{i(2n+1)x}
//   theta_2(x, tau) =    sum_n        q^{(n+1/2)^2} e^{i(2n+1)x}
//   theta_3(x, tau) =    sum_n        q^{n^2}       e^{2inx}
//   theta_4(x, tau) =    sum_n (-1)^n q^{n^2}       e^{2inx}
//
// with q = e^{i pi tau}. The modulus is k = theta_2(0)^2 / theta_3(0)^2 and
//   sn_k x = (theta_3/theta_2) theta_1(z)/theta_4(z),
//   cn_k x = (theta_4/theta_2) theta_2(z)/theta_4(z),
//   dn_k x = (theta_4/theta_3) theta_3(z)/theta_4(z),   z = x / theta_3(0)^2.

#include <websmith/jets.hpp>

#include <functional>

namespace websmith {

/// Smallest admissible Im(tau); below it theta evaluation refuses.
inline constexpr double kTauMin = 0.05;

/// theta_i(x, tau), i in 1..4.
cplx theta(int index, cplx x, cplx tau);

/// Taylor series of theta_i(., tau) at x, to the given order (term-wise
/// differentiation of the q-series).
Series1 theta_series(int index, cplx x, cplx tau, int order);

/// Signature of a theta evaluator; lets identity checks run against a
/// deliberately perturbed implementation.
using ThetaFunction = std::function<cplx(int, cplx, cplx)>;

class EllipticContext {
public:
    static EllipticContext from_tau(cplx tau);
    static EllipticContext from_k(cplx k);

    cplx tau() const noexcept { return tau_; }
    cplx nome() const noexcept { return q_; }
    cplx theta2_null() const noexcept { return theta2_; }
    cplx theta3_null() const noexcept { return theta3_; }
    cplx theta4_null() const noexcept { return theta4_; }
    cplx k() const noexcept { return k_; }
    cplx k_prime() const noexcept { return k_prime_; }
    /// Quarter period K = (pi/2) theta_3(0)^2.
    cplx quarter_period() const noexcept;
    /// Translation T with k sn(x + T) sn(x) = 1 for all x.
    cplx half_period_T() const noexcept { return half_period_T_; }

private:
    EllipticContext() = default;
    void solve_half_period();

    cplx tau_{};
    cplx q_{};
    cplx theta2_{};
    cplx theta3_{};
    cplx theta4_{};
    cplx k_{};
    cplx k_prime_{};
    cplx half_period_T_{};
};

inline EllipticContext context_from_tau(cplx tau) { return EllipticContext::from_tau(tau); }
inline EllipticContext context_from_k(cplx k) { return EllipticContext::from_k(k); }

/// k(tau) = theta_2(0)^2 / theta_3(0)^2.
cplx modulus_from_tau(cplx tau);

enum class JacobiKind { sn, cn, dn };

cplx jacobi(JacobiKind fn, cplx x, const EllipticContext& ctx);
Series1 jacobi_jet(JacobiKind fn, cplx x, const EllipticContext& ctx, int order);

inline cplx sn(cplx x, const EllipticContext& ctx) { return jacobi(JacobiKind::sn, x, ctx); }
inline cplx cn(cplx x, const EllipticContext& ctx) { return jacobi(JacobiKind::cn, x, ctx); }
inline cplx dn(cplx x, const EllipticContext& ctx) { return jacobi(JacobiKind::dn, x, ctx); }

/// Arithmetic-geometric mean, choosing the square-root branch closest to the
/// arithmetic mean at each step.
cplx agm(cplx a, cplx b);

}  // namespace websmith
