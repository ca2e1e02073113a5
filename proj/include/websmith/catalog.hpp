#pragma once

// Named exceptional webs, their closed-form abelian relations, and numerical
// checks of the classical identities behind them.

#include <websmith/special.hpp>
#include <websmith/webs.hpp>

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace websmith {

enum class RelationForm { Additive, Multiplicative };

std::string form_name(RelationForm form);

/// A relation lhs = rhs whose terms each depend on one defining function.
/// Multiplicative relations are stored cleared of denominators, so both
/// sides are plain products.
struct KnownRelation {
    std::string name;
    std::string text;
    RelationForm form = RelationForm::Additive;
    /// Both sides from the foliation values u_j(p), in web order.
    std::function<std::pair<cplx, cplx>(const std::vector<cplx>&)> sides;
};

struct NamedWeb {
    std::string id;
    Web web;
    std::vector<KnownRelation> known_relations;
    std::optional<cplx> modulus;  // Family and QuarticModel
    std::optional<cplx> tau;      // Family given by tau
};

struct CatalogParams {
    std::optional<cplx> k;
    std::optional<cplx> tau;
    std::optional<Point> base;
};

/// T0, Bol, Family, A..E, SigmaA..SigmaE, QuarticModel.
std::vector<std::string> catalog_ids();
std::string catalog_description(const std::string& id);

/// Case-insensitive id. Family takes k (default 0.5) or tau; QuarticModel
/// takes k. Throws StructuralError for unknown ids and DomainError for
/// k^2 in {0, 1} or Im tau too small.
NamedWeb make_named_web(const std::string& id, const CatalogParams& params = {});

/// Disc of radius 0.1 around the base (0.02 for Bol, whose singular line
/// x = y passes 0.1 away), 64 quasi-random points.
std::vector<Point> validation_samples(const NamedWeb& nw);

struct RelationResidual {
    std::string name;
    std::string text;
    RelationForm form = RelationForm::Additive;
    double residual = 0.0;  // max |lhs - rhs|
    int used = 0;           // samples where both sides were finite
};

/// Max absolute residual per relation. Samples where a side cannot be
/// evaluated are skipped; NumericalError when no sample is usable.
std::vector<RelationResidual> verify_relations(const NamedWeb& nw, const std::vector<Point>& samples);

nlohmann::json to_json(const NamedWeb& nw);

// ---------------------------------------------------------------------------
// sigma variants
// ---------------------------------------------------------------------------

/// Dilatation D with u_X o sigma o D = phi(u_sigma), for X in A..E and
/// Family (whose sigma variant is (dn - k cn)(x) / (dn - k cn)(y)).
Symmetry sigma_normalization(const std::string& id);

/// Fifth foliation of the sigma variant of Family at modulus k.
Foliation family_sigma_foliation(cplx k);

// ---------------------------------------------------------------------------
// Quartic model
// ---------------------------------------------------------------------------

struct QuarticRoots {
    cplx u_plus, u_minus;
    cplx a_xi_eta, a_eta_xi;  // A(xi, eta), A(eta, xi)
};

/// A(xi, eta) = xi (1 - eta)(1 - k^2 eta) / (1 - k^2 xi eta)^2.
cplx quartic_a(cplx xi, cplx eta, cplx k);

/// Roots of (1 - k^2 xi eta)^2 t^2 - 2 (A-numerators) t + (xi - eta)^2.
/// u_plus comes from B + sqrt(D); the smaller-magnitude root uses Vieta.
QuarticRoots quartic_roots(cplx xi, cplx eta, cplx k);

// ---------------------------------------------------------------------------
// Limits
// ---------------------------------------------------------------------------

struct LimitPoint {
    double parameter = 0.0;
    double deviation = 0.0;
};

struct LimitReport {
    std::vector<LimitPoint> exponential;    // 2 e^{-k}(cosh(x+k) + cosh(y+k)) vs e^x + e^y
    std::vector<LimitPoint> epsilon_plus;   // 2 eps^{-2}((cosh eps x - 1) + (cosh eps y - 1)) vs x^2 + y^2
    std::vector<LimitPoint> epsilon_minus;  // same with -, vs x^2 - y^2
    double exponential_order = 0.0;         // fitted a in deviation ~ e^{-a k}
    double epsilon_order = 0.0;             // fitted p in deviation ~ eps^p
    double sn_to_sin = 0.0;                 // max |sn_k - sin|, k = 1e-4
    double sn_to_tanh = 0.0;                // max |sn_k - tanh|, k = 1 - 1e-6
};

/// Deviations on the real box |x|, |y| <= 1.
double exponential_limit_deviation(double k);
double epsilon_limit_deviation(double eps, int sign);
double sn_limit_deviation(double k, bool to_tanh);

/// Exponential limit at k in {5, 7.5, ..., 15}, eps in {1e-3, ..., 1e-2}.
LimitReport family_limit_checks();

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

struct IdentityResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    int samples = 0;
    bool passed() const noexcept { return residual < tolerance; }
};

struct IdentityOptions {
    std::vector<double> moduli{0.3, 0.5, 0.8};
    int points = 200;
    unsigned long seed = 0;
    std::optional<std::string> only;
};

/// Theta evaluator with theta_3 scaled by (1 + eps).
ThetaFunction perturbed_theta(double eps);

/// Names accepted by IdentityOptions::only.
std::vector<std::string> identity_names();

/// Classical theta and Jacobi identities, evaluated through `th` so a
/// perturbed evaluator shows up as failures. Jacobi functions are formed
/// from theta quotients of `th`.
std::vector<IdentityResult> identity_suite(const ThetaFunction& th, const IdentityOptions& options = {});

}  // namespace websmith
