#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <websmith/catalog.hpp>
#include <websmith/criterion.hpp>
#include <websmith/rank.hpp>

#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <cmath>
#include <numbers>
#include <set>

using namespace websmith;

namespace {

struct Jacobi {
    double sn, cn, dn;
};

Jacobi boost_jacobi(double k, double x) {
    Jacobi j{};
    j.sn = boost::math::jacobi_elliptic(k, x, &j.cn, &j.dn);
    return j;
}

std::vector<Point> box_grid(double half, int n) {
    std::vector<Point> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.push_back({-half + 2.0 * half * i / (n - 1), -half + 2.0 * half * j / (n - 1)});
    return out;
}

double relation_residual_named(const NamedWeb& nw, const std::string& name, const std::vector<Point>& samples) {
    for (const RelationResidual& r : verify_relations(nw, samples))
        if (r.name == name) return r.residual;
    FAIL("missing relation " << name);
    return 0.0;
}

const Foliation& fifth(const NamedWeb& nw) { return nw.web.foliations()[4]; }

}  // namespace

TEST_CASE("catalog ids and descriptions") {
    CHECK(catalog_ids().size() == 14);
    for (const std::string& id : catalog_ids()) CHECK_FALSE(catalog_description(id).empty());
    CHECK_THROWS_AS(make_named_web("Z"), StructuralError);
    CHECK(make_named_web("bol").id == "Bol");
    CHECK(make_named_web("family").id == "Family");
}

TEST_CASE("named webs have the expected rank") {
    for (const std::string& id : catalog_ids()) {
        const NamedWeb nw = make_named_web(id);
        const RankReport r = rank_estimate(nw.web);
        CAPTURE(id);
        CHECK(r.stabilized);
        CHECK(r.rank == (id == "T0" ? 3 : 6));
        CHECK(nw.web.size() == (id == "T0" ? 4 : 5));
    }
    for (const double k : {0.3, 0.5, 0.8}) {
        CAPTURE(k);
        CHECK(rank_estimate(make_named_web("Family", {.k = k}).web).rank == 6);
    }
    const NamedWeb t = make_named_web("Family", {.tau = cplx{0.2, 1.3}});
    REQUIRE(t.tau.has_value());
    CHECK(rank_estimate(t.web).rank == 6);
    CHECK(rank_estimate(make_named_web("QuarticModel", {.k = 0.3}).web).rank == 6);
}

TEST_CASE("parameter errors") {
    CHECK_THROWS_AS(make_named_web("Family", {.k = 1.0}), DomainError);
    CHECK_THROWS_AS(make_named_web("Family", {.k = 0.0}), DomainError);
    CHECK_THROWS_AS(make_named_web("Family", {.tau = cplx{0.0, 0.01}}), DomainError);
    CHECK_THROWS_AS(make_named_web("QuarticModel", {.k = -1.0}), DomainError);
}

TEST_CASE("known relations hold on the validation disc") {
    for (const std::string& id : catalog_ids()) {
        const NamedWeb nw = make_named_web(id);
        CAPTURE(id);
        CHECK(nw.known_relations.empty() == (id == "Bol"));
        for (const RelationResidual& r : verify_relations(nw, validation_samples(nw))) {
            CAPTURE(r.name);
            CHECK(r.used == 64);
            CHECK(r.residual < 1e-9);
        }
    }
    const NamedWeb t0 = make_named_web("T0");
    for (const RelationResidual& r : verify_relations(t0, validation_samples(t0))) CHECK(r.residual < 1e-14);
}

TEST_CASE("type A relation on the unit box") {
    const NamedWeb a = make_named_web("A");
    const auto box = box_grid(1.0, 21);
    CHECK(relation_residual_named(a, "A.2", box) < 1e-12);
    CHECK(relation_residual_named(a, "A.3", box) < 1e-12);
    CHECK(relation_residual_named(a, "A.model", box) < 1e-12);
}

TEST_CASE("type B includes 2u = cos(x-y) - cos(x+y)") {
    const NamedWeb b = make_named_web("B");
    bool found = false;
    for (const KnownRelation& r : b.known_relations) found = found || r.text == "2u = cos(x-y) - cos(x+y)";
    CHECK(found);
}

TEST_CASE("family relations at several moduli") {
    for (const double k : {0.3, 0.5, 0.8}) {
        const NamedWeb f = make_named_web("Family", {.k = k});
        const auto s = validation_samples(f);
        CAPTURE(k);
        CHECK(relation_residual_named(f, "Family.e4bis", s) < 1e-10);
        CHECK(relation_residual_named(f, "Family.1-u", s) < 1e-10);
        CHECK(relation_residual_named(f, "Family.1+u", s) < 1e-10);
        CHECK(relation_residual_named(f, "Family.e4", s) < 1e-10);
    }
}

TEST_CASE("e4bis against library Jacobi functions") {
    for (const double k : {0.3, 0.5, 0.8}) {
        double worst = 0.0;
        for (const Point& p : box_grid(1.0, 15)) {
            const double x = p.x.real(), y = p.y.real();
            const Jacobi jx = boost_jacobi(k, x), jy = boost_jacobi(k, y), s = boost_jacobi(k, x + y),
                         d = boost_jacobi(k, x - y);
            const double u = jx.sn * jy.sn;
            const double lhs = (1 + k * u) / (1 - k * u), rhs = (s.dn - k * s.cn) / (d.dn - k * d.cn);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("verify_relations rejects fully singular samples") {
    const NamedWeb f = make_named_web("Family", {.k = 0.5});
    const EllipticContext ctx = context_from_k(0.5);
    // sn has a pole at i K' = tau K.
    const cplx pole = ctx.tau() * ctx.quarter_period();
    CHECK_THROWS_AS(verify_relations(f, {{pole, pole}, {pole, 0.3}}), NumericalError);
}

TEST_CASE("quartic roots") {
    const cplx k = 0.6;
    for (const cplx xi : {cplx{0.3}, cplx{0.2, 0.1}, cplx{-0.4, 0.3}}) {
        const QuarticRoots r = quartic_roots(xi, xi, k);
        CHECK(std::min(std::abs(r.u_plus), std::abs(r.u_minus)) < 1e-15);
    }
    // A(xi, eta) - A(eta, xi) = (xi - eta) / (1 - k^2 xi eta).
    const auto pts = disc_samples({0.0, 0.0}, 0.9, 50);
    for (const Point& p : pts) {
        const QuarticRoots r = quartic_roots(p.x, p.y, k);
        CHECK(std::abs(r.a_xi_eta - r.a_eta_xi - (p.x - p.y) / (1.0 - k * k * p.x * p.y)) < 1e-12);
    }
    // Roots are sn^2(x +- y) for xi = sn^2 x, eta = sn^2 y.
    for (const double kk : {0.3, 0.6, 0.9}) {
        for (const Point& p : disc_samples({0.6, 0.3}, 0.2, 20)) {
            const double x = p.x.real(), y = p.y.real();
            const double xi = std::pow(boost_jacobi(kk, x).sn, 2), eta = std::pow(boost_jacobi(kk, y).sn, 2);
            const double sp = std::pow(boost_jacobi(kk, x + y).sn, 2), sm = std::pow(boost_jacobi(kk, x - y).sn, 2);
            const QuarticRoots r = quartic_roots(xi, eta, kk);
            const double direct = std::abs(r.u_plus - sp) + std::abs(r.u_minus - sm);
            const double swapped = std::abs(r.u_plus - sm) + std::abs(r.u_minus - sp);
            CHECK(std::min(direct, swapped) < 1e-9);
        }
    }
    CHECK_THROWS_AS(quartic_roots(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("limits of the family") {
    // 2 e^{-k} cosh(x + k) = e^x + e^{-x - 2k}: the deviation is e^{-2k} max(e^{-x} + e^{-y}).
    for (const double k : {5.0, 10.0, 15.0}) {
        const double exact = 2.0 * std::exp(1.0 - 2.0 * k);
        CHECK(std::abs(exponential_limit_deviation(k) - exact) < 1e-6 * exact + 1e-14);
    }
    CHECK(exponential_limit_deviation(10.0) < 1e-7);
    // Taylor remainder eps^2 (x^4 +- y^4) / 12 at the corner of the box.
    for (const double eps : {1e-3, 1e-2}) {
        CHECK(std::abs(epsilon_limit_deviation(eps, 1) - eps * eps / 6.0) < 1e-3 * eps * eps);
        CHECK(std::abs(epsilon_limit_deviation(eps, -1) - eps * eps / 12.0) < 1e-3 * eps * eps);
    }
    CHECK(epsilon_limit_deviation(1e-3, 1) < 1e-5);
    const LimitReport r = family_limit_checks();
    CHECK(std::abs(r.exponential_order - 2.0) < 1e-3);
    CHECK(std::abs(r.epsilon_order - 2.0) < 1e-2);
    CHECK(r.sn_to_sin < 1e-6);
    CHECK(r.sn_to_tanh < 1e-4);
    CHECK(r.exponential.size() == 5);
    CHECK(r.epsilon_plus.size() == 4);
}

TEST_CASE("identity suite") {
    const auto results = identity_suite(theta);
    CHECK(results.size() == identity_names().size());
    for (const IdentityResult& r : results) {
        CAPTURE(r.name);
        CHECK(r.samples == 200);
        CHECK(r.passed());
        CHECK(r.residual < 1e-10);
    }
    const auto bad = identity_suite(perturbed_theta(1e-6));
    for (const IdentityResult& r : bad)
        if (r.name == "form") CHECK_FALSE(r.passed());
    const auto one = identity_suite(theta, {.moduli = {0.5}, .only = "e4bis"});
    REQUIRE(one.size() == 1);
    CHECK(one[0].name == "e4bis");
    CHECK_THROWS_AS(identity_suite(theta, {.only = "nope"}), StructuralError);
}

TEST_CASE("sigma transport") {
    const Symmetry sigma = Symmetry::sigma();
    for (const std::string x : {"A", "B", "C", "D", "E"}) {
        const NamedWeb web = make_named_web(x), var = make_named_web("Sigma" + x);
        const Foliation moved = apply_symmetry(sigma_normalization(x), apply_symmetry(sigma, fifth(web)));
        CAPTURE(x);
        CHECK(foliation_equal(moved, fifth(var), disc_samples(var.web.base(), 0.1, 32)));
    }
    const NamedWeb e = make_named_web("E");
    CHECK(foliation_equal(apply_symmetry(sigma, fifth(e)), fifth(e), disc_samples(kGenericBase, 0.1, 32)));
}

TEST_CASE("family and sigma") {
    const NamedWeb f = make_named_web("Family", {.k = 0.5});
    const Foliation moved = apply_symmetry(sigma_normalization("Family"), apply_symmetry(Symmetry::sigma(), fifth(f)));
    CHECK(foliation_distance(moved, family_sigma_foliation(0.5), disc_samples(kEllipticBase, 0.1, 32)) < 1e-8);
    CHECK(foliation_equal(moved, family_sigma_foliation(0.5), disc_samples(kEllipticBase, 0.1, 32)));
    CHECK_FALSE(foliation_equal(moved, family_sigma_foliation(0.6), disc_samples(kEllipticBase, 0.1, 32)));
}

TEST_CASE("types A to E are pairwise non-equivalent") {
    const std::vector<std::string> ids{"A", "B", "C", "D", "E"};
    std::vector<std::vector<Foliation>> reps;
    for (const std::string& x : ids) reps.push_back({fifth(make_named_web(x)), fifth(make_named_web("Sigma" + x))});
    std::vector<Symmetry> group;
    for (const Symmetry& g : d8_elements())
        for (const double lambda : {1.0, 0.6, 1.7, -2.3})
            group.push_back(g.compose(Symmetry::dilatation(lambda, 0.13, -0.07)));
    const auto samples = disc_samples(kGenericBase, 0.1, 24);
    int compared = 0;
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            for (const Foliation& a : reps[i])
                for (const Foliation& b : reps[j])
                    for (const Symmetry& g : group) {
                        CAPTURE(ids[i]);
                        CAPTURE(ids[j]);
                        CHECK_FALSE(foliation_equal(apply_symmetry(g, a), b, samples));
                        ++compared;
                    }
        }
    CHECK(compared == 20 * 4 * 64);
    // The classifier separates them as well.
    std::set<std::string> labels;
    for (const auto& [v, w] : std::vector<std::pair<const char*, const char*>>{
             {"tanh", "-tanh"}, {"sin", "sin"}, {"exp", "exp"}, {"poly:t", "-poly:t"}, {"poly:t", "poly:t"}})
        labels.insert(label_name(classify(slope_of(Univariate::parse(v)), slope_of(Univariate::parse(w)),
                                          default_line_samples())
                                     .label));
    CHECK(labels.size() == 5);
}

TEST_CASE("every named web round-trips through JSON") {
    for (const std::string& id : catalog_ids()) {
        const NamedWeb nw = make_named_web(id);
        const auto j = to_json(nw);
        CAPTURE(id);
        CHECK(j["id"] == id);
        CHECK(j["known_relations"].size() == nw.known_relations.size());
        const Web back = web_from_json(to_json(nw.web));
        CHECK(back.size() == nw.web.size());
        CHECK(to_json(back).dump() == to_json(nw.web).dump());
        CHECK(rank_estimate(back).rank == rank_estimate(nw.web).rank);
    }
}
