#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <websmith/webs.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace websmith;

namespace {

Foliation linear(cplx a, cplx b) { return Foliation::from_spec({"linear", {a, b}, {}, {}}); }
Foliation fg(const std::string& f, const std::string& g) { return Foliation::from_spec({"fg", {}, {f, g}, {}}); }
Foliation bipoly(std::vector<cplx> triples) { return Foliation::from_spec({"bipoly", std::move(triples), {}, {}}); }

double jet_distance(const Jet2& a, const Jet2& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.raw().size(); ++i) d = std::max(d, std::abs(a.raw()[i] - b.raw()[i]));
    return d;
}

}  // namespace

TEST_CASE("complex literals and function grammar") {
    CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
    CHECK(parse_complex("0.3+0.2i") == cplx(0.3, 0.2));
    CHECK(parse_complex("-i") == cplx(0.0, -1.0));
    CHECK(parse_complex("2.5e-3i") == cplx(0.0, 2.5e-3));
    CHECK(parse_complex("1e-2-3i") == cplx(1e-2, -3.0));
    CHECK_THROWS_AS(parse_complex("abc"), DomainError);

    const Univariate a = Univariate::parse("3*sinh@2");
    CHECK(std::abs(a.value(0.4) - 3.0 * std::sinh(0.8)) < 1e-15);
    CHECK(std::abs(a.primitive_value(0.4) - 1.5 * std::cosh(0.8)) < 1e-15);
    const Series1 s = a.series(0.4, 3);
    CHECK(std::abs(s[1] - 6.0 * std::cosh(0.8)) < 1e-14);

    const Univariate p = Univariate::parse("poly:3x^2");
    CHECK(std::abs(p.value(2.0) - 12.0) < 1e-15);
    CHECK(std::abs(p.primitive_value(2.0) - 8.0) < 1e-15);
    const Univariate p2 = Univariate::parse("poly:1,0,-2");
    CHECK(std::abs(p2.value(3.0) - (1.0 - 18.0)) < 1e-15);

    const Univariate m = Univariate::parse("-sin");
    CHECK(std::abs(m.primitive_value(0.3) - std::cos(0.3)) < 1e-15);

    const Univariate c = Univariate::parse("const:2");
    CHECK(c.is_constant());
    CHECK(std::abs(c.value(5.0) - 2.0) < 1e-15);

    CHECK_THROWS_AS(Univariate::parse("frob"), DomainError);
    CHECK_THROWS_AS(Univariate::parse("sn"), DomainError);
    CHECK_THROWS_AS(Univariate::parse("sn:1"), DomainError);
}

TEST_CASE("primitives differentiate back to the slope") {
    for (const char* name : {"exp", "sin", "cos", "sinh", "cosh", "tanh", "sech", "csch", "recip", "sn:0.6", "cn:0.6",
                             "dn:0.6", "poly:1-2t+t^3", "2*tanh@0.5"}) {
        const Univariate u = Univariate::parse(name);
        const cplx t{0.37, 0.0};
        const double h = 1e-4;
        const cplx fd = (u.primitive_value(t + h) - u.primitive_value(t - h)) / (2.0 * h);
        CAPTURE(name);
        CHECK(std::abs(fd - u.value(t)) < 1e-7);
        CHECK(std::abs(u.primitive_series(t, 3)[1] - u.value(t)) < 1e-13);
    }
}

TEST_CASE("transversality check") {
    CHECK(transversality_check(bipoly({1, 1, 1.0}), {1.0, 2.0}));
    CHECK_FALSE(transversality_check(linear(1.0, 1.0), {0.3, 0.2}));
    CHECK(transversality_check(fg("sn:0.5", "sn:0.5"), kEllipticBase));
}

TEST_CASE("web construction validates transversality") {
    CHECK_THROWS_AS(Web("bad", {linear(1, 0), linear(0, 1), linear(2, 0)}, kGenericBase), TransversalityError);
    CHECK_THROWS_AS(Web("small", {linear(1, 0), linear(0, 1)}, kGenericBase), StructuralError);
    const Web ok("T0", {linear(1, 0), linear(0, 1), linear(1, 1), linear(1, -1)}, kGenericBase);
    CHECK(ok.size() == 4);
}

TEST_CASE("admissible base perturbs away from a singular point") {
    const std::vector<Foliation> fs{linear(1, 0), linear(0, 1), bipoly({2, 0, 1.0, 0, 2, 1.0})};
    CHECK(min_normalized_wedge(fs, {0.0, 0.0}) == 0.0);
    const Point p = admissible_base(fs, {0.0, 0.0});
    CHECK(min_normalized_wedge(fs, p) > kWedgeTolerance);
    CHECK(std::abs(p.x) + std::abs(p.y) > 0.0);
    // (x, y, y/x) along the diagonal direction is fine at the generic base.
    CHECK(admissible_base(fs, kGenericBase) == kGenericBase);
}

TEST_CASE("D8 is a group of order 16") {
    const auto g = d8_elements();
    REQUIRE(g.size() == 16);
    int plus = 0, minus = 0;
    for (const auto& a : g) {
        const double d = a.determinant().real();
        CHECK(std::abs(std::abs(d) - 1.0) < 1e-15);
        (d > 0 ? plus : minus)++;
    }
    CHECK(plus == 8);
    CHECK(minus == 8);
    // Cayley table closure.
    for (const auto& a : g)
        for (const auto& b : g) {
            const Symmetry c = a.compose(b);
            int hits = 0;
            for (const auto& e : g) hits += c.approx_equal(e) ? 1 : 0;
            CHECK(hits == 1);
        }
}

TEST_CASE("rho o sigma has order 8") {
    const Symmetry rs = Symmetry::rho().compose(Symmetry::sigma());
    Symmetry p = rs;
    int order = 1;
    while (!p.approx_equal(Symmetry::identity()) && order < 20) {
        p = p.compose(rs);
        ++order;
    }
    CHECK(order == 8);
}

TEST_CASE("D8 permutes the four pencil directions") {
    const std::array<std::array<double, 2>, 4> covectors{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
    for (const Symmetry& g : d8_elements()) {
        for (const auto& w : covectors) {
            // Pullback covector w L.
            const cplx a = w[0] * g.linear[0] + w[1] * g.linear[2];
            const cplx b = w[0] * g.linear[1] + w[1] * g.linear[3];
            int matches = 0;
            for (const auto& v : covectors)
                if (std::abs(a * v[1] - b * v[0]) < 1e-14) ++matches;
            CHECK(matches == 1);
        }
    }
}

TEST_CASE("apply_symmetry basics") {
    const Foliation f = fg("sin", "sin");
    const Point p{0.3, 0.17};
    CHECK(jet_distance(apply_symmetry(Symmetry::identity(), f).jet(p, 6), f.jet(p, 6)) == 0.0);
    // sin x sin y is symmetric: u o rho = u.
    CHECK(jet_distance(apply_symmetry(Symmetry::rho(), f).jet(p, 6), f.jet(p, 6)) < 1e-15);
}

TEST_CASE("apply_symmetry is a right action") {
    std::mt19937_64 rng(11);
    const auto g8 = d8_elements();
    std::uniform_int_distribution<std::size_t> pick(0, g8.size() - 1);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    const Foliation f = fg("sin", "exp");
    for (int trial = 0; trial < 40; ++trial) {
        Symmetry g = g8[pick(rng)], h = g8[pick(rng)];
        if (trial % 2 == 1) g = g.compose(Symmetry::dilatation(u(rng), 0.1 * u(rng), -0.1 * u(rng)));
        const Point p{0.2 * u(rng), 0.1 * u(rng)};
        const Jet2 lhs = apply_symmetry(g.compose(h), f).jet(p, 8);
        const Jet2 rhs = apply_symmetry(h, apply_symmetry(g, f)).jet(p, 8);
        CHECK(jet_distance(lhs, rhs) < 1e-13);
    }
}

TEST_CASE("sigma on tanh x tanh y is the dilated cosh quotient") {
    const Foliation a = fg("tanh", "tanh");
    const Foliation target = fg("cosh@1.4142135623730951", "sech@1.4142135623730951");
    const auto samples = disc_samples({0.3, 0.2}, 0.2, 40);
    CHECK(foliation_equal(apply_symmetry(Symmetry::sigma(), a), target, samples));
    CHECK_FALSE(foliation_equal(apply_symmetry(Symmetry::sigma(), a), fg("cosh", "sech"), samples));
}

TEST_CASE("foliation_equal examples") {
    const auto samples = disc_samples(kGenericBase, 0.1, 40);
    const Foliation u = fg("sin", "exp");
    const Foliation cu = Foliation::from_spec(
        {"sum", {}, {}, {{"product", {}, {}, {{"linear", {0.0, 0.0, 3.5}, {}, {}}, *u.spec()}}, {"linear", {0.0, 0.0, 2.0}, {}, {}}}});
    CHECK(foliation_equal(u, cu, samples));
    CHECK_FALSE(foliation_equal(linear(1, 1), linear(1, -1), samples));
    const Foliation d1 = bipoly({2, 0, 1.0, 0, 2, -1.0});
    const Foliation d2 = Foliation::from_spec({"product", {}, {}, {{"linear", {1, 1}, {}, {}}, {"linear", {1, -1}, {}, {}}}});
    CHECK(foliation_equal(d1, d2, samples));
}

TEST_CASE("foliation_equal refuses mostly singular samples") {
    const Foliation f = fg("recip", "recip");
    std::vector<Point> samples(10, Point{0.0, 0.0});
    samples[0] = {0.3, 0.2};
    CHECK_THROWS_AS(foliation_equal(f, f, samples), NumericalError);
}

TEST_CASE("disc samples are deterministic and inside the disc") {
    const auto a = disc_samples({1.0, 2.0}, 0.5, 40, 3);
    const auto b = disc_samples({1.0, 2.0}, 0.5, 40, 3);
    const auto c = disc_samples({1.0, 2.0}, 0.5, 40, 4);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    for (const Point& p : a) CHECK(std::hypot(p.x.real() - 1.0, p.y.real() - 2.0) <= 0.5 + 1e-15);
}

TEST_CASE("web JSON round trip") {
    const Web w("T0+", {linear(1, 0), linear(0, 1), linear(1, 1), linear(1, -1), fg("sn:0.5+0.1i", "sn:0.5+0.1i")},
                kEllipticBase);
    const nlohmann::json j = to_json(w);
    CHECK(j["base"].size() == 4);
    CHECK(j["foliations"][0]["kind"] == "linear-pencil");
    const Web back = web_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.size() == 5);
    CHECK(back.base() == w.base());
    for (int i = 0; i < 5; ++i)
        CHECK(jet_distance(back.foliations()[static_cast<std::size_t>(i)].jet(w.base(), 5),
                           w.foliations()[static_cast<std::size_t>(i)].jet(w.base(), 5)) == 0.0);
    const Web moved = apply_symmetry(Symmetry::sigma(), w);
    const Web moved_back = web_from_json(to_json(moved));
    CHECK(jet_distance(moved_back.foliations()[4].jet(moved.base(), 4), moved.foliations()[4].jet(moved.base(), 4)) == 0.0);
    CHECK_THROWS_AS(web_from_json(nlohmann::json::parse(R"({"foliations":[{"formula":"nope"}]})")), StructuralError);
}

TEST_CASE("symmetry preserves web transversality") {
    const Web w("A", {linear(1, 0), linear(0, 1), linear(1, 1), linear(1, -1), fg("tanh", "tanh")}, kGenericBase);
    for (const Symmetry& g : d8_elements()) {
        const Web moved = apply_symmetry(g, w);
        CHECK(min_normalized_wedge(moved.foliations(), moved.base()) > kWedgeTolerance);
    }
}
