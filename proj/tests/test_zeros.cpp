#include "fixtures.hpp"

#include <doctest.h>

using namespace arczeros;
using fx::pi;

TEST_CASE("predicted counts on the symmetric configuration")
{
    auto b = fx::Built(fx::symmetric_spec(), 2);
    auto base = default_strips(b.fr, b.cw);
    CHECK(base.epsilon > 0);
    CHECK(base.epsilon <= b.fr.modulus.K / 8);
    for (int n = 1; n <= 40; ++n) {
        auto ph = solve_phase_system(n, b.fr, b.spec, b.cw);
        auto c = predicted_counts(ph, b.spec, b.fr, validate_strips(base, ph, b.fr));
        CHECK(c.beta == 0);
        CHECK(c.gamma == 0);
        CHECK(c.k1 == n / 2);
        CHECK(c.k2 == n / 2);
        CHECK(c.strays() == n % 2);
    }
}

TEST_CASE("a point mass takes one zero from the first strip")
{
    auto b = fx::Built(fx::asymmetric_spec(), 2);
    auto plain = b.spec;
    plain.factors[0].lambda = 1;
    auto strips = default_strips(b.fr, b.cw);
    for (int n = 5; n <= 30; ++n) {
        auto ph = solve_phase_system(n, b.fr, b.spec, b.cw);
        auto s = validate_strips(strips, ph, b.fr);
        auto with = predicted_counts(ph, b.spec, b.fr, s);
        auto without = predicted_counts(ph, plain, b.fr, s);
        CHECK(without.k1 - with.k1 == 1);
        CHECK(without.k2 == with.k2);
    }
}

TEST_CASE("additive and subtractive count formulas")
{
    auto b = fx::Built(fx::asymmetric_spec(), 2);
    auto strips = default_strips(b.fr, b.cw);
    for (int n = 1; n <= 60; ++n) {
        auto ph = solve_phase_system(n, b.fr, b.spec, b.cw);
        auto s = validate_strips(strips, ph, b.fr);
        auto c = predicted_counts(ph, b.spec, b.fr, s);
        auto p = predicted_counts(ph, b.spec, b.fr, s, CountFormula::subtractive);
        if (ph.delta == -1) {
            CHECK(c.k1 - p.k1 == 2 * c.beta);
            CHECK(c.k2 - p.k2 == 2 * c.gamma);
        } else {
            CHECK(c.k1 == p.k1);
            CHECK(c.k2 == p.k2);
        }
        CHECK(c.k1 >= 0);
        CHECK(c.k2 >= 0);
        CHECK(c.strays() >= 0);
    }
}

TEST_CASE("strip classification")
{
    auto fr = make_frame(fx::asymmetric_spec().arcs);
    const double K = fr.modulus.K, Kp = fr.modulus.K_prime;
    StripConfig s{K / 8};
    std::vector<cplx> zs;
    for (double y : {-0.7, -0.2, 0.3, 0.8}) {
        zs.push_back(phi_map(cplx(-K / 20, y * Kp), fr));
        zs.push_back(phi_map(cplx(-K + K / 20, y * Kp), fr));
        zs.push_back(phi_map(cplx(-K / 2, y * Kp), fr));
    }
    auto c = classify_zeros(zs, fr, s);
    CHECK(c.in1 == 4);
    CHECK(c.in2 == 4);
    CHECK(c.strays == 4);
    for (size_t i = 0; i < zs.size(); ++i) {
        CHECK(c.inverted[i]);
        CHECK(int(c.strip[i]) == std::array{1, 2, 0}[i % 3]);
    }
}

TEST_CASE("rational detection")
{
    auto r = detect_rational(0.5);
    CHECK(r.rational);
    CHECK(r.num == 1);
    CHECK(r.den == 2);
    auto t = detect_rational(355.0 / 113.0);
    CHECK(t.rational);
    CHECK(t.den == 113);
    CHECK_FALSE(detect_rational(std::sqrt(2.0) - 1).rational);
    CHECK_FALSE(detect_rational(pi / 7).rational);

    CHECK(detect_rational(harmonic_measure_omega2(make_frame(fx::quarter_arcs()))).rational);
    auto moved = make_frame(normalize_arcs({pi / 4, 3 * pi / 4 + 1e-3, 5 * pi / 4, 7 * pi / 4}));
    CHECK_FALSE(detect_rational(harmonic_measure_omega2(moved)).rational);
}

TEST_CASE("distance to S and to masses")
{
    auto b = fx::Built(fx::asymmetric_spec(), 2);
    auto S = curve_s(b.fr);
    for (double t : {-0.13, -0.5, -0.77}) {
        cplx z = phi_map(cplx(t * b.fr.modulus.K, S.level), b.fr);
        CHECK(dist_to_S(z, b.fr, S) < 1e-10);
        CHECK(dist_to_S(z * 1.01, b.fr, S) == doctest::Approx(0.01 * std::abs(z)).epsilon(0.2));
    }
    auto m = nearest_mass_dist(0.0, b.cw);
    REQUIRE(m);
    CHECK(*m == doctest::Approx(1.0));
    auto sym = fx::Built(fx::symmetric_spec(), 2);
    CHECK_FALSE(nearest_mass_dist(0.0, sym.cw));
}

TEST_CASE("zero pipeline on the symmetric configuration")
{
    auto b = fx::Built(fx::symmetric_spec(), 41);
    PipelineInput in{b.spec, b.fr, b.cw, b.mt};
    auto recs = zero_pipeline(in, 1, 40);
    auto n0 = scan_n0(recs);
    REQUIRE(n0);
    CHECK(*n0 <= 10);
    for (const auto& r : recs) {
        CHECK(r.zeros.zeros.size() == size_t(r.n));
        CHECK(r.observed.in1 + r.observed.in2 + r.observed.strays == r.n);
        CHECK(r.dist_S.size() == size_t(r.n));
    }
    auto eq = equilibrium_check(recs, b.fr);
    CHECK(eq.back().n == 40);
    CHECK(eq.back().ok);
    CHECK(eq.back().omega2 == doctest::Approx(0.5));

    auto rep = accumulation_analysis(recs, in);
    CHECK(rep.rationality.rational);
    CHECK(rep.rationality.den == 2);
    CHECK_FALSE(rep.lattice.empty());
    REQUIRE(rep.lattice_dist.size() == rep.strays.size());
    for (size_t i = 0; i < rep.strays.size(); ++i)
        if (rep.strays[i].n >= 10) CHECK(rep.lattice_dist[i] < 1e-6);
    CHECK(rep.mass_hits.empty());

    CHECK_THROWS(zero_pipeline(in, 3, 2));
    CHECK_THROWS(zero_pipeline(in, 0, 2));
}

TEST_CASE("stray gap")
{
    auto fr = make_frame(fx::quarter_arcs());
    const double K = fr.modulus.K;
    AccumulationReport rep;
    CHECK(stray_max_gap(rep, fr, 10, K / 8) == doctest::Approx(K - K / 4));
    for (double x : {-0.3, -0.5, -0.7}) {
        StrayPoint s;
        s.n = 5;
        s.u = cplx(x * K, 0.1);
        rep.strays.push_back(s);
    }
    CHECK(stray_max_gap(rep, fr, 10, K / 8) == doctest::Approx(0.2 * K));
    CHECK(stray_max_gap(rep, fr, 4, K / 8) == doctest::Approx(K - K / 4));
    rep.strays[1].near_mass = true;
    CHECK(stray_max_gap(rep, fr, 10, K / 8) == doctest::Approx(0.4 * K));
}
