#include "fixtures.hpp"

#include <boost/math/special_functions/chebyshev.hpp>
#include <doctest.h>

using namespace arczeros;
using fx::pi;

TEST_CASE("phase system on the symmetric configuration")
{
    auto b = fx::Built(fx::symmetric_spec(), 2);
    const double K = b.fr.modulus.K;
    // both denominator zeros sit at Re u = -K/2, so X = -(2n - 1) K / 2
    for (int n = 1; n <= 30; ++n) {
        auto ph = solve_phase_system(n, b.fr, b.spec, b.cw);
        CHECK(ph.X == doctest::Approx(-(2 * n - 1) * K / 2).epsilon(1e-12));
        CHECK(ph.l == (n % 2 == 0 ? n : n - 1));
        CHECK(ph.delta == (n % 2 == 0 ? 1 : -1));
        CHECK(ph.b.real() == doctest::Approx(-K / 2).epsilon(1e-12));
        CHECK(ph.b.imag() > -b.fr.modulus.K_prime);
        CHECK(ph.b.imag() <= b.fr.modulus.K_prime);
        CHECK(ph.residual_re < 1e-12);
        CHECK(ph.residual_im < 1e-12);
        CHECK_FALSE(ph.degenerate);
    }
    CHECK_THROWS_AS(solve_phase_system(-1, b.fr, b.spec, b.cw), ThetaRepError);
}

TEST_CASE("phase system residuals and parity")
{
    auto b = fx::Built(fx::asymmetric_spec(), 2);
    for (int n = 1; n <= 80; ++n) {
        auto ph = solve_phase_system(n, b.fr, b.spec, b.cw);
        CHECK(ph.residual_re < 1e-10);
        CHECK(ph.residual_im < 1e-10);
        CHECK((ph.l - b.spec.w2()) % 2 == 0);
        if (ph.delta != 0) {
            CHECK(ph.b.real() >= -b.fr.modulus.K);
            CHECK(ph.b.real() <= 0);
        }
    }
}

TEST_CASE("Psi is elliptic and Psi(u) Psi(-u) = 1")
{
    for (auto spec : {fx::symmetric_spec(), fx::asymmetric_spec()}) {
        auto b = fx::Built(spec, 12);
        auto cs = make_circle_samples(b.fr, 64);
        const auto& m = b.fr.modulus;
        for (int n : {3, 8, 11}) {
            auto rep = make_theta_rep(n, b.fr, b.spec, b.cw, cs);
            std::mt19937 g(n);
            for (int i = 0; i < 40; ++i) {
                cplx u = fx::random_box_point(g, m, 0.1);
                cplx p = psi_n(u, rep);
                if (!std::isfinite(std::abs(p)) || std::abs(p) > 1e8 || std::abs(p) < 1e-8) continue;
                CHECK(fx::rel(p * psi_n(-u, rep), 1.0) < 1e-9);
                CHECK(fx::rel(psi_n(u + 2 * m.K, rep), p) < 1e-8 * std::max(1.0, std::abs(p)));
                CHECK(fx::rel(psi_n(u + cplx(0, 2 * m.K_prime), rep), p) < 1e-8 * std::max(1.0, std::abs(p)));
            }
        }
    }
}

TEST_CASE("theta representation agrees with the moment solve")
{
    for (auto spec : {fx::symmetric_spec(), fx::asymmetric_spec()}) {
        auto b = fx::Built(spec, 20);
        auto seq = orthogonal_sequence(b.mt, 16);
        auto cs = make_circle_samples(b.fr);
        for (int n : {4, 8, 13, 16}) {
            auto rep = make_theta_rep(n, b.fr, b.spec, b.cw, cs);
            const auto& P = seq.P[size_t(n)];
            // the closed form constant needs only a small correction
            CHECK(rep.correction < 1e-6);
            std::mt19937 g(11 + n);
            for (int i = 0; i < 30; ++i) {
                cplx u = fx::random_box_point(g, b.fr.modulus, 0.1);
                if (std::abs(u - b.fr.zeta) < 0.2) continue;
                cplx z = phi_map(u, b.fr);
                if (std::abs(z) > 1.5) continue;
                cplx want = P.eval(z);
                CHECK(std::abs(pn_theta(u, rep) - want) < 1e-7 * std::max(1.0, std::abs(want)));
                CHECK(fx::rel(pn_theta(-u, rep), pn_theta(u, rep)) < 1e-12);
            }
            double tail = 1;
            auto pc = pn_theta_coefficients(rep, cs, &tail);
            CHECK(tail < 1e-8);
            CHECK(std::abs(pc.back() - 1.0) < 1e-12);

            double qtail = 1;
            auto q = q_theta_coefficients(rep, cs, &qtail);
            CHECK(int(q.size()) == q_degree(n, b.spec) + 1);
            CHECK(qtail < 1e-8);
            auto qr = verify_quadratic_identity(P, q, b.spec, b.fr, b.cw);
            CHECK(qr.residual < 1e-7);
            CHECK(qr.side_origin < 1e-7);
            CHECK(qr.side_mass.size() == b.spec.factors.size());
            for (double x : qr.side_mass) CHECK(x < 1e-7);
        }
    }
}

TEST_CASE("Q degree")
{
    CHECK(q_degree(10, fx::symmetric_spec()) == 8);
    CHECK(q_degree(10, fx::flat_spec({0, 1})) == 10);
    CHECK(q_degree(3, fx::flat_spec({0, 1, 2, 3})) == 5);
}

TEST_CASE("fit rejects short sample sets")
{
    auto fr = make_frame(fx::quarter_arcs());
    auto cs = make_circle_samples(fr, 16);
    CHECK_THROWS_AS(fit_coefficients(std::vector<cplx>(16, 1.0), cs, 8), ThetaRepError);
    auto fit = fit_coefficients(std::vector<cplx>(16, 2.0), cs, 3);
    CHECK(std::abs(fit.coeffs[0] - 2.0) < 1e-14);
    CHECK(fit.tail < 1e-14);
    CHECK_THROWS_AS(make_circle_samples(fr, 16, 1.2), ThetaRepError);
}

TEST_CASE("T-polynomial existence")
{
    auto fr = make_frame(fx::quarter_arcs());
    auto flat = fx::flat_spec();
    for (int two_nu = 1; two_nu <= 20; ++two_nu) {
        auto e = t_polynomial_existence(two_nu, fr, flat);
        CHECK(e.exists);
        CHECK(e.l == two_nu);
        CHECK(e.mismatch < 1e-9);
    }
    auto sym = fx::symmetric_spec();
    CHECK_THROWS_AS(t_polynomial_existence(2, fr, sym), ThetaRepError);
    CHECK_THROWS_AS(t_polynomial_existence(0, fr, flat), ThetaRepError);
    auto asym = fx::asymmetric_spec();
    auto fa = make_frame(asym.arcs);
    for (int two_nu = 3; two_nu <= 6; ++two_nu) CHECK_FALSE(t_polynomial_existence(two_nu, fa, asym).exists);
    CHECK_THROWS_AS(minimal_tau(3, fa, asym), ThetaRepError);
    // odd l
    CHECK_THROWS_AS(minimal_tau(3, fr, flat), ThetaRepError);
}

TEST_CASE("T-polynomials on z^2 preimages are Chebyshev polynomials")
{
    for (double t : {pi / 4, 0.3, 1.1}) {
        auto fr = make_frame(fx::symmetric_arcs(t));
        auto flat = fx::flat_spec();
        flat.arcs = fr.arcs;
        for (int nu = 1; nu <= 8; ++nu) {
            auto tp = minimal_tau(2 * nu, fr, flat);
            CHECK(tp.pell_residual < 1e-10);
            CHECK(tp.imag_residual < 1e-10);
            CHECK(tp.M == doctest::Approx(1.0).epsilon(1e-9));
            for (double e : tp.endpoint_values) CHECK(std::abs(std::abs(e) - tp.M) < 1e-9);
            double sign = 0;
            for (int i = 1; i < 40; ++i) {
                for (cplx u : {cplx(0, -fr.modulus.K_prime + 2 * fr.modulus.K_prime * i / 40.0),
                               cplx(-fr.modulus.K, -fr.modulus.K_prime + 2 * fr.modulus.K_prime * i / 40.0)}) {
                    double ph = std::arg(phi_map(u, fr));
                    double want = boost::math::chebyshev_t(unsigned(nu), std::cos(ph) / std::cos(t));
                    double got = tau_at(u, tp);
                    if (sign == 0 && std::abs(want) > 0.1) sign = got / want > 0 ? 1 : -1;
                    CHECK(std::abs(got - sign * want) < 1e-9);
                }
            }
        }
    }
}
