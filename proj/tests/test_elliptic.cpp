#include "fixtures.hpp"

#include <doctest.h>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

using namespace arczeros;
using fx::pi;

namespace {

// sn, cn, dn of x + iy from Boost's real-argument routines and the addition theorem
SnCnDn boost_sncndn(cplx u, double k)
{
    double kp = std::sqrt(1 - k * k);
    double c, d, c1, d1;
    double s = boost::math::jacobi_elliptic(k, u.real(), &c, &d);
    double s1 = boost::math::jacobi_elliptic(kp, u.imag(), &c1, &d1);
    double den = c1 * c1 + k * k * s * s * s1 * s1;
    SnCnDn r;
    r.sn = cplx(s * d1, c * d * s1 * c1) / den;
    r.cn = cplx(c * c1, -s * d * s1 * d1) / den;
    r.dn = cplx(d * c1 * d1, -k * k * s * c * s1) / den;
    return r;
}

// Jacobi triple product forms
cplx product_H(cplx z, const EllipticModulus& m)
{
    cplx v = pi * z / (2 * m.K);
    cplx p = 2.0 * std::pow(m.q, 0.25) * std::sin(v);
    for (int n = 1; n < 200; ++n) {
        double q2n = std::pow(m.q, 2 * n);
        p *= (1 - q2n) * (1.0 - 2.0 * q2n * std::cos(2.0 * v) + q2n * q2n);
    }
    return p;
}

cplx product_theta(cplx z, const EllipticModulus& m)
{
    cplx v = pi * z / (2 * m.K);
    cplx p = 1.0;
    for (int n = 1; n < 200; ++n) {
        double q2n = std::pow(m.q, 2 * n), q2n1 = std::pow(m.q, 2 * n - 1);
        p *= (1 - q2n) * (1.0 - 2.0 * q2n1 * std::cos(2.0 * v) + q2n1 * q2n1);
    }
    return p;
}

} // namespace

TEST_CASE("complete integral K")
{
    CHECK(complete_elliptic_K(1e-9) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(complete_elliptic_K(1 / std::sqrt(2.0)) == doctest::Approx(1.8540746773013719).epsilon(1e-13));
    CHECK(complete_elliptic_K(0.999999) > 7.0);
    for (double k : {0.1, 0.3, 0.6, 0.9, 0.99, 0.999999})
        CHECK(complete_elliptic_K(k) == doctest::Approx(boost::math::ellint_1(k)).epsilon(1e-13));
    double prev = 0;
    for (int i = 1; i < 100; ++i) {
        double K = complete_elliptic_K(i / 100.0);
        CHECK(K > prev);
        prev = K;
    }
    CHECK_THROWS(complete_elliptic_K(0.0));
    CHECK_THROWS(complete_elliptic_K(1.0));
}

TEST_CASE("modulus keeps k^2 and its complement apart")
{
    auto m = make_modulus(1e-20, 1 - 1e-20);
    CHECK(m.K == doctest::Approx(pi / 2));
    CHECK(m.k_prime == doctest::Approx(1.0));
    auto h = make_modulus_from_k(0.6);
    CHECK(h.k * h.k + h.k_prime * h.k_prime == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h.q == doctest::Approx(std::exp(-pi * h.K_prime / h.K)).epsilon(1e-14));
}

TEST_CASE("sn cn dn at special points")
{
    auto m = make_modulus_from_k(0.6);
    auto z = jacobi_sn_cn_dn(0.0, m);
    CHECK(std::abs(z.sn) < 1e-16);
    CHECK(std::abs(z.cn - 1.0) < 1e-16);
    CHECK(std::abs(z.dn - 1.0) < 1e-16);
    auto k = jacobi_sn_cn_dn(m.K, m);
    CHECK(std::abs(k.sn - 1.0) < 1e-14);
    CHECK(std::abs(k.cn) < 1e-14);
    CHECK(std::abs(k.dn - m.k_prime) < 1e-14);
    CHECK(jacobi_sn_cn_dn(cplx(0, m.K_prime) + 1e-9, m, 1e-6).near_pole);
    CHECK_FALSE(jacobi_sn_cn_dn(cplx(0.3, 0.2), m, 1e-6).near_pole);
}

TEST_CASE("sn cn dn against the addition-theorem oracle")
{
    auto m = make_modulus_from_k(0.6);
    auto r = jacobi_sn_cn_dn(cplx(0.3, 0.2), m);
    CHECK(std::abs(r.sn * r.sn + r.cn * r.cn - 1.0) < 1e-12);
    CHECK(std::abs(r.dn * r.dn + 0.36 * r.sn * r.sn - 1.0) < 1e-12);
    std::mt19937 g(11);
    std::uniform_real_distribution<double> d(-3, 3);
    for (double k : {0.2, 0.6, 0.95}) {
        auto mk = make_modulus_from_k(k);
        for (int i = 0; i < 50; ++i) {
            cplx u(d(g), d(g) * 0.3);
            auto a = jacobi_sn_cn_dn(u, mk), b = boost_sncndn(u, k);
            CHECK(fx::rel(a.sn, b.sn) < 1e-10);
            CHECK(fx::rel(a.cn, b.cn) < 1e-10);
            CHECK(fx::rel(a.dn, b.dn) < 1e-10);
        }
    }
}

TEST_CASE("sn periods and identities at random points")
{
    std::mt19937 g(3);
    auto m = make_modulus_from_k(0.8);
    for (int i = 0; i < 100; ++i) {
        cplx u = fx::random_box_point(g, m);
        auto a = jacobi_sn_cn_dn(u, m);
        CHECK(std::abs(a.sn * a.sn + a.cn * a.cn - 1.0) < 1e-11);
        CHECK(std::abs(a.dn * a.dn + m.m * a.sn * a.sn - 1.0) < 1e-11);
        CHECK(fx::rel(jacobi_sn_cn_dn(u + 2 * m.K, m).sn, -a.sn) < 1e-10);
        CHECK(fx::rel(jacobi_sn_cn_dn(u + cplx(0, 2 * m.K_prime), m).sn, a.sn) < 1e-10);
    }
}

TEST_CASE("theta functions against the triple product")
{
    std::mt19937 g(5);
    for (double k : {0.3, 1 / std::sqrt(2.0), 0.97}) {
        auto m = make_modulus_from_k(k);
        CHECK(std::abs(theta_H(0.0, m)) == 0.0);
        for (int i = 0; i < 30; ++i) {
            cplx z = fx::random_box_point(g, m);
            CHECK(std::abs(theta_H(z, m) - product_H(z, m)) < 1e-12 * (1 + std::abs(product_H(z, m))));
            CHECK(std::abs(theta_theta(z, m) - product_theta(z, m)) < 1e-12 * (1 + std::abs(product_theta(z, m))));
            // sn = H / (sqrt(k) theta)
            cplx sn = theta_H(z, m) / (std::sqrt(m.k) * theta_theta(z, m));
            CHECK(fx::rel(sn, jacobi_sn_cn_dn(z, m).sn) < 1e-10);
        }
    }
}

TEST_CASE("theta quasi-periodicity and parity")
{
    auto m = make_modulus_from_k(0.6);
    const cplx I(0, 1);
    cplx z(0.7, 0.1);
    CHECK(fx::rel(theta_H(z + 2 * m.K, m), -theta_H(z, m)) < 1e-12);
    cplx x = 0.4;
    CHECK(fx::rel(theta_H(x + 2.0 * I * m.K_prime, m), -std::exp(-I * pi * x / m.K) / m.q * theta_H(x, m)) < 1e-12);
    cplx t(0.3, 0.5);
    CHECK(fx::rel(theta_theta(-t, m), theta_theta(t, m)) < 1e-14);
    CHECK(fx::rel(theta_theta(1.1 + 2 * m.K, m), theta_theta(1.1, m)) < 1e-12);
    cplx w = 0.25;
    CHECK(fx::rel(theta_H(w + I * m.K_prime, m), I * std::exp(-I * pi * w / (2 * m.K)) * std::pow(m.q, -0.25) * theta_theta(w, m)) < 1e-12);

    std::mt19937 g(17);
    for (int i = 0; i < 100; ++i) {
        cplx u = fx::random_box_point(g, m);
        cplx h = theta_H(u, m), th = theta_theta(u, m);
        CHECK(std::abs(h + theta_H(-u, m)) <= 1e-12 * (1 + std::abs(h) + std::abs(th)));
        CHECK(std::abs(th - theta_theta(-u, m)) <= 1e-12 * (1 + std::abs(h) + std::abs(th)));
        CHECK(fx::rel(theta_theta(u + 2.0 * I * m.K_prime, m), -std::exp(-I * pi * u / m.K) / m.q * th) < 1e-10);
    }
}

TEST_CASE("theta truncation")
{
    auto m = make_modulus_from_k(0.9);
    cplx z(0.4, 0.3);
    ThetaConfig a, b;
    b.truncation = 2 * a.truncation;
    CHECK(std::abs(theta_H(z, m, a) - theta_H(z, m, b)) < 1e-14);
    CHECK(std::abs(theta_theta(z, m, a) - theta_theta(z, m, b)) < 1e-14);
    ThetaConfig tiny;
    tiny.truncation = 1;
    tiny.tolerance = 1e-30;
    CHECK_THROWS_AS(theta_H(z, m, tiny), TruncationError);
}
