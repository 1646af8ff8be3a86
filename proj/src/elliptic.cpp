#include "arczeros/elliptic.hpp"

#include <cmath>
#include <numbers>

namespace arczeros {

namespace {
constexpr double pi = std::numbers::pi;
}

double agm(double a, double b)
{
    for (int it = 0; it < 64; ++it) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        if (std::abs(an - bn) <= 1e-16 * an) return 0.5 * (an + bn);
        a = an;
        b = bn;
    }
    return 0.5 * (a + b);
}

double complete_elliptic_K(double k)
{
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("complete_elliptic_K: k must lie in (0,1)");
    double kp = std::sqrt((1.0 - k) * (1.0 + k));
    return pi / (2.0 * agm(1.0, kp));
}

EllipticModulus make_modulus(double m, double mc)
{
    if (!(m > 0.0 && mc > 0.0) || std::abs(m + mc - 1.0) > 1e-12)
        throw std::domain_error("make_modulus: need m, mc in (0,1) with m + mc = 1");
    EllipticModulus r;
    r.m = m;
    r.mc = mc;
    r.k = std::sqrt(m);
    r.k_prime = std::sqrt(mc);
    r.K = pi / (2.0 * agm(1.0, r.k_prime));
    r.K_prime = pi / (2.0 * agm(1.0, r.k));
    r.q = std::exp(-pi * r.K_prime / r.K);
    return r;
}

EllipticModulus make_modulus_from_k(double k)
{
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("make_modulus_from_k: k must lie in (0,1)");
    return make_modulus(k * k, (1.0 - k) * (1.0 + k));
}

void jacobi_real(double x, double m, double mc, double K, double& sn, double& cn, double& dn)
{
    if (m == 0.0) {
        sn = std::sin(x);
        cn = std::cos(x);
        dn = 1.0;
        return;
    }
    if (mc == 0.0) {
        sn = std::tanh(x);
        cn = 1.0 / std::cosh(x);
        dn = cn;
        return;
    }
    x -= 4.0 * K * std::round(x / (4.0 * K));

    double a[32], c[32];
    a[0] = 1.0;
    double b = std::sqrt(mc);
    c[0] = std::sqrt(m);
    int N = 0;
    while (std::abs(c[N]) > 1e-17 * a[N] && N < 30) {
        double an = 0.5 * (a[N] + b);
        double cn1 = 0.5 * (a[N] - b);
        b = std::sqrt(a[N] * b);
        ++N;
        a[N] = an;
        c[N] = cn1;
    }
    double ph = std::ldexp(a[N] * x, N);
    for (int j = N; j >= 1; --j) ph = 0.5 * (ph + std::asin(c[j] / a[j] * std::sin(ph)));
    sn = std::sin(ph);
    cn = std::cos(ph);
    dn = std::sqrt(mc + m * cn * cn);
}

SnCnDn jacobi_sn_cn_dn(cplx u, const EllipticModulus& mod, double pole_eps)
{
    double s, c, d, s1, c1, d1;
    jacobi_real(u.real(), mod.m, mod.mc, mod.K, s, c, d);
    jacobi_real(u.imag(), mod.mc, mod.m, mod.K_prime, s1, c1, d1);

    SnCnDn r;
    double den = c1 * c1 + mod.m * s * s * s1 * s1;
    r.sn = cplx(s * d1, c * d * s1 * c1) / den;
    r.cn = cplx(c * c1, -s * d * s1 * d1) / den;
    r.dn = cplx(d * c1 * d1, -mod.m * s * c * s1) / den;

    if (pole_eps > 0.0) {
        double dx = u.real() - 2.0 * mod.K * std::round(u.real() / (2.0 * mod.K));
        double y = u.imag() - mod.K_prime;
        double dy = y - 2.0 * mod.K_prime * std::round(y / (2.0 * mod.K_prime));
        r.near_pole = std::hypot(dx, dy) < pole_eps;
    }
    return r;
}

namespace {

// Shared q-series for H (odd) and theta (even). The argument is first pulled
// into the strip |Im z| <= K' and |Re z| <= K, the removed periods being
// accounted for through the quasi-periodicity factors.
cplx theta_series(cplx z, const EllipticModulus& mod, const ThetaConfig& cfg, bool odd)
{
    const double K = mod.K, Kp = mod.K_prime, q = mod.q;

    double ni = std::round(z.imag() / (2.0 * Kp));
    cplx z0 = z - cplx(0.0, 2.0 * Kp * ni);
    double nr = std::round(z0.real() / (2.0 * K));
    z0 -= 2.0 * K * nr;

    // H(z0 + 2iK'n) = (-1)^n exp(-i pi n z0 / K) exp(pi K' n^2 / K) H(z0), same for theta
    cplx logfac = cplx(0.0, -pi * ni / K) * z0 + pi * Kp * ni * ni / K;
    double sign = 1.0;
    if (std::fmod(std::abs(ni), 2.0) == 1.0) sign = -sign;
    if (odd && std::fmod(std::abs(nr), 2.0) == 1.0) sign = -sign;

    cplx v = pi * z0 / (2.0 * K);
    double growth = std::abs(v.imag());
    double lq = std::log(q);
    double target = cfg.tolerance * 1e-2;

    cplx sum = 0.0;
    bool done = false;
    if (odd) {
        for (int j = 0; j < cfg.truncation; ++j) {
            double e = (j + 0.5) * (j + 0.5) * lq;
            double bound = std::exp(e + (2 * j + 1) * growth);
            cplx t = std::exp(e) * std::sin(double(2 * j + 1) * v);
            sum += (j % 2 ? -t : t);
            if (j > 0 && bound < target * std::max(1.0, std::abs(sum))) {
                done = true;
                break;
            }
        }
        sum *= 2.0;
    } else {
        sum = 1.0;
        for (int j = 1; j < cfg.truncation; ++j) {
            double e = double(j) * j * lq;
            double bound = std::exp(e + 2 * j * growth);
            cplx t = 2.0 * std::exp(e) * std::cos(double(2 * j) * v);
            sum += (j % 2 ? -t : t);
            if (bound < target * std::max(1.0, std::abs(sum))) {
                done = true;
                break;
            }
        }
    }
    if (!done) throw TruncationError("theta series: tail above tolerance after truncation limit");
    return sign * std::exp(logfac) * sum;
}

} // namespace

cplx theta_H(cplx z, const EllipticModulus& mod, const ThetaConfig& cfg)
{
    return theta_series(z, mod, cfg, true);
}

cplx theta_theta(cplx z, const EllipticModulus& mod, const ThetaConfig& cfg)
{
    return theta_series(z, mod, cfg, false);
}

} // namespace arczeros
