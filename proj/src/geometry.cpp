#include "arczeros/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace arczeros {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

double chordal(cplx a, cplx b)
{
    return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}
} // namespace

ArcConfiguration normalize_arcs(const std::array<double, 4>& raw)
{
    for (double x : raw)
        if (!std::isfinite(x)) throw GeometryError("normalize_arcs: non-finite angle");
    if (!(raw[0] < raw[1] && raw[1] < raw[2] && raw[2] < raw[3] && raw[3] < raw[0] + 2.0 * pi))
        throw GeometryError("normalize_arcs: need phi1 < phi2 < phi3 < phi4 < phi1 + 2pi");
    ArcConfiguration c;
    c.psi = 0.5 * (raw[0] + raw[3]) - pi;
    for (int i = 0; i < 4; ++i) c.phi[i] = raw[i] - c.psi;
    return c;
}

cplx cross_ratio(const ArcConfiguration& cfg)
{
    cplx z[4];
    for (int i = 0; i < 4; ++i) z[i] = std::polar(1.0, cfg.phi[i]);
    return ((z[3] - z[0]) / (z[3] - z[1])) / ((z[2] - z[0]) / (z[2] - z[1]));
}

EllipticModulus modulus_from_cross_ratio(const ArcConfiguration& cfg)
{
    const auto& p = cfg.phi;
    auto hs = [](double a, double b) { return std::sin(0.5 * (b - a)); };
    double den = hs(p[1], p[3]) * hs(p[0], p[2]);
    double m = hs(p[0], p[3]) * hs(p[1], p[2]) / den;
    double mc = hs(p[2], p[3]) * hs(p[0], p[1]) / den;
    cplx cr = cross_ratio(cfg);
    if (std::abs(cr.imag()) > 1e-9 || std::abs(cr.real() - m) > 1e-9 * std::max(1.0, m))
        throw GeometryError("modulus_from_cross_ratio: cross ratio is not the expected real number");
    if (!(m > 0.0 && m < 1.0 && mc > 0.0))
        throw GeometryError("modulus_from_cross_ratio: k^2 outside (0,1)");
    return make_modulus(m, mc);
}

cplx sn_squared(cplx u, const EllipticModulus& mod)
{
    cplx s = jacobi_sn_cn_dn(u, mod).sn;
    return s * s;
}

cplx phi_map(cplx u, const EllipticFrame& fr)
{
    cplx S = sn_squared(u, fr.modulus);
    if (!std::isfinite(std::abs(S))) return fr.mA / fr.mC;
    return (fr.mA * S + fr.mB) / (fr.mC * S + fr.mD);
}

cplx phi_map_derivative(cplx u, const EllipticFrame& fr)
{
    auto t = jacobi_sn_cn_dn(u, fr.modulus);
    cplx S = t.sn * t.sn;
    cplx den = fr.mC * S + fr.mD;
    return (fr.mA * fr.mD - fr.mB * fr.mC) / (den * den) * 2.0 * t.sn * t.cn * t.dn;
}

cplx mobius_S(cplx z, const EllipticFrame& fr)
{
    return (fr.mB - fr.mD * z) / (fr.mC * z - fr.mA);
}

cplx fold_to_box(cplx u, const EllipticModulus& mod)
{
    const double K = mod.K, Kp = mod.K_prime;
    auto red_y = [&](double y) {
        y -= 2.0 * Kp * std::floor((y + Kp) / (2.0 * Kp));
        if (y <= -Kp) y += 2.0 * Kp;
        return y;
    };
    double x = u.real(), y = red_y(u.imag());
    x -= 2.0 * K * std::floor((x + K) / (2.0 * K));
    if (x > 0.0) {
        x = -x;
        y = red_y(-y);
    }
    double tol = 1e-13 * K;
    if (std::abs(x) < tol) {
        x = 0.0;
        y = std::abs(y);
    } else if (std::abs(x + K) < tol) {
        x = -K;
        y = std::abs(y);
    }
    if (std::abs(y + Kp) < 1e-13 * Kp) y = Kp;
    return {x, y};
}

cplx solve_sn2(cplx target, const EllipticFrame& fr, bool lower_half_seed)
{
    const auto& mod = fr.modulus;
    if (!std::isfinite(std::abs(target))) return {0.0, mod.K_prime};

    cplx u = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < fr.seed_u.size(); ++i) {
        if (lower_half_seed && fr.seed_u[i].imag() >= 0.0) continue;
        double d = chordal(fr.seed_S[i], target);
        if (d < best) {
            best = d;
            u = fr.seed_u[i];
        }
    }

    bool inverted = std::abs(target) > 1.0;
    cplx tinv = inverted ? 1.0 / target : 0.0;
    auto resid = [&](cplx x, cplx* deriv) {
        auto t = jacobi_sn_cn_dn(x, mod);
        cplx S = t.sn * t.sn;
        if (!inverted) {
            if (deriv) *deriv = 2.0 * t.sn * t.cn * t.dn;
            return S - target;
        }
        if (deriv) *deriv = -2.0 * t.cn * t.dn / (S * t.sn);
        return 1.0 / S - tinv;
    };

    for (int it = 0; it < 200; ++it) {
        cplx d;
        cplx F = resid(u, &d);
        double fa = std::abs(F);
        if (!(fa > 1e-17)) break;
        if (std::abs(d) == 0.0 || !std::isfinite(std::abs(d))) {
            u += cplx(1e-7 * mod.K, 1e-7 * mod.K_prime);
            continue;
        }
        cplx step = F / d;
        double lam = 1.0;
        bool moved = false;
        while (lam > 1e-8) {
            cplx un = u - lam * step;
            double fn = std::abs(resid(un, nullptr));
            if (fn < fa) {
                u = fold_to_box(un, mod);
                moved = true;
                break;
            }
            lam *= 0.5;
        }
        if (!moved || std::abs(lam * step) < 1e-16 * (1.0 + std::abs(u))) break;
    }
    return fold_to_box(u, mod);
}

cplx pole_zeta(const EllipticFrame& fr)
{
    cplx z = solve_sn2(fr.sn2_zeta_target, fr, true);
    cplx r = sn_squared(z, fr.modulus) - fr.sn2_zeta_target;
    if (std::abs(r) > 1e-8 * (1.0 + std::abs(fr.sn2_zeta_target)))
        throw GeometryError("pole_zeta: Newton iteration did not converge");
    return z;
}

cplx phi_inverse(cplx z, const EllipticFrame& fr)
{
    if (!std::isfinite(std::abs(z))) return fr.zeta;
    cplx den = fr.mC * z - fr.mA;
    cplx S = std::abs(den) == 0.0 ? cplx(std::numeric_limits<double>::infinity(), 0.0)
                                  : (fr.mB - fr.mD * z) / den;
    cplx u = solve_sn2(S, fr);
    cplx back = phi_map(u, fr);
    double err = std::abs(back - z);
    if (!(err <= 1e-9 * std::max(1.0, std::abs(z))) && !(chordal(back, z) <= 1e-12))
        throw GeometryError("phi_inverse: Newton iteration did not converge");
    return u;
}

cplx H(const EllipticFrame& fr, cplx u)
{
    return theta_H(u, fr.modulus, fr.theta);
}

double greens_in_u(cplx u, cplx gamma, const EllipticFrame& fr)
{
    return std::log(std::abs(H(fr, u + std::conj(gamma)) / H(fr, u - gamma)));
}

double greens_function(cplx z, std::optional<cplx> c0, const EllipticFrame& fr)
{
    cplx u = phi_inverse(z, fr);
    cplx g = c0 ? phi_inverse(*c0, fr) : fr.zeta;
    return greens_in_u(u, g, fr);
}

double harmonic_measure_omega2(const EllipticFrame& fr)
{
    return -fr.zeta.real() / fr.modulus.K;
}

double capacity(const EllipticFrame& fr)
{
    return std::abs(H(fr, cplx(0.0, 2.0 * fr.zeta.imag())) / H(fr, 2.0 * fr.zeta));
}

CurveS curve_s(const EllipticFrame& fr, int n_samples)
{
    CurveS c;
    c.level = fr.zeta.imag() + fr.modulus.K_prime;
    const double K = fr.modulus.K;
    for (int i = 0; i < n_samples; ++i) {
        double t = -0.5 * K * (1.0 - std::cos(pi * (i + 0.5) / n_samples));
        c.t.push_back(t);
        c.samples.push_back(phi_map(cplx(t, c.level), fr));
    }
    return c;
}

cplx corner_u(const EllipticFrame& fr, int endpoint)
{
    const double K = fr.modulus.K, Kp = fr.modulus.K_prime;
    switch (endpoint) {
    case 0: return {0.0, 0.0};
    case 1: return {0.0, Kp};
    case 2: return {-K, Kp};
    case 3: return {-K, 0.0};
    }
    throw GeometryError("corner_u: endpoint index must be 0..3");
}

EllipticFrame make_frame(const ArcConfiguration& cfg, int grid, ThetaConfig theta)
{
    EllipticFrame fr;
    fr.arcs = cfg;
    fr.theta = theta;
    fr.modulus = modulus_from_cross_ratio(cfg);
    fr.grid = grid;
    const auto& p = cfg.phi;
    const auto& mod = fr.modulus;

    fr.tan_half_phi1 = std::tan(0.5 * p[0]);
    fr.alpha = -fr.tan_half_phi1 / std::tan(0.5 * p[1]);
    fr.beta = -fr.tan_half_phi1 / std::tan(0.5 * p[2]);
    fr.sn_a_sq = 0.5 * (1.0 - fr.alpha);
    fr.beta_from_a = 2.0 * (1.0 - fr.sn_a_sq) / (1.0 - mod.m * fr.sn_a_sq) - 1.0;
    if (std::abs(fr.beta - fr.beta_from_a) > 1e-10)
        fr.warnings.push_back("beta: the two closed forms disagree by " +
                              std::to_string(std::abs(fr.beta - fr.beta_from_a)));
    if (mod.q > 0.95)
        fr.warnings.push_back("nome q > 0.95: arcs nearly degenerate, inversion is ill-conditioned");

    double s1 = std::sin(0.5 * p[0]);
    double g = -std::sin(0.5 * (p[0] + p[1])) / std::cos(0.5 * p[0]);
    fr.mA = 2.0 * s1 * std::polar(1.0, 0.5 * p[1]);
    fr.mB = g * std::polar(1.0, 0.5 * p[0]);
    fr.mC = 2.0 * s1 * std::polar(1.0, -0.5 * p[1]);
    fr.mD = g * std::polar(1.0, -0.5 * p[0]);
    fr.sn2_zeta_target = -fr.mD / fr.mC;

    fr.seed_u.reserve(size_t(grid) * grid);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            cplx u(-mod.K * (i + 0.5) / grid, -mod.K_prime + 2.0 * mod.K_prime * (j + 0.5) / grid);
            fr.seed_u.push_back(u);
            fr.seed_S.push_back(sn_squared(u, mod));
        }

    fr.zeta = pole_zeta(fr);
    if (!(fr.zeta.imag() < 0.0 && fr.zeta.real() < 0.0 && fr.zeta.real() > -mod.K))
        fr.warnings.push_back("pole: zeta is not in the open lower half of the box");

    // branch of sqrt(R): arg sqrt(R(e^{i phi})) = arg(-e^{i phi}) at the middle of the gap (phi2, phi3)
    cplx z0 = std::polar(1.0, 0.5 * (p[1] + p[2]));
    cplx u0 = phi_inverse(z0, fr);
    cplx R = 1.0;
    for (int k = 0; k < 4; ++k) R *= (z0 - std::polar(1.0, p[k])) / (2.0 * I * std::polar(1.0, 0.5 * p[k]));
    cplx d0 = phi_map_derivative(u0, fr);
    cplx c = std::sqrt(R / (d0 * d0));
    if (std::real(std::conj(c * d0) * (-z0)) < 0.0) c = -c;
    fr.sqrtR_scale = c;
    return fr;
}

} // namespace arczeros
