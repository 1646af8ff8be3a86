#include "arczeros/theta_rep.hpp"
#include "arczeros/parallel.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace arczeros {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }
} // namespace

std::vector<cplx> w_points(const WeightSpec& spec, const EllipticFrame& fr)
{
    std::vector<cplx> r;
    for (int k : spec.w_endpoints) r.push_back(corner_u(fr, k));
    return r;
}

PhaseSolution solve_phase_system(int n, const EllipticFrame& fr, const WeightSpec& spec,
                                 const ConformalWeightFrame& cw)
{
    if (n < 0) throw ThetaRepError("theta_representation: negative degree");
    const double K = fr.modulus.K, Kp = fr.modulus.K_prime;
    const cplx zeta = fr.zeta;
    const double a = spec.a(), w = spec.w();

    PhaseSolution ph;
    ph.n = n;
    double sum_re = 0.0, sum_im = 0.0;
    for (size_t j = 0; j < spec.factors.size(); ++j) {
        double lm = double(spec.factors[j].lambda * spec.factors[j].m);
        sum_re += lm * cw.v_points[j].real();
        sum_im += lm * cw.v_points[j].imag();
    }
    ph.X = (2.0 * n + 2.0 * w - 2.0 * a - 1.0) * zeta.real() + sum_re;

    // the unique l of the right parity with -l K - X in (-K, K)
    const int w2 = spec.w2();
    double lf = -ph.X / K;
    int l = int(std::floor(lf));
    if (((l - w2) % 2 + 2) % 2 != 0) l -= 1;
    // now l <= lf, l = w2 mod 2; y = -lK - X = K (lf - l) in [0, 2K)
    double y = K * (lf - l);
    if (y >= K) {
        l += 2;
        y -= 2.0 * K;
    }
    ph.l = l;
    if (std::abs(y) < 1e-9 * K) {
        ph.degenerate = true;
        ph.delta = 0;
        ph.b = 0.0;
    } else {
        if (std::abs(K - std::abs(y)) < 1e-9 * K) ph.on_boundary = true;
        ph.delta = y < 0 ? 1 : -1;
        double reb = ph.delta * y;
        double sum_u = 0.0;
        for (cplx u : w_points(spec, fr)) sum_u += u.imag();
        double T = -zeta.imag() - sum_im - sum_u;
        // Im(delta b) = T - 2 k K' with Im b in (-K', K']
        int k0 = int(std::floor(T / (2.0 * Kp)));
        int k = k0 - 2;
        double imb = 0.0;
        for (; k <= k0 + 2; ++k) {
            imb = ph.delta * (T - 2.0 * k * Kp);
            if (imb > -Kp && imb <= Kp) break;
        }
        if (imb > Kp + 1e-12 || imb <= -Kp - 1e-12) throw ThetaRepError("theta_representation: no admissible Im b");
        ph.k = k;
        ph.b = cplx(reb, imb);
        ph.m = int(std::lround(2.0 * k + sum_u / Kp));
    }
    ph.residual_re = std::abs(ph.X + ph.delta * ph.b.real() + ph.l * K) / K;
    ph.residual_im = std::abs(ph.m * Kp + zeta.imag() + sum_im + ph.delta * ph.b.imag()) / Kp;
    return ph;
}

namespace {

cplx R1(cplx u, const ThetaPolyRep& rep)
{
    const auto& fr = *rep.frame;
    const auto& spec = *rep.spec;
    const auto& ph = rep.phase;
    const cplx z = fr.zeta, zb = std::conj(fr.zeta);
    int wa = int(std::lround(spec.w() - spec.a()));
    cplx r = (ph.delta == 0 ? cplx(1.0) : H(fr, u + double(ph.delta) * ph.b)) / H(fr, u + zb);
    r *= std::pow(H(fr, u + zb) * H(fr, u + z), wa);
    for (size_t j = 0; j < spec.factors.size(); ++j) {
        cplx v = rep.cw->v_points[j];
        const auto& f = spec.factors[j];
        r *= f.lambda == 1 ? std::pow(H(fr, u + v), f.m) : H(fr, u - v);
    }
    for (cplx ui : rep.u_points) r /= H(fr, u - ui);
    return r;
}

cplx omega_raw(cplx u, const ThetaPolyRep& rep)
{
    const auto& fr = *rep.frame;
    const double K = fr.modulus.K;
    const int n = rep.phase.n;
    cplx ratio = H(fr, u + std::conj(fr.zeta)) / H(fr, u - fr.zeta);
    return std::exp(-I * pi * double(rep.phase.k) * u / K) * std::pow(ratio, n) * R1(u, rep);
}

} // namespace

CircleSamples make_circle_samples(const EllipticFrame& fr, int count, double rho)
{
    if (count < 4 || !(rho > 0.0 && rho < 1.0)) throw ThetaRepError("theta_representation: bad sample circle");
    CircleSamples s;
    s.rho = rho;
    s.z.resize(size_t(count));
    s.u.resize(size_t(count));
    for (int i = 0; i < count; ++i) s.z[size_t(i)] = std::polar(rho, 2.0 * pi * i / count);
    parallel_for(size_t(count), [&](size_t i) { s.u[i] = phi_inverse(s.z[i], fr); });
    return s;
}

CoefficientFit fit_coefficients(const std::vector<cplx>& values, const CircleSamples& samples, int degree)
{
    const int M = int(values.size());
    if (degree >= M / 2) throw ThetaRepError("theta_representation: too few samples for the fit");
    CoefficientFit fit;
    std::vector<cplx> all(static_cast<size_t>(M));
    for (int j = 0; j < M; ++j) {
        cplx s = 0.0;
        for (int i = 0; i < M; ++i) s += values[size_t(i)] * std::polar(1.0, -2.0 * pi * double((long(i) * j) % M) / M);
        all[size_t(j)] = s / double(M);
    }
    double kept = 0.0, tail = 0.0;
    for (int j = 0; j <= degree; ++j) {
        fit.coeffs.push_back(all[size_t(j)] / std::pow(samples.rho, j));
        kept = std::max(kept, std::abs(fit.coeffs.back()));
    }
    // coefficients past the degree, and the aliased negative powers, should vanish
    for (int j = degree + 1; j < M; ++j) {
        int e = j <= M / 2 ? j : j - M;
        tail = std::max(tail, std::abs(all[size_t(j)]) / std::pow(samples.rho, e));
    }
    fit.tail = tail / std::max(kept, 1e-300);
    return fit;
}

int q_degree(int n, const WeightSpec& spec)
{
    return int(std::lround(n + 2.0 - 2.0 * spec.v()));
}

ThetaPolyRep make_theta_rep(int n, const EllipticFrame& fr, const WeightSpec& spec, const ConformalWeightFrame& cw,
                            const CircleSamples& samples)
{
    ThetaPolyRep rep;
    rep.frame = &fr;
    rep.spec = &spec;
    rep.cw = &cw;
    rep.phase = solve_phase_system(n, fr, spec, cw);
    if (rep.phase.degenerate)
        throw ThetaRepError("theta_representation: degenerate phase (delta = 0) at n = " + std::to_string(n));
    rep.u_points = w_points(spec, fr);
    const cplx z = fr.zeta, zb = std::conj(fr.zeta);
    const double K = fr.modulus.K;
    rep.phase_phi = std::arg(H(fr, z));

    cplx c_phi = std::exp(I * fr.arcs.phi[0]) * std::pow(H(fr, z) / H(fr, zb), 2);
    cplx ratio = c_phi * H(fr, cplx(0.0, 2.0 * z.imag())) / H(fr, 2.0 * z);
    rep.c_omega_raw = 2.0 * std::pow(ratio, n) * std::exp(I * pi * double(rep.phase.k) * z / K) / R1(z, rep);
    rep.c_omega = rep.c_omega_raw;

    auto coeffs = pn_theta_coefficients(rep, samples);
    rep.correction_c = 1.0 / coeffs.back();
    rep.correction = std::abs(rep.correction_c - 1.0);
    rep.c_omega = rep.c_omega_raw * rep.correction_c;
    return rep;
}

cplx omega_n(cplx u, const ThetaPolyRep& rep)
{
    return rep.c_omega * omega_raw(u, rep);
}

cplx pn_theta(cplx u, const ThetaPolyRep& rep)
{
    return 0.5 * (omega_n(u, rep) + omega_n(-u, rep));
}

cplx q_theta(cplx u, const ThetaPolyRep& rep)
{
    cplx z = phi_map(u, *rep.frame);
    cplx W = lift_W(z, *rep.spec);
    cplx sR = sqrt_R_at_u(u, *rep.frame);
    if (std::abs(sR) == 0.0) throw ThetaRepError("theta_representation: q evaluated at a branch point");
    return 0.5 * (omega_n(u, rep) - omega_n(-u, rep)) * W / sR;
}

cplx psi_n(cplx u, const ThetaPolyRep& rep)
{
    const auto& fr = *rep.frame;
    const auto& spec = *rep.spec;
    const auto& ph = rep.phase;
    const cplx z = fr.zeta, zb = std::conj(fr.zeta);
    const double K = fr.modulus.K;
    int e1 = int(std::lround(ph.n + spec.w() - spec.a()));
    bool phi1_in_w = std::find(spec.w_endpoints.begin(), spec.w_endpoints.end(), 0) != spec.w_endpoints.end();
    double c = (int(std::lround(2.0 * spec.a())) % 2 ? -1.0 : 1.0) * (phi1_in_w ? -1.0 : 1.0);

    auto hq = [&](cplx s) { return H(fr, u + s) / H(fr, u - s); };
    cplx r = c * std::exp(-I * pi * double(ph.m) * u / K) * std::pow(hq(z), e1) * std::pow(hq(zb), e1 - 1);
    for (size_t j = 0; j < spec.factors.size(); ++j)
        r *= std::pow(hq(rep.cw->v_points[j]), spec.factors[j].lambda * spec.factors[j].m);
    if (ph.delta != 0) r *= std::pow(hq(ph.b), ph.delta);
    return r;
}

std::vector<cplx> pn_theta_coefficients(const ThetaPolyRep& rep, const CircleSamples& samples, double* tail)
{
    std::vector<cplx> vals(samples.u.size());
    parallel_for(vals.size(), [&](size_t i) { vals[i] = pn_theta(samples.u[i], rep); });
    auto fit = fit_coefficients(vals, samples, rep.phase.n);
    if (tail) *tail = fit.tail;
    return fit.coeffs;
}

std::vector<cplx> q_theta_coefficients(const ThetaPolyRep& rep, const CircleSamples& samples, double* tail)
{
    int d = q_degree(rep.phase.n, *rep.spec);
    if (d < 0) throw ThetaRepError("theta_representation: Q has negative degree");
    std::vector<cplx> vals(samples.u.size());
    parallel_for(vals.size(), [&](size_t i) { vals[i] = q_theta(samples.u[i], rep); });
    auto fit = fit_coefficients(vals, samples, d);
    if (tail) *tail = fit.tail;
    return fit.coeffs;
}

TExistence t_polynomial_existence(int two_nu, const EllipticFrame& fr, const WeightSpec& spec)
{
    const double a = spec.a();
    if (two_nu <= 0 || 0.5 * two_nu <= a) throw ThetaRepError("tpoly: nu must exceed a");
    ConformalWeightFrame cw = point_masses(spec, fr);
    const double K = fr.modulus.K;
    double x = (2.0 * two_nu - 2.0 * a) * fr.zeta.real();
    for (size_t j = 0; j < spec.factors.size(); ++j) x += spec.factors[j].m * cw.v_points[j].real();
    TExistence r;
    double lf = -x / K;
    r.l = int(std::lround(lf));
    r.mismatch = std::abs(lf - r.l);
    r.exists = r.mismatch <= 1e-9 && r.l > 0;
    if (!r.exists) r.l = 0;
    return r;
}

namespace {

struct TContext {
    const EllipticFrame& fr;
    const WeightSpec& spec;
    std::vector<cplx> v;
    int two_nu;
    int a;
    double m_exp;
};

cplx g_tpoly(cplx u, const TContext& c)
{
    const auto& fr = c.fr;
    const cplx z = fr.zeta, zb = std::conj(fr.zeta);
    cplx r = std::exp(I * pi * c.m_exp * u / fr.modulus.K) * std::pow(H(fr, u + zb) / H(fr, u - z), c.two_nu);
    for (size_t j = 0; j < c.v.size(); ++j) r *= std::pow(H(fr, u + c.v[j]), c.spec.factors[j].m);
    return r / std::pow(H(fr, u + z) * H(fr, u + zb), c.a);
}

double arc_angle(cplx u, const EllipticFrame& fr)
{
    double phi = std::arg(phi_map(u, fr));
    double p1 = fr.arcs.phi[0];
    return phi - 2.0 * pi * std::floor((phi - p1 + 1e-13) / (2.0 * pi));
}

cplx tau_unscaled(cplx u, const TContext& c)
{
    double phi = arc_angle(u, c.fr);
    return 0.5 * (g_tpoly(u, c) + g_tpoly(-u, c)) * std::exp(-I * (0.5 * c.two_nu) * phi);
}

cplx arc_point(int arc, double y, const EllipticFrame& fr)
{
    return arc == 1 ? cplx(0.0, y) : cplx(-fr.modulus.K, y);
}

} // namespace

TPolynomial minimal_tau(int two_nu, const EllipticFrame& fr, const WeightSpec& spec)
{
    auto ex = t_polynomial_existence(two_nu, fr, spec);
    if (!ex.exists) throw ThetaRepError("tpoly: the existence condition fails for this nu");
    // G picks up (-1)^l under u -> u + 2iK', so for odd l the symmetrized sum is not
    // a function of z and vanishes at the far corners
    if (ex.l % 2 != 0) throw ThetaRepError("tpoly: l is odd, the theta quotient is not single valued");
    if (!is_integer(spec.a())) throw ThetaRepError("tpoly: the denominator must have even total multiplicity");
    for (double mid : {0.5 * (fr.arcs.phi[0] + fr.arcs.phi[1]), 0.5 * (fr.arcs.phi[2] + fr.arcs.phi[3])})
        if (!(trig_A(mid, spec) > 0.0)) throw ThetaRepError("tpoly: the denominator must be positive on the arcs");

    ConformalWeightFrame cw = point_masses(spec, fr);
    double sum_im = 0.0;
    for (size_t j = 0; j < spec.factors.size(); ++j) sum_im += spec.factors[j].m * cw.v_points[j].imag();
    TContext ctx{fr, spec, cw.v_points, two_nu, int(std::lround(spec.a())), sum_im / (2.0 * fr.modulus.K_prime)};

    TPolynomial t;
    t.two_nu = two_nu;
    t.l = ex.l;
    t.m_exp = ctx.m_exp;
    t.frame = &fr;
    t.spec = &spec;

    cplx t0 = tau_unscaled(0.0, ctx);
    t.eps = std::conj(t0) / std::abs(t0);

    const double Kp = fr.modulus.K_prime;
    const int grid = 2000;
    // on the arcs tau / sqrt(A) is the real part of w, and |w| is constant there
    auto w_at = [&](int arc, double y) {
        cplx u = arc_point(arc, y, fr);
        double phi = arc_angle(u, fr);
        return t.eps * g_tpoly(u, ctx) * std::exp(-I * (0.5 * two_nu) * phi) / std::sqrt(trig_A(phi, spec));
    };
    std::vector<std::pair<double, double>> samples; // (phi, tau / sqrt(A)) before scaling
    double maxabs = 0.0, maxim = 0.0;
    auto h_at = [&](int arc, double y) {
        cplx u = arc_point(arc, y, fr);
        cplx tv = t.eps * tau_unscaled(u, ctx);
        double phi = arc_angle(u, fr);
        maxim = std::max(maxim, std::abs(tv.imag()));
        return std::pair<double, double>(phi, tv.real() / std::sqrt(trig_A(phi, spec)));
    };
    for (int arc = 1; arc <= 2; ++arc)
        for (int i = 0; i <= grid; ++i) {
            auto s = h_at(arc, Kp * i / grid);
            samples.push_back(s);
            maxabs = std::max(maxabs, std::abs(s.second));
        }
    t.M = 1.0 / maxabs;
    t.imag_residual = maxim / maxabs;
    for (int k = 0; k < 4; ++k) {
        cplx u = corner_u(fr, k);
        auto s = h_at(k == 0 || k == 1 ? 1 : 2, u.imag());
        t.endpoint_values.push_back(s.second * t.M);
    }

    // interior alternation points: Im w changes sign and |Re w| is maximal
    for (int arc = 1; arc <= 2; ++arc) {
        auto f = [&](double y) { return w_at(arc, y).imag(); };
        double prev = f(Kp * 1e-9);
        for (int i = 1; i <= grid; ++i) {
            double y1 = i < grid ? Kp * i / grid : Kp * (1.0 - 1e-9);
            double cur = f(y1);
            if (prev * cur < 0.0) {
                double y0 = i == 1 ? Kp * 1e-9 : Kp * (i - 1) / grid;
                boost::uintmax_t iters = 100;
                auto root = boost::math::tools::toms748_solve(
                    f, y0, y1, prev, cur, boost::math::tools::eps_tolerance<double>(52), iters);
                double y = 0.5 * (root.first + root.second);
                auto s = h_at(arc, y);
                if (std::abs(s.second) * t.M > 1.0 - 1e-6) t.alternation.push_back(s.first);
            }
            prev = cur;
        }
    }
    std::sort(t.alternation.begin(), t.alternation.end());

    // tau^2 - A = R sigma^2 with sigma = c prod sin((phi - psi_j)/2)
    double num = 0.0, den = 0.0;
    std::vector<double> lhs, rs2;
    for (const auto& s : samples) {
        double phi = s.first, A = trig_A(phi, spec);
        double tau = s.second * t.M * std::sqrt(A);
        double prod = 1.0;
        for (double psi : t.alternation) prod *= std::sin(0.5 * (phi - psi));
        double rr = trig_R(phi, fr.arcs) * prod * prod;
        lhs.push_back(tau * tau - A);
        rs2.push_back(rr);
        num += (tau * tau - A) * rr;
        den += rr * rr;
    }
    double c2 = den > 0 ? num / den : 0.0;
    t.sigma_c = std::sqrt(std::abs(c2));
    double worst = 0.0, amax = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        worst = std::max(worst, std::abs(lhs[i] - c2 * rs2[i]));
        amax = std::max(amax, std::abs(trig_A(samples[i].first, spec)));
    }
    t.pell_residual = worst / amax;
    return t;
}

double tau_at(cplx u, const TPolynomial& t)
{
    const auto& fr = *t.frame;
    ConformalWeightFrame cw = point_masses(*t.spec, fr);
    TContext ctx{fr, *t.spec, cw.v_points, t.two_nu, int(std::lround(t.spec->a())), t.m_exp};
    return (t.M * t.eps * tau_unscaled(u, ctx)).real();
}

} // namespace arczeros
