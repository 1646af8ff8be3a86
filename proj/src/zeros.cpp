#include "arczeros/zeros.hpp"
#include "arczeros/parallel.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace arczeros {

StripConfig default_strips(const EllipticFrame& fr, const ConformalWeightFrame& cw)
{
    const double K = fr.modulus.K;
    StripConfig s;
    s.epsilon = K / 8.0;
    for (cplx v : cw.v_points) {
        double d = std::min(std::abs(v.real()), std::abs(v.real() + K));
        if (d > 0.0) s.epsilon = std::min(s.epsilon, 0.5 * d);
    }
    return s;
}

StripConfig validate_strips(StripConfig s, const PhaseSolution& ph, const EllipticFrame& fr)
{
    if (ph.delta == 0) return s;
    const double K = fr.modulus.K;
    const double x = ph.b.real();
    for (int it = 0; it < 60; ++it) {
        double d1 = std::abs(x + s.epsilon), d2 = std::abs(x + K - s.epsilon);
        if (std::min(d1, d2) > 1e-6 * K) break;
        s.epsilon *= 0.5;
        s.shrunk = true;
    }
    return s;
}

CountPrediction predicted_counts(const PhaseSolution& ph, const WeightSpec& spec, const EllipticFrame& fr,
                                 const StripConfig& strips, CountFormula form)
{
    const double K = fr.modulus.K;
    CountPrediction c;
    c.n = ph.n;
    double rb = ph.b.real();
    c.beta = ph.delta != 0 && rb > -strips.epsilon ? 1 : 0;
    c.gamma = ph.delta != 0 && rb < -K + strips.epsilon ? 1 : 0;
    double masses = 0.0;
    for (const auto& f : spec.factors) masses += 0.5 * (1 - f.lambda) * f.m;
    double d = 1.0 - ph.delta;
    double sgn = form == CountFormula::subtractive ? 1.0 : -1.0;
    double k1 = ph.n - 0.5 * (ph.l + sgn * c.beta * d) - masses - 0.5 * d + spec.w() - 0.5 * spec.w1();
    double k2 = 0.5 * (ph.l - sgn * c.gamma * d - spec.w2());
    if (std::abs(k1 - std::round(k1)) > 1e-9 || std::abs(k2 - std::round(k2)) > 1e-9)
        throw std::logic_error("zero_analysis: predicted counts are not integers at n = " + std::to_string(ph.n));
    c.k1 = int(std::lround(k1));
    c.k2 = int(std::lround(k2));
    return c;
}

ZeroClassification classify_zeros(const std::vector<cplx>& zeros, const EllipticFrame& fr, const StripConfig& strips)
{
    const double K = fr.modulus.K, eps = strips.epsilon;
    ZeroClassification c;
    c.u.resize(zeros.size());
    c.strip.resize(zeros.size(), Strip::stray);
    std::vector<char> ok(zeros.size(), 0);
    parallel_for(zeros.size(), [&](size_t i) {
        try {
            c.u[i] = phi_inverse(zeros[i], fr);
            ok[i] = 1;
        } catch (const GeometryError&) {
            c.u[i] = cplx(std::nan(""), std::nan(""));
        }
    });
    for (size_t i = 0; i < zeros.size(); ++i) {
        c.inverted.push_back(ok[i] != 0);
        if (!ok[i]) {
            ++c.strays;
            continue;
        }
        double x = c.u[i].real();
        if (x > -eps) {
            c.strip[i] = Strip::one;
            ++c.in1;
        } else if (x < -K + eps) {
            c.strip[i] = Strip::two;
            ++c.in2;
        } else {
            ++c.strays;
        }
    }
    return c;
}

double dist_to_S(cplx z, const EllipticFrame& fr, const CurveS& S)
{
    size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < S.samples.size(); ++i) {
        double d = std::abs(S.samples[i] - z);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    const double K = fr.modulus.K;
    double lo = best > 0 ? S.t[best - 1] : 0.0;
    double hi = best + 1 < S.t.size() ? S.t[best + 1] : -K;
    if (lo < hi) std::swap(lo, hi);
    auto f = [&](double t) { return std::abs(phi_map(cplx(t, S.level), fr) - z); };
    auto r = boost::math::tools::brent_find_minima(f, hi, lo, 40);
    // Brent leaves t good to about 1e-8; Gauss-Newton on the foot of the perpendicular
    // brings distances of points on S down to rounding
    double t = r.first, best_d = r.second;
    for (int it = 0; it < 8; ++it) {
        cplx u(t, S.level);
        cplx d = phi_map(u, fr) - z, dp = phi_map_derivative(u, fr);
        double step = std::real(std::conj(d) * dp) / std::norm(dp);
        t = std::clamp(t - step, hi, lo);
        double nd = f(t);
        if (!(nd < best_d)) break;
        best_d = nd;
    }
    return std::min(bd, best_d);
}

std::optional<double> nearest_mass_dist(cplx z, const ConformalWeightFrame& cw)
{
    std::optional<double> best;
    for (int j : cw.mass_factor) {
        double d = std::abs(z - cw.z_points[size_t(j)]);
        if (!best || d < *best) best = d;
    }
    return best;
}

std::vector<ZeroRecord> zero_pipeline(const PipelineInput& in, int n_lo, int n_hi)
{
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("zero_analysis: bad degree range");
    auto seq = orthogonal_sequence(in.mt, n_hi);
    const CurveS S = curve_s(in.fr);
    const StripConfig base = default_strips(in.fr, in.cw);
    std::vector<ZeroRecord> recs(size_t(n_hi - n_lo + 1));
    for (int n = n_lo; n <= n_hi; ++n) {
        auto& r = recs[size_t(n - n_lo)];
        r.n = n;
        r.zeros = polynomial_zeros(seq.P[size_t(n)]);
        r.phase = solve_phase_system(n, in.fr, in.spec, in.cw);
        r.strips = validate_strips(base, r.phase, in.fr);
        r.predicted = predicted_counts(r.phase, in.spec, in.fr, r.strips);
        r.observed = classify_zeros(r.zeros.zeros, in.fr, r.strips);
        r.dist_S.resize(r.zeros.zeros.size());
        parallel_for(r.zeros.zeros.size(), [&](size_t i) { r.dist_S[i] = dist_to_S(r.zeros.zeros[i], in.fr, S); });
        for (cplx z : r.zeros.zeros) r.dist_mass.push_back(nearest_mass_dist(z, in.cw));
    }
    return recs;
}

std::optional<int> scan_n0(const std::vector<ZeroRecord>& recs)
{
    std::optional<int> n0;
    for (auto it = recs.rbegin(); it != recs.rend(); ++it) {
        bool match = it->observed.in1 == it->predicted.k1 && it->observed.in2 == it->predicted.k2;
        if (!match) break;
        n0 = it->n;
    }
    return n0;
}

RationalTest detect_rational(double x, double tol, double big_quotient)
{
    RationalTest r;
    // convergents h/k of the continued fraction of x
    long h0 = 1, h1 = long(std::floor(x)), k0 = 0, k1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        double err = std::abs(x - double(h1) / double(k1));
        if (err < tol) {
            r.num = h1;
            r.den = k1;
            r.error = err;
            r.rational = frac == 0.0 || 1.0 / frac > big_quotient;
            return r;
        }
        if (frac == 0.0) break;
        double inv = 1.0 / frac;
        long a = long(std::floor(inv));
        frac = inv - double(a);
        long h2 = a * h1 + h0, k2 = a * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    r.num = h1;
    r.den = k1;
    r.error = std::abs(x - double(h1) / double(k1));
    return r;
}

AccumulationReport accumulation_analysis(const std::vector<ZeroRecord>& recs, const PipelineInput& in)
{
    AccumulationReport rep;
    const auto& fr = in.fr;
    rep.omega2 = harmonic_measure_omega2(fr);
    rep.rationality = detect_rational(rep.omega2);

    for (const auto& r : recs)
        for (size_t i = 0; i < r.zeros.zeros.size(); ++i) {
            if (r.observed.strip[i] != Strip::stray) continue;
            StrayPoint s;
            s.n = r.n;
            s.z = r.zeros.zeros[i];
            s.u = r.observed.u[i];
            s.dist_S = r.dist_S[i];
            s.dist_mass = r.dist_mass[i];
            s.near_mass = s.dist_mass && *s.dist_mass < s.dist_S;
            rep.strays.push_back(s);
        }

    if (rep.rationality.rational) {
        // Re b^(n) runs through a finite set; the strays sit near phi of those points on the level of S
        const double level = fr.zeta.imag() + fr.modulus.K_prime;
        const long period = 2 * std::max(1L, rep.rationality.den);
        for (long n = 1; n <= 2 * period; ++n) {
            auto ph = solve_phase_system(int(n), fr, in.spec, in.cw);
            if (ph.delta != -1) continue;
            cplx p = phi_map(cplx(ph.b.real(), level), fr);
            bool seen = false;
            for (cplx q : rep.lattice) seen = seen || std::abs(q - p) < 1e-9;
            if (!seen) rep.lattice.push_back(p);
        }
        for (const auto& s : rep.strays) {
            double d = std::numeric_limits<double>::infinity();
            for (cplx q : rep.lattice) d = std::min(d, std::abs(s.z - q));
            rep.lattice_dist.push_back(d);
        }
    }

    for (int j : in.cw.mass_factor) {
        std::vector<double> hits;
        cplx zj = in.cw.z_points[size_t(j)];
        for (const auto& r : recs) {
            double d = std::numeric_limits<double>::infinity();
            for (cplx z : r.zeros.zeros) d = std::min(d, std::abs(z - zj));
            hits.push_back(d);
        }
        rep.mass_hits.push_back(hits);
    }
    return rep;
}

double stray_max_gap(const AccumulationReport& rep, const EllipticFrame& fr, int n_max, double epsilon)
{
    const double K = fr.modulus.K;
    std::vector<double> xs{-K + epsilon, -epsilon};
    for (const auto& s : rep.strays)
        if (s.n <= n_max && !s.near_mass && std::isfinite(s.u.real())) xs.push_back(s.u.real());
    std::sort(xs.begin(), xs.end());
    double gap = 0.0;
    for (size_t i = 1; i < xs.size(); ++i) gap = std::max(gap, xs[i] - xs[i - 1]);
    return gap;
}

std::vector<EquilibriumRow> equilibrium_check(const std::vector<ZeroRecord>& recs, const EllipticFrame& fr)
{
    std::vector<EquilibriumRow> rows;
    const double w2 = harmonic_measure_omega2(fr);
    for (const auto& r : recs) {
        EquilibriumRow e;
        e.n = r.n;
        e.omega2 = w2;
        e.fraction2 = double(r.observed.in2) / r.n;
        e.deviation = std::abs(e.fraction2 - w2);
        e.ok = e.deviation <= 2.0 / r.n;
        rows.push_back(e);
    }
    return rows;
}

} // namespace arczeros
