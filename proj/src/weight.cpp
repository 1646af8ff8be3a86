#include "arczeros/weight.hpp"
#include "arczeros/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace arczeros {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

bool is_real(cplx xi) { return std::abs(xi.imag()) < 1e-14; }

// reduce into [phi1, phi1 + 2 pi)
double wrap(double phi, const ArcConfiguration& arcs)
{
    double p1 = arcs.phi[0];
    return phi - 2.0 * pi * std::floor((phi - p1) / (2.0 * pi));
}
} // namespace

double WeightSpec::a() const
{
    double s = 0.0;
    for (const auto& f : factors) s += f.m;
    return 0.5 * s;
}

int WeightSpec::w1() const
{
    return int(std::count_if(w_endpoints.begin(), w_endpoints.end(), [](int k) { return k < 2; }));
}

int WeightSpec::w2() const
{
    return int(w_endpoints.size()) - w1();
}

std::vector<int> WeightSpec::v_endpoints() const
{
    std::vector<int> r;
    for (int k = 0; k < 4; ++k)
        if (std::find(w_endpoints.begin(), w_endpoints.end(), k) == w_endpoints.end()) r.push_back(k);
    return r;
}

int arc_index(double phi, const ArcConfiguration& arcs)
{
    double x = wrap(phi, arcs);
    const auto& p = arcs.phi;
    if (x > p[0] && x < p[1]) return 1;
    if (x > p[2] && x < p[3]) return 2;
    return 0;
}

void validate(const WeightSpec& spec)
{
    std::set<int> seen;
    for (int k : spec.w_endpoints) {
        if (k < 0 || k > 3) throw WeightError("weight: W endpoint index must be 0..3");
        if (!seen.insert(k).second) throw WeightError("weight: W endpoint listed twice");
    }
    if (spec.c_A == 0.0) throw WeightError("weight: c_A must be nonzero");
    for (size_t j = 0; j < spec.factors.size(); ++j) {
        const auto& f = spec.factors[j];
        if (f.m < 1) throw WeightError("weight: factor multiplicity must be positive");
        if (f.lambda != 1 && f.lambda != -1) throw WeightError("weight: lambda must be +1 or -1");
        if (f.lambda == -1 && f.m != 1)
            throw WeightError("weight: a point mass (lambda = -1) needs a simple factor");
        if (is_real(f.xi)) {
            double x = wrap(f.xi.real(), spec.arcs);
            const auto& p = spec.arcs.phi;
            bool on_e = (x >= p[0] - 1e-12 && x <= p[1] + 1e-12) || (x >= p[2] - 1e-12 && x <= p[3] + 1e-12);
            if (on_e) throw WeightError("weight: a zero of the denominator lies on the arcs");
        } else {
            bool paired = false;
            for (size_t i = 0; i < spec.factors.size(); ++i) {
                const auto& g = spec.factors[i];
                if (i != j && std::abs(g.xi - std::conj(f.xi)) < 1e-12 && g.m == f.m && g.lambda == f.lambda)
                    paired = true;
            }
            if (!paired) throw WeightError("weight: nonreal zero without a matching conjugate partner");
        }
    }
    double d = spec.a() - spec.w() + 1.0;
    if (std::abs(d - std::round(d)) > 1e-12 || std::round(d) < 0)
        throw WeightError("weight: a - w + 1 must be a nonnegative integer");
}

double trig_R(double phi, const ArcConfiguration& arcs)
{
    double r = 1.0;
    for (double pk : arcs.phi) r *= std::sin(0.5 * (phi - pk));
    return r;
}

double trig_W(double phi, const WeightSpec& spec)
{
    double r = 1.0;
    for (int k : spec.w_endpoints) r *= std::sin(0.5 * (phi - spec.arcs.phi[k]));
    return r;
}

double trig_V(double phi, const WeightSpec& spec)
{
    double r = 1.0;
    for (int k : spec.v_endpoints()) r *= std::sin(0.5 * (phi - spec.arcs.phi[k]));
    return r;
}

double trig_A(double phi, const WeightSpec& spec)
{
    cplx r = spec.c_A;
    for (const auto& f : spec.factors) r *= std::pow(std::sin(0.5 * (phi - f.xi)), f.m);
    return r.real();
}

cplx lift_factor(cplx z, cplx xi)
{
    return (z - std::exp(I * xi)) / (2.0 * I * std::exp(0.5 * I * xi));
}

cplx lift_R(cplx z, const ArcConfiguration& arcs)
{
    cplx r = 1.0;
    for (double pk : arcs.phi) r *= lift_factor(z, pk);
    return r;
}

cplx lift_W(cplx z, const WeightSpec& spec)
{
    cplx r = 1.0;
    for (int k : spec.w_endpoints) r *= lift_factor(z, spec.arcs.phi[k]);
    return r;
}

cplx lift_V(cplx z, const WeightSpec& spec)
{
    cplx r = 1.0;
    for (int k : spec.v_endpoints()) r *= lift_factor(z, spec.arcs.phi[k]);
    return r;
}

cplx lift_A(cplx z, const WeightSpec& spec)
{
    cplx r = spec.c_A;
    for (const auto& f : spec.factors) r *= std::pow(lift_factor(z, f.xi), f.m);
    return r;
}

cplx lift_A_reduced(const WeightSpec& spec, int j)
{
    const auto& fj = spec.factors.at(size_t(j));
    if (fj.m != 1) throw WeightError("lift_A_reduced: factor is not simple");
    cplx z = std::exp(I * fj.xi);
    cplx r = spec.c_A / (2.0 * I * std::exp(0.5 * I * fj.xi));
    for (size_t k = 0; k < spec.factors.size(); ++k)
        if (int(k) != j) r *= std::pow(lift_factor(z, spec.factors[k].xi), spec.factors[k].m);
    return r;
}

std::vector<cplx> poly_mul(const std::vector<cplx>& p, const std::vector<cplx>& q)
{
    std::vector<cplx> r(p.size() + q.size() - 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

cplx poly_eval(const std::vector<cplx>& p, cplx z)
{
    cplx r = 0.0;
    for (size_t i = p.size(); i-- > 0;) r = r * z + p[i];
    return r;
}

std::vector<cplx> poly_from_roots(const std::vector<cplx>& xis, const std::vector<int>& mult, cplx scale)
{
    std::vector<cplx> p{scale};
    for (size_t j = 0; j < xis.size(); ++j) {
        cplx d = 2.0 * I * std::exp(0.5 * I * xis[j]);
        std::vector<cplx> f{-std::exp(I * xis[j]) / d, 1.0 / d};
        for (int r = 0; r < mult[j]; ++r) p = poly_mul(p, f);
    }
    return p;
}

std::vector<cplx> coeffs_R(const ArcConfiguration& arcs)
{
    std::vector<cplx> x(arcs.phi.begin(), arcs.phi.end());
    return poly_from_roots(x, {1, 1, 1, 1}, 1.0);
}

std::vector<cplx> coeffs_W(const WeightSpec& spec)
{
    std::vector<cplx> x;
    for (int k : spec.w_endpoints) x.push_back(spec.arcs.phi[k]);
    return poly_from_roots(x, std::vector<int>(x.size(), 1), 1.0);
}

std::vector<cplx> coeffs_V(const WeightSpec& spec)
{
    std::vector<cplx> x;
    for (int k : spec.v_endpoints()) x.push_back(spec.arcs.phi[k]);
    return poly_from_roots(x, std::vector<int>(x.size(), 1), 1.0);
}

std::vector<cplx> coeffs_A(const WeightSpec& spec)
{
    std::vector<cplx> x;
    std::vector<int> m;
    for (const auto& f : spec.factors) {
        x.push_back(f.xi);
        m.push_back(f.m);
    }
    return poly_from_roots(x, m, spec.c_A);
}

cplx sqrt_R_at_u(cplx u, const EllipticFrame& fr)
{
    return fr.sqrtR_scale * phi_map_derivative(u, fr);
}

cplx sqrt_R_branch(cplx z, const EllipticFrame& fr)
{
    cplx u = phi_inverse(z, fr);
    return sqrt_R_at_u(u, fr);
}

double evaluate_f(double phi, const WeightSpec& spec)
{
    int j = arc_index(phi, spec.arcs);
    if (j == 0) throw WeightError("evaluate_f: angle is not an interior point of the arcs");
    double A = trig_A(phi, spec);
    if (A == 0.0) throw WeightError("evaluate_f: denominator vanishes");
    double s = (j == 1) ? -1.0 : 1.0;
    return s * trig_W(phi, spec) / (A * std::sqrt(std::abs(trig_R(phi, spec.arcs))));
}

ConformalWeightFrame point_masses(const WeightSpec& spec, const EllipticFrame& fr)
{
    ConformalWeightFrame cw;
    const int aw = int(std::lround(spec.a() - spec.w()));
    for (size_t j = 0; j < spec.factors.size(); ++j) {
        const auto& f = spec.factors[j];
        cplx z = std::exp(I * f.xi);
        cplx v = phi_inverse(z, fr);
        cw.z_points.push_back(z);
        cw.v_points.push_back(v);
        if (f.lambda != -1) continue;
        if (f.m != 1) throw WeightError("point_masses: only simple mass factors are supported");

        cplx sR = sqrt_R_at_u(v, fr);
        cplx mu = std::pow(z, aw) * lift_W(z, spec) / (I * lift_A_reduced(spec, int(j)) * sR);

        // the same number at 50 digits; the square root branch is copied from the double value
        mpfloat xr(f.xi.real()), xi(f.xi.imag());
        mpcomplex iu(mpfloat(0), mpfloat(1));
        mpcomplex zm = exp(iu * mpcomplex(xr, xi));
        auto mfac = [&](const mpcomplex& x, const mpcomplex& e) {
            return (x - exp(iu * e)) / (mpfloat(2) * iu * exp(iu * e / mpfloat(2)));
        };
        mpcomplex Rm(1);
        for (double pk : spec.arcs.phi) Rm *= mfac(zm, mpcomplex(mpfloat(pk)));
        mpcomplex sRm = sqrt(Rm);
        if (std::abs(to_double(sRm) - sR) > std::abs(to_double(sRm) + sR)) sRm = -sRm;
        mpcomplex Wm(1);
        for (int k : spec.w_endpoints) Wm *= mfac(zm, mpcomplex(mpfloat(spec.arcs.phi[k])));
        mpcomplex Aj = mpcomplex(mpfloat(spec.c_A)) / (mpfloat(2) * iu * exp(iu * mpcomplex(xr, xi) / mpfloat(2)));
        for (size_t k = 0; k < spec.factors.size(); ++k) {
            if (k == j) continue;
            mpcomplex e(mpfloat(spec.factors[k].xi.real()), mpfloat(spec.factors[k].xi.imag()));
            for (int r = 0; r < spec.factors[k].m; ++r) Aj *= mfac(zm, e);
        }
        mpcomplex zp(1);
        for (int r = 0; r < std::abs(aw); ++r) zp *= zm;
        if (aw < 0) zp = mpcomplex(1) / zp;
        mpcomplex mum = zp * Wm / (iu * Aj * sRm);

        cw.mass_factor.push_back(int(j));
        cw.mass_values.push_back(mu);
        cw.mass_mp.push_back(mum);
    }
    return cw;
}

mpcomplex MomentTable::at(int j) const
{
    if (j >= 0) return c.at(size_t(j));
    return conj(c.at(size_t(-j)));
}

namespace {

// (1/2pi) int_E e^{-ik phi} f dphi for k = 0..N, with phi = lo + 2 hw cos^2(t/2)
// on each arc. The endpoint square roots are divided out analytically so the
// integrand in t is smooth and periodic and the midpoint rule converges
// geometrically.
std::vector<mpcomplex> continuous_moments(const WeightSpec& spec, int N, int nodes)
{
    const auto& p = spec.arcs.phi;
    const mpfloat mpi = mp_pi();
    struct Arc { int lo, hi, sign; };
    const Arc arcs[2] = {{0, 1, -1}, {2, 3, 1}};

    // fixed number of chunks: the summation order does not depend on the thread count
    const int chunks = 16;
    std::vector<std::vector<mpcomplex>> partial(2 * chunks, std::vector<mpcomplex>(size_t(N + 1), mpcomplex(0)));

    parallel_for(2 * chunks, [&](std::size_t task) {
        const Arc& arc = arcs[task / chunks];
        int chunk = int(task % chunks);
        mpfloat lo(p[arc.lo]), hi(p[arc.hi]);
        mpfloat hw = (hi - lo) / 2;
        auto& acc = partial[task];
        for (int i = chunk; i < nodes; i += chunks) {
            mpfloat t = (mpfloat(i) + mpfloat(0.5)) * mpi / nodes;
            mpfloat c = cos(t / 2), s = sin(t / 2);
            mpfloat c2 = c * c, s2 = s * s;
            mpfloat ph = lo + 2 * hw * c2;
            auto delta = [&](int k) -> mpfloat {
                if (k == arc.lo) return 2 * hw * c2;
                if (k == arc.hi) return -2 * hw * s2;
                return ph - mpfloat(p[k]);
            };
            mpfloat other(1);
            for (int k = 0; k < 4; ++k)
                if (k != arc.lo && k != arc.hi) other *= sin(delta(k) / 2);
            mpfloat jac = 2 * hw / sqrt((sin(hw * c2) / c2) * (sin(hw * s2) / s2) * abs(other));

            mpfloat Wv(1);
            for (int k : spec.w_endpoints) Wv *= sin(delta(k) / 2);
            mpcomplex Av(mpfloat(spec.c_A));
            for (const auto& f : spec.factors) {
                mpfloat x = (ph - mpfloat(f.xi.real())) / 2, y = -mpfloat(f.xi.imag()) / 2;
                mpcomplex sf(sin(x) * cosh(y), cos(x) * sinh(y));
                for (int r = 0; r < f.m; ++r) Av *= sf;
            }
            mpfloat g = mpfloat(arc.sign) * Wv * jac / Av.real() / (2 * nodes);

            mpcomplex e(cos(ph), -sin(ph));
            mpcomplex pw(g);
            for (int k = 0; k <= N; ++k) {
                acc[size_t(k)] += pw;
                pw *= e;
            }
        }
    });

    std::vector<mpcomplex> out(size_t(N + 1), mpcomplex(0));
    for (const auto& part : partial)
        for (int k = 0; k <= N; ++k) out[size_t(k)] += part[size_t(k)];
    return out;
}

} // namespace

MomentTable compute_moments(const WeightSpec& spec, const ConformalWeightFrame& cw, int N, int nodes)
{
    if (N < 0) throw WeightError("compute_moments: N must be nonnegative");
    if (nodes < 8) throw WeightError("compute_moments: too few quadrature nodes");
    validate(spec);

    MomentTable mt;
    mt.nodes = 2 * nodes;
    auto coarse = continuous_moments(spec, N, nodes);
    mt.continuous = continuous_moments(spec, N, 2 * nodes);
    double scale = std::abs(to_double(mt.continuous[0]));
    double change = 0.0;
    for (int k = 0; k <= N; ++k)
        change = std::max(change, std::abs(to_double(mt.continuous[size_t(k)] - coarse[size_t(k)])));
    mt.doubling_change = change / std::max(scale, 1e-300);

    mt.c = mt.continuous;
    for (size_t i = 0; i < cw.mass_mp.size(); ++i) {
        const auto& f = spec.factors[size_t(cw.mass_factor[i])];
        mpcomplex iu(mpfloat(0), mpfloat(1));
        mpcomplex zinv = exp(-iu * mpcomplex(mpfloat(f.xi.real()), mpfloat(f.xi.imag())));
        mpcomplex pw = cw.mass_mp[i];
        for (int k = 0; k <= N; ++k) {
            mt.c[size_t(k)] += pw;
            pw *= zinv;
        }
        mt.mass_points.push_back(cw.z_points[size_t(cw.mass_factor[i])]);
        mt.mass_values.push_back(cw.mass_mp[i]);
    }
    if (mt.c[0].real() < 0) {
        mt.sign = -1;
        for (auto& x : mt.c) x = -x;
    }
    return mt;
}

DefinitenessReport is_positive_definite(const MomentTable& mt, int n)
{
    if (n > mt.max_index()) throw WeightError("is_positive_definite: not enough moments");
    DefinitenessReport rep;
    const int d = n + 1;
    // LDL^H of the hermitian Toeplitz section without pivoting: the pivots are
    // the ratios of consecutive leading minors
    std::vector<mpcomplex> T(size_t(d) * d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) T[size_t(j) * d + k] = mt.at(j - k);
    rep.positive = true;
    for (int k = 0; k < d; ++k) {
        mpcomplex piv = T[size_t(k) * d + k];
        double pr = static_cast<double>(piv.real());
        rep.minor_ratios.push_back(pr);
        if (!(pr > 0.0)) {
            if (rep.positive) rep.failing_index = k;
            rep.positive = false;
            if (pr == 0.0) break;
        }
        for (int i = k + 1; i < d; ++i) {
            mpcomplex l = T[size_t(i) * d + k] / piv;
            for (int j = k; j < d; ++j) T[size_t(i) * d + j] -= l * T[size_t(k) * d + j];
        }
    }

    Eigen::MatrixXcd M(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) M(j, k) = mt.at_double(j - k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    rep.smallest_eigenvalue = es.eigenvalues()(0);
    return rep;
}

} // namespace arczeros
