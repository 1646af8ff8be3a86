#include "arczeros/orthopoly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace arczeros {

cplx MonicPolynomial::eval(cplx z) const
{
    cplx r = 0.0;
    for (size_t i = c.size(); i-- > 0;) r = r * z + to_double(c[i]);
    return r;
}

mpcomplex MonicPolynomial::eval_mp(const mpcomplex& z) const
{
    mpcomplex r(0);
    for (size_t i = c.size(); i-- > 0;) r = r * z + c[i];
    return r;
}

std::vector<cplx> MonicPolynomial::coeffs() const
{
    std::vector<cplx> r;
    for (const auto& x : c) r.push_back(to_double(x));
    return r;
}

namespace {

// L(z^{-k} P) = sum_i p_i c_{k-i}
mpcomplex functional(const MomentTable& mt, const std::vector<mpcomplex>& p, int k)
{
    mpcomplex s(0);
    for (size_t i = 0; i < p.size(); ++i) s += p[i] * mt.at(k - int(i));
    return s;
}

} // namespace

MonicPolynomial dense_orthogonal_polynomial(const MomentTable& mt, int n)
{
    if (n < 0) throw OrthoError("orthopoly: negative degree", n);
    if (n > mt.max_index()) throw OrthoError("orthopoly: not enough moments for the requested degree", n);
    MonicPolynomial P;
    P.c.assign(size_t(n + 1), mpcomplex(0));
    P.c[size_t(n)] = mpcomplex(1);
    if (n == 0) return P;

    // sum_{i<n} p_i c_{k-i} = -c_{k-n}, k = 0..n-1; Gaussian elimination with partial pivoting
    std::vector<std::vector<mpcomplex>> M(size_t(n), std::vector<mpcomplex>(size_t(n + 1)));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) M[size_t(k)][size_t(i)] = mt.at(k - i);
        M[size_t(k)][size_t(n)] = -mt.at(k - n);
    }
    mpfloat scale = abs(mt.at(0));
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (abs(M[size_t(r)][size_t(col)]) > abs(M[size_t(piv)][size_t(col)])) piv = r;
        if (abs(M[size_t(piv)][size_t(col)]) <= scale * mpfloat(1e-40))
            throw OrthoError("orthopoly: singular Toeplitz section of order " + std::to_string(n), n);
        std::swap(M[size_t(piv)], M[size_t(col)]);
        for (int r = col + 1; r < n; ++r) {
            mpcomplex l = M[size_t(r)][size_t(col)] / M[size_t(col)][size_t(col)];
            for (int j = col; j <= n; ++j) M[size_t(r)][size_t(j)] -= l * M[size_t(col)][size_t(j)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        mpcomplex s = M[size_t(i)][size_t(n)];
        for (int j = i + 1; j < n; ++j) s -= M[size_t(i)][size_t(j)] * P.c[size_t(j)];
        P.c[size_t(i)] = s / M[size_t(i)][size_t(i)];
    }
    return P;
}

OrthoSequence orthogonal_sequence(const MomentTable& mt, int nmax)
{
    if (nmax < 0) throw OrthoError("orthopoly: negative degree", nmax);
    if (nmax > mt.max_index()) throw OrthoError("orthopoly: not enough moments for the requested degree", nmax);
    OrthoSequence s;
    const mpfloat scale = abs(mt.at(0));
    if (scale == 0) throw OrthoError("orthopoly: c_0 vanishes", 0);

    std::vector<mpcomplex> p{mpcomplex(1)};
    s.P.push_back(MonicPolynomial{p});
    for (int n = 0; n < nmax; ++n) {
        mpcomplex En = functional(mt, p, n);
        s.E.push_back(En.real());
        if (abs(En) <= scale * mpfloat(1e-40))
            throw OrthoError("orthopoly: Toeplitz section of order " + std::to_string(n + 1) + " is singular",
                             n + 1);
        mpcomplex num(0);
        for (int i = 0; i <= n; ++i) num += p[size_t(i)] * conj(mt.at(i + 1));
        mpcomplex r = -num / En.real();

        std::vector<mpcomplex> next(size_t(n + 2), mpcomplex(0));
        if (abs(r) > mpfloat(1) - mpfloat(1e-12)) {
            next = dense_orthogonal_polynomial(mt, n + 1).c;
            s.dense_steps.push_back(n + 1);
            r = next[0];
        } else {
            for (int i = 0; i <= n; ++i) {
                next[size_t(i + 1)] += p[size_t(i)];
                next[size_t(i)] += r * conj(p[size_t(n - i)]);
            }
        }
        s.reflection.push_back(r);
        p = std::move(next);
        s.P.push_back(MonicPolynomial{p});
    }
    s.E.push_back(functional(mt, p, nmax).real());
    return s;
}

MonicPolynomial orthogonal_polynomial(const MomentTable& mt, int n)
{
    return orthogonal_sequence(mt, n).P.back();
}

double orthogonality_residual(const MomentTable& mt, const MonicPolynomial& p)
{
    double worst = 0.0;
    for (int k = 0; k < p.degree(); ++k) worst = std::max(worst, double(abs(functional(mt, p.c, k))));
    return worst / double(abs(mt.at(0)));
}

ZeroSet polynomial_zeros(const MonicPolynomial& p)
{
    const int n = p.degree();
    if (n < 1) throw std::invalid_argument("polynomial_zeros: degree must be at least 1");
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -to_double(p.c[size_t(i)]);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("polynomial_zeros: eigenvalue iteration did not converge");

    std::vector<mpcomplex> dp(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) dp[size_t(i - 1)] = p.c[size_t(i)] * mpfloat(i);
    auto deval = [&](const mpcomplex& z) {
        mpcomplex r(0);
        for (size_t i = dp.size(); i-- > 0;) r = r * z + dp[i];
        return r;
    };
    mpfloat cmax(0);
    for (const auto& x : p.c) cmax = std::max(cmax, mpfloat(abs(x)));

    // simultaneous Aberth-Ehrlich refinement at 50 digits from the double eigenvalues;
    // plain Newton can send two seeds to the same root when the zeros crowd the circle
    std::vector<mpcomplex> z(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) z[size_t(i)] = to_mp(es.eigenvalues()(i));
    // steps stall at roughly condition * 1e-50, so ask for 1e-30 and accept stagnation below 1e-14
    const mpfloat stop = mpfloat(1e-30);
    bool converged = false;
    mpfloat worst(1);
    for (int it = 0; it < 200 && !converged; ++it) {
        worst = 0;
        for (int i = 0; i < n; ++i) {
            mpcomplex d = deval(z[size_t(i)]);
            mpcomplex f = p.eval_mp(z[size_t(i)]);
            if (f == mpcomplex(0)) continue;
            mpcomplex ratio = f / d;
            mpcomplex s(0);
            for (int j = 0; j < n; ++j)
                if (j != i) s += mpcomplex(1) / (z[size_t(i)] - z[size_t(j)]);
            mpcomplex step = ratio / (mpcomplex(1) - ratio * s);
            z[size_t(i)] -= step;
            worst = std::max(worst, mpfloat(abs(step) / (1 + abs(z[size_t(i)]))));
        }
        converged = worst < stop;
    }

    ZeroSet zs;
    for (int i = 0; i < n; ++i) {
        zs.zeros.push_back(to_double(z[size_t(i)]));
        mpfloat res = abs(p.eval_mp(z[size_t(i)])) / cmax;
        zs.residual_bound = std::max(zs.residual_bound, static_cast<double>(res));
        // first order sensitivity of the root to relative coefficient perturbations
        mpfloat az = abs(z[size_t(i)]), pw(1), acc(0);
        for (const auto& x : p.c) {
            acc += abs(x) * pw;
            pw *= az;
        }
        mpfloat d = abs(deval(z[size_t(i)]));
        zs.condition.push_back(d == 0 ? HUGE_VAL : static_cast<double>(acc / d));
    }
    if (!converged && worst > mpfloat(1e-14))
        throw std::runtime_error("polynomial_zeros: root refinement did not converge");
    if (zs.residual_bound > 1e-8) throw std::runtime_error("polynomial_zeros: refined roots leave a large residual");
    for (size_t i = 0; i < zs.zeros.size(); ++i) {
        if (zs.condition[i] * 1e-16 > 1e-8) zs.ill_conditioned = true;
        for (size_t j = i + 1; j < zs.zeros.size(); ++j)
            if (std::abs(zs.zeros[i] - zs.zeros[j]) < 1e-6) zs.ill_conditioned = true;
    }
    std::vector<size_t> order(zs.zeros.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        cplx a = zs.zeros[i], b = zs.zeros[j];
        return std::arg(a) != std::arg(b) ? std::arg(a) < std::arg(b) : std::abs(a) < std::abs(b);
    });
    ZeroSet sorted = zs;
    for (size_t i = 0; i < order.size(); ++i) {
        sorted.zeros[i] = zs.zeros[order[i]];
        sorted.condition[i] = zs.condition[order[i]];
    }
    zs = std::move(sorted);
    return zs;
}

ZeroSet polynomial_zeros(const std::vector<cplx>& monic_coeffs)
{
    MonicPolynomial p;
    for (cplx x : monic_coeffs) p.c.push_back(to_mp(x));
    if (p.c.empty() || std::abs(monic_coeffs.back() - 1.0) > 0.0)
        throw std::invalid_argument("polynomial_zeros: leading coefficient must be 1");
    return polynomial_zeros(p);
}

QuadraticIdentityReport verify_quadratic_identity(const MonicPolynomial& p, const std::vector<cplx>& q,
                                                  const WeightSpec& spec, const EllipticFrame& fr,
                                                  const ConformalWeightFrame& cw)
{
    QuadraticIdentityReport rep;
    rep.q = q;
    const int n = p.degree();
    auto P = p.coeffs();
    auto W = coeffs_W(spec), V = coeffs_V(spec), A = coeffs_A(spec);
    auto WP2 = poly_mul(W, poly_mul(P, P));
    auto VQ2 = poly_mul(V, poly_mul(q, q));
    size_t len = std::max(WP2.size(), VQ2.size());
    std::vector<cplx> res(len, 0.0);
    for (size_t i = 0; i < WP2.size(); ++i) res[i] += WP2[i];
    for (size_t i = 0; i < VQ2.size(); ++i) res[i] -= VQ2[i];

    double scale = 0.0;
    for (cplx x : WP2) scale = std::max(scale, std::abs(x));

    double pmax = 0.0;
    for (cplx x : P) pmax = std::max(pmax, std::abs(x));
    while (rep.p_order < n && std::abs(P[size_t(rep.p_order)]) <= 1e-12 * pmax) ++rep.p_order;
    rep.shift = int(std::lround(n - (spec.a() + 1.0 - spec.w()))) + rep.p_order;
    const int s = rep.shift;
    auto coef = [&](const std::vector<cplx>& v, int i) { return i >= 0 && i < int(v.size()) ? v[size_t(i)] : cplx(0.0); };
    rep.g0 = coef(res, s) / A[0];
    rep.g1 = (coef(res, s + 1) - rep.g0 * coef(A, 1)) / A[0];
    std::vector<cplx> expect(len, 0.0);
    for (size_t i = 0; i < A.size(); ++i) {
        if (s + int(i) >= 0 && s + int(i) < int(len)) expect[size_t(s) + i] += A[i] * rep.g0;
        if (s + int(i) + 1 >= 0 && s + int(i) + 1 < int(len)) expect[size_t(s) + i + 1] += A[i] * rep.g1;
    }
    double worst = 0.0;
    for (size_t i = 0; i < len; ++i) worst = std::max(worst, std::abs(res[i] - expect[i]));
    rep.residual = worst / scale;


    for (size_t j = 0; j < spec.factors.size(); ++j) {
        cplx z = cw.z_points[j];
        cplx sR = sqrt_R_at_u(cw.v_points[j], fr);
        cplx lhs = poly_eval(V, z) * poly_eval(q, z);
        cplx rhs = double(spec.factors[j].lambda) * sR * poly_eval(P, z);
        rep.side_mass.push_back(std::abs(lhs - rhs) / (std::abs(sR) * pmax));
    }
    // V Q and P vanish to the same order at 0, so compare the first surviving coefficients
    cplx sR0 = sqrt_R_branch(0.0, fr);
    cplx vq = poly_mul(V, q).at(size_t(rep.p_order));
    rep.side_origin = std::abs(vq / (sR0 * P[size_t(rep.p_order)]) - 1.0);
    return rep;
}

} // namespace arczeros
