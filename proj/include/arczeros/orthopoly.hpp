#pragma once

#include "arczeros/weight.hpp"

#include <vector>

namespace arczeros {

// ascending coefficients, c.back() == 1
struct MonicPolynomial {
    std::vector<mpcomplex> c;

    int degree() const { return int(c.size()) - 1; }
    cplx eval(cplx z) const;
    mpcomplex eval_mp(const mpcomplex& z) const;
    std::vector<cplx> coeffs() const;
};

class OrthoError : public std::runtime_error {
public:
    OrthoError(const std::string& msg, int index) : std::runtime_error(msg), failing_index(index) {}
    int failing_index;
};

struct OrthoSequence {
    std::vector<MonicPolynomial> P;  // P_0..P_nmax
    std::vector<mpcomplex> reflection; // P_{k+1} = z P_k + r_k P_k^*
    std::vector<mpfloat> E;            // L(z^{-k} P_k)
    std::vector<int> dense_steps;      // degrees produced by the direct solve
};

OrthoSequence orthogonal_sequence(const MomentTable& mt, int nmax);
MonicPolynomial orthogonal_polynomial(const MomentTable& mt, int n);
MonicPolynomial dense_orthogonal_polynomial(const MomentTable& mt, int n);

// max_{k<n} |L(z^{-k} P)| / |c_0|
double orthogonality_residual(const MomentTable& mt, const MonicPolynomial& p);

struct ZeroSet {
    std::vector<cplx> zeros;
    std::vector<double> condition; // |P(z)| sensitivity estimate per root
    double residual_bound = 0.0;     // max |P(z_i)| / max |coeff|
    bool ill_conditioned = false;
};

ZeroSet polynomial_zeros(const MonicPolynomial& p);
ZeroSet polynomial_zeros(const std::vector<cplx>& monic_coeffs);

struct QuadraticIdentityReport {
    std::vector<cplx> q;
    cplx g0, g1;
    int shift = 0; // exponent of z in front of A g
    double residual = 0.0;
    // |V Q - lambda_j sqrtR P| at each z_j, divided by |sqrtR(z_j)| max|p_i|
    std::vector<double> side_mass;
    double side_origin = 0.0; // |V Q / (sqrtR P) - 1| at z = 0, as a limit when P(0) = 0
    int p_order = 0;          // order of the zero of P at the origin
};

QuadraticIdentityReport verify_quadratic_identity(const MonicPolynomial& p, const std::vector<cplx>& q,
                                                  const WeightSpec& spec, const EllipticFrame& fr,
                                                  const ConformalWeightFrame& cw);

} // namespace arczeros
