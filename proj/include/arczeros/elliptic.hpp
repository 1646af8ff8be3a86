#pragma once

#include <complex>
#include <stdexcept>

namespace arczeros {

using cplx = std::complex<double>;

// m = k^2 and mc = k'^2 are carried separately: for thin arcs or thin gaps
// one of them is tiny and 1 - m would throw its digits away.
struct EllipticModulus {
    double m = 0.5;
    double mc = 0.5;
    double k = 0.0;
    double k_prime = 0.0;
    double K = 0.0;
    double K_prime = 0.0;
    double q = 0.0;
};

struct ThetaConfig {
    int truncation = 60;      // hard cap on retained series terms
    double tolerance = 1e-14; // target size of the first dropped term
};

struct SnCnDn {
    cplx sn, cn, dn;
    bool near_pole = false;
};

class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double agm(double a, double b);

double complete_elliptic_K(double k);

// builds K, K', q from k^2 and k'^2 (m + mc must be 1)
EllipticModulus make_modulus(double m, double mc);
EllipticModulus make_modulus_from_k(double k);

// real argument, descending Landen; K is the quarter period for m
void jacobi_real(double x, double m, double mc, double K, double& sn, double& cn, double& dn);

SnCnDn jacobi_sn_cn_dn(cplx u, const EllipticModulus& mod, double pole_eps = 0.0);

cplx theta_H(cplx z, const EllipticModulus& mod, const ThetaConfig& cfg = {});
cplx theta_theta(cplx z, const EllipticModulus& mod, const ThetaConfig& cfg = {});

} // namespace arczeros
