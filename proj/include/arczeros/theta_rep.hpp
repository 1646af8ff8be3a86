#pragma once

#include "arczeros/weight.hpp"

#include <vector>

namespace arczeros {

class ThetaRepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhaseSolution {
    int n = 0;
    cplx b;
    int delta = 1;
    int m = 0; // integer multiple of K' in the imaginary equation
    int l = 0;
    int k = 0; // exponent of exp(-i pi k u / K) in Omega
    int p = 0;
    int mu = 0;
    double X = 0.0;             // real-part sum before l is chosen
    double residual_re = 0.0;
    double residual_im = 0.0;
    bool degenerate = false;    // -l K - X is (numerically) zero
    bool on_boundary = false;   // Re b at -K or 0
};

// preimages of the zeros of W in the box, used in the Omega product
std::vector<cplx> w_points(const WeightSpec& spec, const EllipticFrame& fr);

PhaseSolution solve_phase_system(int n, const EllipticFrame& fr, const WeightSpec& spec,
                                 const ConformalWeightFrame& cw);

struct ThetaPolyRep {
    PhaseSolution phase;
    cplx c_omega;          // constant in front of Omega_n, after monic correction
    cplx c_omega_raw;      // closed form value
    double correction = 1.0; // |correction - 1| measures the closed form against the fit
    cplx correction_c = 1.0;
    std::vector<cplx> u_points;
    double phase_phi = 0.0; // arg H(zeta)
    // the frame and weight the representation was built from
    const EllipticFrame* frame = nullptr;
    const WeightSpec* spec = nullptr;
    const ConformalWeightFrame* cw = nullptr;
};

// values on a circle |z| = rho inside the disk, inverted once and reused for every n
struct CircleSamples {
    double rho = 0.9;
    std::vector<cplx> z;
    std::vector<cplx> u;
};

CircleSamples make_circle_samples(const EllipticFrame& fr, int count = 128, double rho = 0.9);

// builds Omega_n and normalizes its constant so the symmetrized part is monic
ThetaPolyRep make_theta_rep(int n, const EllipticFrame& fr, const WeightSpec& spec, const ConformalWeightFrame& cw,
                            const CircleSamples& samples);

cplx omega_n(cplx u, const ThetaPolyRep& rep);
cplx pn_theta(cplx u, const ThetaPolyRep& rep);
cplx q_theta(cplx u, const ThetaPolyRep& rep);
cplx psi_n(cplx u, const ThetaPolyRep& rep);

struct CoefficientFit {
    std::vector<cplx> coeffs; // ascending, length degree+1
    double tail = 0.0;        // largest discarded coefficient relative to the kept ones
};

// DFT of sampled values; coefficients above degree are reported in tail
CoefficientFit fit_coefficients(const std::vector<cplx>& values, const CircleSamples& samples, int degree);

std::vector<cplx> pn_theta_coefficients(const ThetaPolyRep& rep, const CircleSamples& samples, double* tail = nullptr);
std::vector<cplx> q_theta_coefficients(const ThetaPolyRep& rep, const CircleSamples& samples, double* tail = nullptr);

// degree of Q in the quadratic identity: n + 2 - 2v
int q_degree(int n, const WeightSpec& spec);

struct TExistence {
    bool exists = false;
    int l = 0;
    double mismatch = 0.0; // distance of the real-part sum to the nearest multiple of K, in units of K
};

// nu is a positive half-integer passed as twice its value
TExistence t_polynomial_existence(int two_nu, const EllipticFrame& fr, const WeightSpec& spec);

struct TPolynomial {
    int two_nu = 0;
    int l = 0;
    double m_exp = 0.0;
    cplx eps = 1.0;
    double M = 1.0;
    double imag_residual = 0.0; // largest |Im tau| relative to max |tau| on the arcs
    std::vector<double> endpoint_values;   // tau / sqrt(A) at phi1..phi4
    std::vector<double> alternation;       // interior extremal angles
    double sigma_c = 0.0;
    double pell_residual = 0.0;
    const EllipticFrame* frame = nullptr;
    const WeightSpec* spec = nullptr;
};

TPolynomial minimal_tau(int two_nu, const EllipticFrame& fr, const WeightSpec& spec);

// tau at the point u of the box
double tau_at(cplx u, const TPolynomial& t);

} // namespace arczeros
