#pragma once

#include "arczeros/elliptic.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace arczeros {

// Working coordinates satisfy phi1 + phi4 = 2 pi. The raw angles are
// recovered as phi_raw = phi + psi, i.e. z_raw = exp(i psi) z.
struct ArcConfiguration {
    std::array<double, 4> phi{};
    double psi = 0.0;
};

struct EllipticFrame {
    ArcConfiguration arcs;
    EllipticModulus modulus;
    ThetaConfig theta;
    cplx zeta;
    double alpha = 0.0;
    double beta = 0.0;
    double beta_from_a = 0.0; // 2 cn^2 a / dn^2 a - 1, should equal beta
    double sn_a_sq = 0.0;
    double tan_half_phi1 = 0.0;
    cplx sn2_zeta_target;
    // z = (mA S + mB) / (mC S + mD) with S = sn^2 u
    cplx mA, mB, mC, mD;
    cplx sqrtR_scale; // sqrt(R(phi(u))) = sqrtR_scale * phi'(u)
    int grid = 64;
    std::vector<cplx> seed_u;
    std::vector<cplx> seed_S;
    std::vector<std::string> warnings;
};

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ArcConfiguration normalize_arcs(const std::array<double, 4>& raw);

// k^2 as the cross ratio of the four endpoints, k'^2 from its complement
EllipticModulus modulus_from_cross_ratio(const ArcConfiguration& cfg);
cplx cross_ratio(const ArcConfiguration& cfg);

EllipticFrame make_frame(const ArcConfiguration& cfg, int grid = 64, ThetaConfig theta = {});

cplx sn_squared(cplx u, const EllipticModulus& mod);
cplx phi_map(cplx u, const EllipticFrame& fr);
cplx phi_map_derivative(cplx u, const EllipticFrame& fr);
cplx mobius_S(cplx z, const EllipticFrame& fr); // S = sn^2 u for z = phi(u)

// reduce by the periods 2K, 2iK' and the symmetry u -> -u into the box
// (-K,0] x (-K',K']; boundary points are put on the interior side Im u >= 0
cplx fold_to_box(cplx u, const EllipticModulus& mod);

cplx solve_sn2(cplx target, const EllipticFrame& fr, bool lower_half_seed = false);
cplx pole_zeta(const EllipticFrame& fr);
cplx phi_inverse(cplx z, const EllipticFrame& fr);

cplx H(const EllipticFrame& fr, cplx u);

// c0 empty means the pole at infinity
double greens_function(cplx z, std::optional<cplx> c0, const EllipticFrame& fr);
double greens_in_u(cplx u, cplx gamma, const EllipticFrame& fr);
double harmonic_measure_omega2(const EllipticFrame& fr);
double capacity(const EllipticFrame& fr);

struct CurveS {
    double level = 0.0;
    std::vector<double> t;
    std::vector<cplx> samples;
};
CurveS curve_s(const EllipticFrame& fr, int n_samples = 512);

// corners of the box in the order of the endpoints phi1..phi4
cplx corner_u(const EllipticFrame& fr, int endpoint);

} // namespace arczeros
