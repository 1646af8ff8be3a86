#pragma once

#include "arczeros/geometry.hpp"
#include "arczeros/mp.hpp"

#include <vector>

namespace arczeros {

// one factor sin^m((phi - xi)/2) of the denominator polynomial
struct AFactor {
    cplx xi;
    int m = 1;
    int lambda = 1;
};

// All angles in working coordinates. W collects the endpoint factors listed in
// w_endpoints (indices 0..3), V the remaining ones, so V W = R by construction.
struct WeightSpec {
    ArcConfiguration arcs;
    double c_A = 1.0;
    std::vector<AFactor> factors;
    std::vector<int> w_endpoints;

    double a() const;
    double w() const { return 0.5 * double(w_endpoints.size()); }
    double v() const { return 2.0 - w(); }
    int w1() const;
    int w2() const;
    std::vector<int> v_endpoints() const;
};

class WeightError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// throws WeightError naming the violated condition
void validate(const WeightSpec& spec);

// which arc contains phi: 1, 2, or 0 for the gaps/endpoints
int arc_index(double phi, const ArcConfiguration& arcs);

double trig_R(double phi, const ArcConfiguration& arcs);
double trig_W(double phi, const WeightSpec& spec);
double trig_V(double phi, const WeightSpec& spec);
double trig_A(double phi, const WeightSpec& spec);

// algebraic lifts: P(e^{i phi}) = e^{i deg phi / 2} trig(phi)
cplx lift_factor(cplx z, cplx xi);
cplx lift_R(cplx z, const ArcConfiguration& arcs);
cplx lift_W(cplx z, const WeightSpec& spec);
cplx lift_V(cplx z, const WeightSpec& spec);
cplx lift_A(cplx z, const WeightSpec& spec);
// A(z)/(z - z_j) at z = z_j, for a simple factor j
cplx lift_A_reduced(const WeightSpec& spec, int j);

// coefficient lists, ascending powers
std::vector<cplx> poly_from_roots(const std::vector<cplx>& xis, const std::vector<int>& mult, cplx scale);
std::vector<cplx> coeffs_R(const ArcConfiguration& arcs);
std::vector<cplx> coeffs_W(const WeightSpec& spec);
std::vector<cplx> coeffs_V(const WeightSpec& spec);
std::vector<cplx> coeffs_A(const WeightSpec& spec);
std::vector<cplx> poly_mul(const std::vector<cplx>& p, const std::vector<cplx>& q);
cplx poly_eval(const std::vector<cplx>& p, cplx z);

cplx sqrt_R_at_u(cplx u, const EllipticFrame& fr);
cplx sqrt_R_branch(cplx z, const EllipticFrame& fr);

double evaluate_f(double phi, const WeightSpec& spec);

struct ConformalWeightFrame {
    std::vector<cplx> v_points;  // preimages in the box of z_j = e^{i xi_j}, one per factor
    std::vector<cplx> z_points;
    std::vector<int> mass_factor; // factor index of each mass
    std::vector<cplx> mass_values;
    std::vector<mpcomplex> mass_mp;
};

ConformalWeightFrame point_masses(const WeightSpec& spec, const EllipticFrame& fr);

struct MomentTable {
    std::vector<mpcomplex> c; // c_0..c_N, c_{-j} = conj(c_j)
    std::vector<mpcomplex> continuous;
    int nodes = 0;
    double doubling_change = 0.0;
    int sign = 1; // -1 when the functional was negated to make c_0 > 0
    std::vector<cplx> mass_points;
    std::vector<mpcomplex> mass_values;

    int max_index() const { return int(c.size()) - 1; }
    mpcomplex at(int j) const;
    cplx at_double(int j) const { return to_double(at(j)); }
};

// nodes per arc; the table is built at 2*nodes and compared against nodes
MomentTable compute_moments(const WeightSpec& spec, const ConformalWeightFrame& cw, int N, int nodes = 512);

struct DefinitenessReport {
    bool positive = false;
    int failing_index = -1;           // first leading section with nonpositive minor ratio
    double smallest_eigenvalue = 0.0; // of the largest section, double precision
    std::vector<double> minor_ratios;  // D_{k+1}/D_k
};

DefinitenessReport is_positive_definite(const MomentTable& mt, int n);

} // namespace arczeros
