#pragma once

#include "arczeros/orthopoly.hpp"
#include "arczeros/theta_rep.hpp"

#include <optional>
#include <vector>

namespace arczeros {

struct StripConfig {
    double epsilon = 0.0;
    bool shrunk = false; // reduced because b^(n) sat on a strip edge
};

StripConfig default_strips(const EllipticFrame& fr, const ConformalWeightFrame& cw);
// shrinks epsilon until b^(n) is away from both strip edges
StripConfig validate_strips(StripConfig s, const PhaseSolution& ph, const EllipticFrame& fr);

struct CountPrediction {
    int n = 0;
    int k1 = 0, k2 = 0;
    int beta = 0, gamma = 0;
    int strays() const { return n - k1 - k2; }
};

// When delta = -1, b^(n) carries the stray zero into the strip it sits in, so beta (gamma)
// is added to the count. The subtractive variant removes it instead and is kept for comparison.
enum class CountFormula { additive, subtractive };

CountPrediction predicted_counts(const PhaseSolution& ph, const WeightSpec& spec, const EllipticFrame& fr,
                                 const StripConfig& strips, CountFormula form = CountFormula::additive);

enum class Strip { one = 1, two = 2, stray = 0 };

struct ZeroClassification {
    std::vector<cplx> u;
    std::vector<Strip> strip;
    std::vector<bool> inverted; // false when phi_inverse failed; such zeros count as strays
    int in1 = 0, in2 = 0, strays = 0;
};

ZeroClassification classify_zeros(const std::vector<cplx>& zeros, const EllipticFrame& fr, const StripConfig& strips);

// distance from z to the curve S, from the sampled polyline refined near the closest sample
double dist_to_S(cplx z, const EllipticFrame& fr, const CurveS& S);
std::optional<double> nearest_mass_dist(cplx z, const ConformalWeightFrame& cw);

struct ZeroRecord {
    int n = 0;
    ZeroSet zeros;
    PhaseSolution phase;
    StripConfig strips;
    CountPrediction predicted;
    ZeroClassification observed;
    std::vector<double> dist_S;
    std::vector<std::optional<double>> dist_mass;
};

struct PipelineInput {
    const WeightSpec& spec;
    const EllipticFrame& fr;
    const ConformalWeightFrame& cw;
    const MomentTable& mt;
};

// zeros, phase data, predicted and observed counts for n in [n_lo, n_hi]
std::vector<ZeroRecord> zero_pipeline(const PipelineInput& in, int n_lo, int n_hi);

// first n0 such that the observed strip counts equal the predicted ones for every n >= n0 in the records
std::optional<int> scan_n0(const std::vector<ZeroRecord>& recs);

struct RationalTest {
    bool rational = false;
    long num = 0, den = 1;
    double error = 0.0;
};

RationalTest detect_rational(double x, double tol = 1e-9, double big_quotient = 1e6);

struct StrayPoint {
    int n = 0;
    cplx z, u;
    double dist_S = 0.0;
    std::optional<double> dist_mass;
    bool near_mass = false; // closer to a mass point than to S
};

struct AccumulationReport {
    double omega2 = 0.0;
    RationalTest rationality;
    std::vector<StrayPoint> strays;
    std::vector<cplx> lattice; // predicted cluster points when omega2 is rational
    std::vector<double> lattice_dist; // per stray, to the nearest lattice point (empty when irrational)
    // per mass point, the distance from z_j to the nearest zero of P_n, indexed like the records
    std::vector<std::vector<double>> mass_hits;
};

AccumulationReport accumulation_analysis(const std::vector<ZeroRecord>& recs, const PipelineInput& in);

// max gap of stray Re u over the stray region [-K + eps, -eps], strays with n <= n_max
// that are closer to S than to any mass point
double stray_max_gap(const AccumulationReport& rep, const EllipticFrame& fr, int n_max, double epsilon);

struct EquilibriumRow {
    int n = 0;
    double fraction2 = 0.0;
    double omega2 = 0.0;
    double deviation = 0.0;
    bool ok = false; // deviation <= 2/n
};

std::vector<EquilibriumRow> equilibrium_check(const std::vector<ZeroRecord>& recs, const EllipticFrame& fr);

} // namespace arczeros
