#pragma once

#include "arczeros/zeros.hpp"

#include <numbers>
#include <random>

namespace fx {

using namespace arczeros;
inline constexpr double pi = std::numbers::pi;

inline ArcConfiguration quarter_arcs()
{
    return normalize_arcs({pi / 4, 3 * pi / 4, 5 * pi / 4, 7 * pi / 4});
}

// [t, pi - t] and [pi + t, 2 pi - t]; capacity sqrt(cos t), omega2 = 1/2
inline ArcConfiguration symmetric_arcs(double t)
{
    return normalize_arcs({t, pi - t, pi + t, 2 * pi - t});
}

// positive definite: denominator zeros at the gap midpoints, no masses, W = 1
inline WeightSpec symmetric_spec()
{
    WeightSpec s;
    s.arcs = quarter_arcs();
    s.factors = {{pi, 1, 1}, {2 * pi, 1, 1}};
    return s;
}

// mass at the midpoint of the gap (phi2, phi3)
inline WeightSpec asymmetric_spec()
{
    WeightSpec s;
    s.arcs = normalize_arcs({0.6, 1.8, 3.5, 2 * pi - 0.6});
    s.factors = {{2.65, 1, -1}, {2 * pi, 1, 1}};
    return s;
}

inline WeightSpec flat_spec(std::vector<int> w_endpoints = {})
{
    WeightSpec s;
    s.arcs = quarter_arcs();
    s.w_endpoints = std::move(w_endpoints);
    return s;
}

struct Built {
    WeightSpec spec;
    EllipticFrame fr;
    ConformalWeightFrame cw;
    MomentTable mt;
    Built(WeightSpec s, int N, int nodes = 256)
        : spec(std::move(s)), fr(make_frame(spec.arcs)), cw(point_masses(spec, fr)), mt(compute_moments(spec, cw, N, nodes))
    {
    }
};

// random point strictly inside the box (-K, 0) x (-K', K')
inline cplx random_box_point(std::mt19937& g, const EllipticModulus& m, double margin = 0.05)
{
    std::uniform_real_distribution<double> x(-m.K * (1 - margin), -m.K * margin), y(-m.K_prime * (1 - margin), m.K_prime * (1 - margin));
    return {x(g), y(g)};
}

inline double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

} // namespace fx
