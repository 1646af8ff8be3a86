#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>

namespace arczeros {

// Toeplitz sections of these functionals reach condition numbers near 1e20 by
// n = 60, so moments and the recursion run at 50 digits.
using mpfloat = boost::multiprecision::cpp_bin_float_50;
using mpcomplex = boost::multiprecision::cpp_complex_50;

inline std::complex<double> to_double(const mpcomplex& z)
{
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline mpcomplex to_mp(std::complex<double> z)
{
    return mpcomplex(mpfloat(z.real()), mpfloat(z.imag()));
}

inline mpfloat mp_pi()
{
    return boost::math::constants::pi<mpfloat>();
}

} // namespace arczeros
