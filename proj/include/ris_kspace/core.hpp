#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ris {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299'792'458.0;  // m/s
inline constexpr double free_space_impedance = 376.730313668;  // ohm (CODATA 2018)

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: precondition, schema or sampling (Nyquist, walk-off) violation.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not produce a trustworthy result.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Argument outside the supported domain of a special function.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

inline double wavenumber_from_ghz(double f_ghz) { return 2.0 * pi * f_ghz * 1e9 / speed_of_light; }
inline double wavelength_from_ghz(double f_ghz) { return speed_of_light / (f_ghz * 1e9); }

inline void require(bool cond, const std::string& what)
{
    if (!cond) throw ValidationError(what);
}

}  // namespace ris
