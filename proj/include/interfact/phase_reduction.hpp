#pragma once

#include <complex>
#include <cstdint>

namespace interfact {

/**
 * Fractional part of numerator/denominator, computed exactly.
 *
 * Every finite double is a dyadic rational, so the remainder of the division
 * can be formed in 128-bit integer arithmetic before a single rounding to
 * double. The result is within one ulp of the true value in [0, 1) no matter
 * how large the quotient is, which keeps interference phases meaningful when
 * m^j * N reaches 10^12 and beyond.
 *
 * Both arguments must be finite; the denominator must be positive and the
 * numerator non-negative.
 */
double turns_mod_one(double numerator, double denominator);

/// Integer-numerator overload; exact for the whole 64-bit range.
double turns_mod_one(std::uint64_t numerator, double denominator);

/// Fractional part of base^power * factor / denominator without forming the
/// product, so no input combination overflows. denominator must be below 2^63.
double turns_mod_one_power(std::uint64_t base, int power, std::uint64_t factor,
                           double denominator);

/// exp(2*pi*i*turns) for turns in [0, 1); folded to [-1/2, 1/2) before trig.
std::complex<double> unit_phasor(double turns);

/// Wraps turns in [0, 1) to radians in [0, 2*pi).
double turns_to_radians(double turns);

} // namespace interfact
