#include "interfact/phase_reduction.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace interfact {

namespace {

using u128 = unsigned __int128;

// x = mantissa * 2^exponent with an odd mantissa (or zero).
struct Dyadic {
    std::uint64_t mantissa;
    int exponent;
};

Dyadic normalize(std::uint64_t mantissa, int exponent)
{
    if (mantissa == 0)
        return {0, 0};
    const int tz = std::countr_zero(mantissa);
    return {mantissa >> tz, exponent + tz};
}

Dyadic decompose(double x)
{
    int e = 0;
    const double frac = std::frexp(x, &e); // x = frac * 2^e, frac in [0.5, 1)
    const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
    return normalize(mant, e - 53);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, int exponent, std::uint64_t m)
{
    if (m == 1)
        return 0;
    std::uint64_t result = 1;
    base %= m;
    for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
        if (e & 1u)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
    }
    return result;
}

std::uint64_t pow2mod(int exponent, std::uint64_t m)
{
    return powmod(2, exponent, m);
}

double frac_of_ratio(Dyadic a, Dyadic b)
{
    if (a.mantissa == 0)
        return 0.0;
    const int shift = a.exponent - b.exponent;
    if (shift >= 0) {
        // A * 2^shift / B with odd B: the remainder lives entirely mod B.
        const std::uint64_t r =
            mulmod(a.mantissa % b.mantissa, pow2mod(shift, b.mantissa), b.mantissa);
        return static_cast<double>(static_cast<long double>(r) /
                                   static_cast<long double>(b.mantissa));
    }
    const int down = -shift;
    if (std::bit_width(b.mantissa) + down <= 127) {
        const u128 den = static_cast<u128>(b.mantissa) << down;
        const u128 r = static_cast<u128>(a.mantissa) % den;
        return static_cast<double>(static_cast<long double>(r) /
                                   static_cast<long double>(den));
    }
    // Quotient below 2^-63: it is its own fractional part.
    return std::ldexp(static_cast<double>(a.mantissa) / static_cast<double>(b.mantissa),
                      shift);
}

} // namespace

double turns_mod_one(double numerator, double denominator)
{
    double t = frac_of_ratio(decompose(numerator), decompose(denominator));
    // The final rounding can land exactly on 1.
    return t >= 1.0 ? 0.0 : t;
}

double turns_mod_one(std::uint64_t numerator, double denominator)
{
    double t = frac_of_ratio(normalize(numerator, 0), decompose(denominator));
    return t >= 1.0 ? 0.0 : t;
}

double turns_mod_one_power(std::uint64_t base, int power, std::uint64_t factor,
                           double denominator)
{
    const Dyadic den = decompose(denominator);
    // denominator = B * 2^e with odd B. For e >= 0 the modulus is the integer
    // denominator itself; for e < 0 the power of two moves to the numerator.
    const std::uint64_t modulus =
        den.exponent >= 0 ? den.mantissa << den.exponent : den.mantissa;
    std::uint64_t r = mulmod(powmod(base % modulus, power, modulus), factor % modulus,
                             modulus);
    if (den.exponent < 0)
        r = mulmod(r, pow2mod(-den.exponent, modulus), modulus);
    double t = static_cast<double>(static_cast<long double>(r) /
                                   static_cast<long double>(modulus));
    return t >= 1.0 ? 0.0 : t;
}

std::complex<double> unit_phasor(double turns)
{
    if (turns == 0.0)
        return {1.0, 0.0};
    const double folded = turns >= 0.5 ? turns - 1.0 : turns;
    const double angle = 2.0 * std::numbers::pi * folded;
    return {std::cos(angle), std::sin(angle)};
}

double turns_to_radians(double turns)
{
    return 2.0 * std::numbers::pi * turns;
}

} // namespace interfact
