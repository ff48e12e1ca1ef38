#include "interfact/sumcore.hpp"

#include "interfact/errors.hpp"
#include "interfact/phase_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace interfact {

namespace {

constexpr std::uint64_t kMaxN = std::uint64_t{1} << 63;

void validate_ell(const SumParams& p, double ell)
{
    validate(p);
    if (!std::isfinite(ell) || ell < 1.0)
        throw ParameterError("trial factor must be >= 1, got " + std::to_string(ell));
    if (ell >= 0x1p63)
        throw ParameterError("trial factor must be below 2^63");
}

// exp(-2 pi i m^j N / ell)
std::complex<double> term(std::uint64_t m, const SumParams& p, double ell)
{
    return std::conj(unit_phasor(turns_mod_one_power(m, p.j, p.n, ell)));
}

SumValue make_value(std::complex<double> amplitude)
{
    return {amplitude, std::norm(amplitude)};
}

template <typename Terms>
std::complex<double> accumulate_terms(const Terms& terms, const SumParams& p, double ell)
{
    std::complex<double> acc{0.0, 0.0};
    for (auto m : terms)
        acc += term(static_cast<std::uint64_t>(m), p, ell);
    return acc;
}

std::vector<int> iota_terms(int m)
{
    std::vector<int> terms(static_cast<std::size_t>(m));
    std::iota(terms.begin(), terms.end(), 1);
    return terms;
}

} // namespace

void validate(const SumParams& p)
{
    if (p.n < 2 || p.n >= kMaxN)
        throw ParameterError("N must satisfy 2 <= N < 2^63, got " + std::to_string(p.n));
    if (p.j < 2)
        throw ParameterError("order j must be >= 2, got " + std::to_string(p.j));
    if (p.m < 1)
        throw ParameterError("truncation M must be >= 1, got " + std::to_string(p.m));
    for (std::size_t i = 0; i < p.subset.size(); ++i) {
        const int t = p.subset[i];
        if (t < 1 || t > p.m)
            throw ParameterError("subset term " + std::to_string(t) + " outside [1, " +
                                 std::to_string(p.m) + "]");
        if (std::find(p.subset.begin(), p.subset.begin() + static_cast<long>(i), t) !=
            p.subset.begin() + static_cast<long>(i))
            throw ParameterError("subset term " + std::to_string(t) + " repeated");
    }
}

SumValue eval_full_sum(const SumParams& p, double ell)
{
    validate_ell(p, ell);
    std::complex<double> acc{1.0, 0.0}; // m = 0
    for (int m = 1; m <= p.m; ++m)
        acc += term(static_cast<std::uint64_t>(m), p, ell);
    return make_value(acc / static_cast<double>(p.m + 1));
}

SumValue eval_reduced_sum(const SumParams& p, double ell)
{
    validate_ell(p, ell);
    const auto terms = iota_terms(p.m);
    return make_value(accumulate_terms(terms, p, ell) / static_cast<double>(p.m));
}

SumValue eval_random_subset_sum(const SumParams& p, double ell)
{
    validate_ell(p, ell);
    if (p.subset.empty())
        throw ParameterError("random-subset sum needs a non-empty subset");
    std::vector<int> terms = p.subset;
    std::sort(terms.begin(), terms.end());
    return make_value(accumulate_terms(terms, p, ell) /
                      static_cast<double>(terms.size()));
}

int auto_truncation(std::uint64_t n, int j, double safety)
{
    if (n < 2 || n >= kMaxN)
        throw ParameterError("N must satisfy 2 <= N < 2^63");
    if (j < 2)
        throw ParameterError("order j must be >= 2");
    if (!std::isfinite(safety) || safety < 1.0)
        throw ParameterError("safety multiplier must be >= 1");

    const long double root = std::pow(static_cast<long double>(n), 1.0L / (2 * j));
    auto m = static_cast<long long>(std::ceil(safety * root));
    // pow is not correctly rounded; settle the ceiling on the exact criterion
    // (m / safety)^(2j) >= N.
    const auto reaches = [&](long long cand) {
        return std::pow(static_cast<long double>(cand) / safety, 2 * j) >=
               static_cast<long double>(n);
    };
    while (m > 1 && reaches(m - 1))
        --m;
    while (!reaches(m))
        ++m;
    return static_cast<int>(std::max<long long>(m, 1));
}

TrialClass classify_trial(const SumValue& value, double threshold)
{
    return std::sqrt(value.magnitude_sq) >= threshold ? TrialClass::factor_candidate
                                                      : TrialClass::non_factor;
}

std::vector<int> choose_subset(int m, int size, std::uint64_t seed)
{
    if (m < 1)
        throw ParameterError("truncation M must be >= 1");
    if (size < 1 || size > m)
        throw ParameterError("subset size must lie in [1, " + std::to_string(m) + "]");
    std::vector<int> pool = iota_terms(m);
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates on raw engine output: the draw must be identical across standard libraries.
    for (int i = 0; i < size; ++i) {
        const auto span = static_cast<std::uint64_t>(m - i);
        const auto pick = static_cast<int>(rng() % span);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(i + pick)]);
    }
    pool.resize(static_cast<std::size_t>(size));
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace interfact
