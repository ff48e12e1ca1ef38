#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace interfact {

/// Default discrimination level on |A|: 1/sqrt(2), i.e. |A|^2 >= 1/2.
inline constexpr double kDefaultThreshold = std::numbers::sqrt2 / 2.0;

/**
 * Parameters of a truncated exponential sum
 *
 *   A(ell) = 1/(M+1) * sum_{m=0}^{M} exp(-2 pi i m^j N / ell).
 *
 * `subset`, when non-empty, lists the M' distinct terms m in [1, M] kept by
 * the random-subset variant.
 */
struct SumParams {
    std::uint64_t n = 2;
    int j = 2;
    int m = 1;
    std::vector<int> subset;
};

struct SumValue {
    std::complex<double> amplitude;
    double magnitude_sq = 0.0;
};

enum class TrialClass { factor_candidate, non_factor };

/// Throws ParameterError on N < 2, N >= 2^63, j < 2, M < 1 or a bad subset.
void validate(const SumParams& p);

SumValue eval_full_sum(const SumParams& p, double ell);

/// Sum without the m = 0 term, normalized by 1/M; a factor gives 1.
SumValue eval_reduced_sum(const SumParams& p, double ell);

/// Mean over the terms listed in p.subset (1/M' normalization).
SumValue eval_random_subset_sum(const SumParams& p, double ell);

/// Smallest integer M >= safety * N^(1/(2j)), at least 1.
int auto_truncation(std::uint64_t n, int j, double safety = 1.0);

/// factor_candidate iff |A| >= threshold (so the boundary counts as a candidate).
TrialClass classify_trial(const SumValue& value, double threshold = kDefaultThreshold);

/**
 * Draws `size` distinct terms from [1, m] with a seeded mt19937_64 and returns
 * them sorted. The draw depends only on (m, size, seed).
 */
std::vector<int> choose_subset(int m, int size, std::uint64_t seed);

} // namespace interfact
