#include "interfact/errors.hpp"
#include "interfact/pipeline.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace interfact;

namespace {

FactorizeOptions ideal(std::uint64_t n, int j = 2)
{
    FactorizeOptions o;
    o.n = n;
    o.j = j;
    return o;
}

std::set<std::int64_t> snapped(const FactorReport& r)
{
    std::set<std::int64_t> s;
    for (const auto& p : r.candidates.peaks)
        s.insert(p.nearest_integer);
    return s;
}

} // namespace

TEST(Calibrate, Examples)
{
    const auto c = calibrate(15, 2, 3, UnitLength(1.0));
    EXPECT_EQ(c.lambda_bar_over_u, 15.0);
    EXPECT_EQ(c.paths.paths(), Eigen::Vector3d(15, 60, 135));

    const auto one = calibrate(1, 2, 2, UnitLength(1.0));
    EXPECT_EQ(one.lambda_bar_over_u, 1.0);
    EXPECT_EQ(one.paths.paths(), Eigen::Vector2d(1, 4));

    // phi_m(lambda_bar) = 2 pi m^2: whole turns.
    EXPECT_EQ(phase(60, 15), 0.0);
    EXPECT_EQ(c.paths.turns(1, 15.0), 0.0);
    EXPECT_THROW(calibrate(std::uint64_t{1} << 62, 2, 3, UnitLength(1.0)), CapacityError);
}

TEST(Rescale, Examples)
{
    const auto c = calibrate(100, 2, 4, UnitLength(1.0));
    EXPECT_EQ(rescaled_target(100, 2.21), 221u);
    const auto out = rescale(c, RescalePlan{2.21, RescaleMode::scale_paths});
    const auto& scaled = std::get<PathSet>(out);
    for (Eigen::Index m = 0; m < 4; ++m) {
        const double mm = static_cast<double>(m + 1);
        EXPECT_NEAR(scaled.paths()[m], 2.21 * mm * mm * 100.0, 1e-12);
    }

    const auto same = std::get<PathSet>(rescale(c, RescalePlan{1.0, RescaleMode::scale_paths}));
    EXPECT_EQ(same.paths(), c.paths.paths());

    const auto unit = std::get<UnitLength>(
        rescale(c, RescalePlan{2.21, RescaleMode::scale_unit}, Band{0.5, 20.0}));
    EXPECT_NEAR(unit.nm(), 1.0 / 2.21, 1e-15);

    // ell u / alpha for ell >= 2 starts at 0.905u, below a band starting at 1u.
    EXPECT_THROW(rescale(c, RescalePlan{2.21, RescaleMode::scale_unit}, Band{1.0, 20.0}),
                 RangeError);
    EXPECT_THROW(rescale(c, RescalePlan{0.0, RescaleMode::scale_paths}), ParameterError);
    EXPECT_THROW(rescaled_target(100, 2.215), ParameterError);
}

TEST(Oracle, Examples)
{
    EXPECT_EQ(trial_division_oracle(15), (std::vector<Divisor>{{3, 5}}));
    EXPECT_EQ(trial_division_oracle(16), (std::vector<Divisor>{{2, 8}, {4, 4}}));
    EXPECT_TRUE(trial_division_oracle(17).empty());
    EXPECT_EQ(trial_division_oracle(221), (std::vector<Divisor>{{13, 17}}));
    for (std::uint64_t n = 2; n < 3000; ++n)
        ASSERT_EQ(trial_division_oracle(n), oracle::small_divisors(n));
    // Largest 63-bit input terminates quickly enough when it has small factors.
    EXPECT_EQ(trial_division_oracle(std::uint64_t{1} << 62).front(),
              Divisor(2, std::uint64_t{1} << 61));
}

TEST(Verify, Examples)
{
    PeakList peaks;
    peaks.peaks.push_back(Peak{3.0, 1.0, 3, 0.0});
    peaks.peaks.push_back(Peak{4.0, 0.5, 4, 0.0});
    const auto v = verify_candidates(15, peaks);
    EXPECT_EQ(v.verified, (std::vector<Divisor>{{3, 5}}));
    EXPECT_EQ(v.unverified, (std::vector<std::int64_t>{4}));

    const auto none = verify_candidates(15, PeakList{});
    EXPECT_TRUE(none.verified.empty());
    EXPECT_TRUE(none.unverified.empty());

    // 5 divides 20 but lies above sqrt 20.
    PeakList above;
    above.peaks.push_back(Peak{4.5, 1.0, 5, 0.5});
    EXPECT_EQ(verify_candidates(20, above).unverified, (std::vector<std::int64_t>{5}));
}

TEST(Factorize, Examples)
{
    const auto r15 = factorize(ideal(15));
    EXPECT_EQ(r15.m, 2);
    EXPECT_EQ(r15.verified_factors, (std::vector<Divisor>{{3, 5}}));
    EXPECT_TRUE(r15.coverage_complete);

    const auto r221 = factorize(ideal(221));
    EXPECT_EQ(r221.m, 4);
    EXPECT_EQ(r221.verified_factors, (std::vector<Divisor>{{13, 17}}));

    const auto r13 = factorize(ideal(13));
    EXPECT_TRUE(r13.verified_factors.empty());
    EXPECT_TRUE(r13.coverage_complete);

    const auto r3 = factorize(ideal(3));
    EXPECT_TRUE(r3.verified_factors.empty());
    EXPECT_TRUE(r3.coverage_complete);
}

TEST(Factorize, ReportIntegrity)
{
    for (std::uint64_t n = 4; n <= 3000; n += 11) {
        const auto r = factorize(ideal(n));
        std::set<std::int64_t> parts;
        for (const auto& [ell, co] : r.verified_factors) {
            EXPECT_EQ(n % ell, 0u);
            EXPECT_EQ(ell * co, n);
            EXPECT_LE(ell * ell, n);
            EXPECT_TRUE(parts.insert(static_cast<std::int64_t>(ell)).second);
        }
        for (auto ell : r.unverified)
            EXPECT_TRUE(parts.insert(ell).second);
        EXPECT_EQ(parts, snapped(r));
        EXPECT_EQ(r.verified_factors, oracle::small_divisors(n));
    }
}

TEST(Factorize, CoverageFlag)
{
    auto o = ideal(221);
    o.source = SourceModel::flat(5.0, 20.0);
    const auto r = factorize(o);
    EXPECT_FALSE(r.coverage_complete);
    EXPECT_EQ(r.verified_factors, (std::vector<Divisor>{{13, 17}}));

    // A dim gaussian leaves integers unmeasurable.
    o.source = SourceModel::gaussian(1.0, 20.0, 14.0, 0.5);
    EXPECT_FALSE(factorize(o).coverage_complete);

    o.source = SourceModel::flat(16.0, 20.0);
    EXPECT_THROW(factorize(o), CoverageError);
}

TEST(Factorize, RescaleRoutesAgree)
{
    FactorizeOptions via_paths = ideal(0);
    via_paths.rescale = RescaleOptions{100, 2.21, RescaleMode::scale_paths};
    const auto a = factorize(via_paths);
    EXPECT_EQ(a.n, 221u);
    EXPECT_EQ(a.verified_factors, (std::vector<Divisor>{{13, 17}}));

    FactorizeOptions via_unit = via_paths;
    via_unit.rescale->mode = RescaleMode::scale_unit;
    via_unit.source = SourceModel::flat(1.0, 200.0);
    // Trial factors 2..14 sit at 2/2.21 .. 14.5/2.21 u, below a band from 1u.
    EXPECT_THROW(factorize(via_unit), RangeError);

    via_unit.rescale = RescaleOptions{100, 0.5, RescaleMode::scale_unit};
    via_unit.source = SourceModel::flat(2.0, 200.0);
    const auto b = factorize(via_unit);
    EXPECT_EQ(b.n, 50u);
    EXPECT_EQ(b.verified_factors, (std::vector<Divisor>{{2, 25}, {5, 10}}));
    EXPECT_NEAR(b.unit_nm, 2.0, 1e-15);
}

TEST(Factorize, RescaleEquivalenceProperty)
{
    std::mt19937_64 rng(2210);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t n = 4 + rng() % 9997;
        // N_bar among the divisors-or-not of n; alpha = n / N_bar exactly as a double.
        const std::uint64_t n_bar = 1 + rng() % 500;
        const double alpha = static_cast<double>(n) / static_cast<double>(n_bar);
        FactorizeOptions o = ideal(0);
        o.rescale = RescaleOptions{n_bar, alpha, RescaleMode::scale_paths};
        const auto rescaled = factorize(o);
        ASSERT_EQ(rescaled.n, n);
        EXPECT_EQ(rescaled.verified_factors, factorize(ideal(n)).verified_factors)
            << "n=" << n << " n_bar=" << n_bar;
    }
}

TEST(Factorize, BackendsAgree)
{
    for (std::uint64_t n : {35u, 77u, 221u, 1000u}) {
        auto o = ideal(n);
        const auto base = factorize(o);
        o.backend.kind = BackendKind::michelson;
        const auto mich = factorize(o);
        EXPECT_EQ(mich.backend, "michelson");
        EXPECT_EQ(mich.verified_factors, base.verified_factors);

        o.backend.kind = BackendKind::liquid_crystal;
        o.backend.curve = load_curve({{0.0, 0.30}, {2.0, 0.2}, {6.0, 0.0}});
        o.backend.cell.thickness_um = 1.05 * static_cast<double>(n) * o.j * 50 / 0.3 / 1e3;
        const auto lc = factorize(o);
        EXPECT_EQ(lc.backend, "liquid-crystal");
        EXPECT_EQ(lc.verified_factors, base.verified_factors);
    }
}

TEST(Factorize, LiquidCrystalNeedsCurveAndFeasiblePaths)
{
    auto o = ideal(221);
    o.backend.kind = BackendKind::liquid_crystal;
    EXPECT_THROW(factorize(o), ParameterError);
    o.backend.curve = load_curve({{0.0, 0.30}, {6.0, 0.0}});
    // Longest path 16 * 221 nm = 3536 nm > 8.08 um * 0.30.
    EXPECT_THROW(factorize(o), FeasibilityError);
}

TEST(Factorize, RandomSubsetIsSeeded)
{
    auto o = ideal(9991);  // 97 * 103
    o.m = 20;
    o.subset = SubsetOptions{12, 77};
    const auto a = factorize(o);
    const auto b = factorize(o);
    EXPECT_EQ(a.subset, b.subset);
    EXPECT_EQ(a.subset.size(), 12u);
    EXPECT_TRUE((a.spectrum.sum_magnitude_sq == b.spectrum.sum_magnitude_sq).all());
    EXPECT_EQ(a.verified_factors, (std::vector<Divisor>{{97, 103}}));
}

TEST(Factorize, ParameterErrors)
{
    EXPECT_THROW(factorize(ideal(1)), ParameterError);
    auto o = ideal(15);
    o.threshold = 1.5;
    EXPECT_THROW(factorize(o), ParameterError);
    o = ideal(15, 1);
    EXPECT_THROW(factorize(o), ParameterError);
}
