#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "focrlb/noise_model.hpp"

using namespace focrlb;

namespace {

RationalFilter white(double sigma2, double fs = 1.0) {
    return RationalFilter({1.0}, {1.0}, sigma2, fs);
}

RationalFilter ar1(double a, double sigma2 = 1.0, double fs = 1.0) {
    return RationalFilter({1.0}, {1.0, -a}, sigma2, fs);
}

// closed form for den = [1, -a]: r[k] = sigma2 * a^k / (1 - a^2)
double ar1_autocov(double a, double sigma2, std::size_t k) {
    return sigma2 * std::pow(a, static_cast<double>(k)) / (1.0 - a * a);
}

std::vector<double> dense_psd_scan(const RationalFilter& f, std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = 0.5 * static_cast<double>(i) / static_cast<double>(points - 1);
    return psd(f, grid);
}

} // namespace

TEST_CASE("filter construction validates invariants") {
    CHECK_THROWS_AS(RationalFilter({}, {1.0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RationalFilter({1.0}, {2.0, 0.1}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RationalFilter({1.0}, {1.0, -1.5}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RationalFilter({1.0}, {1.0, -1.0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RationalFilter({1.0}, {1.0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RationalFilter({1.0}, {1.0}, 1.0, -5.0), std::invalid_argument);
    CHECK_NOTHROW(ar1(0.999));
}

TEST_CASE("psd of the identity filter is the input variance") {
    const RationalFilter f = white(2.0);
    for (double freq : {0.0, 0.1, 0.25, 0.4, 0.5}) CHECK(psd(f, freq) == 2.0);
}

TEST_CASE("psd of AR(1) matches closed forms") {
    const RationalFilter f = ar1(0.9);
    CHECK(psd(f, 0.0) == doctest::Approx(100.0).epsilon(1e-12));
    // |1 - 0.9 e^{-j pi}|^{-2} = 1 / 1.9^2
    CHECK(psd(f, 0.5) == doctest::Approx(1.0 / 3.61).epsilon(1e-12));
    CHECK_THROWS_AS(psd(f, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(psd(f, -0.1), std::invalid_argument);
}

TEST_CASE("psd is nonnegative for random stable modal filters") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> freq(0.05, 2.4);
    std::uniform_real_distribution<double> zeta(0.01, 0.99);
    std::uniform_real_distribution<double> gain(0.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        ModalSpec spec;
        const int n_modes = 1 + trial % 4;
        for (int m = 0; m < n_modes; ++m)
            spec.modes.push_back({freq(gen), zeta(gen), gain(gen)});
        const RationalFilter f = build_surrogate(spec, 0.5, 5.0);
        for (double v : dense_psd_scan(f, 257)) CHECK(v >= 0.0);
    }
}

TEST_CASE("psd and autocovariance scale exactly with the input variance") {
    const RationalFilter base = ar1(0.8, 1.0);
    const RationalFilter scaled = ar1(0.8, 4.0);
    for (double freq : {0.0, 0.123, 0.5}) CHECK(psd(scaled, freq) == 4.0 * psd(base, freq));

    const auto r1 = autocovariance(base, 32).values();
    const auto r4 = autocovariance(scaled, 32).values();
    for (std::size_t k = 0; k <= 32; ++k) CHECK(r4[k] == 4.0 * r1[k]);
}

TEST_CASE("frequency response known values") {
    const PolarGain unit = frequency_response(white(2.0), 0.3);
    CHECK(unit.magnitude == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unit.phase_rad == doctest::Approx(0.0));

    const RationalFilter f = ar1(0.9);
    const PolarGain dc = frequency_response(f, 0.0);
    CHECK(dc.magnitude == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(dc.phase_rad == doctest::Approx(0.0));

    // 1 / (1 + 0.9 j): magnitude 1/sqrt(1.81), phase -atan2(0.9, 1)
    const PolarGain quarter = frequency_response(f, 0.25);
    CHECK(quarter.magnitude == doctest::Approx(1.0 / std::sqrt(1.81)).epsilon(1e-12));
    CHECK(quarter.phase_rad == doctest::Approx(-std::atan2(0.9, 1.0)).epsilon(1e-12));
}

TEST_CASE("autocovariance of white noise is a delta") {
    const auto r = autocovariance(white(2.0), 16).values();
    CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
    for (std::size_t k = 1; k <= 16; ++k) CHECK(std::abs(r[k]) < 2.0 * 1e-12);
}

TEST_CASE("autocovariance matches the AR(1) closed form") {
    for (double a : {0.5, 0.9, 0.99}) {
        const auto r = autocovariance(ar1(a), 200).values();
        const double r0 = ar1_autocov(a, 1.0, 0);
        REQUIRE(r[0] == doctest::Approx(r0).epsilon(1e-10));
        for (std::size_t k = 0; k <= 200; ++k) {
            const double expected = ar1_autocov(a, 1.0, k);
            CHECK(std::abs(r[k] - expected) <= 1e-8 * r0);
            if (expected > 1e-4 * r0)
                CHECK(r[k] == doctest::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("autocovariance r[0] equals the integrated psd") {
    const RationalFilter f = build_surrogate(default_surrogate_modes(), 1e-3, 5.0);
    const auto r = autocovariance(f, 8).values();

    // two-sided integral over [-0.5, 0.5] by trapezoid on the even half
    const std::size_t m = 1 << 15;
    const auto s = dense_psd_scan(f, m + 1);
    double integral = 0.5 * (s.front() + s.back());
    for (std::size_t i = 1; i < m; ++i) integral += s[i];
    integral *= 2.0 * 0.5 / static_cast<double>(m);

    CHECK(r[0] == doctest::Approx(integral).epsilon(1e-6));
}

TEST_CASE("autocovariance validates its inputs") {
    CHECK_THROWS_AS(autocovariance(white(1.0), 0), std::invalid_argument);
    CHECK_THROWS_AS(AutocovarianceSeq({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(AutocovarianceSeq({1.0, 1.5}), std::invalid_argument);
    CHECK_NOTHROW(AutocovarianceSeq({1.0, 1.0}));
}

TEST_CASE("surrogate places the spectral peak at the requested mode") {
    const RationalFilter f = build_surrogate({{{0.25, 0.05, 1.0}}}, 1.0, 5.0);
    const auto s = dense_psd_scan(f, 4096);
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] > s[argmax]) argmax = i;
    const double peak_hz = 0.5 * static_cast<double>(argmax) / 4095.0 * 5.0;
    CHECK(std::abs(peak_hz - 0.25) <= 0.02);
}

TEST_CASE("default surrogate shows three local psd maxima near its modes") {
    const RationalFilter f = build_surrogate(default_surrogate_modes(), 1e-3, 5.0);
    const auto s = dense_psd_scan(f, 4096);
    std::vector<double> maxima_hz;
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
        if (s[i] >= s[i - 1] && s[i] >= s[i + 1])
            maxima_hz.push_back(0.5 * static_cast<double>(i) / 4095.0 * 5.0);
    REQUIRE(maxima_hz.size() == 3);
    CHECK(std::abs(maxima_hz[0] - 0.25) <= 0.02);
    CHECK(std::abs(maxima_hz[1] - 0.6) <= 0.02);
    CHECK(std::abs(maxima_hz[2] - 0.7) <= 0.02);
}

TEST_CASE("heavily damped mode gives a nearly flat spectrum") {
    // at zeta -> 1 the poles collapse onto the real axis and tilt the
    // spectrum toward DC (peak/median levels out near 2.8), so flatness is
    // checked at moderate-heavy damping
    const RationalFilter flat = build_surrogate({{{0.25 * 5.0, 0.6, 1.0}}}, 1.0, 5.0);
    auto s = dense_psd_scan(flat, 4096);
    const double peak = *std::max_element(s.begin(), s.end());
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    CHECK(peak / s[s.size() / 2] < 2.0);

    const RationalFilter resonant = build_surrogate({{{0.25 * 5.0, 0.05, 1.0}}}, 1.0, 5.0);
    auto sr = dense_psd_scan(resonant, 4096);
    const double rpeak = *std::max_element(sr.begin(), sr.end());
    std::nth_element(sr.begin(), sr.begin() + sr.size() / 2, sr.end());
    CHECK(rpeak / sr[sr.size() / 2] > 10.0);
}

TEST_CASE("surrogate validates the modal spec") {
    CHECK_THROWS_AS(build_surrogate(ModalSpec{}, 1.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(build_surrogate({{{0.25, -0.1, 1.0}}}, 1.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(build_surrogate({{{3.0, 0.1, 1.0}}}, 1.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(build_surrogate({{{0.25, 0.1, -1.0}}}, 1.0, 5.0), std::invalid_argument);
}

TEST_CASE("impulse energy length") {
    CHECK(impulse_energy_length(white(3.0)) == 0);
    // AR(1): cumulative energy (1-a^{2(m+1)})/(1-a^2) reaches 99% at m = 21
    CHECK(impulse_energy_length(ar1(0.9)) == 21);
}
