// SPDX-License-Identifier: Apache-2.0
//
// rmchan - reflection-model multipath MIMO channel toolkit
// Copyright (C) 2026 The rmchan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "support.hpp"

#include <doctest.h>

using namespace rmchan;
using namespace rmchan::testing;

namespace
{
    Eigen::MatrixXcd random_matrix(std::mt19937_64 &rng, int rows, int cols)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        Eigen::MatrixXcd M(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                M(i, j) = cdouble(n(rng), n(rng));
        return M;
    }

    MimoMatrix wrap(const Eigen::MatrixXcd &M) { return MimoMatrix{M, 0.0}; }

    double snr_scale(const LinkBudget &b) { return b.tx_power_w() / (b.noise_psd_w_per_hz() * b.bandwidth_hz); }
}

TEST_SUITE("capacity")
{
    TEST_CASE("link budget conversions")
    {
        LinkBudget b;
        CHECK(b.tx_power_w() == doctest::Approx(0.19952623149688797));
        b.tx_power_dbm = 30.0;
        CHECK(b.tx_power_w() == doctest::Approx(1.0));
        b.noise_figure_db = 0.0;
        CHECK(b.noise_psd_w_per_hz() == doctest::Approx(std::pow(10.0, -20.4)));
    }

    TEST_CASE("singular value examples")
    {
        CHECK(singular_values(wrap(Eigen::MatrixXcd())).empty());
        const auto id = singular_values(wrap(Eigen::MatrixXcd::Identity(3, 3)));
        REQUIRE(id.size() == 3);
        for (double s : id)
            CHECK(s == doctest::Approx(1.0));

        // Exact rank one: u v^H with |u| = 2, |v| = 3
        Eigen::VectorXcd u(4), v(3);
        u << 2, 0, 0, 0;
        v << 0, cdouble(0, 3), 0;
        const auto r1 = singular_values(wrap(u * v.adjoint()));
        REQUIRE(r1.size() == 3);
        CHECK(r1[0] == doctest::Approx(6.0));
        CHECK(r1[1] <= 1e-12);
        CHECK(r1[2] <= 1e-12);

        // All-ones matrix: the constant model produces these
        const auto ones = singular_values(wrap(Eigen::MatrixXcd::Constant(8, 8, cdouble(0.3, -0.4))));
        CHECK(ones[0] == doctest::Approx(0.5 * 8.0));
        for (std::size_t i = 1; i < ones.size(); ++i)
            CHECK(std::isfinite(ones[i]));

        Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
        bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(singular_values(wrap(bad)), std::invalid_argument);
    }

    TEST_CASE("singular values agree with the Gram oracle")
    {
        std::mt19937_64 rng(21);
        for (auto [r, c] : {std::pair{4, 4}, std::pair{6, 3}, std::pair{3, 7}, std::pair{64, 64}})
        {
            const Eigen::MatrixXcd M = random_matrix(rng, r, c);
            const auto sv = singular_values(wrap(M));
            const auto oracle = gram_singular_values(M);
            REQUIRE(sv.size() == std::size_t(std::min(r, c)));
            for (std::size_t i = 0; i < sv.size(); ++i)
                CHECK(std::abs(sv[i] - oracle[i]) <= 1e-8 * oracle[0]);
            for (std::size_t i = 1; i < sv.size(); ++i)
                CHECK(sv[i] <= sv[i - 1]);
        }
    }

    TEST_CASE("rate model")
    {
        CHECK(rho(0.0) == 0.0);
        CHECK(rho(1.0) == 0.6);
        CHECK(rho(255.0) == 4.8);
        CHECK(rho(1e9) == 4.8);
        CHECK(rho(3.0) == doctest::Approx(1.2));
        CHECK(rho(3.0, RateModel{1.0, 10.0}) == doctest::Approx(2.0));
        CHECK_THROWS_AS(rho(-1e-3), std::invalid_argument);
        CHECK_THROWS_AS(rho(std::nan("")), std::invalid_argument);
    }

    TEST_CASE("spectral efficiency examples")
    {
        const LinkBudget b;
        const double k = snr_scale(b);
        // One stream at SNR 1
        const std::vector<double> one{std::sqrt(1.0 / k)};
        auto se = spectral_efficiency(one, b);
        CHECK(se.se == doctest::Approx(0.6));
        CHECK(se.streams == 1);

        // Two equal strong modes: both saturate when split
        const std::vector<double> two{std::sqrt(1e4 / k), std::sqrt(1e4 / k)};
        se = spectral_efficiency(two, b);
        CHECK(se.se == doctest::Approx(9.6));
        CHECK(se.streams == 2);

        // A negligible second mode is not worth the power split
        const std::vector<double> weak{std::sqrt(3.0 / k), 1e-6 * std::sqrt(1.0 / k)};
        se = spectral_efficiency(weak, b);
        CHECK(se.se == doctest::Approx(1.2));
        CHECK(se.streams == 1);

        CHECK(spectral_efficiency(std::vector<double>{}, b).se == 0.0);
        const std::vector<double> unsorted{1.0, 2.0};
        CHECK_THROWS_AS(spectral_efficiency(unsorted, b), std::invalid_argument);
        LinkBudget zero_bw;
        zero_bw.bandwidth_hz = 0.0;
        CHECK_THROWS_AS(spectral_efficiency(one, zero_bw), std::invalid_argument);
    }

    TEST_CASE("spectral efficiency properties")
    {
        std::mt19937_64 rng(22);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial)
        {
            const Eigen::MatrixXcd M = 1e-6 * random_matrix(rng, 4, 4);
            LinkBudget b;
            b.tx_power_dbm = -20.0 + 40.0 * u01(rng);
            const auto sv = singular_values(wrap(M));
            const auto se = spectral_efficiency(sv, b);
            CHECK(se.se >= 0.0);
            CHECK(se.se <= 4.0 * 4.8 + 1e-12);
            CHECK(se.streams >= 1);
            CHECK(se.streams <= 4);

            // Monotone in transmit power
            LinkBudget louder = b;
            louder.tx_power_dbm += 3.0;
            CHECK(spectral_efficiency(sv, louder).se >= se.se - 1e-12);

            // Unitary transforms and row permutations leave the result unchanged
            Eigen::MatrixXcd P = M;
            P.row(0).swap(P.row(3));
            P.col(1) *= std::polar(1.0, 2.0 * u01(rng));
            CHECK(spectral_efficiency(singular_values(wrap(P)), b).se == doctest::Approx(se.se).epsilon(1e-9));
        }
    }

    TEST_CASE("band rate")
    {
        const auto fr = band_frequencies(140e9, 2e9, 10);
        REQUIRE(fr.size() == 10);
        CHECK(fr.front() == doctest::Approx(139.1e9));
        CHECK(fr.back() == doctest::Approx(140.9e9));
        CHECK(band_frequencies(5.0, 2.0, 1)[0] == 5.0);
        CHECK_THROWS_AS(band_frequencies(5.0, 2.0, 0), std::invalid_argument);

        std::mt19937_64 rng(23);
        const Eigen::MatrixXcd M = 1e-6 * random_matrix(rng, 3, 3);
        const LinkBudget b;
        const double flat = spectral_efficiency(singular_values(wrap(M)), b).se;
        for (int n : {1, 4, 10})
        {
            const BandRate r = band_rate([&](double) { return wrap(M); }, 140e9, b, {}, n);
            CHECK(r.se_avg == doctest::Approx(flat));
            CHECK(r.rate == doctest::Approx(flat * b.bandwidth_hz));
        }

        // Frequency-dependent gain: the midpoint rule samples exactly the band frequencies
        const auto H_at = [&](double f) { return wrap(M * (f / 140e9)); };
        double expect = 0.0;
        for (double f : band_frequencies(140e9, b.bandwidth_hz, 10))
            expect += spectral_efficiency(singular_values(H_at(f)), b).se;
        CHECK(band_rate(H_at, 140e9, b).se_avg == doctest::Approx(expect / 10.0));
    }

    TEST_CASE("Rayleigh distance")
    {
        CHECK(rayleigh_distance(1.0, 0.5) == doctest::Approx(4.0));
        CHECK(rayleigh_distance(0.0, 0.5) == 0.0);
        const double lambda = speed_of_light / 140e9;
        CHECK(rayleigh_distance(0.98 * std::sqrt(2.0), lambda) == doctest::Approx(2.0 * 2.0 * 0.98 * 0.98 / lambda));
        CHECK_THROWS_AS(rayleigh_distance(-1.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(rayleigh_distance(1.0, 0.0), std::invalid_argument);
    }

    TEST_CASE("two-element LOS link at the optimal spacing has equal singular values")
    {
        for (double f : {28e9, 60e9})
            for (double R : {50.0, 100.0})
            {
                const double lambda = speed_of_light / f, d = std::sqrt(lambda * R / 2.0);
                const ArrayGeometry tx = array_from_positions({{0, -d / 2, 1}, {0, d / 2, 1}});
                const ArrayGeometry rx = array_from_positions({{R, -d / 2, 1}, {R, d / 2, 1}});
                Scene empty;
                empty.carrier_hz = f;
                const ReferencePair ref = ReferencePair::make(tx.center, rx.center);
                const ReferenceModel model = ReferenceModel::from_traced(trace_paths(empty, ref.tx_ref, ref.rx_ref, 0), ref, f);
                const auto sv = singular_values(mimo_matrix(tx, rx, ChannelModel::exhaustive, model, &empty, f));
                CHECK(sv[0] / sv[1] <= 1.001);
                // Half that spacing leaves a clearly dominant mode
                const double h = d / 2.0;
                const ArrayGeometry tx2 = array_from_positions({{0, -h / 2, 1}, {0, h / 2, 1}});
                const ArrayGeometry rx2 = array_from_positions({{R, -h / 2, 1}, {R, h / 2, 1}});
                const auto sv2 = singular_values(mimo_matrix(tx2, rx2, ChannelModel::exhaustive, model, &empty, f));
                CHECK(sv2[0] / sv2[1] > 2.0);
            }
    }
}
