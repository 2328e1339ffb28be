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
using std::numbers::pi;

namespace
{
    RandomScene ground_scene()
    {
        RandomScene s;
        s.scene.carrier_hz = 28e9;
        s.scene.facets.push_back(Facet::make({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
        s.scene.facets.push_back(Facet::make({0, 10, 0}, {1, 0, 0}, {0, 0, 1}));
        s.ref = ReferencePair::make({0, 0, 6}, {60, 2, 1.5});
        return s;
    }

    DisplacementSpec small_spec()
    {
        DisplacementSpec spec;
        spec.distances = {0.01, 0.02, 0.1, 0.5, 1.0};
        spec.directions_per_distance = 6;
        spec.rng_seed = 99;
        return spec;
    }

    CapacityConfig small_capacity()
    {
        CapacityConfig cfg;
        cfg.tx_array = {2, 2, 0.05};
        cfg.rx_array = {2, 2, 0.05};
        cfg.rotations = {-pi / 3, 0.0, pi / 3};
        cfg.n_freq = 3;
        return cfg;
    }
}

TEST_SUITE("experiments")
{
    TEST_CASE("estimator names round trip")
    {
        for (auto e : all_estimators)
            CHECK(estimator_from_string(to_string(e)) == e);
        CHECK_THROWS_AS(estimator_from_string("bogus"), std::invalid_argument);
        for (auto m : {CapacityModel::exhaustive, CapacityModel::constant, CapacityModel::pwa, CapacityModel::rm_rt,
                       CapacityModel::rm_rt_angles, CapacityModel::rm_dp})
            CHECK(capacity_model_from_string(to_string(m)) == m);
        CHECK_THROWS_AS(capacity_model_from_string("bogus"), std::invalid_argument);
    }

    TEST_CASE("parallel_for visits each index once and propagates errors")
    {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
        parallel_for(0, [](std::size_t) { FAIL("called"); });
        CHECK_THROWS_AS(parallel_for(10, [](std::size_t i)
                                     { if (i == 7) throw std::runtime_error("boom"); }, 3),
                        std::runtime_error);
    }

    TEST_CASE("fit_estimators")
    {
        const RandomScene s = ground_scene();
        const EstimatorSet none = fit_estimators(s.scene, s.ref, {});
        CHECK(none.trace_count == 1);
        CHECK_FALSE(none.dp.has_value());
        CHECK(none.rt.paths.size() == none.reference_paths.size());
        double e0 = 0.0;
        for (const auto &p : none.reference_paths)
            e0 += std::norm(p.gain);
        CHECK(none.e0 == doctest::Approx(e0));

        const std::vector<std::pair<Vec3, Vec3>> pairs{{s.ref.tx_ref + Vec3{0.01, 0, 0}, s.ref.rx_ref + Vec3{0, 0.01, 0}},
                                                       {s.ref.tx_ref + Vec3{0, 0, 0.02}, s.ref.rx_ref + Vec3{0.02, 0, 0}}};
        const EstimatorSet est = fit_estimators(s.scene, s.ref, pairs);
        CHECK(est.trace_count == 3);
        REQUIRE(est.dp.has_value());
        CHECK(est.dp->paths.size() == est.rt.paths.size());

        // Zero displacement reproduces the reference channel for every estimator
        for (auto e : all_estimators)
            for (double err : channel_errors(s.scene, est, e, s.ref.tx_ref, s.ref.rx_ref, {27.5e9, 28e9, 28.7e9}))
                CHECK(err <= 1e-20);
        CHECK_THROWS_AS(channel_errors(s.scene, none, Estimator::rm_dp, s.ref.tx_ref, s.ref.rx_ref, {28e9}),
                        std::invalid_argument);

        // A link with no path at all
        Scene closed;
        closed.carrier_hz = 28e9;
        closed.facets.push_back(Facet::make({30, 1, 1.5}, {0, 1, 0}, {0, 0, 1}, 50.0, 50.0));
        CHECK_THROWS_AS(fit_estimators(closed, ReferencePair::make({0, 1, 1.5}, {60, 1, 1.5}), {}, 0), std::invalid_argument);
    }

    TEST_CASE("displacement experiment behaviour")
    {
        const RandomScene s = ground_scene();
        const DisplacementSpec spec = small_spec();
        const auto rec = displacement_experiment(s.scene, s.ref, spec, 2e9, all_estimators, 4);
        CHECK(rec.size() == all_estimators.size() * spec.distances.size() * 6 * 4);
        for (const auto &r : rec)
        {
            CHECK(r.epsilon >= 0.0);
            CHECK(std::abs(r.frequency - 28e9) <= 1e9);
        }

        // Same seed, same output bit for bit
        const auto again = displacement_experiment(s.scene, s.ref, spec, 2e9, all_estimators, 4);
        REQUIRE(again.size() == rec.size());
        bool same = true;
        for (std::size_t i = 0; i < rec.size(); ++i)
            same = same && rec[i].epsilon == again[i].epsilon && rec[i].frequency == again[i].frequency &&
                   rec[i].model == again[i].model && rec[i].distance == again[i].distance;
        CHECK(same);

        // Constant and PWA errors grow with distance; the constant channel is fully decorrelated at 1 m
        for (auto e : {Estimator::constant, Estimator::pwa})
            CHECK(median_epsilon(rec, e, 0.01) < median_epsilon(rec, e, 1.0));
        CHECK(median_epsilon(rec, Estimator::constant, 1.0) > 0.1);

        // The two reflection-model fits agree and beat PWA everywhere
        for (double d : spec.distances)
        {
            const double rt = median_epsilon(rec, Estimator::rm_rt, d), dp = median_epsilon(rec, Estimator::rm_dp, d);
            CHECK(dp <= 1.1 * rt + 1e-24);
            CHECK(rt <= median_epsilon(rec, Estimator::pwa, d));
        }
        CHECK_THROWS_AS(median_epsilon(rec, Estimator::pwa, 0.3), std::invalid_argument);
    }

    TEST_CASE("displacement experiment validation")
    {
        const RandomScene s = ground_scene();
        DisplacementSpec spec = small_spec();
        spec.distances = {};
        CHECK_THROWS_AS(displacement_experiment(s.scene, s.ref, spec, 2e9), std::invalid_argument);
        spec.distances = {0.1, 0.05};
        CHECK_THROWS_AS(displacement_experiment(s.scene, s.ref, spec, 2e9), std::invalid_argument);
        spec.distances = {-0.1, 0.05};
        CHECK_THROWS_AS(displacement_experiment(s.scene, s.ref, spec, 2e9), std::invalid_argument);
        spec.distances = {0.1};
        CHECK_THROWS_AS(displacement_experiment(s.scene, s.ref, spec, 2e9), std::invalid_argument);
        CHECK_NOTHROW(displacement_experiment(s.scene, s.ref, spec, 2e9, {Estimator::pwa}, 2));
        spec.directions_per_distance = 0;
        CHECK_THROWS_AS(displacement_experiment(s.scene, s.ref, spec, 2e9, {Estimator::pwa}), std::invalid_argument);
    }

    TEST_CASE("capacity sweep on a small configuration")
    {
        const RandomScene s = ground_scene();
        const CapacityConfig cfg = small_capacity();
        const CapacityResult res = capacity_sweep(s.scene, s.ref, cfg);
        REQUIRE(res.rows.size() == 3 * cfg.models.size());
        CHECK(res.traces.exhaustive == 3 * 16);
        CHECK(res.traces.rm_rt == 1);
        CHECK(res.traces.pwa == 1);
        CHECK(res.traces.rm_dp == 3);
        for (std::size_t r = 0; r < 3; ++r)
        {
            const CapacityRow *img = nullptr, *ang = nullptr;
            for (std::size_t m = 0; m < cfg.models.size(); ++m)
            {
                const CapacityRow &row = res.rows[r * cfg.models.size() + m];
                CHECK(row.rotation == cfg.rotations[r]);
                CHECK(row.model == cfg.models[m]);
                CHECK(row.se_center >= 0.0);
                CHECK(row.se_avg >= 0.0);
                CHECK(row.rank_used >= 1);
                if (row.model == CapacityModel::rm_rt)
                    img = &row;
                if (row.model == CapacityModel::rm_rt_angles)
                    ang = &row;
            }
            REQUIRE(img != nullptr);
            REQUIRE(ang != nullptr);
            CHECK(img->se_center == doctest::Approx(ang->se_center).epsilon(1e-9));
            CHECK(img->se_avg == doctest::Approx(ang->se_avg).epsilon(1e-9));
        }
        const CapacityResult again = capacity_sweep(s.scene, s.ref, cfg);
        for (std::size_t i = 0; i < res.rows.size(); ++i)
            CHECK(again.rows[i].se_avg == res.rows[i].se_avg);

        CapacityConfig bad = cfg;
        bad.models.clear();
        CHECK_THROWS_AS(capacity_sweep(s.scene, s.ref, bad), std::invalid_argument);
    }

    TEST_CASE("capacity sweep is symmetric under mirrored rotations in free space")
    {
        Scene empty;
        empty.carrier_hz = 28e9;
        const ReferencePair ref = ReferencePair::make({0, 0, 2}, {25, 0, 2});
        CapacityConfig cfg;
        cfg.tx_array = {2, 3, 0.3};
        cfg.rx_array = {2, 3, 0.3};
        cfg.rotations = {-0.4, 0.4};
        cfg.n_freq = 2;
        cfg.models = {CapacityModel::exhaustive, CapacityModel::rm_rt};
        const CapacityResult res = capacity_sweep(empty, ref, cfg);
        CHECK(res.rows[0].se_avg == doctest::Approx(res.rows[2].se_avg).epsilon(1e-9));
        CHECK(res.rows[1].se_avg == doctest::Approx(res.rows[3].se_avg).epsilon(1e-9));
        CHECK(res.traces.rm_dp == 3); // reported even when RM-DP is not evaluated
    }

    TEST_CASE("default rotations")
    {
        const auto r = default_rotations();
        REQUIRE(r.size() == 24);
        CHECK(r.front() == doctest::Approx(-pi));
        CHECK(r.back() == doctest::Approx(deg2rad(165.0)));
    }
}
