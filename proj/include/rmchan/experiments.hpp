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

#ifndef rmchan_experiments_H
#define rmchan_experiments_H

#include "rmchan/capacity.hpp"
#include "rmchan/channel.hpp"
#include "rmchan/mirror_tracer.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rmchan
{
    // Channel estimators compared against the re-traced truth
    enum class Estimator
    {
        constant, // reference channel reused unchanged
        pwa,      // plane-wave extrapolation
        rm_rt,    // reflection model from route tracing (image form)
        rm_dp     // reflection model from displaced pairs (angle form)
    };

    std::string to_string(Estimator e);
    Estimator estimator_from_string(const std::string &name);

    inline const std::vector<Estimator> all_estimators = {Estimator::constant, Estimator::pwa, Estimator::rm_rt, Estimator::rm_dp};

    // Runs fn(i) for i in [0, n) on a pool of worker threads. Each index is executed exactly once;
    // callers write results into slot i, so output order does not depend on scheduling.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned n_threads = 0);

    // Everything fitted at the reference pair
    struct EstimatorSet
    {
        double f0 = 0.0;
        double e0 = 0.0; // sum of |g|^2 over reference paths
        int max_bounces = 2;
        std::vector<TracedPath> reference_paths;
        ReferenceModel rt;
        std::optional<ReferenceModel> dp;
        std::vector<DpPathFit> dp_fits;
        std::size_t trace_count = 0; // tracer invocations spent on fitting
    };

    // Traces the reference pair and fits RM-RT; fits RM-DP as well if at least two displaced pairs
    // (tx, rx) are given. Throws std::invalid_argument if the reference link has no path.
    EstimatorSet fit_estimators(const Scene &scene, const ReferencePair &ref,
                                const std::vector<std::pair<Vec3, Vec3>> &dp_pairs, int max_bounces = 2);

    // Normalized squared error |H_hat(f) - H(f)|^2 / E0 at each frequency, truth re-traced at (tx, rx)
    std::vector<double> channel_errors(const Scene &scene, const EstimatorSet &est, Estimator model,
                                       const Vec3 &tx, const Vec3 &rx, const std::vector<double> &freqs);

    struct DisplacementSpec
    {
        std::vector<double> distances = {0.01, 0.02, 0.05, 0.10, 0.50, 1.00}; // meters, ascending
        int directions_per_distance = 20;
        std::uint64_t rng_seed = 1;
    };

    struct ErrorRecord
    {
        Estimator model = Estimator::constant;
        double distance = 0.0;  // meters
        double frequency = 0.0; // Hz
        double epsilon = 0.0;
    };

    // Random-direction displacement study. TX and RX are both displaced by each distance along
    // independent random directions; the truth and every estimator are evaluated at n_freq random
    // in-band frequencies. RM-DP is fitted from the first direction at the two smallest distances.
    std::vector<ErrorRecord> displacement_experiment(const Scene &scene, const ReferencePair &ref,
                                                     const DisplacementSpec &spec, double bandwidth,
                                                     const std::vector<Estimator> &models = all_estimators,
                                                     int n_freq = 10, int max_bounces = 2);

    // Median epsilon of one estimator at one distance
    double median_epsilon(const std::vector<ErrorRecord> &records, Estimator model, double distance);

    struct ArraySpec
    {
        int rows = 8;
        int cols = 8;
        double spacing = 0.14; // meters
    };

    // Channel sources in the capacity sweep
    enum class CapacityModel
    {
        exhaustive,
        constant,
        pwa,
        rm_rt,        // RM-RT, image form
        rm_rt_angles, // RM-RT, angle form
        rm_dp         // RM-DP, angle form
    };

    std::string to_string(CapacityModel m);
    CapacityModel capacity_model_from_string(const std::string &name);

    struct CapacityConfig
    {
        ArraySpec tx_array;
        ArraySpec rx_array;
        std::vector<double> rotations; // radians; empty means [-180, 165] deg in 15 deg steps
        LinkBudget budget;
        RateModel rate;
        int n_freq = 10;
        int max_bounces = 2;
        std::vector<CapacityModel> models = {CapacityModel::exhaustive, CapacityModel::constant, CapacityModel::pwa,
                                             CapacityModel::rm_rt, CapacityModel::rm_rt_angles, CapacityModel::rm_dp};
        std::vector<double> dp_distances = {0.01, 0.02}; // displaced pairs for RM-DP
        std::uint64_t rng_seed = 1;
    };

    std::vector<double> default_rotations();

    struct CapacityRow
    {
        double rotation = 0.0; // radians
        CapacityModel model = CapacityModel::exhaustive;
        double se_center = 0.0; // bps/Hz at f0
        double se_avg = 0.0;    // bps/Hz over the band
        int rank_used = 0;      // streams selected at f0
    };

    // Tracer invocations per channel source
    struct TraceCounts
    {
        std::size_t exhaustive = 0;
        std::size_t rm_rt = 0;
        std::size_t rm_dp = 0;
        std::size_t pwa = 0;
    };

    struct CapacityResult
    {
        std::vector<CapacityRow> rows; // ordered by rotation, then by model as configured
        TraceCounts traces;
    };

    // Capacity versus TX array rotation. The RX array faces the TX; the TX array starts facing the RX
    // and is rotated about the vertical axis.
    CapacityResult capacity_sweep(const Scene &scene, const ReferencePair &ref, const CapacityConfig &cfg);
}

#endif
