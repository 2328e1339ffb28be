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

#ifndef rmchan_dp_fit_H
#define rmchan_dp_fit_H

#include "rmchan/pathmodel.hpp"

#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace rmchan
{
    // PWA parameters of all paths between one TX-RX pair
    struct PairObservation
    {
        Vec3 tx;
        Vec3 rx;
        std::vector<PwaPath> paths;
    };

    struct MatchConfig
    {
        double c0 = 180.0 / std::numbers::pi;   // weight on azimuth differences, per radian
        double c1 = 180.0 / std::numbers::pi;   // weight on elevation differences, per radian
        std::optional<int> max_delay_rank_gap;  // restrict candidates by delay rank; off by default
        std::optional<double> max_match_cost;   // reject matches above this cost; off by default
    };

    // Angular mismatch D between a reference path and a candidate path. Azimuth differences are
    // taken on the circle.
    double match_cost(const PwaPath &reference, const PwaPath &candidate, const MatchConfig &cfg = {});

    // Greedy matching, strongest reference path first. Entry l holds the index of the displaced path
    // matched to reference path l, or -1 if none is left. Ties go to the lowest index.
    std::vector<int> match_paths(const PairObservation &reference, const PairObservation &displaced,
                                 const MatchConfig &cfg = {});

    // Delay of one path observed at a displaced pair
    struct DisplacedDelay
    {
        Vec3 tx;
        Vec3 rx;
        double delay = 0.0; // seconds
    };

    // Coefficients of C_m = A_m(s) cos(roll) + B_m(s) sin(roll), one entry per displaced pair
    struct DpSystem
    {
        std::vector<Vec3> a_rx;    // R_y(el_r) R_z(-az_r) (xr0 - xr_m)
        std::vector<Vec3> a_tx;    // R_y(el_t) R_z(-az_t) (xt0 - xt_m)
        std::vector<double> G;     // m^2
        std::vector<double> A_pos; // A_m(+1)
        std::vector<double> B_pos; // B_m(+1)
        std::vector<double> A_neg; // A_m(-1)
        std::vector<double> B_neg; // B_m(-1)
        std::vector<double> C;     // m^2

        std::span<const double> A(int s) const { return s > 0 ? A_pos : A_neg; }
        std::span<const double> B(int s) const { return s > 0 ? B_pos : B_neg; }
    };

    DpSystem build_dp_system(const PwaPath &reference_path, const ReferencePair &ref,
                             std::span<const DisplacedDelay> displaced);

    // Unconstrained least squares min_{x,y} sum (C - A x - B y)^2, or nothing when [A B] is
    // numerically rank deficient
    struct XySolution
    {
        double x = 0.0;
        double y = 0.0;
        double residual = 0.0; // m^4
    };
    std::optional<XySolution> solve_xy(std::span<const double> A, std::span<const double> B, std::span<const double> C);

    struct GammaFit
    {
        int s = 1;
        double gamma = 0.0;                                       // radians
        double residual = std::numeric_limits<double>::infinity(); // m^4, objective at (cos gamma, sin gamma)
        bool flagged = false;                                     // rank-deficient or too few displaced pairs
    };

    // Roll and reflection sign of one path from its reference PWA parameters and its delays at M >= 2
    // displaced pairs
    GammaFit solve_path_gamma_s(const PwaPath &reference_path, const ReferencePair &ref,
                                std::span<const DisplacedDelay> displaced);

    // Per-path solve; displaced[m].paths[l] must already correspond to reference.paths[l].
    // Throws std::invalid_argument if fewer than two displaced pairs are given.
    std::vector<GammaFit> solve_gamma_s(const PairObservation &reference, const std::vector<PairObservation> &displaced,
                                        const ReferencePair &ref_geometry);

    struct DpPathFit
    {
        RmPath path;
        GammaFit fit;
        int matched_pairs = 0;
    };

    // Full displaced-pairs fit: sort by strength, match, solve. Paths are returned strongest first;
    // flagged paths keep their PWA parameters with s = +1, roll = 0.
    std::vector<DpPathFit> fit_rm_dp(const PairObservation &reference, const std::vector<PairObservation> &displaced,
                                     const ReferencePair &ref_geometry, const MatchConfig &cfg = {});
}

#endif
