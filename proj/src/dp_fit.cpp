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

#include "rmchan/dp_fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rmchan
{
    namespace
    {
        // Reciprocal condition number below which [A B] counts as rank deficient
        constexpr double rank_tolerance = 1e-6;

        std::vector<int> delay_ranks(const std::vector<PwaPath> &paths)
        {
            std::vector<int> order(paths.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b)
                             { return paths[a].delay < paths[b].delay; });
            std::vector<int> rank(paths.size());
            for (std::size_t r = 0; r < order.size(); ++r)
                rank[order[r]] = (int)r;
            return rank;
        }

        std::vector<int> strength_order(const std::vector<PwaPath> &paths)
        {
            std::vector<int> order(paths.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b)
                             { return std::abs(paths[a].gain) > std::abs(paths[b].gain); });
            return order;
        }
    }

    double match_cost(const PwaPath &a, const PwaPath &b, const MatchConfig &cfg)
    {
        const double d_az = std::abs(wrap_angle(a.aoa_az - b.aoa_az)) + std::abs(wrap_angle(a.aod_az - b.aod_az));
        const double d_el = std::abs(a.aoa_el - b.aoa_el) + std::abs(a.aod_el - b.aod_el);
        return cfg.c0 * d_az + cfg.c1 * d_el;
    }

    std::vector<int> match_paths(const PairObservation &reference, const PairObservation &displaced, const MatchConfig &cfg)
    {
        if (reference.paths.empty() || displaced.paths.empty())
            throw std::invalid_argument("match_paths: path lists must not be empty.");
        if (!(cfg.c0 > 0.0) || !(cfg.c1 > 0.0))
            throw std::invalid_argument("match_paths: weights c0, c1 must be positive.");

        std::vector<int> ref_rank, disp_rank;
        if (cfg.max_delay_rank_gap)
        {
            ref_rank = delay_ranks(reference.paths);
            disp_rank = delay_ranks(displaced.paths);
        }

        std::vector<int> sigma(reference.paths.size(), -1);
        std::vector<bool> used(displaced.paths.size(), false);
        for (int l : strength_order(reference.paths))
        {
            int best = -1;
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < displaced.paths.size(); ++c)
            {
                if (used[c])
                    continue;
                if (cfg.max_delay_rank_gap && std::abs(ref_rank[l] - disp_rank[c]) > *cfg.max_delay_rank_gap)
                    continue;
                const double cost = match_cost(reference.paths[l], displaced.paths[c], cfg);
                if (cost < best_cost)
                {
                    best_cost = cost;
                    best = (int)c;
                }
            }
            if (best >= 0 && cfg.max_match_cost && best_cost > *cfg.max_match_cost)
                best = -1;
            if (best >= 0)
            {
                sigma[l] = best;
                used[best] = true;
            }
        }
        return sigma;
    }

    DpSystem build_dp_system(const PwaPath &p, const ReferencePair &ref, std::span<const DisplacedDelay> displaced)
    {
        const Mat3 rx_frame = rot_y(p.aoa_el) * rot_z(-p.aoa_az);
        const Mat3 tx_frame = rot_y(p.aod_el) * rot_z(-p.aod_az);
        const Vec3 ur = p.arrival_dir(), ut = p.departure_dir();
        const double d0 = speed_of_light * p.delay;

        DpSystem sys;
        for (const auto &obs : displaced)
        {
            const Vec3 dr = ref.rx_ref - obs.rx;
            const Vec3 dt = ref.tx_ref - obs.tx;
            const Vec3 ar = rx_frame * dr;
            const Vec3 at = tx_frame * dt;
            const double dm = speed_of_light * obs.delay;

            const double G = -d0 * d0 + dot(dr + d0 * ur, dr + d0 * ur) + dot(dt + d0 * ut, dt + d0 * ut);

            // (dm^2 - G) expanded so the O(d0^2) terms cancel analytically
            const double C = (dm - d0) * (dm + d0) - 2.0 * d0 * (dot(ur, dr) + dot(ut, dt)) - dot(dr, dr) - dot(dt, dt) - 2.0 * ar.x * at.x;

            sys.a_rx.push_back(ar);
            sys.a_tx.push_back(at);
            sys.G.push_back(G);
            sys.C.push_back(C);
            for (int s : {1, -1})
            {
                const double A = 2.0 * (ar.y * at.y + s * ar.z * at.z);
                const double B = 2.0 * (s * ar.z * at.y - ar.y * at.z);
                (s > 0 ? sys.A_pos : sys.A_neg).push_back(A);
                (s > 0 ? sys.B_pos : sys.B_neg).push_back(B);
            }
        }
        return sys;
    }

    std::optional<XySolution> solve_xy(std::span<const double> A, std::span<const double> B, std::span<const double> C)
    {
        const std::size_t m = C.size();
        if (A.size() != m || B.size() != m)
            throw std::invalid_argument("solve_xy: A, B and C must have the same length.");
        if (m < 2)
            return std::nullopt;

        Eigen::MatrixX2d M(m, 2);
        Eigen::VectorXd rhs(m);
        for (std::size_t i = 0; i < m; ++i)
        {
            M(i, 0) = A[i];
            M(i, 1) = B[i];
            rhs(i) = C[i];
        }

        Eigen::JacobiSVD<Eigen::MatrixX2d> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto &sv = svd.singularValues();
        if (!(sv(0) > 0.0) || sv(1) < rank_tolerance * sv(0))
            return std::nullopt;

        const Eigen::Vector2d xy = svd.solve(rhs);
        XySolution out;
        out.x = xy(0);
        out.y = xy(1);
        out.residual = (rhs - M * xy).squaredNorm();
        return out;
    }

    GammaFit solve_path_gamma_s(const PwaPath &p, const ReferencePair &ref, std::span<const DisplacedDelay> displaced)
    {
        GammaFit out;
        out.flagged = true;
        if (displaced.size() < 2)
            return out;

        const DpSystem sys = build_dp_system(p, ref, displaced);

        // |(A, B)| = 2 |ar_perp| |at_perp| for either sign; a system whose rows all vanish against the
        // displacement scale carries no roll information even if its numerical rank looks full
        double row_mag = 0.0, scale = 0.0;
        for (std::size_t m = 0; m < sys.C.size(); ++m)
        {
            row_mag = std::max(row_mag, std::hypot(sys.A_pos[m], sys.B_pos[m]));
            scale = std::max(scale, 2.0 * norm(sys.a_rx[m]) * norm(sys.a_tx[m]));
        }
        if (!(row_mag > rank_tolerance * scale))
            return out;

        for (int s : {1, -1})
        {
            const auto sol = solve_xy(sys.A(s), sys.B(s), sys.C);
            if (!sol)
                continue;

            // With M = 2 both signs fit exactly; the objective on the unit circle separates them
            const double gamma = std::atan2(sol->y, sol->x);
            const double cg = std::cos(gamma), sg = std::sin(gamma);
            double J = 0.0;
            for (std::size_t m = 0; m < sys.C.size(); ++m)
            {
                const double r = sys.C[m] - sys.A(s)[m] * cg - sys.B(s)[m] * sg;
                J += r * r;
            }
            if (out.flagged || J < out.residual)
            {
                out.s = s;
                out.gamma = wrap_angle(gamma);
                out.residual = J;
                out.flagged = false;
            }
        }
        return out;
    }

    std::vector<GammaFit> solve_gamma_s(const PairObservation &reference, const std::vector<PairObservation> &displaced,
                                        const ReferencePair &ref_geometry)
    {
        if (displaced.size() < 2)
            throw std::invalid_argument("solve_gamma_s: at least two displaced pairs are required.");
        for (const auto &d : displaced)
            if (d.paths.size() < reference.paths.size())
                throw std::invalid_argument("solve_gamma_s: displaced pair has fewer paths than the reference.");

        std::vector<GammaFit> out;
        out.reserve(reference.paths.size());
        std::vector<DisplacedDelay> obs(displaced.size());
        for (std::size_t l = 0; l < reference.paths.size(); ++l)
        {
            for (std::size_t m = 0; m < displaced.size(); ++m)
                obs[m] = {displaced[m].tx, displaced[m].rx, displaced[m].paths[l].delay};
            out.push_back(solve_path_gamma_s(reference.paths[l], ref_geometry, obs));
        }
        return out;
    }

    std::vector<DpPathFit> fit_rm_dp(const PairObservation &reference, const std::vector<PairObservation> &displaced,
                                     const ReferencePair &ref_geometry, const MatchConfig &cfg)
    {
        if (reference.paths.empty())
            throw std::invalid_argument("fit_rm_dp: reference pair has no paths.");
        if (displaced.size() < 2)
            throw std::invalid_argument("fit_rm_dp: at least two displaced pairs are required.");

        std::vector<std::vector<int>> sigma;
        sigma.reserve(displaced.size());
        for (const auto &d : displaced)
        {
            // A displaced pair that lost every path contributes no observations
            if (d.paths.empty())
                sigma.emplace_back(reference.paths.size(), -1);
            else
                sigma.push_back(match_paths(reference, d, cfg));
        }

        std::vector<DpPathFit> out;
        for (int l : strength_order(reference.paths))
        {
            const PwaPath &p = reference.paths[l];
            std::vector<DisplacedDelay> obs;
            for (std::size_t m = 0; m < displaced.size(); ++m)
                if (sigma[m][l] >= 0)
                    obs.push_back({displaced[m].tx, displaced[m].rx, displaced[m].paths[sigma[m][l]].delay});

            DpPathFit fit;
            fit.matched_pairs = (int)obs.size();
            fit.fit = solve_path_gamma_s(p, ref_geometry, obs);
            fit.path = RmPath{p.gain, p.delay, p.aoa_az, p.aoa_el, p.aod_az, p.aod_el, 0.0, 1};
            if (!fit.fit.flagged)
            {
                fit.path.roll = fit.fit.gamma;
                fit.path.s = fit.fit.s;
            }
            out.push_back(fit);
        }
        return out;
    }
}
