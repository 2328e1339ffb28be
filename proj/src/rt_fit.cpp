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

#include "rmchan/rt_fit.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace rmchan
{
    RmImage fit_from_route(const Route &route)
    {
        const auto &x = route.vertices;
        if (x.size() < 2)
            throw std::invalid_argument("fit_from_route: route needs at least two vertices.");

        // Unit step directions v_1 .. v_K
        std::vector<Vec3> steps;
        steps.reserve(x.size() - 1);
        for (std::size_t k = 1; k < x.size(); ++k)
        {
            const Vec3 d = x[k] - x[k - 1];
            if (!(norm(d) > 0.0))
                throw std::invalid_argument("fit_from_route: consecutive route vertices coincide.");
            steps.push_back(normalized(d));
        }

        RmImage out; // LOS: U = I, g = 0
        for (std::size_t k = 0; k + 1 < steps.size(); ++k)
        {
            const Vec3 turn = steps[k + 1] - steps[k];
            const double turn_norm = norm(turn);
            if (turn_norm < 1e-12)
                throw std::invalid_argument("fit_from_route: degenerate interaction (no change of direction).");

            const Vec3 normal = turn / turn_norm;
            const double intercept = dot(normal, x[k + 1]);
            const Mat3 V = householder(normal);
            const Vec3 c = 2.0 * intercept * normal;

            out.U = V * out.U;
            out.g = V * out.g + c;
        }
        return out;
    }

    RmPath fit_rm_rt(const TracedPath &path, const ReferencePair &ref)
    {
        const auto &v = path.route.vertices;
        if (v.size() < 2)
            throw std::invalid_argument("fit_rm_rt: route needs at least two vertices.");
        const double len = route_length(path.route);
        const double tol = 1e-9 * std::max(1.0, len);
        if (distance(v.front(), ref.tx_ref) > tol || distance(v.back(), ref.rx_ref) > tol)
            throw std::invalid_argument("fit_rm_rt: route endpoints do not match the reference pair.");

        RmPath out = image_to_angles(fit_from_route(path.route), ref);
        if (std::abs(speed_of_light * out.delay - len) > 1e-9 * len)
            throw std::runtime_error("fit_rm_rt: fitted delay is inconsistent with the route length.");
        out.gain = path.gain;
        out.delay = path.delay;
        return out;
    }
}
