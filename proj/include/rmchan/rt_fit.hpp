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

#ifndef rmchan_rt_fit_H
#define rmchan_rt_fit_H

#include "rmchan/mirror_tracer.hpp"
#include "rmchan/pathmodel.hpp"

namespace rmchan
{
    // Reflection-model image (U, g) from the interaction points of a route.
    //
    // Each interaction k is mirrored by the plane whose normal bisects the incoming and outgoing
    // step directions, u_k = (v_{k+1} - v_k) / |v_{k+1} - v_k|, through the interaction point.
    // The images compose as z_k = V_k z_{k-1} + c_k with V_k = I - 2 u_k u_k^T and c_k = 2 b_k u_k,
    // so U = V_{K-1} ... V_1 (first reflection applied first) and g follows the same recursion.
    //
    // Throws std::invalid_argument for routes with fewer than two vertices, repeated vertices, or a
    // zero-angle interaction (v_{k+1} == v_k within 1e-12).
    RmImage fit_from_route(const Route &route);

    // Full reflection-model parameters of a traced path; the route must start at the reference TX and
    // end at the reference RX.
    RmPath fit_rm_rt(const TracedPath &path, const ReferencePair &ref);
}

#endif
