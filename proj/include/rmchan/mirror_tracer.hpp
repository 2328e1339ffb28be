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

#ifndef rmchan_mirror_tracer_H
#define rmchan_mirror_tracer_H

#include "rmchan/pathmodel.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace rmchan
{
    inline constexpr double infinite_extent = std::numeric_limits<double>::infinity();

    // Rectangular reflector. The plane normal is axis_u x axis_v; a one-sided facet reflects
    // only on the side the normal points to. Every facet occludes from both sides.
    struct Facet
    {
        Plane plane;
        Vec3 center;
        Vec3 axis_u;
        Vec3 axis_v;
        double half_u = infinite_extent; // meters
        double half_v = infinite_extent;
        bool two_sided = false;

        // Validates that the axes are orthonormal (within 1e-9) and the half-extents positive
        static Facet make(const Vec3 &center, const Vec3 &axis_u, const Vec3 &axis_v,
                          double half_u = infinite_extent, double half_v = infinite_extent,
                          bool two_sided = false);

        bool infinite() const { return std::isinf(half_u) && std::isinf(half_v); }

        // True if p (assumed on the plane) lies within the rectangle, with tolerance tol
        bool contains(const Vec3 &p, double tol = 1e-9) const;
    };

    struct Scene
    {
        std::vector<Facet> facets;
        double carrier_hz = 28e9;
        double reflection_loss_db = 3.0; // amplitude loss per bounce

        double wavelength() const { return speed_of_light / carrier_hz; }
    };

    // Interaction points of one path; vertices.front() is the TX and vertices.back() the RX
    struct Route
    {
        std::vector<Vec3> vertices;
        std::vector<int> facet_ids; // one per interior vertex

        std::size_t bounces() const { return facet_ids.size(); }
    };

    struct TracedPath
    {
        Route route;
        cdouble gain{0.0, 0.0};
        double delay = 0.0; // seconds
    };

    // Sum of the segment lengths
    double route_length(const Route &route);

    // Friis amplitude over the unfolded length, a fixed loss per bounce and the carrier phase exp(-j 2 pi f0 d / c)
    cdouble path_gain(const Scene &scene, double length, std::size_t bounces);

    enum class TraceCheck
    {
        full,         // facet bounds, reflective side and occlusion
        planes_only   // infinite planes, no occlusion; only the geometric validity of the reflections
    };

    // Route through a fixed ordered facet sequence via the method of images, or nothing if no valid
    // specular route exists
    std::optional<Route> trace_facet_sequence(const Scene &scene, const std::vector<int> &facet_ids,
                                              const Vec3 &tx, const Vec3 &rx,
                                              TraceCheck check = TraceCheck::full);

    // All specular paths with up to max_bounces reflections (max 3), strongest first
    std::vector<TracedPath> trace_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_bounces = 2);

    // PWA parameters of a traced path. The route endpoints must equal the reference pair.
    PwaPath to_pwa(const TracedPath &path, const ReferencePair &ref);
}

#endif
