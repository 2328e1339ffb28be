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

#include "rmchan/mirror_tracer.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmchan
{
    namespace
    {
        constexpr double segment_eps = 1e-9; // relative slack at segment ends
        constexpr double side_eps = 1e-12;   // meters

        // Parameter t of the crossing of segment a->b with the plane, or nothing if parallel
        std::optional<double> crossing(const Plane &plane, const Vec3 &a, const Vec3 &b)
        {
            const double da = plane.signed_distance(a), db = plane.signed_distance(b);
            const double denom = da - db;
            if (denom == 0.0)
                return std::nullopt;
            return da / denom;
        }

        bool segment_blocked(const Scene &scene, const Vec3 &a, const Vec3 &b)
        {
            for (const auto &f : scene.facets)
            {
                const double da = f.plane.signed_distance(a), db = f.plane.signed_distance(b);
                if ((da > side_eps && db > side_eps) || (da < -side_eps && db < -side_eps))
                    continue;
                const auto t = crossing(f.plane, a, b);
                if (!t || *t <= segment_eps || *t >= 1.0 - segment_eps)
                    continue;
                if (f.contains(a + *t * (b - a)))
                    return true;
            }
            return false;
        }

        void check_endpoint(const Scene &scene, const Vec3 &p, const char *name)
        {
            for (const auto &f : scene.facets)
                if (std::abs(f.plane.signed_distance(p)) < 1e-9 && f.contains(p))
                    throw std::invalid_argument(std::string("trace_paths: ") + name + " lies on a facet.");
        }

        void enumerate_sequences(int n_facets, int max_bounces, std::vector<int> &current,
                                 std::vector<std::vector<int>> &out)
        {
            out.push_back(current);
            if ((int)current.size() == max_bounces)
                return;
            for (int f = 0; f < n_facets; ++f)
            {
                if (!current.empty() && current.back() == f)
                    continue;
                current.push_back(f);
                enumerate_sequences(n_facets, max_bounces, current, out);
                current.pop_back();
            }
        }
    }

    Facet Facet::make(const Vec3 &center, const Vec3 &axis_u, const Vec3 &axis_v,
                      double half_u, double half_v, bool two_sided)
    {
        if (std::abs(norm(axis_u) - 1.0) > 1e-9 || std::abs(norm(axis_v) - 1.0) > 1e-9)
            throw std::invalid_argument("Facet::make: in-plane axes must be unit vectors.");
        if (std::abs(dot(axis_u, axis_v)) > 1e-9)
            throw std::invalid_argument("Facet::make: in-plane axes must be orthogonal.");
        if (!(half_u > 0.0) || !(half_v > 0.0))
            throw std::invalid_argument("Facet::make: half-extents must be positive.");

        const Vec3 n = normalized(cross(axis_u, axis_v));
        Facet f;
        f.plane = Plane::make(n, dot(n, center));
        f.center = center;
        f.axis_u = axis_u;
        f.axis_v = axis_v;
        f.half_u = half_u;
        f.half_v = half_v;
        f.two_sided = two_sided;
        return f;
    }

    bool Facet::contains(const Vec3 &p, double tol) const
    {
        const Vec3 d = p - center;
        return std::abs(dot(d, axis_u)) <= half_u + tol && std::abs(dot(d, axis_v)) <= half_v + tol;
    }

    double route_length(const Route &route)
    {
        double len = 0.0;
        for (std::size_t i = 1; i < route.vertices.size(); ++i)
            len += distance(route.vertices[i], route.vertices[i - 1]);
        return len;
    }

    cdouble path_gain(const Scene &scene, double length, std::size_t bounces)
    {
        const double lambda = scene.wavelength();
        const double per_bounce = std::pow(10.0, -scene.reflection_loss_db / 20.0);
        const double amplitude = lambda / (4.0 * std::numbers::pi * length) * std::pow(per_bounce, double(bounces));
        const double phase = -2.0 * std::numbers::pi * std::fmod(length / lambda, 1.0);
        return std::polar(amplitude, phase);
    }

    std::optional<Route> trace_facet_sequence(const Scene &scene, const std::vector<int> &facet_ids,
                                              const Vec3 &tx, const Vec3 &rx, TraceCheck check)
    {
        const std::size_t k = facet_ids.size();
        for (int id : facet_ids)
            if (id < 0 || id >= (int)scene.facets.size())
                throw std::out_of_range("trace_facet_sequence: facet index out of range.");

        // Mirror the RX through the planes in reverse order: images[i] is the RX seen via facets i..k-1
        std::vector<Vec3> images(k + 1);
        images[k] = rx;
        for (std::size_t i = k; i-- > 0;)
            images[i] = reflect_point(images[i + 1], scene.facets[facet_ids[i]].plane);

        Route route;
        route.vertices.reserve(k + 2);
        route.vertices.push_back(tx);
        route.facet_ids = facet_ids;

        for (std::size_t i = 0; i < k; ++i)
        {
            const Facet &f = scene.facets[facet_ids[i]];
            const Vec3 &from = route.vertices.back();
            const auto t = crossing(f.plane, from, images[i]);
            if (!t || *t <= segment_eps || *t >= 1.0 - segment_eps)
                return std::nullopt;
            route.vertices.push_back(from + *t * (images[i] - from));
        }
        route.vertices.push_back(rx);

        for (std::size_t i = 0; i < k; ++i)
        {
            const Facet &f = scene.facets[facet_ids[i]];
            const double before = f.plane.signed_distance(route.vertices[i]);
            const double after = f.plane.signed_distance(route.vertices[i + 2]);
            if (!((before > side_eps && after > side_eps) || (before < -side_eps && after < -side_eps)))
                return std::nullopt;
            if (check == TraceCheck::full)
            {
                if (!f.two_sided && before < 0.0)
                    return std::nullopt;
                if (!f.contains(route.vertices[i + 1]))
                    return std::nullopt;
            }
        }

        if (check == TraceCheck::full)
            for (std::size_t i = 1; i < route.vertices.size(); ++i)
                if (segment_blocked(scene, route.vertices[i - 1], route.vertices[i]))
                    return std::nullopt;

        return route;
    }

    std::vector<TracedPath> trace_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_bounces)
    {
        if (max_bounces < 0 || max_bounces > 3)
            throw std::invalid_argument("trace_paths: max_bounces must be in [0, 3].");
        check_endpoint(scene, tx, "TX");
        check_endpoint(scene, rx, "RX");

        std::vector<std::vector<int>> sequences;
        std::vector<int> current;
        enumerate_sequences((int)scene.facets.size(), max_bounces, current, sequences);

        std::vector<TracedPath> out;
        for (const auto &seq : sequences)
        {
            auto route = trace_facet_sequence(scene, seq, tx, rx, TraceCheck::full);
            if (!route)
                continue;
            const double len = route_length(*route);
            if (!(len > 0.0))
                continue;
            TracedPath p;
            p.gain = path_gain(scene, len, route->bounces());
            p.delay = len / speed_of_light;
            p.route = std::move(*route);
            out.push_back(std::move(p));
        }

        std::stable_sort(out.begin(), out.end(), [](const TracedPath &a, const TracedPath &b)
                         { return std::abs(a.gain) > std::abs(b.gain); });
        return out;
    }

    PwaPath to_pwa(const TracedPath &path, const ReferencePair &ref)
    {
        const auto &v = path.route.vertices;
        if (v.size() < 2)
            throw std::invalid_argument("to_pwa: route needs at least two vertices.");
        const double scale = 1e-9 * std::max(1.0, route_length(path.route));
        if (distance(v.front(), ref.tx_ref) > scale || distance(v.back(), ref.rx_ref) > scale)
            throw std::invalid_argument("to_pwa: route endpoints do not match the reference pair.");

        const Vec3 first = v[1] - v[0];
        const Vec3 last = v[v.size() - 1] - v[v.size() - 2];
        if (!(norm(first) > 0.0) || !(norm(last) > 0.0))
            throw std::invalid_argument("to_pwa: degenerate zero-length segment.");

        const DirAngles arrival = dir_to_angles(-normalized(last));
        const DirAngles departure = dir_to_angles(normalized(first));

        PwaPath out;
        out.gain = path.gain;
        out.delay = route_length(path.route) / speed_of_light;
        out.aoa_az = arrival.azimuth;
        out.aoa_el = arrival.elevation;
        out.aod_az = departure.azimuth;
        out.aod_el = departure.elevation;
        return out;
    }
}
