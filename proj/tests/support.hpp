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

// Test-only scene generators and independent oracles. Nothing here calls into the library code
// under test except to build inputs.

#ifndef rmchan_tests_support_H
#define rmchan_tests_support_H

#include "rmchan/experiments.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace rmchan::testing
{
    inline Vec3 random_unit(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        for (;;)
        {
            const double x = n(rng), y = n(rng), z = n(rng);
            const double r = std::sqrt(x * x + y * y + z * z);
            if (r > 1e-3)
                return {x / r, y / r, z / r};
        }
    }

    // Infinite one-sided facet with the given front normal passing through p
    inline Facet plane_facet(const Vec3 &normal, const Vec3 &p)
    {
        const Vec3 n = normalized(normal);
        const Vec3 seed = std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
        const Vec3 u = normalized(cross(n, seed));
        const Vec3 v = cross(n, u);
        return Facet::make(p, u, v);
    }

    struct RandomScene
    {
        Scene scene;
        ReferencePair ref;
    };

    // Up to three infinite reflectors with both endpoints at least `clearance` meters in front of each
    inline RandomScene random_specular_scene(std::mt19937_64 &rng, double carrier_hz = 28e9, double clearance = 2.5)
    {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        RandomScene out;
        out.scene.carrier_hz = carrier_hz;

        const Vec3 tx{40.0 * u01(rng) - 20.0, 40.0 * u01(rng) - 20.0, 2.0 + 8.0 * u01(rng)};
        Vec3 rx;
        do
            rx = Vec3{40.0 * u01(rng) - 20.0, 40.0 * u01(rng) - 20.0, 2.0 + 8.0 * u01(rng)};
        while (distance(tx, rx) < 10.0);
        out.ref = ReferencePair::make(tx, rx);

        const Vec3 mid = 0.5 * (tx + rx);
        const int n_facets = 1 + int(u01(rng) * 3.0);
        for (int f = 0; f < n_facets; ++f)
        {
            // The first facet is a ground plane half of the time
            if (f == 0 && u01(rng) < 0.5)
            {
                out.scene.facets.push_back(plane_facet({0, 0, 1}, {0, 0, 0}));
                continue;
            }
            for (;;)
            {
                const Vec3 n = random_unit(rng);
                const double offset = 5.0 + 25.0 * u01(rng);
                const Vec3 p = mid - offset * n;
                if (dot(n, tx - p) >= clearance && dot(n, rx - p) >= clearance)
                {
                    out.scene.facets.push_back(plane_facet(n, p));
                    break;
                }
            }
        }
        return out;
    }

    // Independent unfolding oracle: length of the specular path through infinite planes, computed by
    // mirroring the TX through each plane in order with p - 2 (n.p - b) n
    inline double unfolded_length(const std::vector<Plane> &planes, const Vec3 &tx, const Vec3 &rx)
    {
        Vec3 img = tx;
        for (const auto &pl : planes)
        {
            const double h = pl.normal.x * img.x + pl.normal.y * img.y + pl.normal.z * img.z - pl.intercept;
            img = Vec3{img.x - 2.0 * h * pl.normal.x, img.y - 2.0 * h * pl.normal.y, img.z - 2.0 * h * pl.normal.z};
        }
        const double dx = rx.x - img.x, dy = rx.y - img.y, dz = rx.z - img.z;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    // Two-ray (LOS + ground bounce) closed form over a flat ground at z = 0
    inline double two_ray_ground_length(double horizontal, double h_tx, double h_rx)
    {
        return std::sqrt(horizontal * horizontal + (h_tx + h_rx) * (h_tx + h_rx));
    }

    // Singular values as square roots of the eigenvalues of the Gram matrix H^H H
    inline std::vector<double> gram_singular_values(const Eigen::MatrixXcd &H)
    {
        const Eigen::MatrixXcd G = H.cols() <= H.rows() ? Eigen::MatrixXcd(H.adjoint() * H) : Eigen::MatrixXcd(H * H.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
        std::vector<double> out;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            out.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i])));
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }

    // Central finite-difference gradient of f at p
    template <class F>
    Vec3 fd_gradient(const F &f, const Vec3 &p, double h = 1e-6)
    {
        const Vec3 ex{h, 0, 0}, ey{0, h, 0}, ez{0, 0, h};
        return {(f(p + ex) - f(p - ex)) / (2.0 * h), (f(p + ey) - f(p - ey)) / (2.0 * h),
                (f(p + ez) - f(p - ez)) / (2.0 * h)};
    }

    inline std::vector<Plane> route_planes(const Scene &scene, const Route &route)
    {
        std::vector<Plane> out;
        for (int id : route.facet_ids)
            out.push_back(scene.facets.at(std::size_t(id)).plane);
        return out;
    }

    inline double wrapped_diff(double a, double b)
    {
        return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
    }

    // Long-range specular scene: infinite ground plus an infinite wall parallel to the link
    inline RandomScene long_range_specular_scene(double range = 1000.0)
    {
        RandomScene out;
        out.scene.carrier_hz = 140e9;
        out.scene.facets.push_back(Facet::make({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
        out.scene.facets.push_back(Facet::make({0, 20, 0}, {1, 0, 0}, {0, 0, 1}));
        out.ref = ReferencePair::make({0, 0, 10}, {range, 0, 5});
        return out;
    }

    // Capacity scene: the LOS is blocked by a square facet at mid-link and a wall runs parallel to
    // the link, so every element pair sees exactly one single-bounce path
    inline RandomScene blocked_link_scene()
    {
        RandomScene out;
        out.scene.carrier_hz = 140e9;
        out.scene.facets.push_back(Facet::make({90, 0, 5}, {0, 1, 0}, {0, 0, 1}, 5.0, 5.0));
        out.scene.facets.push_back(Facet::make({90, 15, 5}, {1, 0, 0}, {0, 0, 1}, 200.0, 20.0));
        out.ref = ReferencePair::make({0, 0, 2.49}, {180, 0, 2.49});
        return out;
    }
}

#endif
