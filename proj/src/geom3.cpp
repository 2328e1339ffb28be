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

#include "rmchan/geom3.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rmchan
{
    Vec3 normalized(const Vec3 &a)
    {
        const double n = norm(a);
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("normalized: vector has zero or non-finite length.");
        return a / n;
    }

    double max_abs_diff(const Mat3 &a, const Mat3 &b)
    {
        double out = 0.0;
        for (int i = 0; i < 9; ++i)
            out = std::max(out, std::abs(a.m[i] - b.m[i]));
        return out;
    }

    double orthogonality_error(const Mat3 &a)
    {
        return max_abs_diff(a.transposed() * a, Mat3::identity());
    }

    Plane Plane::make(const Vec3 &normal, double intercept)
    {
        if (std::abs(norm(normal) - 1.0) > 1e-12)
            throw std::invalid_argument("Plane::make: normal must be a unit vector.");
        if (!std::isfinite(intercept))
            throw std::invalid_argument("Plane::make: intercept must be finite.");
        return Plane{normal, intercept};
    }

    Mat3 rotation_matrix(Axis axis, double angle)
    {
        const double c = std::cos(angle), s = std::sin(angle);
        switch (axis)
        {
        case Axis::x:
            return Mat3{{1.0, 0.0, 0.0,
                         0.0, c, -s,
                         0.0, s, c}};
        case Axis::y:
            return Mat3{{c, 0.0, s,
                         0.0, 1.0, 0.0,
                         -s, 0.0, c}};
        case Axis::z:
            break;
        }
        return Mat3{{c, -s, 0.0,
                     s, c, 0.0,
                     0.0, 0.0, 1.0}};
    }

    Mat3 z_reflection(int s)
    {
        if (s != 1 && s != -1)
            throw std::invalid_argument("z_reflection: s must be +1 or -1, got " + std::to_string(s) + ".");
        return Mat3::diag(1.0, 1.0, double(s));
    }

    Mat3 householder(const Vec3 &u)
    {
        if (std::abs(norm(u) - 1.0) > 1e-9)
            throw std::invalid_argument("householder: u must be a unit vector.");
        Mat3 out = Mat3::identity();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out(r, c) -= 2.0 * u[r] * u[c];
        return out;
    }

    Vec3 reflect_point(const Vec3 &p, const Plane &plane)
    {
        // V p + c with V = I - 2 u u^T and c = 2 b u
        return p - 2.0 * plane.signed_distance(p) * plane.normal;
    }

    double wrap_angle(double a)
    {
        double r = std::remainder(a, 2.0 * std::numbers::pi);
        if (r <= -std::numbers::pi)
            r += 2.0 * std::numbers::pi;
        return r;
    }

    EulerAngles euler_factor_so3(const Mat3 &M)
    {
        if (orthogonality_error(M) > 1e-9)
            throw std::invalid_argument("euler_factor_so3: matrix is not orthogonal.");
        if (std::abs(M.det() - 1.0) > 1e-9)
            throw std::invalid_argument("euler_factor_so3: matrix is not a proper rotation (det != +1).");

        // First row of R_x(g) R_y(t) R_z(-p) is (ct cp, ct sp, st)
        const double ct = std::hypot(M(0, 0), M(0, 1));
        EulerAngles out;
        out.elevation = std::atan2(M(0, 2), ct);

        if (ct < 1e-9)
        {
            // Gimbal lock: second row reduces to (-sp, cp, 0) with roll = 0
            out.roll = 0.0;
            out.azimuth = wrap_angle(std::atan2(-M(1, 0), M(1, 1)));
        }
        else
        {
            out.azimuth = wrap_angle(std::atan2(M(0, 1), M(0, 0)));
            out.roll = wrap_angle(std::atan2(-M(1, 2), M(2, 2)));
        }
        return out;
    }

    Vec3 spherical_dir(double azimuth, double elevation)
    {
        const double ce = std::cos(elevation);
        return {std::cos(azimuth) * ce, std::sin(azimuth) * ce, std::sin(elevation)};
    }

    DirAngles dir_to_angles(const Vec3 &u)
    {
        const double n = norm(u);
        if (!(n > 0.0))
            throw std::invalid_argument("dir_to_angles: zero vector has no direction.");
        if (std::abs(n - 1.0) > 1e-9)
            throw std::invalid_argument("dir_to_angles: input must be a unit vector.");

        const double horiz = std::hypot(u.x, u.y);
        DirAngles out;
        out.elevation = std::atan2(u.z, horiz);
        out.azimuth = horiz < 1e-12 ? 0.0 : wrap_angle(std::atan2(u.y, u.x));
        return out;
    }
}
