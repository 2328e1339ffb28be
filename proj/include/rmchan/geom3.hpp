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

#ifndef rmchan_geom3_H
#define rmchan_geom3_H

#include <array>
#include <cmath>
#include <numbers>

namespace rmchan
{
    // 3-D vector (meters, or dimensionless for directions)
    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0;

        constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
        constexpr double &operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

        constexpr Vec3 &operator+=(const Vec3 &o)
        {
            x += o.x, y += o.y, z += o.z;
            return *this;
        }
        constexpr Vec3 &operator-=(const Vec3 &o)
        {
            x -= o.x, y -= o.y, z -= o.z;
            return *this;
        }
        constexpr Vec3 &operator*=(double s)
        {
            x *= s, y *= s, z *= s;
            return *this;
        }
    };

    constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
    constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
    constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
    constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    constexpr Vec3 operator/(const Vec3 &a, double s) { return {a.x / s, a.y / s, a.z / s}; }

    constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
    constexpr Vec3 cross(const Vec3 &a, const Vec3 &b)
    {
        return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    }
    inline double norm(const Vec3 &a) { return std::hypot(a.x, a.y, a.z); }
    inline double distance(const Vec3 &a, const Vec3 &b) { return norm(a - b); }

    // Throws std::invalid_argument on a zero vector
    Vec3 normalized(const Vec3 &a);

    inline constexpr Vec3 e_x{1.0, 0.0, 0.0};
    inline constexpr Vec3 e_y{0.0, 1.0, 0.0};
    inline constexpr Vec3 e_z{0.0, 0.0, 1.0};

    // 3x3 real matrix, row-major
    struct Mat3
    {
        std::array<double, 9> m{};

        constexpr double operator()(int r, int c) const { return m[3 * r + c]; }
        constexpr double &operator()(int r, int c) { return m[3 * r + c]; }

        static constexpr Mat3 identity() { return Mat3{{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}}; }
        static constexpr Mat3 diag(double a, double b, double c) { return Mat3{{a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0, c}}; }

        constexpr Mat3 transposed() const
        {
            return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
        }

        constexpr double det() const
        {
            return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6]);
        }

        constexpr Vec3 row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }
        constexpr Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
    };

    constexpr Mat3 operator*(const Mat3 &a, const Mat3 &b)
    {
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
        return out;
    }

    constexpr Vec3 operator*(const Mat3 &a, const Vec3 &v)
    {
        return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
                a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
                a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
    }

    constexpr Mat3 operator*(double s, Mat3 a)
    {
        for (auto &v : a.m)
            v *= s;
        return a;
    }

    constexpr Mat3 operator-(const Mat3 &a) { return -1.0 * a; }

    // Largest absolute entry of A - B
    double max_abs_diff(const Mat3 &a, const Mat3 &b);

    // Largest absolute entry of A^T A - I
    double orthogonality_error(const Mat3 &a);

    // Reflecting surface { x : normal^T x = intercept }
    struct Plane
    {
        Vec3 normal;             // unit normal
        double intercept = 0.0; // meters

        // Throws std::invalid_argument if the normal is not unit length within 1e-12
        static Plane make(const Vec3 &normal, double intercept);

        // Signed distance of p along the normal
        double signed_distance(const Vec3 &p) const { return dot(normal, p) - intercept; }
    };

    enum class Axis
    {
        x,
        y,
        z
    };

    // Right-handed rotation about a coordinate axis
    Mat3 rotation_matrix(Axis axis, double angle);

    inline Mat3 rot_x(double gamma) { return rotation_matrix(Axis::x, gamma); }
    inline Mat3 rot_y(double theta) { return rotation_matrix(Axis::y, theta); }
    inline Mat3 rot_z(double phi) { return rotation_matrix(Axis::z, phi); }

    // diag(1, 1, s) for s = +1 or -1
    Mat3 z_reflection(int s);

    // Householder mirror I - 2 u u^T; u must be a unit vector within 1e-9
    Mat3 householder(const Vec3 &u);

    // Mirror image of p across the plane
    Vec3 reflect_point(const Vec3 &p, const Plane &plane);

    // Angles of M = R_x(roll) * R_y(elevation) * R_z(-azimuth)
    struct EulerAngles
    {
        double roll = 0.0;      // gamma, (-pi, pi]
        double elevation = 0.0; // theta, [-pi/2, pi/2]
        double azimuth = 0.0;   // phi, (-pi, pi]
    };

    // Factor a proper rotation as R_x(roll) R_y(elevation) R_z(-azimuth).
    // At gimbal lock (|cos(elevation)| < 1e-9) the roll is set to 0 and the remaining rotation goes into the azimuth.
    EulerAngles euler_factor_so3(const Mat3 &rotation);

    // (cos(az) cos(el), sin(az) cos(el), sin(el))
    Vec3 spherical_dir(double azimuth, double elevation);

    struct DirAngles
    {
        double azimuth = 0.0;   // (-pi, pi]
        double elevation = 0.0; // [-pi/2, pi/2]
    };

    // Inverse of spherical_dir; azimuth is 0 at the poles
    DirAngles dir_to_angles(const Vec3 &u);

    // Wrap an angle to (-pi, pi]
    double wrap_angle(double a);

    inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
    inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }
}

#endif
