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

#ifndef rmchan_pathmodel_H
#define rmchan_pathmodel_H

#include "rmchan/geom3.hpp"

#include <complex>

namespace rmchan
{
    using cdouble = std::complex<double>;

    inline constexpr double speed_of_light = 299792458.0; // m/s, exact

    // Plane-wave (far-field) description of one path at a reference pair
    struct PwaPath
    {
        cdouble gain{0.0, 0.0}; // linear voltage gain at the reference pair and carrier
        double delay = 0.0;     // seconds
        double aoa_az = 0.0;    // radians, (-pi, pi]
        double aoa_el = 0.0;    // radians, [-pi/2, pi/2]
        double aod_az = 0.0;
        double aod_el = 0.0;

        Vec3 arrival_dir() const { return spherical_dir(aoa_az, aoa_el); }
        Vec3 departure_dir() const { return spherical_dir(aod_az, aod_el); }
    };

    // Image form of the reflection model: d(xr, xt) = || xr - U xt - g ||
    struct RmImage
    {
        Mat3 U = Mat3::identity(); // orthogonal, det = (-1)^(number of reflections)
        Vec3 g;                     // meters
    };

    // Angle form of the reflection model: the PWA parameters plus TX roll and the reflection sign
    struct RmPath
    {
        cdouble gain{0.0, 0.0};
        double delay = 0.0;
        double aoa_az = 0.0;
        double aoa_el = 0.0;
        double aod_az = 0.0;
        double aod_el = 0.0;
        double roll = 0.0; // TX roll, (-pi, pi]
        int s = 1;         // +1 or -1

        Vec3 arrival_dir() const { return spherical_dir(aoa_az, aoa_el); }
        Vec3 departure_dir() const { return spherical_dir(aod_az, aod_el); }
        PwaPath pwa() const { return {gain, delay, aoa_az, aoa_el, aod_az, aod_el}; }
    };

    struct ReferencePair
    {
        Vec3 tx_ref;
        Vec3 rx_ref;

        // Throws std::invalid_argument if both points coincide
        static ReferencePair make(const Vec3 &tx_ref, const Vec3 &rx_ref);
    };

    // Straight-line distance
    double los_distance(const Vec3 &rx, const Vec3 &tx);

    // c tau + (u^r)^T (xr0 - xr) + (u^t)^T (xt0 - xt)
    double pwa_distance(const Vec3 &rx, const Vec3 &tx, const ReferencePair &ref, const PwaPath &path);

    // || xr - U xt - g ||
    double rm_distance_image(const Vec3 &rx, const Vec3 &tx, const RmImage &img);

    // || c tau e_x + R_y(el_r) R_z(-az_r) (xr0 - xr) + Q_z(s) R_x(roll) R_y(el_t) R_z(-az_t) (xt0 - xt) ||
    double rm_distance_angles(const Vec3 &rx, const Vec3 &tx, const ReferencePair &ref, const RmPath &path);

    // Precomputed frames of the angle form, for evaluating many element pairs
    class RmAnglesEvaluator
    {
    public:
        RmAnglesEvaluator(const RmPath &path, const ReferencePair &ref);
        double operator()(const Vec3 &rx, const Vec3 &tx) const;

    private:
        Mat3 rx_frame_;
        Mat3 tx_frame_;
        double path_length_;
        ReferencePair ref_;
    };

    // Convert the image form into the angle form. Gain is left at zero.
    // Throws std::invalid_argument if the reference RX coincides with the TX image.
    RmPath image_to_angles(const RmImage &img, const ReferencePair &ref);

    // Algebraic inverse of image_to_angles
    RmImage angles_to_image(const RmPath &path, const ReferencePair &ref);
}

#endif
