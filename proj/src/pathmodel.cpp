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

#include "rmchan/pathmodel.hpp"

#include <stdexcept>

namespace rmchan
{
    // R_y(el) R_z(-az): maps spherical_dir(az, el) onto e_x
    static Mat3 direction_frame(double azimuth, double elevation)
    {
        return rot_y(elevation) * rot_z(-azimuth);
    }

    static Mat3 tx_frame(const RmPath &path)
    {
        return z_reflection(path.s) * rot_x(path.roll) * direction_frame(path.aod_az, path.aod_el);
    }

    ReferencePair ReferencePair::make(const Vec3 &tx_ref, const Vec3 &rx_ref)
    {
        if (distance(tx_ref, rx_ref) == 0.0)
            throw std::invalid_argument("ReferencePair::make: TX and RX reference points coincide.");
        return {tx_ref, rx_ref};
    }

    double los_distance(const Vec3 &rx, const Vec3 &tx)
    {
        return distance(rx, tx);
    }

    double pwa_distance(const Vec3 &rx, const Vec3 &tx, const ReferencePair &ref, const PwaPath &path)
    {
        return speed_of_light * path.delay +
               dot(path.arrival_dir(), ref.rx_ref - rx) +
               dot(path.departure_dir(), ref.tx_ref - tx);
    }

    double rm_distance_image(const Vec3 &rx, const Vec3 &tx, const RmImage &img)
    {
        return norm(rx - img.U * tx - img.g);
    }

    RmAnglesEvaluator::RmAnglesEvaluator(const RmPath &path, const ReferencePair &ref)
        : rx_frame_(direction_frame(path.aoa_az, path.aoa_el)),
          tx_frame_(tx_frame(path)),
          path_length_(speed_of_light * path.delay),
          ref_(ref)
    {
    }

    double RmAnglesEvaluator::operator()(const Vec3 &rx, const Vec3 &tx) const
    {
        return norm(path_length_ * e_x + rx_frame_ * (ref_.rx_ref - rx) + tx_frame_ * (ref_.tx_ref - tx));
    }

    double rm_distance_angles(const Vec3 &rx, const Vec3 &tx, const ReferencePair &ref, const RmPath &path)
    {
        return RmAnglesEvaluator(path, ref)(rx, tx);
    }

    RmPath image_to_angles(const RmImage &img, const ReferencePair &ref)
    {
        if (orthogonality_error(img.U) > 1e-9)
            throw std::invalid_argument("image_to_angles: U is not orthogonal.");

        // Vector from the TX image to the reference RX
        const Vec3 d0 = ref.rx_ref - img.U * ref.tx_ref - img.g;
        const double len = norm(d0);
        if (!(len > 0.0))
            throw std::invalid_argument("image_to_angles: zero-length path (RX reference coincides with the TX image).");

        RmPath out;
        out.delay = len / speed_of_light;

        // The arrival direction points from the RX toward the image, so the frame maps d0 onto -c tau e_x
        const DirAngles arrival = dir_to_angles(-d0 / len);
        out.aoa_az = arrival.azimuth;
        out.aoa_el = arrival.elevation;

        const Mat3 W = -(direction_frame(arrival.azimuth, arrival.elevation) * img.U);
        out.s = W.det() > 0.0 ? 1 : -1;

        const EulerAngles tx_angles = euler_factor_so3(z_reflection(out.s) * W);
        out.roll = tx_angles.roll;
        out.aod_el = tx_angles.elevation;
        out.aod_az = tx_angles.azimuth;
        return out;
    }

    RmImage angles_to_image(const RmPath &path, const ReferencePair &ref)
    {
        const Mat3 rx_frame = direction_frame(path.aoa_az, path.aoa_el);
        RmImage out;
        out.U = -(rx_frame.transposed() * tx_frame(path));
        const Vec3 d0 = -(speed_of_light * path.delay) * path.arrival_dir();
        out.g = ref.rx_ref - out.U * ref.tx_ref - d0;
        return out;
    }
}
