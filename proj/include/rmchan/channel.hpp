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

#ifndef rmchan_channel_H
#define rmchan_channel_H

#include "rmchan/dp_fit.hpp"
#include "rmchan/mirror_tracer.hpp"
#include "rmchan/pathmodel.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace rmchan
{
    struct ArrayGeometry
    {
        std::vector<Vec3> element_positions; // absolute, meters
        Vec3 center;

        std::size_t size() const { return element_positions.size(); }
    };

    // Uniform planar array in the local y-z plane (boresight +x), rotated about the global z axis
    // by azimuth_rotation and centered at center. Element index = row * cols + col.
    ArrayGeometry upa(int rows, int cols, double spacing, const Vec3 &center, double azimuth_rotation = 0.0);

    // Array from explicit positions; the center is their centroid
    ArrayGeometry array_from_positions(std::vector<Vec3> positions);

    struct MimoMatrix
    {
        Eigen::MatrixXcd H; // N_rx x N_tx
        double frequency = 0.0;
    };

    // One path term: reference gain, reference delay and the (estimated) path distance
    struct ChannelTerm
    {
        cdouble gain{0.0, 0.0};
        double ref_delay = 0.0; // seconds
        double distance = 0.0;  // meters
    };

    // sum_l g_l exp[j 2 pi (tau_l f0 - f d_l / c)]
    cdouble scalar_channel(std::span<const ChannelTerm> terms, double f, double f0);

    enum class ChannelModel
    {
        constant,
        pwa,
        rm_image,
        rm_angles,
        exhaustive
    };

    std::string to_string(ChannelModel model);
    ChannelModel channel_model_from_string(const std::string &name);

    // A reference path in all three parametrizations
    struct ModelPath
    {
        PwaPath pwa;
        RmPath rm;
        RmImage image;
    };

    // Paths fitted once at a reference pair
    struct ReferenceModel
    {
        ReferencePair ref;
        double f0 = 0.0;
        std::vector<ModelPath> paths;

        // Route-traced fit of every traced path
        static ReferenceModel from_traced(const std::vector<TracedPath> &traced, const ReferencePair &ref, double f0);

        // Displaced-pairs fit; flagged paths are kept with their PWA parameters
        static ReferenceModel from_dp(const std::vector<DpPathFit> &fits, const ReferencePair &ref, double f0);

        // Model distance of path l between rx and tx (not defined for the exhaustive model)
        double distance(std::size_t l, ChannelModel model, const Vec3 &rx, const Vec3 &tx) const;
    };

    // Per-entry path sums of a MIMO response, evaluated at any frequency in the band
    class ChannelTerms
    {
    public:
        ChannelTerms(std::size_t n_rx, std::size_t n_tx, double f0);

        void add(std::size_t m, std::size_t n, const ChannelTerm &term);
        MimoMatrix at(double f) const;

        std::size_t n_rx() const { return n_rx_; }
        std::size_t n_tx() const { return n_tx_; }
        double f0() const { return f0_; }

    private:
        struct Entry
        {
            cdouble weight;     // g exp[j 2 pi f0 (tau - d / c)]
            double delay = 0.0; // d / c
        };
        std::size_t n_rx_, n_tx_;
        double f0_;
        std::vector<std::vector<Entry>> entries_;
    };

    struct ExhaustiveOptions
    {
        int max_bounces = 2;
    };

    // Channel terms between two arrays. Model paths are evaluated at every element pair; the exhaustive
    // model re-traces every pair in the scene (scene must not be null) and counts the traces.
    ChannelTerms build_channel_terms(const ArrayGeometry &tx, const ArrayGeometry &rx, ChannelModel model,
                                     const ReferenceModel &paths, const Scene *scene,
                                     const ExhaustiveOptions &opts = {}, std::size_t *trace_count = nullptr);

    MimoMatrix mimo_matrix(const ArrayGeometry &tx, const ArrayGeometry &rx, ChannelModel model,
                           const ReferenceModel &paths, const Scene *scene, double f,
                           const ExhaustiveOptions &opts = {});
}

#endif
