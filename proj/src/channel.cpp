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

#include "rmchan/channel.hpp"
#include "rmchan/rt_fit.hpp"

#include <stdexcept>

namespace rmchan
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        // exp[j 2 pi (tau f0 - f d / c)], split so both phase terms stay small
        cdouble path_phasor(double ref_delay, double dist, double f, double f0)
        {
            const double prop = dist / speed_of_light;
            const double cycles = f0 * (ref_delay - prop) - (f - f0) * prop;
            return std::polar(1.0, two_pi * cycles);
        }
    }

    ArrayGeometry upa(int rows, int cols, double spacing, const Vec3 &center, double azimuth_rotation)
    {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("upa: rows and cols must be at least 1.");
        if (!(spacing > 0.0))
            throw std::invalid_argument("upa: spacing must be positive.");

        const Mat3 R = rot_z(azimuth_rotation);
        ArrayGeometry out;
        out.center = center;
        out.element_positions.reserve(std::size_t(rows) * cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
            {
                const Vec3 local{0.0, (c - 0.5 * (cols - 1)) * spacing, (0.5 * (rows - 1) - r) * spacing};
                out.element_positions.push_back(center + R * local);
            }
        return out;
    }

    ArrayGeometry array_from_positions(std::vector<Vec3> positions)
    {
        if (positions.empty())
            throw std::invalid_argument("array_from_positions: array needs at least one element.");
        Vec3 c;
        for (const auto &p : positions)
            c += p;
        ArrayGeometry out;
        out.center = c / double(positions.size());
        out.element_positions = std::move(positions);
        return out;
    }

    cdouble scalar_channel(std::span<const ChannelTerm> terms, double f, double f0)
    {
        cdouble h{0.0, 0.0};
        for (const auto &t : terms)
            h += t.gain * path_phasor(t.ref_delay, t.distance, f, f0);
        return h;
    }

    std::string to_string(ChannelModel model)
    {
        switch (model)
        {
        case ChannelModel::constant:
            return "constant";
        case ChannelModel::pwa:
            return "pwa";
        case ChannelModel::rm_image:
            return "rm_image";
        case ChannelModel::rm_angles:
            return "rm_angles";
        case ChannelModel::exhaustive:
            return "exhaustive";
        }
        return "unknown";
    }

    ChannelModel channel_model_from_string(const std::string &name)
    {
        if (name == "constant")
            return ChannelModel::constant;
        if (name == "pwa")
            return ChannelModel::pwa;
        if (name == "rm" || name == "rm_image")
            return ChannelModel::rm_image;
        if (name == "rm_angles")
            return ChannelModel::rm_angles;
        if (name == "exhaustive")
            return ChannelModel::exhaustive;
        throw std::invalid_argument("Unknown channel model '" + name + "'.");
    }

    ReferenceModel ReferenceModel::from_traced(const std::vector<TracedPath> &traced, const ReferencePair &ref, double f0)
    {
        ReferenceModel out;
        out.ref = ref;
        out.f0 = f0;
        for (const auto &t : traced)
        {
            ModelPath p;
            p.pwa = to_pwa(t, ref);
            p.image = fit_from_route(t.route);
            p.rm = fit_rm_rt(t, ref);
            out.paths.push_back(p);
        }
        return out;
    }

    ReferenceModel ReferenceModel::from_dp(const std::vector<DpPathFit> &fits, const ReferencePair &ref, double f0)
    {
        ReferenceModel out;
        out.ref = ref;
        out.f0 = f0;
        for (const auto &f : fits)
        {
            ModelPath p;
            p.pwa = f.path.pwa();
            p.rm = f.path;
            p.image = angles_to_image(f.path, ref);
            out.paths.push_back(p);
        }
        return out;
    }

    double ReferenceModel::distance(std::size_t l, ChannelModel model, const Vec3 &rx, const Vec3 &tx) const
    {
        const ModelPath &p = paths.at(l);
        switch (model)
        {
        case ChannelModel::constant:
            return speed_of_light * p.pwa.delay;
        case ChannelModel::pwa:
            return pwa_distance(rx, tx, ref, p.pwa);
        case ChannelModel::rm_image:
            return rm_distance_image(rx, tx, p.image);
        case ChannelModel::rm_angles:
            return rm_distance_angles(rx, tx, ref, p.rm);
        case ChannelModel::exhaustive:
            break;
        }
        throw std::invalid_argument("ReferenceModel::distance: the exhaustive model has no path distance function.");
    }

    ChannelTerms::ChannelTerms(std::size_t n_rx, std::size_t n_tx, double f0)
        : n_rx_(n_rx), n_tx_(n_tx), f0_(f0), entries_(n_rx * n_tx)
    {
    }

    void ChannelTerms::add(std::size_t m, std::size_t n, const ChannelTerm &term)
    {
        if (m >= n_rx_ || n >= n_tx_)
            throw std::out_of_range("ChannelTerms::add: element index out of range.");
        const double prop = term.distance / speed_of_light;
        const cdouble w = term.gain * std::polar(1.0, two_pi * f0_ * (term.ref_delay - prop));
        entries_[m * n_tx_ + n].push_back({w, prop});
    }

    MimoMatrix ChannelTerms::at(double f) const
    {
        MimoMatrix out;
        out.frequency = f;
        out.H.resize(Eigen::Index(n_rx_), Eigen::Index(n_tx_));
        const double df = f - f0_;
        for (std::size_t m = 0; m < n_rx_; ++m)
            for (std::size_t n = 0; n < n_tx_; ++n)
            {
                cdouble h{0.0, 0.0};
                for (const auto &e : entries_[m * n_tx_ + n])
                    h += e.weight * std::polar(1.0, -two_pi * df * e.delay);
                out.H(Eigen::Index(m), Eigen::Index(n)) = h;
            }
        return out;
    }

    ChannelTerms build_channel_terms(const ArrayGeometry &tx, const ArrayGeometry &rx, ChannelModel model,
                                     const ReferenceModel &paths, const Scene *scene,
                                     const ExhaustiveOptions &opts, std::size_t *trace_count)
    {
        if (tx.size() == 0 || rx.size() == 0)
            throw std::invalid_argument("build_channel_terms: arrays must not be empty.");

        ChannelTerms terms(rx.size(), tx.size(), paths.f0);
        std::size_t traces = 0;

        if (model == ChannelModel::exhaustive)
        {
            if (scene == nullptr)
                throw std::invalid_argument("build_channel_terms: the exhaustive model requires a scene.");
            if (std::abs(scene->carrier_hz - paths.f0) > 1e-9 * paths.f0)
                throw std::invalid_argument("build_channel_terms: scene carrier differs from the reference frequency.");

            for (std::size_t m = 0; m < rx.size(); ++m)
                for (std::size_t n = 0; n < tx.size(); ++n)
                {
                    const auto traced = trace_paths(*scene, tx.element_positions[n], rx.element_positions[m], opts.max_bounces);
                    ++traces;
                    for (const auto &t : traced)
                        terms.add(m, n, {t.gain, t.delay, speed_of_light * t.delay});
                }
        }
        else
        {
            std::vector<RmAnglesEvaluator> angle_eval;
            if (model == ChannelModel::rm_angles)
                for (const auto &p : paths.paths)
                    angle_eval.emplace_back(p.rm, paths.ref);

            for (std::size_t m = 0; m < rx.size(); ++m)
                for (std::size_t n = 0; n < tx.size(); ++n)
                    for (std::size_t l = 0; l < paths.paths.size(); ++l)
                    {
                        const Vec3 &xr = rx.element_positions[m];
                        const Vec3 &xt = tx.element_positions[n];
                        const double d = model == ChannelModel::rm_angles ? angle_eval[l](xr, xt)
                                                                          : paths.distance(l, model, xr, xt);
                        terms.add(m, n, {paths.paths[l].pwa.gain, paths.paths[l].pwa.delay, d});
                    }
        }

        if (trace_count != nullptr)
            *trace_count += traces;
        return terms;
    }

    MimoMatrix mimo_matrix(const ArrayGeometry &tx, const ArrayGeometry &rx, ChannelModel model,
                           const ReferenceModel &paths, const Scene *scene, double f,
                           const ExhaustiveOptions &opts)
    {
        return build_channel_terms(tx, rx, model, paths, scene, opts).at(f);
    }
}
