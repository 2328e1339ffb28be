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

#ifndef rmchan_capacity_H
#define rmchan_capacity_H

#include "rmchan/channel.hpp"

#include <functional>
#include <span>
#include <vector>

namespace rmchan
{
    struct LinkBudget
    {
        double tx_power_dbm = 23.0;
        double bandwidth_hz = 2e9;
        double noise_figure_db = 3.0;

        double tx_power_w() const;
        double noise_psd_w_per_hz() const; // -174 dBm/Hz thermal floor plus the noise figure
    };

    // Capped fraction-of-Shannon rate per stream
    struct RateModel
    {
        double alpha = 0.6;
        double se_max = 4.8; // bps/Hz
    };

    // Descending singular values, length min(N_rx, N_tx)
    std::vector<double> singular_values(const MimoMatrix &H);

    // min(alpha log2(1 + snr), se_max); throws std::invalid_argument for negative snr
    double rho(double snr, const RateModel &model = {});

    struct SpectralEfficiency
    {
        double se = 0.0;     // bps/Hz
        int streams = 0;     // maximizing number of equal-power streams
    };

    // max_k sum_{i<=k} rho(s_i^2 P / (N0 B k)); singular values must be sorted descending
    SpectralEfficiency spectral_efficiency(std::span<const double> singulars, const LinkBudget &budget,
                                           const RateModel &model = {});

    struct BandRate
    {
        double rate = 0.0;   // bps
        double se_avg = 0.0; // bps/Hz
    };

    // Midpoint rule over n_freq uniformly spaced frequencies in [f0 - B/2, f0 + B/2]
    BandRate band_rate(const std::function<MimoMatrix(double)> &H_at, double f0, const LinkBudget &budget,
                       const RateModel &model = {}, int n_freq = 10);

    // The band sample frequencies used by band_rate
    std::vector<double> band_frequencies(double f0, double bandwidth, int n_freq);

    // 2 D^2 / lambda
    double rayleigh_distance(double aperture, double wavelength);
}

#endif
