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

#include "rmchan/capacity.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>

namespace rmchan
{
    double LinkBudget::tx_power_w() const
    {
        return 1e-3 * std::pow(10.0, tx_power_dbm / 10.0);
    }

    double LinkBudget::noise_psd_w_per_hz() const
    {
        return 1e-3 * std::pow(10.0, (-174.0 + noise_figure_db) / 10.0);
    }

    std::vector<double> singular_values(const MimoMatrix &H)
    {
        if (H.H.size() == 0)
            return {};
        if (!H.H.allFinite())
            throw std::invalid_argument("singular_values: matrix has non-finite entries.");

        Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(H.H).singularValues();
        // BDCSVD can break down on exactly rank-deficient input; Jacobi is slower but always converges
        if (!sv.allFinite())
            sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(H.H).singularValues();
        std::vector<double> out(sv.data(), sv.data() + sv.size());
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }

    double rho(double snr, const RateModel &model)
    {
        if (snr < 0.0 || std::isnan(snr))
            throw std::invalid_argument("rho: SNR must be non-negative.");
        return std::min(model.alpha * std::log2(1.0 + snr), model.se_max);
    }

    SpectralEfficiency spectral_efficiency(std::span<const double> singulars, const LinkBudget &budget,
                                           const RateModel &model)
    {
        if (!(budget.bandwidth_hz > 0.0))
            throw std::invalid_argument("spectral_efficiency: bandwidth must be positive.");
        for (std::size_t i = 1; i < singulars.size(); ++i)
            if (singulars[i] > singulars[i - 1])
                throw std::invalid_argument("spectral_efficiency: singular values must be sorted descending.");

        const double snr_scale = budget.tx_power_w() / (budget.noise_psd_w_per_hz() * budget.bandwidth_hz);
        SpectralEfficiency best;
        for (std::size_t k = 1; k <= singulars.size(); ++k)
        {
            double se = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                se += rho(singulars[i] * singulars[i] * snr_scale / double(k), model);
            if (se > best.se)
            {
                best.se = se;
                best.streams = int(k);
            }
        }
        return best;
    }

    std::vector<double> band_frequencies(double f0, double bandwidth, int n_freq)
    {
        if (n_freq < 1)
            throw std::invalid_argument("band_frequencies: n_freq must be at least 1.");
        std::vector<double> out(n_freq);
        for (int i = 0; i < n_freq; ++i)
            out[i] = f0 - 0.5 * bandwidth + (i + 0.5) * bandwidth / n_freq;
        return out;
    }

    BandRate band_rate(const std::function<MimoMatrix(double)> &H_at, double f0, const LinkBudget &budget,
                       const RateModel &model, int n_freq)
    {
        double sum = 0.0;
        for (double f : band_frequencies(f0, budget.bandwidth_hz, n_freq))
            sum += spectral_efficiency(singular_values(H_at(f)), budget, model).se;

        BandRate out;
        out.rate = budget.bandwidth_hz / n_freq * sum;
        out.se_avg = out.rate / budget.bandwidth_hz;
        return out;
    }

    double rayleigh_distance(double aperture, double wavelength)
    {
        if (aperture < 0.0 || !(wavelength > 0.0))
            throw std::invalid_argument("rayleigh_distance: aperture must be non-negative and wavelength positive.");
        return 2.0 * aperture * aperture / wavelength;
    }
}
