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

#include "rmchan/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace rmchan
{
    namespace
    {
        Vec3 random_direction(std::mt19937_64 &rng)
        {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (;;)
            {
                const Vec3 v{normal(rng), normal(rng), normal(rng)};
                const double n = norm(v);
                if (n > 1e-6)
                    return v / n;
            }
        }

        PairObservation observe(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_bounces)
        {
            PairObservation obs;
            obs.tx = tx;
            obs.rx = rx;
            const ReferencePair pair = ReferencePair::make(tx, rx);
            for (const auto &p : trace_paths(scene, tx, rx, max_bounces))
                obs.paths.push_back(to_pwa(p, pair));
            return obs;
        }

        const ReferenceModel &model_source(const EstimatorSet &est, Estimator e)
        {
            if (e == Estimator::rm_dp)
            {
                if (!est.dp)
                    throw std::invalid_argument("RM-DP estimator requested but no displaced pairs were fitted.");
                return *est.dp;
            }
            return est.rt;
        }

        ChannelModel distance_model(Estimator e)
        {
            switch (e)
            {
            case Estimator::constant:
                return ChannelModel::constant;
            case Estimator::pwa:
                return ChannelModel::pwa;
            case Estimator::rm_rt:
                return ChannelModel::rm_image;
            case Estimator::rm_dp:
                break;
            }
            return ChannelModel::rm_angles;
        }
    }

    std::string to_string(Estimator e)
    {
        switch (e)
        {
        case Estimator::constant:
            return "constant";
        case Estimator::pwa:
            return "pwa";
        case Estimator::rm_rt:
            return "rm_rt";
        case Estimator::rm_dp:
            return "rm_dp";
        }
        return "unknown";
    }

    Estimator estimator_from_string(const std::string &name)
    {
        for (auto e : all_estimators)
            if (to_string(e) == name)
                return e;
        throw std::invalid_argument("Unknown estimator '" + name + "'.");
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned n_threads)
    {
        if (n_threads == 0)
            n_threads = std::max(1u, std::thread::hardware_concurrency());
        n_threads = unsigned(std::min<std::size_t>(n_threads, n));
        if (n_threads <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&]()
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        };

        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    EstimatorSet fit_estimators(const Scene &scene, const ReferencePair &ref,
                                const std::vector<std::pair<Vec3, Vec3>> &dp_pairs, int max_bounces)
    {
        EstimatorSet est;
        est.f0 = scene.carrier_hz;
        est.max_bounces = max_bounces;
        est.reference_paths = trace_paths(scene, ref.tx_ref, ref.rx_ref, max_bounces);
        est.trace_count = 1;
        if (est.reference_paths.empty())
            throw std::invalid_argument("fit_estimators: the reference link has no paths.");

        for (const auto &p : est.reference_paths)
            est.e0 += std::norm(p.gain);
        if (!(est.e0 > 0.0))
            throw std::invalid_argument("fit_estimators: reference channel energy is zero.");

        est.rt = ReferenceModel::from_traced(est.reference_paths, ref, est.f0);

        if (dp_pairs.size() >= 2)
        {
            PairObservation reference;
            reference.tx = ref.tx_ref;
            reference.rx = ref.rx_ref;
            for (const auto &p : est.reference_paths)
                reference.paths.push_back(to_pwa(p, ref));

            std::vector<PairObservation> displaced;
            for (const auto &[tx, rx] : dp_pairs)
            {
                displaced.push_back(observe(scene, tx, rx, max_bounces));
                ++est.trace_count;
            }
            est.dp_fits = fit_rm_dp(reference, displaced, ref);
            est.dp = ReferenceModel::from_dp(est.dp_fits, ref, est.f0);
        }
        return est;
    }

    std::vector<double> channel_errors(const Scene &scene, const EstimatorSet &est, Estimator model,
                                       const Vec3 &tx, const Vec3 &rx, const std::vector<double> &freqs)
    {
        const auto truth = trace_paths(scene, tx, rx, est.max_bounces);
        const ReferenceModel &source = model_source(est, model);
        const ChannelModel cm = distance_model(model);

        std::vector<ChannelTerm> estimate;
        for (std::size_t l = 0; l < source.paths.size(); ++l)
            estimate.push_back({source.paths[l].pwa.gain, source.paths[l].pwa.delay, source.distance(l, cm, rx, tx)});

        std::vector<ChannelTerm> true_terms;
        for (const auto &p : truth)
            true_terms.push_back({p.gain, p.delay, speed_of_light * p.delay});

        std::vector<double> out;
        out.reserve(freqs.size());
        for (double f : freqs)
        {
            const cdouble h = scalar_channel(true_terms, f, est.f0);
            const cdouble h_hat = scalar_channel(estimate, f, est.f0);
            out.push_back(std::norm(h_hat - h) / est.e0);
        }
        return out;
    }

    std::vector<ErrorRecord> displacement_experiment(const Scene &scene, const ReferencePair &ref,
                                                     const DisplacementSpec &spec, double bandwidth,
                                                     const std::vector<Estimator> &models, int n_freq, int max_bounces)
    {
        if (spec.distances.empty())
            throw std::invalid_argument("displacement_experiment: no displacement distances given.");
        for (std::size_t i = 0; i < spec.distances.size(); ++i)
        {
            if (!(spec.distances[i] > 0.0))
                throw std::invalid_argument("displacement_experiment: distances must be positive.");
            if (i > 0 && spec.distances[i] < spec.distances[i - 1])
                throw std::invalid_argument("displacement_experiment: distances must be sorted ascending.");
        }
        if (spec.directions_per_distance < 1 || n_freq < 1)
            throw std::invalid_argument("displacement_experiment: need at least one direction and one frequency.");

        // All random draws happen up front so the result does not depend on scheduling
        std::mt19937_64 rng(spec.rng_seed);
        std::uniform_real_distribution<double> band(-0.5 * bandwidth, 0.5 * bandwidth);

        struct Job
        {
            double distance;
            Vec3 tx, rx;
            std::vector<double> freqs;
        };
        std::vector<Job> jobs;
        for (double d : spec.distances)
            for (int j = 0; j < spec.directions_per_distance; ++j)
            {
                Job job;
                job.distance = d;
                job.tx = ref.tx_ref + d * random_direction(rng);
                job.rx = ref.rx_ref + d * random_direction(rng);
                for (int k = 0; k < n_freq; ++k)
                    job.freqs.push_back(scene.carrier_hz + band(rng));
                jobs.push_back(std::move(job));
            }

        const bool need_dp = std::find(models.begin(), models.end(), Estimator::rm_dp) != models.end();
        std::vector<std::pair<Vec3, Vec3>> dp_pairs;
        if (need_dp)
        {
            if (spec.distances.size() < 2)
                throw std::invalid_argument("displacement_experiment: RM-DP needs at least two displacement distances.");
            const int per = spec.directions_per_distance;
            dp_pairs = {{jobs[0].tx, jobs[0].rx}, {jobs[per].tx, jobs[per].rx}};
        }
        const EstimatorSet est = fit_estimators(scene, ref, dp_pairs, max_bounces);

        std::vector<std::vector<ErrorRecord>> slots(jobs.size());
        parallel_for(jobs.size(), [&](std::size_t i)
                     {
                         const Job &job = jobs[i];
                         for (auto model : models)
                         {
                             const auto eps = channel_errors(scene, est, model, job.tx, job.rx, job.freqs);
                             for (std::size_t k = 0; k < eps.size(); ++k)
                                 slots[i].push_back({model, job.distance, job.freqs[k], eps[k]});
                         } });

        std::vector<ErrorRecord> out;
        for (auto &s : slots)
            out.insert(out.end(), s.begin(), s.end());
        return out;
    }

    double median_epsilon(const std::vector<ErrorRecord> &records, Estimator model, double distance)
    {
        std::vector<double> v;
        for (const auto &r : records)
            if (r.model == model && std::abs(r.distance - distance) <= 1e-12 * std::max(1.0, distance))
                v.push_back(r.epsilon);
        if (v.empty())
            throw std::invalid_argument("median_epsilon: no records for this model and distance.");
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    std::string to_string(CapacityModel m)
    {
        switch (m)
        {
        case CapacityModel::exhaustive:
            return "exhaustive";
        case CapacityModel::constant:
            return "constant";
        case CapacityModel::pwa:
            return "pwa";
        case CapacityModel::rm_rt:
            return "rm_rt";
        case CapacityModel::rm_rt_angles:
            return "rm_rt_angles";
        case CapacityModel::rm_dp:
            return "rm_dp";
        }
        return "unknown";
    }

    CapacityModel capacity_model_from_string(const std::string &name)
    {
        for (auto m : {CapacityModel::exhaustive, CapacityModel::constant, CapacityModel::pwa,
                       CapacityModel::rm_rt, CapacityModel::rm_rt_angles, CapacityModel::rm_dp})
            if (to_string(m) == name)
                return m;
        throw std::invalid_argument("Unknown capacity model '" + name + "'.");
    }

    std::vector<double> default_rotations()
    {
        std::vector<double> out;
        for (int deg = -180; deg < 180; deg += 15)
            out.push_back(deg2rad(deg));
        return out;
    }

    CapacityResult capacity_sweep(const Scene &scene, const ReferencePair &ref, const CapacityConfig &cfg)
    {
        const std::vector<double> rotations = cfg.rotations.empty() ? default_rotations() : cfg.rotations;
        if (cfg.models.empty())
            throw std::invalid_argument("capacity_sweep: no models requested.");

        const bool need_dp = std::find(cfg.models.begin(), cfg.models.end(), CapacityModel::rm_dp) != cfg.models.end();
        std::vector<std::pair<Vec3, Vec3>> dp_pairs;
        if (need_dp)
        {
            std::mt19937_64 rng(cfg.rng_seed);
            for (double d : cfg.dp_distances)
            {
                const Vec3 dt = random_direction(rng), dr = random_direction(rng);
                dp_pairs.emplace_back(ref.tx_ref + d * dt, ref.rx_ref + d * dr);
            }
        }
        const EstimatorSet est = fit_estimators(scene, ref, dp_pairs, cfg.max_bounces);

        const Vec3 link = ref.rx_ref - ref.tx_ref;
        const double tx_facing = std::atan2(link.y, link.x);
        const double rx_facing = std::atan2(-link.y, -link.x);
        const ArrayGeometry rx_array = upa(cfg.rx_array.rows, cfg.rx_array.cols, cfg.rx_array.spacing, ref.rx_ref, rx_facing);

        const std::size_t n_models = cfg.models.size();
        std::vector<CapacityRow> rows(rotations.size() * n_models);
        std::vector<std::size_t> traces(rows.size(), 0);

        parallel_for(rows.size(), [&](std::size_t cell)
                     {
                         const std::size_t r = cell / n_models;
                         const CapacityModel model = cfg.models[cell % n_models];
                         const ArrayGeometry tx_array = upa(cfg.tx_array.rows, cfg.tx_array.cols, cfg.tx_array.spacing,
                                                            ref.tx_ref, tx_facing + rotations[r]);

                         ChannelModel cm = ChannelModel::exhaustive;
                         const ReferenceModel *source = &est.rt;
                         switch (model)
                         {
                         case CapacityModel::exhaustive: cm = ChannelModel::exhaustive; break;
                         case CapacityModel::constant: cm = ChannelModel::constant; break;
                         case CapacityModel::pwa: cm = ChannelModel::pwa; break;
                         case CapacityModel::rm_rt: cm = ChannelModel::rm_image; break;
                         case CapacityModel::rm_rt_angles: cm = ChannelModel::rm_angles; break;
                         case CapacityModel::rm_dp: cm = ChannelModel::rm_angles; source = &*est.dp; break;
                         }

                         ExhaustiveOptions opts;
                         opts.max_bounces = cfg.max_bounces;
                         const ChannelTerms terms = build_channel_terms(tx_array, rx_array, cm, *source, &scene, opts, &traces[cell]);

                         LinkBudget budget = cfg.budget;
                         const auto center = spectral_efficiency(singular_values(terms.at(est.f0)), budget, cfg.rate);
                         const auto avg = band_rate([&](double f)
                                                    { return terms.at(f); },
                                                    est.f0, budget, cfg.rate, cfg.n_freq);

                         CapacityRow row;
                         row.rotation = rotations[r];
                         row.model = model;
                         row.se_center = center.se;
                         row.se_avg = avg.se_avg;
                         row.rank_used = center.streams;
                         rows[cell] = row; });

        CapacityResult out;
        out.rows = std::move(rows);
        for (std::size_t cell = 0; cell < traces.size(); ++cell)
            if (cfg.models[cell % n_models] == CapacityModel::exhaustive)
                out.traces.exhaustive += traces[cell];
        out.traces.rm_rt = 1;
        out.traces.pwa = 1;
        out.traces.rm_dp = need_dp ? est.trace_count : 1 + cfg.dp_distances.size();
        return out;
    }
}
