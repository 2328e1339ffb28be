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

#include "rmchan/io.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

using namespace rmchan;

namespace
{
    Vec3 parse_point(const std::string &text, const char *what)
    {
        std::istringstream ss(text);
        double v[3];
        char sep = 0;
        for (int i = 0; i < 3; ++i)
        {
            if (!(ss >> v[i]))
                throw std::runtime_error(std::string(what) + ": expected x,y,z but got '" + text + "'");
            if (i < 2 && (!(ss >> sep) || sep != ','))
                throw std::runtime_error(std::string(what) + ": expected x,y,z but got '" + text + "'");
        }
        ss >> std::ws;
        if (!ss.eof())
            throw std::runtime_error(std::string(what) + ": trailing characters in '" + text + "'");
        return {v[0], v[1], v[2]};
    }

    void emit(const std::string &out_path, const std::string &text)
    {
        if (out_path.empty())
            std::cout << text;
        else
            write_text_file(out_path, text);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"rmchan: reflection-model multipath MIMO channel toolkit"};
    app.require_subcommand(1);

    // trace
    std::string scene_path, out_path, tx_text, rx_text;
    int bounces = 2;
    auto *trace = app.add_subcommand("trace", "Trace specular paths between two points");
    trace->add_option("--scene", scene_path, "Scene JSON")->required();
    trace->add_option("--tx", tx_text, "TX position x,y,z")->required();
    trace->add_option("--rx", rx_text, "RX position x,y,z")->required();
    trace->add_option("--bounces", bounces, "Maximum number of reflections (0-3)");
    trace->add_option("--out", out_path, "Output path export JSON (default stdout)");

    // fit rt / fit dp
    auto *fit = app.add_subcommand("fit", "Fit reflection-model parameters");
    fit->require_subcommand(1);
    std::string paths_path, ref_path;
    std::vector<std::string> disp_paths;
    auto *fit_rt = fit->add_subcommand("rt", "Fit from traced routes");
    fit_rt->add_option("--paths", paths_path, "Path export JSON")->required();
    fit_rt->add_option("--out", out_path, "Output RM JSON (default stdout)");
    auto *fit_dp = fit->add_subcommand("dp", "Fit from displaced-pair path exports");
    fit_dp->add_option("--ref", ref_path, "Path export at the reference pair")->required();
    fit_dp->add_option("--disp", disp_paths, "Path exports at displaced pairs (two or more)")->required();
    fit_dp->add_option("--out", out_path, "Output RM JSON (default stdout)");

    // predict
    std::string rm_path, model_name = "rm";
    double freq = 0.0;
    auto *predict = app.add_subcommand("predict", "Predict the complex channel between two points");
    predict->add_option("--rm", rm_path, "RM JSON")->required();
    predict->add_option("--tx", tx_text, "TX position x,y,z")->required();
    predict->add_option("--rx", rx_text, "RX position x,y,z")->required();
    predict->add_option("--freq", freq, "Frequency in Hz")->required();
    predict->add_option("--model", model_name, "Distance model")->check(CLI::IsMember({"constant", "pwa", "rm", "rm_angles"}));

    // experiment displacement / capacity
    auto *experiment = app.add_subcommand("experiment", "Run an experiment");
    experiment->require_subcommand(1);
    std::string config_path;
    auto *displacement = experiment->add_subcommand("displacement", "Channel error versus displacement");
    displacement->add_option("--scene", scene_path, "Scene JSON")->required();
    displacement->add_option("--config", config_path, "Experiment config JSON")->required();
    displacement->add_option("--out", out_path, "Output errors CSV (default stdout)");
    auto *capacity = experiment->add_subcommand("capacity", "Capacity versus TX array rotation");
    capacity->add_option("--scene", scene_path, "Scene JSON")->required();
    capacity->add_option("--config", config_path, "Capacity config JSON")->required();
    capacity->add_option("--out", out_path, "Output capacity CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*trace)
        {
            const Scene scene = scene_from_json(read_text_file(scene_path));
            const Vec3 tx = parse_point(tx_text, "--tx"), rx = parse_point(rx_text, "--rx");
            const auto traced = trace_paths(scene, tx, rx, bounces);
            emit(out_path, paths_to_json(PathExport::from_traced(traced, tx, rx, scene.carrier_hz)) + "\n");
            std::cerr << "traced " << traced.size() << " path(s)\n";
        }
        else if (*fit_rt)
        {
            const PathExport data = paths_from_json(read_text_file(paths_path));
            const ReferencePair ref = ReferencePair::make(data.tx, data.rx);
            emit(out_path, rm_to_json(ReferenceModel::from_traced(data.traced(), ref, data.f0)) + "\n");
        }
        else if (*fit_dp)
        {
            const PathExport reference = paths_from_json(read_text_file(ref_path));
            std::vector<PairObservation> displaced;
            for (const auto &p : disp_paths)
                displaced.push_back(paths_from_json(read_text_file(p)).observation());
            const ReferencePair ref = ReferencePair::make(reference.tx, reference.rx);
            const auto fits = fit_rm_dp(reference.observation(), displaced, ref);
            std::size_t flagged = 0;
            for (const auto &f : fits)
                flagged += f.fit.flagged;
            if (flagged > 0)
                std::cerr << flagged << " path(s) flagged as rank-deficient; kept with PWA parameters\n";
            emit(out_path, rm_to_json(ReferenceModel::from_dp(fits, ref, reference.f0)) + "\n");
        }
        else if (*predict)
        {
            const ReferenceModel model = rm_from_json(read_text_file(rm_path));
            const Vec3 tx = parse_point(tx_text, "--tx"), rx = parse_point(rx_text, "--rx");
            const ChannelModel cm = channel_model_from_string(model_name);
            std::vector<ChannelTerm> terms;
            for (std::size_t l = 0; l < model.paths.size(); ++l)
                terms.push_back({model.paths[l].pwa.gain, model.paths[l].pwa.delay, model.distance(l, cm, rx, tx)});
            const cdouble h = scalar_channel(terms, freq, model.f0);
            std::cout << std::setprecision(17) << h.real() << ' ' << h.imag() << '\n';
        }
        else if (*displacement)
        {
            const Scene scene = scene_from_json(read_text_file(scene_path));
            const DisplacementConfig cfg = displacement_config_from_json(read_text_file(config_path));
            const auto records = displacement_experiment(scene, cfg.ref, cfg.spec, cfg.bandwidth_hz, cfg.models,
                                                         cfg.n_freq, cfg.max_bounces);
            std::ostringstream csv;
            write_errors_csv(csv, records);
            emit(out_path, csv.str());
            std::cerr << "rng_seed " << cfg.spec.rng_seed << ", " << records.size() << " records\n";
        }
        else if (*capacity)
        {
            const Scene scene = scene_from_json(read_text_file(scene_path));
            const CapacityJob job = capacity_config_from_json(read_text_file(config_path));
            const CapacityResult result = capacity_sweep(scene, job.ref, job.cfg);
            std::ostringstream csv;
            write_capacity_csv(csv, result.rows);
            emit(out_path, csv.str());
            std::cerr << "trace invocations: exhaustive " << result.traces.exhaustive << ", pwa " << result.traces.pwa
                      << ", rm_rt " << result.traces.rm_rt << ", rm_dp " << result.traces.rm_dp << '\n';
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
