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

#ifndef rmchan_io_H
#define rmchan_io_H

#include "rmchan/experiments.hpp"

#include <iosfwd>
#include <string>
#include <vector>

// File formats. Angles are stored in degrees and converted to radians on load.
// All parsers throw std::runtime_error with a descriptive message on malformed input.

namespace rmchan
{
    std::string scene_to_json(const Scene &scene);
    Scene scene_from_json(const std::string &text);

    // One exported path: PWA parameters plus the interaction points
    struct ExportedPath
    {
        PwaPath pwa;
        Route route;
    };

    struct PathExport
    {
        Vec3 tx;
        Vec3 rx;
        double f0 = 0.0;
        std::vector<ExportedPath> paths;

        static PathExport from_traced(const std::vector<TracedPath> &traced, const Vec3 &tx, const Vec3 &rx, double f0);
        std::vector<TracedPath> traced() const;
        PairObservation observation() const;
    };

    std::string paths_to_json(const PathExport &data);
    PathExport paths_from_json(const std::string &text);

    // Both parametrizations are written; on load they must agree to 1e-9 relative at 10 probe points
    std::string rm_to_json(const ReferenceModel &model);
    ReferenceModel rm_from_json(const std::string &text);

    struct DisplacementConfig
    {
        ReferencePair ref;
        DisplacementSpec spec;
        double bandwidth_hz = 2e9;
        int n_freq = 10;
        int max_bounces = 2;
        std::vector<Estimator> models = all_estimators;
    };
    DisplacementConfig displacement_config_from_json(const std::string &text);

    struct CapacityJob
    {
        ReferencePair ref;
        CapacityConfig cfg;
    };
    CapacityJob capacity_config_from_json(const std::string &text);

    void write_errors_csv(std::ostream &os, const std::vector<ErrorRecord> &records);
    void write_capacity_csv(std::ostream &os, const std::vector<CapacityRow> &rows);

    // Whole-file helpers; throw std::runtime_error if the file cannot be opened
    std::string read_text_file(const std::string &path);
    void write_text_file(const std::string &path, const std::string &text);
}

#endif
