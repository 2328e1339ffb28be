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

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

using json = nlohmann::json;

namespace rmchan
{
    namespace
    {
        [[noreturn]] void fail(const std::string &what)
        {
            throw std::runtime_error(what);
        }

        json parse(const std::string &text, const char *what)
        {
            try
            {
                return json::parse(text);
            }
            catch (const json::exception &e)
            {
                fail(std::string(what) + ": invalid JSON (" + e.what() + ")");
            }
        }

        const json &field(const json &j, const char *key, const char *what)
        {
            if (!j.is_object() || !j.contains(key))
                fail(std::string(what) + ": missing field '" + key + "'");
            return j.at(key);
        }

        double number(const json &j, const char *key, const char *what)
        {
            const json &v = field(j, key, what);
            if (!v.is_number())
                fail(std::string(what) + ": field '" + key + "' must be a number");
            return v.get<double>();
        }

        double number_or(const json &j, const char *key, double fallback, const char *what)
        {
            return j.contains(key) ? number(j, key, what) : fallback;
        }

        int integer_or(const json &j, const char *key, int fallback, const char *what)
        {
            if (!j.contains(key))
                return fallback;
            const json &v = j.at(key);
            if (!v.is_number_integer())
                fail(std::string(what) + ": field '" + key + "' must be an integer");
            return v.get<int>();
        }

        json vec_json(const Vec3 &v)
        {
            return json::array({v.x, v.y, v.z});
        }

        Vec3 vec_from(const json &v, const char *what)
        {
            if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
                fail(std::string(what) + ": expected a 3-vector [x, y, z]");
            return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
        }

        Vec3 vec_field(const json &j, const char *key, const char *what)
        {
            return vec_from(field(j, key, what), what);
        }

        std::vector<double> number_list(const json &j, const char *key, const char *what)
        {
            const json &v = field(j, key, what);
            if (!v.is_array())
                fail(std::string(what) + ": field '" + key + "' must be an array");
            std::vector<double> out;
            for (const auto &e : v)
            {
                if (!e.is_number())
                    fail(std::string(what) + ": field '" + key + "' must contain numbers");
                out.push_back(e.get<double>());
            }
            return out;
        }

        std::vector<std::string> string_list(const json &j, const char *key, const char *what)
        {
            const json &v = field(j, key, what);
            if (!v.is_array())
                fail(std::string(what) + ": field '" + key + "' must be an array");
            std::vector<std::string> out;
            for (const auto &e : v)
            {
                if (!e.is_string())
                    fail(std::string(what) + ": field '" + key + "' must contain strings");
                out.push_back(e.get<std::string>());
            }
            return out;
        }

        void write_gain(json &j, cdouble g)
        {
            if (!(std::abs(g) > 0.0))
                fail("cannot export a path with zero gain");
            j["gain_db"] = 20.0 * std::log10(std::abs(g));
            j["phase_deg"] = rad2deg(std::arg(g));
        }

        cdouble read_gain(const json &j, const char *what)
        {
            const double amp = std::pow(10.0, number(j, "gain_db", what) / 20.0);
            return std::polar(amp, deg2rad(number(j, "phase_deg", what)));
        }

        void write_angles(json &j, double aoa_az, double aoa_el, double aod_az, double aod_el)
        {
            j["aoa_az_deg"] = rad2deg(aoa_az);
            j["aoa_el_deg"] = rad2deg(aoa_el);
            j["aod_az_deg"] = rad2deg(aod_az);
            j["aod_el_deg"] = rad2deg(aod_el);
        }

        template <class P>
        void read_angles(const json &j, P &p, const char *what)
        {
            p.aoa_az = deg2rad(number(j, "aoa_az_deg", what));
            p.aoa_el = deg2rad(number(j, "aoa_el_deg", what));
            p.aod_az = deg2rad(number(j, "aod_az_deg", what));
            p.aod_el = deg2rad(number(j, "aod_el_deg", what));
        }

        double half_from(const json &j, const char *key, const char *what)
        {
            if (!j.contains(key) || j.at(key).is_null())
                return infinite_extent;
            return number(j, key, what);
        }

        json half_json(double h)
        {
            return std::isinf(h) ? json(nullptr) : json(h);
        }

        ReferencePair pair_from(const json &j, const char *what)
        {
            try
            {
                return ReferencePair::make(vec_field(j, "tx", what), vec_field(j, "rx", what));
            }
            catch (const std::invalid_argument &e)
            {
                fail(std::string(what) + ": " + e.what());
            }
        }
    }

    std::string scene_to_json(const Scene &scene)
    {
        json j;
        j["carrier_hz"] = scene.carrier_hz;
        j["reflection_loss_db"] = scene.reflection_loss_db;
        j["facets"] = json::array();
        for (const auto &f : scene.facets)
            j["facets"].push_back({{"center", vec_json(f.center)},
                                   {"axis_u", vec_json(f.axis_u)},
                                   {"axis_v", vec_json(f.axis_v)},
                                   {"half_u", half_json(f.half_u)},
                                   {"half_v", half_json(f.half_v)},
                                   {"two_sided", f.two_sided}});
        return j.dump(2);
    }

    Scene scene_from_json(const std::string &text)
    {
        const char *what = "scene";
        const json j = parse(text, what);
        Scene s;
        s.carrier_hz = number(j, "carrier_hz", what);
        if (!(s.carrier_hz > 0.0))
            fail("scene: carrier_hz must be positive");
        s.reflection_loss_db = number_or(j, "reflection_loss_db", s.reflection_loss_db, what);
        if (j.contains("facets"))
        {
            if (!j.at("facets").is_array())
                fail("scene: 'facets' must be an array");
            for (const auto &f : j.at("facets"))
            {
                const bool two_sided = f.contains("two_sided") ? f.at("two_sided").get<bool>() : false;
                try
                {
                    s.facets.push_back(Facet::make(vec_field(f, "center", what), vec_field(f, "axis_u", what),
                                                   vec_field(f, "axis_v", what), half_from(f, "half_u", what),
                                                   half_from(f, "half_v", what), two_sided));
                }
                catch (const std::invalid_argument &e)
                {
                    fail(std::string("scene: ") + e.what());
                }
            }
        }
        return s;
    }

    PathExport PathExport::from_traced(const std::vector<TracedPath> &traced, const Vec3 &tx, const Vec3 &rx, double f0)
    {
        const ReferencePair ref = ReferencePair::make(tx, rx);
        PathExport out;
        out.tx = tx;
        out.rx = rx;
        out.f0 = f0;
        for (const auto &t : traced)
            out.paths.push_back({to_pwa(t, ref), t.route});
        return out;
    }

    std::vector<TracedPath> PathExport::traced() const
    {
        std::vector<TracedPath> out;
        for (const auto &p : paths)
            out.push_back({p.route, p.pwa.gain, p.pwa.delay});
        return out;
    }

    PairObservation PathExport::observation() const
    {
        PairObservation out;
        out.tx = tx;
        out.rx = rx;
        for (const auto &p : paths)
            out.paths.push_back(p.pwa);
        return out;
    }

    std::string paths_to_json(const PathExport &data)
    {
        json j;
        j["tx"] = vec_json(data.tx);
        j["rx"] = vec_json(data.rx);
        j["f0_hz"] = data.f0;
        j["paths"] = json::array();
        for (const auto &p : data.paths)
        {
            json e;
            write_gain(e, p.pwa.gain);
            e["delay_s"] = p.pwa.delay;
            write_angles(e, p.pwa.aoa_az, p.pwa.aoa_el, p.pwa.aod_az, p.pwa.aod_el);
            e["route"] = json::array();
            for (const auto &v : p.route.vertices)
                e["route"].push_back(vec_json(v));
            e["facet_ids"] = p.route.facet_ids;
            j["paths"].push_back(e);
        }
        return j.dump(2);
    }

    PathExport paths_from_json(const std::string &text)
    {
        const char *what = "paths";
        const json j = parse(text, what);
        PathExport out;
        out.tx = vec_field(j, "tx", what);
        out.rx = vec_field(j, "rx", what);
        out.f0 = number(j, "f0_hz", what);
        const json &paths = field(j, "paths", what);
        if (!paths.is_array())
            fail("paths: 'paths' must be an array");
        for (const auto &e : paths)
        {
            ExportedPath p;
            p.pwa.gain = read_gain(e, what);
            p.pwa.delay = number(e, "delay_s", what);
            read_angles(e, p.pwa, what);
            const json &route = field(e, "route", what);
            if (!route.is_array() || route.size() < 2)
                fail("paths: 'route' must list at least the TX and RX points");
            for (const auto &v : route)
                p.route.vertices.push_back(vec_from(v, what));
            if (e.contains("facet_ids"))
                p.route.facet_ids = e.at("facet_ids").get<std::vector<int>>();
            else
                p.route.facet_ids.assign(route.size() - 2, -1);
            if (p.route.facet_ids.size() + 2 != p.route.vertices.size())
                fail("paths: 'facet_ids' must have one entry per interaction point");
            out.paths.push_back(std::move(p));
        }
        return out;
    }

    std::string rm_to_json(const ReferenceModel &model)
    {
        json j;
        j["tx"] = vec_json(model.ref.tx_ref);
        j["rx"] = vec_json(model.ref.rx_ref);
        j["f0_hz"] = model.f0;
        j["paths"] = json::array();
        for (const auto &p : model.paths)
        {
            json e;
            e["tau_s"] = p.rm.delay;
            write_angles(e, p.rm.aoa_az, p.rm.aoa_el, p.rm.aod_az, p.rm.aod_el);
            e["roll_deg"] = rad2deg(p.rm.roll);
            e["s"] = p.rm.s;
            json U = json::array();
            for (int r = 0; r < 3; ++r)
                U.push_back(json::array({p.image.U(r, 0), p.image.U(r, 1), p.image.U(r, 2)}));
            e["U"] = U;
            e["g"] = vec_json(p.image.g);
            write_gain(e, p.rm.gain);
            j["paths"].push_back(e);
        }
        return j.dump(2);
    }

    ReferenceModel rm_from_json(const std::string &text)
    {
        const char *what = "rm";
        const json j = parse(text, what);
        ReferenceModel out;
        out.ref = pair_from(j, what);
        out.f0 = number(j, "f0_hz", what);
        const json &paths = field(j, "paths", what);
        if (!paths.is_array())
            fail("rm: 'paths' must be an array");

        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> offset(-1.0, 1.0);
        std::vector<std::pair<Vec3, Vec3>> probes;
        for (int i = 0; i < 10; ++i)
        {
            const Vec3 dr{offset(rng), offset(rng), offset(rng)};
            const Vec3 dt{offset(rng), offset(rng), offset(rng)};
            probes.emplace_back(out.ref.rx_ref + dr, out.ref.tx_ref + dt);
        }

        for (std::size_t l = 0; l < paths.size(); ++l)
        {
            const json &e = paths[l];
            ModelPath p;
            p.rm.gain = read_gain(e, what);
            p.rm.delay = number(e, "tau_s", what);
            read_angles(e, p.rm, what);
            p.rm.roll = deg2rad(number(e, "roll_deg", what));
            p.rm.s = integer_or(e, "s", 0, what);
            if (p.rm.s != 1 && p.rm.s != -1)
                fail("rm: 's' must be +1 or -1");

            const json &U = field(e, "U", what);
            if (!U.is_array() || U.size() != 3)
                fail("rm: 'U' must be a 3x3 array");
            for (int r = 0; r < 3; ++r)
            {
                const Vec3 row = vec_from(U[r], what);
                p.image.U(r, 0) = row.x;
                p.image.U(r, 1) = row.y;
                p.image.U(r, 2) = row.z;
            }
            p.image.g = vec_field(e, "g", what);
            p.pwa = p.rm.pwa();

            for (const auto &[xr, xt] : probes)
            {
                const double di = rm_distance_image(xr, xt, p.image);
                const double da = rm_distance_angles(xr, xt, out.ref, p.rm);
                if (std::abs(di - da) > 1e-9 * std::max(di, 1.0))
                {
                    std::ostringstream msg;
                    msg << "rm: path " << l << " has inconsistent image and angle parameters (distances "
                        << std::setprecision(17) << di << " vs " << da << ")";
                    fail(msg.str());
                }
            }
            out.paths.push_back(p);
        }
        return out;
    }

    DisplacementConfig displacement_config_from_json(const std::string &text)
    {
        const char *what = "displacement config";
        const json j = parse(text, what);
        DisplacementConfig c;
        c.ref = pair_from(j, what);
        if (j.contains("distances_m"))
            c.spec.distances = number_list(j, "distances_m", what);
        c.spec.directions_per_distance = integer_or(j, "directions_per_distance", c.spec.directions_per_distance, what);
        c.spec.rng_seed = std::uint64_t(integer_or(j, "rng_seed", int(c.spec.rng_seed), what));
        c.bandwidth_hz = number_or(j, "bandwidth_hz", c.bandwidth_hz, what);
        c.n_freq = integer_or(j, "n_freq", c.n_freq, what);
        c.max_bounces = integer_or(j, "max_bounces", c.max_bounces, what);
        if (j.contains("models"))
        {
            c.models.clear();
            try
            {
                for (const auto &name : string_list(j, "models", what))
                    c.models.push_back(estimator_from_string(name));
            }
            catch (const std::invalid_argument &e)
            {
                fail(std::string(what) + ": " + e.what());
            }
        }
        return c;
    }

    CapacityJob capacity_config_from_json(const std::string &text)
    {
        const char *what = "capacity config";
        const json j = parse(text, what);
        CapacityJob job;
        job.ref = pair_from(j, what);
        CapacityConfig &c = job.cfg;

        auto read_array = [&](const char *key, ArraySpec &a)
        {
            if (!j.contains(key))
                return;
            const json &v = j.at(key);
            a.rows = integer_or(v, "rows", a.rows, what);
            a.cols = integer_or(v, "cols", a.cols, what);
            a.spacing = number_or(v, "spacing_m", a.spacing, what);
        };
        read_array("tx_array", c.tx_array);
        read_array("rx_array", c.rx_array);

        if (j.contains("rotations_deg"))
            for (double d : number_list(j, "rotations_deg", what))
                c.rotations.push_back(deg2rad(d));
        c.budget.tx_power_dbm = number_or(j, "tx_power_dbm", c.budget.tx_power_dbm, what);
        c.budget.bandwidth_hz = number_or(j, "bandwidth_hz", c.budget.bandwidth_hz, what);
        c.budget.noise_figure_db = number_or(j, "noise_figure_db", c.budget.noise_figure_db, what);
        c.rate.alpha = number_or(j, "alpha", c.rate.alpha, what);
        c.rate.se_max = number_or(j, "se_max", c.rate.se_max, what);
        c.n_freq = integer_or(j, "n_freq", c.n_freq, what);
        c.max_bounces = integer_or(j, "max_bounces", c.max_bounces, what);
        if (j.contains("dp_distances_m"))
            c.dp_distances = number_list(j, "dp_distances_m", what);
        c.rng_seed = std::uint64_t(integer_or(j, "rng_seed", int(c.rng_seed), what));
        if (j.contains("models"))
        {
            c.models.clear();
            try
            {
                for (const auto &name : string_list(j, "models", what))
                    c.models.push_back(capacity_model_from_string(name));
            }
            catch (const std::invalid_argument &e)
            {
                fail(std::string(what) + ": " + e.what());
            }
        }
        return job;
    }

    void write_errors_csv(std::ostream &os, const std::vector<ErrorRecord> &records)
    {
        os << "model,distance_m,freq_hz,epsilon\n";
        os << std::setprecision(17);
        for (const auto &r : records)
            os << to_string(r.model) << ',' << r.distance << ',' << r.frequency << ',' << r.epsilon << '\n';
    }

    void write_capacity_csv(std::ostream &os, const std::vector<CapacityRow> &rows)
    {
        os << "rotation_deg,model,se_center_bpshz,se_avg_bpshz,rank_used\n";
        os << std::setprecision(17);
        for (const auto &r : rows)
            os << rad2deg(r.rotation) << ',' << to_string(r.model) << ',' << r.se_center << ',' << r.se_avg << ','
               << r.rank_used << '\n';
    }

    std::string read_text_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            fail("cannot open '" + path + "' for reading");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_text_file(const std::string &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            fail("cannot open '" + path + "' for writing");
        out << text;
        if (!out)
            fail("failed writing '" + path + "'");
    }
}
