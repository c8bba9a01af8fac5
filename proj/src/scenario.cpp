// SPDX-License-Identifier: Apache-2.0
//
// holobeam: holographic beamforming models and optimizers for ISAC
// Copyright (C) 2026 The holobeam authors
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

#include "scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "holobeam/beamopt.hpp"
#include "holobeam/beamtrain.hpp"
#include "holobeam/chanest.hpp"
#include "holobeam/error.hpp"
#include "holobeam/random.hpp"
#include "holobeam/wavefield.hpp"
#include "parallel.hpp"
#include "table.hpp"

#ifndef HOLOBEAM_VERSION_STRING
#define HOLOBEAM_VERSION_STRING "0.0.0"
#endif

namespace holobeam::detail {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kinds{"beampattern", "pareto", "jcas", "codesign", "distsense", "chanest", "beamtrain"};

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    fail(ErrorKind::parse, (path.empty() ? std::string("/") : path) + ": " + what);
}

// Typed view of a JSON object that remembers which fields were read.
class Obj {
public:
    Obj(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) schema_error(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    std::string at(const std::string& key) const { return path_ + "/" + key; }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        used_.insert(key);
        if (!has(key)) {
            if (!fallback) schema_error(at(key), "missing required number");
            return *fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_number()) schema_error(at(key), "expected a number");
        return v.get<double>();
    }

    double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const double v = number(key, fallback);
        if (!(v > 0.0) || !std::isfinite(v)) schema_error(at(key), "must be a positive finite number");
        return v;
    }

    std::uint64_t integer(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) {
        used_.insert(key);
        if (!has(key)) {
            if (!fallback) schema_error(at(key), "missing required integer");
            return *fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            schema_error(at(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        if (!j_.at(key).is_boolean()) schema_error(at(key), "expected true or false");
        return j_.at(key).get<bool>();
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        used_.insert(key);
        if (!has(key)) {
            if (!fallback) schema_error(at(key), "missing required string");
            return *fallback;
        }
        if (!j_.at(key).is_string()) schema_error(at(key), "expected a string");
        return j_.at(key).get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) {
        used_.insert(key);
        if (!has(key)) {
            if (!fallback) schema_error(at(key), "missing required array of numbers");
            return *fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_array()) schema_error(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) schema_error(at(key) + "/" + std::to_string(i), "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    // Elements of an array of objects; empty when absent and optional.
    std::vector<Obj> objects(const std::string& key, bool required) {
        used_.insert(key);
        std::vector<Obj> out;
        if (!has(key)) {
            if (required) schema_error(at(key), "missing required array");
            return out;
        }
        const auto& v = j_.at(key);
        if (!v.is_array()) schema_error(at(key), "expected an array of objects");
        for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], at(key) + "/" + std::to_string(i));
        return out;
    }

    Obj object(const std::string& key) {
        used_.insert(key);
        if (!has(key)) schema_error(at(key), "missing required object");
        return Obj(j_.at(key), at(key));
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key())) schema_error(at(item.key()), "unknown field");
    }

private:
    const ordered_json& j_;
    std::string path_;
    std::set<std::string> used_;
};

RhsConfig parse_rhs(Obj o) {
    const auto cols = o.integer("cols");
    const auto rows = o.integer("rows", 1);
    const double ghz = o.positive("frequency_ghz");
    const double spacing = o.positive("spacing_wavelengths");
    const double wavelength = speed_of_light / (ghz * 1e9);
    if (cols == 0 || rows == 0) schema_error(o.at("cols"), "surface needs at least one row and one column");
    RhsConfig cfg = rows == 1 ? RhsConfig::linear(cols, spacing * wavelength, wavelength)
                              : RhsConfig::planar(rows, cols, spacing * wavelength, wavelength);
    cfg.waveguide_index = o.positive("waveguide_index", cfg.waveguide_index);
    cfg.attenuation = o.number("attenuation", cfg.attenuation);
    if (o.has("power_split")) cfg.power_split = o.numbers("power_split");
    else o.numbers("power_split", cfg.power_split);
    o.finish();
    try {
        cfg.validate();
    } catch (const Error& e) {
        schema_error("/rhs", e.what());
    }
    return cfg;
}

Location parse_location(Obj& o) {
    Location loc;
    loc.theta = deg2rad(o.number("theta_deg"));
    loc.phi = deg2rad(o.number("phi_deg", 0.0));
    if (o.has("range_m")) loc.range = o.positive("range_m");
    else o.number("range_m", 0.0);
    if (std::abs(loc.theta) >= pi / 2) schema_error(o.at("theta_deg"), "angle must lie strictly inside (-90, 90)");
    return loc;
}

double db(double x) { return db_to_linear(x); }

SolveOptions parse_solver(Obj& o, std::uint64_t seed) {
    SolveOptions opt;
    opt.seed = seed;
    opt.restarts = o.integer("restarts", opt.restarts);
    opt.rounds = o.integer("rounds", opt.rounds);
    opt.max_iter = static_cast<int>(o.integer("max_iter", static_cast<std::uint64_t>(opt.max_iter)));
    if (opt.restarts == 0) schema_error(o.at("restarts"), "need at least one restart");
    return opt;
}

// ---------------------------------------------------------------- pipelines

struct Output {
    fs::path dir;
    std::vector<std::string> files;
    ordered_json report = ordered_json::object();
    bool infeasible = false;

    void table(const std::string& name, const Table& t) {
        export_table(t, Format::csv, dir / name);
        files.push_back(name);
    }
    void json(const std::string& name, const ordered_json& j) {
        write_text(dir / name, j.dump(2) + "\n");
        files.push_back(name);
    }
};

Table pattern_table(const RhsConfig& cfg, const HolographicPattern& p) {
    Table t{{"element", "row", "col", "psi"}, {}};
    for (std::size_t n = 0; n < p.size(); ++n)
        t.add({double(n), double(cfg.row_of(n)), double(cfg.col_of(n)), p.amplitudes(static_cast<Eigen::Index>(n))});
    return t;
}

Table trace_table(const std::string& name, const std::vector<double>& trace) {
    Table t{{"iteration", name}, {}};
    for (std::size_t i = 0; i < trace.size(); ++i) t.add({double(i), trace[i]});
    return t;
}

ordered_json metrics_json(const SolveReport& r) {
    ordered_json m = ordered_json::object();
    for (const auto& [k, v] : r.metrics) {
        format_number(v);
        m[k] = v;
    }
    return m;
}

void solve_summary(Output& out, const SolveReport& r) {
    out.report["status"] = r.status;
    out.report["feasible"] = r.feasible;
    out.report["objective"] = std::isfinite(r.objective) ? ordered_json(r.objective) : ordered_json(nullptr);
    out.report["restarts_used"] = r.restarts_used;
    out.report["metrics"] = metrics_json(r);
    out.infeasible = !r.feasible;
}

CVec user_channel(const RhsConfig& cfg, const Location& loc, double gain_db) {
    return std::sqrt(db(gain_db)) * steering(cfg, loc);
}

void run_beampattern(Obj b, const RhsConfig& cfg, std::uint64_t, Output* out) {
    std::vector<Location> targets;
    for (auto& t : b.objects("targets", true)) {
        targets.push_back(parse_location(t));
        t.finish();
    }
    if (targets.empty()) schema_error(b.at("targets"), "need at least one target");
    auto weights = b.numbers("weights", std::vector<double>(targets.size(), 1.0 / double(targets.size())));
    if (weights.size() != targets.size()) schema_error(b.at("weights"), "one weight per target required");
    const double lo = b.number("theta_min_deg", -90.0), hi = b.number("theta_max_deg", 90.0);
    const double step = b.positive("step_deg", 0.5);
    if (!(lo < hi)) schema_error(b.at("theta_min_deg"), "theta_min_deg must be below theta_max_deg");
    const double tx_power = b.positive("tx_power", 1.0);
    const auto levels = b.integer("quantize_levels", 0);
    if (levels == 1) schema_error(b.at("quantize_levels"), "need at least two levels");
    b.finish();
    if (!out) return;

    std::vector<HolographicPattern> pats;
    for (const auto& t : targets) pats.push_back(pattern_for_location(cfg, t));
    const Vec w = Eigen::Map<const Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    const auto window = ApertureWindow::full(cfg);
    HolographicPattern p = scale_to_leakage(cfg, superpose_patterns(pats, w).pattern, window);
    if (levels >= 2) p = scale_to_leakage(cfg, quantize_pattern(p, levels), window);
    const Beamformer bf = make_beamformer(cfg, p);
    const CMat digital = CMat::Constant(static_cast<Eigen::Index>(cfg.feed_count), 1,
                                        cd(std::sqrt(tx_power / double(cfg.feed_count)), 0.0));
    const auto samples = beampattern(bf, cfg, window, digital, direction_grid(deg2rad(lo), deg2rad(hi), deg2rad(step)));
    Table t{{"theta_deg", "phi_deg", "power_w"}, {}};
    for (const auto& s : samples) t.add({rad2deg(s.direction.theta), rad2deg(s.direction.phi), s.power});
    out->table("beampattern.csv", t);
    out->table("pattern.csv", pattern_table(cfg, p));
    out->report["status"] = "ok";
}

void run_pareto(Obj b, const RhsConfig& cfg, std::uint64_t seed, Output* out) {
    ParetoScenario sc;
    sc.cfg = cfg;
    sc.tx_power = b.positive("tx_power", 1.0);
    sc.noise_power = b.positive("noise_power", 0.01);
    for (double t : b.numbers("targets_deg")) sc.targets.push_back(deg2rad(t));
    for (auto& p : b.objects("comm_paths", true)) {
        sc.comm_paths.push_back({deg2rad(p.number("theta_deg")), db(p.number("gain_db", 0.0))});
        p.finish();
    }
    std::vector<double> thresholds;
    if (b.has("thresholds_db")) {
        for (double t : b.numbers("thresholds_db")) thresholds.push_back(db(t));
        b.numbers("thresholds", std::vector<double>{});
    } else {
        thresholds = b.numbers("thresholds");
        b.numbers("thresholds_db", std::vector<double>{});
    }
    if (thresholds.empty()) schema_error(b.at("thresholds"), "need at least one threshold");
    for (double t : thresholds)
        if (!(t >= 0.0)) schema_error(b.at("thresholds"), "thresholds must be non-negative");
    const bool reference = b.boolean("pa_reference", false);
    SolveOptions opt = parse_solver(b, seed);
    b.finish();
    try {
        sc.validate();
    } catch (const Error& e) {
        schema_error("/pareto", e.what());
    }
    if (!out) return;

    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    const ParetoFront front = pareto_front(sc, thresholds, opt);
    std::optional<ParetoFront> pa;
    if (reference) pa = pa_reference_front(sc, thresholds);
    auto lookup = [](const ParetoFront& f, double g) -> Cell {
        for (const auto& p : f.points)
            if (p.comm_level == g) return p.sensing_power;
        return std::string();
    };
    Table t{{"gamma_c_db", "p_s_w", "status"}, {}};
    if (pa) t.columns.push_back("pa_p_s_w");
    for (double g : thresholds) {
        const Cell v = lookup(front, g);
        std::vector<Cell> row{g > 0.0 ? Cell(linear_to_db(g)) : Cell(std::string("-inf")), v, std::string(std::holds_alternative<double>(v) ? "ok" : "infeasible")};
        if (pa) row.push_back(lookup(*pa, g));
        t.add(std::move(row));
    }
    out->table("pareto.csv", t);
    out->report["status"] = "ok";
    out->report["max_comm_level"] = front.max_comm_level;
    out->report["infeasible_thresholds"] = front.infeasible.size();
}

void run_jcas(Obj b, const RhsConfig& cfg, std::uint64_t seed, Output* out) {
    JcasProblem pr;
    pr.cfg = cfg;
    pr.window = ApertureWindow::full(cfg);
    pr.tx_power = b.positive("tx_power", 1.0);
    pr.noise_power = b.positive("noise_power", 1e-3);
    for (auto& u : b.objects("users", false)) {
        const Location loc = parse_location(u);
        pr.users.push_back({user_channel(cfg, loc, u.number("gain_db", 0.0)), db(u.number("sinr_db"))});
        u.finish();
    }
    for (double t : b.numbers("targets_deg")) pr.radar.directions.push_back(Location{deg2rad(t), 0.0, inf});
    pr.radar.alpha0 = b.number("alpha0", 0.0);
    for (auto& band : b.objects("bands", false)) {
        pr.radar.bands.emplace_back(band.number("lower"), band.number("upper"));
        band.finish();
    }
    SolveOptions opt = parse_solver(b, seed);
    b.finish();
    try {
        pr.radar.validate();
    } catch (const Error& e) {
        schema_error("/jcas", e.what());
    }
    if (!out) return;

    const SolveReport r = jcas_transmit(pr, opt);
    solve_summary(*out, r);
    out->table("jcas.csv", trace_table("objective", r.objective_trace));
    if (r.feasible) out->table("pattern.csv", pattern_table(cfg, r.pattern));
}

void run_codesign(Obj b, const RhsConfig& cfg, std::uint64_t seed, Output* out) {
    CodesignProblem pr;
    pr.tx = cfg;
    pr.rx = cfg;
    if (b.has("rx_cols")) {
        pr.rx = RhsConfig::linear(b.integer("rx_cols"), cfg.element_spacing, cfg.wavelength);
        pr.rx.waveguide_index = cfg.waveguide_index;
        pr.rx.attenuation = cfg.attenuation;
    } else {
        b.integer("rx_cols", 0);
    }
    for (auto& t : b.objects("targets", true)) {
        SensingTarget st;
        st.location = parse_location(t);
        st.reflection = cd(t.number("reflection", 1.0), 0.0);
        pr.targets.push_back(st);
        t.finish();
    }
    for (auto& u : b.objects("users", false)) {
        const Location loc = parse_location(u);
        pr.users.push_back({user_channel(cfg, loc, u.number("gain_db", 0.0)), db(u.number("sinr_db"))});
        u.finish();
    }
    pr.tx_power = b.positive("tx_power", 1.0);
    pr.comm_noise = b.positive("comm_noise", 1e-3);
    pr.noise_ext = b.number("noise_ext", 1e-3);
    pr.noise_int = b.number("noise_int", 1e-3);
    pr.efficiency_tx = b.positive("efficiency_tx", 1.0);
    pr.efficiency_rx = b.positive("efficiency_rx", 1.0);
    SolveOptions opt = parse_solver(b, seed);
    b.finish();
    try {
        pr.validate();
    } catch (const Error& e) {
        schema_error("/codesign", e.what());
    }
    if (!out) return;

    const SolveReport r = codesign_maxmin(pr, opt);
    solve_summary(*out, r);
    out->table("codesign.csv", trace_table("tau", r.objective_trace));
    if (r.feasible) out->table("pattern.csv", pattern_table(cfg, r.pattern));
}

void run_distsense(Obj b, const RhsConfig& cfg, std::uint64_t seed, Output* out) {
    DistsenseProblem pr;
    const auto p_count = b.integer("tx_subarrays", 1);
    const auto q_count = b.integer("rx_subarrays", 1);
    if (p_count == 0 || q_count == 0) schema_error(b.at("tx_subarrays"), "need at least one subarray of each kind");
    pr.tx.assign(p_count, cfg);
    pr.rx.assign(q_count, cfg);
    for (auto& t : b.objects("targets", true)) {
        DistTarget d;
        for (double a : t.numbers("tx_deg")) d.tx_angles.push_back(deg2rad(a));
        for (double a : t.numbers("rx_deg")) d.rx_angles.push_back(deg2rad(a));
        d.reflection = cd(t.number("reflection", 1.0), 0.0);
        d.delay = t.integer("delay", 0);
        d.clutter = t.boolean("clutter", false);
        pr.scene.push_back(d);
        t.finish();
    }
    const auto length = b.integer("waveform_length", p_count * cfg.feed_count);
    pr.noise_power = b.positive("noise_power", 1e-3);
    SolveOptions opt = parse_solver(b, seed);
    b.finish();
    try {
        pr.waveforms = orthogonal_waveforms(p_count, cfg.feed_count, length);
        pr.validate();
    } catch (const Error& e) {
        schema_error("/distsense", e.what());
    }
    if (!out) return;

    const SolveReport r = distsense_maxmin(pr, opt);
    solve_summary(*out, r);
    out->table("distsense.csv", trace_table("worst_average_sinr", r.objective_trace));
}

void run_chanest(Obj b, const RhsConfig& cfg, std::uint64_t seed, Output* out) {
    const std::size_t n = cfg.cols;
    const auto q = b.integer("pilots");
    const auto trials = b.integer("trials", 100);
    const auto snrs = b.numbers("snr_db");
    const auto far_paths = b.integer("far_paths", 1);
    const auto near_paths = b.integer("near_paths", 1);
    const double theta_max = b.positive("theta_max_deg", 60.0);
    const auto ranges = b.numbers("near_range_m", std::vector<double>{2.0, 8.0});
    const auto bins = b.integer("angular_bins", n / 2);
    const auto rings = b.integer("range_rings", 12);
    const double epsilon = b.positive("epsilon", 0.5);
    const bool use_omp = b.boolean("omp", true);
    const bool use_pd = b.boolean("pd_omp", true);
    b.finish();
    if (cfg.rows != 1) schema_error("/rhs/rows", "channel estimation uses a single row");
    if (q == 0 || q > n) schema_error(b.at("pilots"), "pilot count must lie in [1, cols]");
    if (far_paths + near_paths == 0) schema_error(b.at("far_paths"), "need at least one path");
    if (ranges.size() != 2 || !(ranges[0] > 0.0 && ranges[0] <= ranges[1]))
        schema_error(b.at("near_range_m"), "expected [min, max] with 0 < min <= max");
    if (theta_max >= 90.0) schema_error(b.at("theta_max_deg"), "must lie below 90");
    if (bins == 0) schema_error(b.at("angular_bins"), "need at least one bin");
    if (!use_omp && !use_pd) schema_error(b.at("omp"), "select at least one estimator");
    if (snrs.empty()) schema_error(b.at("snr_db"), "need at least one SNR");
    if (!out) return;

    const double d = cfg.element_spacing, lam = cfg.wavelength;
    const Dictionary angular = build_dictionary(n, d, lam, DictionaryDomain::angular, bins);
    const Dictionary joint = build_dictionary(n, d, lam, DictionaryDomain::joint, bins, rings, epsilon);
    const std::size_t k = far_paths + near_paths;
    struct Row {
        double omp = 0.0, pd = 0.0;
    };
    std::vector<Row> rows(snrs.size() * trials);
    parallel_for(rows.size(), [&](std::size_t i) {
        const std::size_t s = i / trials, t = i % trials;
        const std::uint64_t ts = seed + t;
        Rng rng(mix_seed(ts, 1));
        std::vector<PathSpec> spec;
        for (std::size_t p = 0; p < k; ++p) {
            PathSpec ps;
            ps.theta = deg2rad(uniform(rng, -theta_max, theta_max));
            if (p >= far_paths) {
                ps.regime = Regime::near;
                ps.range = uniform(rng, ranges[0], ranges[1]);
            }
            spec.push_back(ps);
        }
        const HybridChannel ch = synth_channel(spec, n, d, lam, mix_seed(ts, 2));
        const PilotSet pilots = simulate_pilots(ch, cfg, q, snrs[s], mix_seed(ts, 3));
        if (use_omp) rows[i].omp = nmse(omp(pilots, angular, std::min<std::size_t>(k, q)).estimate, ch.vector);
        if (use_pd) rows[i].pd = nmse(pd_omp(pilots, joint).estimate, ch.vector);
    });
    Table t{{"snr_db", "seed", "estimator", "nmse"}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double snr = snrs[i / trials], ts = double(seed + i % trials);
        if (use_omp) t.add({snr, ts, std::string("omp"), rows[i].omp});
        if (use_pd) t.add({snr, ts, std::string("pd_omp"), rows[i].pd});
    }
    out->table("chanest.csv", t);
    out->report["status"] = "ok";
    out->report["dictionary_atoms"] = joint.size();
}

ordered_json trace_json(const TrainingTrace& tr) {
    ordered_json j = ordered_json::object();
    j["slots_used"] = tr.slots_used;
    ordered_json slots = ordered_json::array();
    for (const auto& s : tr.slots)
        slots.push_back({{"phase", s.phase == TrainingSlot::Phase::angle ? "angle" : "distance"},
                         {"layer", s.layer},
                         {"codeword", s.codeword},
                         {"window", s.window},
                         {"power", s.power}});
    j["slots"] = slots;
    ordered_json users = ordered_json::array();
    for (const auto& u : tr.users)
        users.push_back({{"failed", u.failed},
                         {"truth", {{"phi", u.truth.phi}, {"mu", u.truth.mu}}},
                         {"estimate", {{"phi", u.estimate.phi}, {"mu", u.estimate.mu}}},
                         {"cell", u.cell},
                         {"bin", u.bin},
                         {"correct", u.cell_correct},
                         {"path", u.path}});
    j["users"] = users;
    j["max_leakage_ratio"] = tr.max_leakage_ratio;
    return j;
}

void run_beamtrain(Obj b, const RhsConfig& cfg, std::uint64_t seed, Output* out) {
    CodebookOptions co;
    co.layers = b.integer("layers", co.layers);
    co.span = std::sin(deg2rad(b.positive("span_deg", 60.0)));
    if (b.has("mu_max")) co.mu_max = b.positive("mu_max");
    else b.number("mu_max", 0.0);
    co.seed = seed;
    const auto users = b.integer("users", 1);
    const auto trials = b.integer("trials", 100);
    const auto snrs = b.numbers("snr_db");
    const auto bin_count = b.integer("range_bins", 2);
    const bool both = !b.has("windows");
    const bool windows = b.boolean("windows", true);
    const double k_db = b.number("rician_k_db", inf);
    const auto scatterers = b.integer("scatterers", 8);
    const bool far_only = b.boolean("far_only", false);
    b.finish();
    if (co.layers == 0 || co.layers > 10) schema_error(b.at("layers"), "layers must lie in [1, 10]");
    if (co.span >= 1.0) schema_error(b.at("span_deg"), "span must lie below 90 degrees");
    if (users == 0) schema_error(b.at("users"), "need at least one user");
    if (bin_count == 0) schema_error(b.at("range_bins"), "need at least one range bin");
    if (snrs.empty()) schema_error(b.at("snr_db"), "need at least one SNR");
    if (trials == 0) schema_error(b.at("trials"), "need at least one trial");
    if (!out) return;

    const Codebook book = design_angle_codebook(cfg, co);
    const RangeBins bins{bin_count, book.mu_max};
    const std::vector<bool> modes = both ? std::vector<bool>{true, false} : std::vector<bool>{windows};
    Table t{{"snr_db", "windows", "n_a", "error_rate"}, {}};
    ordered_json first_trace;
    for (double snr : snrs)
        for (bool on : modes) {
            std::vector<std::size_t> errors(trials, 0);
            std::vector<TrainingTrace> keep(1);
            parallel_for(trials, [&](std::size_t i) {
                Rng rng(mix_seed(seed + i, 5));
                std::vector<TrainingUser> us;
                for (std::size_t u = 0; u < users; ++u) {
                    PhiMuPoint p{uniform(rng, -book.span, book.span), far_only ? 0.0 : uniform(rng, 0.0, book.mu_max)};
                    const Location loc = phi_mu_inverse(p);
                    us.push_back({loc.theta, loc.range, 0.0});
                }
                TrainingOptions to;
                to.bins = bins;
                to.snr_db = snr;
                to.windows = on;
                to.rician_k = k_db == inf ? inf : db(k_db);
                to.scatterers = scatterers;
                to.seed = seed + i;
                TrainingTrace tr = run_training(cfg, us, book, to);
                for (const auto& o : tr.users) errors[i] += o.cell_correct ? 0 : 1;
                if (i == 0) keep[0] = std::move(tr);
            });
            std::size_t total = 0;
            for (auto e : errors) total += e;
            t.add({snr, std::string(on ? "on" : "off"), double(book.layers.back().aperture),
                   double(total) / double(trials * users)});
            if (first_trace.is_null()) first_trace = trace_json(keep[0]);
        }
    out->table("beamtrain.csv", t);
    out->json("beamtrain_trace.json", first_trace);
    out->report["status"] = "ok";
    out->report["slots_used"] = first_trace["slots_used"];
}

using Pipeline = void (*)(Obj, const RhsConfig&, std::uint64_t, Output*);

Pipeline pipeline(const std::string& kind) {
    if (kind == "beampattern") return run_beampattern;
    if (kind == "pareto") return run_pareto;
    if (kind == "jcas") return run_jcas;
    if (kind == "codesign") return run_codesign;
    if (kind == "distsense") return run_distsense;
    if (kind == "chanest") return run_chanest;
    return run_beamtrain;
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    try {
        sc.doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        const std::string what = e.what();
        const auto at = what.find(": ", what.find("column"));
        fail(ErrorKind::parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                   (at == std::string::npos ? what : what.substr(at + 2)));
    }
    Obj top(sc.doc, "");
    if (top.integer("schema") != scenario_schema) schema_error("/schema", "unsupported schema version");
    sc.kind = top.string("kind");
    if (!kinds.count(sc.kind)) schema_error("/kind", "unknown kind '" + sc.kind + "'");
    sc.seed = top.integer("seed", 0);
    if (top.has("output_dir")) sc.output_dir = top.string("output_dir");
    else top.string("output_dir", "");
    sc.rhs = parse_rhs(top.object("rhs"));
    for (const auto& k : kinds)
        if (k != sc.kind && top.has(k)) schema_error("/" + k, "parameter block does not match kind '" + sc.kind + "'");
    pipeline(sc.kind)(top.object(sc.kind), sc.rhs, sc.seed, nullptr);
    top.finish();
    return sc;
}

Scenario load_scenario(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

RunManifest run_scenario(const Scenario& scenario, const fs::path& out_dir, std::optional<std::uint64_t> seed) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t s = seed.value_or(scenario.seed);
    ordered_json effective = scenario.doc;
    effective["seed"] = s;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) fail(ErrorKind::io, "cannot create output directory " + out_dir.string());

    Output out;
    out.dir = out_dir;
    out.report["kind"] = scenario.kind;
    out.report["seed"] = s;
    Obj top(scenario.doc, "");
    pipeline(scenario.kind)(top.object(scenario.kind), scenario.rhs, s, &out);
    out.json("report.json", out.report);

    RunManifest m;
    m.scenario_hash = hex(fnv1a(effective.dump()));
    m.version = HOLOBEAM_VERSION_STRING;
    m.files = out.files;
    m.status = out.infeasible ? "infeasible" : "ok";
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ordered_json mj{{"scenario_hash", m.scenario_hash},
                    {"version", m.version},
                    {"kind", scenario.kind},
                    {"seed", s},
                    {"status", m.status},
                    {"wall_time_s", m.wall_seconds},
                    {"files", m.files}};
    write_text(out_dir / "manifest.json", mj.dump(2) + "\n");
    return m;
}

}  // namespace holobeam::detail
