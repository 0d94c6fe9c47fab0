// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/cmos.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "zscan/error.hpp"
#include "zscan/parallel.hpp"
#include "zscan/random.hpp"

namespace zscan {

namespace {

using nlohmann::json;

double overdrive(const MosfetParams& p) {
    if (!(p.transconductance > 0.0))
        raise(Errc::InvalidArgument, "InvalidTransconductance", "k' must be positive");
    if (!(p.aspect_ratio > 0.0))
        raise(Errc::InvalidArgument, "InvalidAspectRatio", "W/L must be positive");
    const double od = std::abs(p.v_drain - p.v_source) - std::abs(p.v_threshold);
    if (!(od > 0.0))
        raise(Errc::Numeric, "SubthresholdBias",
              "overdrive |V_D - V_S| - |V_t| must be positive for resistance evaluation");
    return od;
}

} // namespace

double r_linear(const MosfetParams& p) {
    const double od = overdrive(p);
    return (0.5 * od) / ((3.0 / 8.0) * p.transconductance * p.aspect_ratio * od * od);
}

double r_saturation(const MosfetParams& p) {
    const double od = overdrive(p);
    const double dv = std::abs(p.v_drain - p.v_source);
    return dv / (0.5 * p.transconductance * p.aspect_ratio * od * od);
}

double r_effective(double r_lin, double r_sat) {
    if (!(r_lin > 0.0) || !(r_sat > 0.0))
        raise(Errc::InvalidArgument, "InvalidResistance", "both resistances must be positive");
    return 0.5 * (r_lin + r_sat);
}

ParasiticCapacitance parasitic_capacitance(const CapacitanceParams& p) {
    const double* fields[] = {&p.c_overlap, &p.width,           &p.k_bottom,
                              &p.area_drain, &p.cj_bottom,       &p.k_sidewall,
                              &p.perimeter_drain, &p.cj_sidewall, &p.c_wire};
    for (const double* f : fields)
        if (!(*f >= 0.0) || !std::isfinite(*f))
            raise(Errc::InvalidArgument, "NegativeCapacitanceParam",
                  "capacitance parameters must be nonnegative and finite");
    ParasiticCapacitance out;
    out.c_gate_drain = 2.0 * p.c_overlap * p.width;
    out.c_drain_bulk = p.k_bottom * p.area_drain * p.cj_bottom +
                       p.k_sidewall * p.perimeter_drain * p.cj_sidewall;
    out.c_total = out.c_gate_drain + out.c_drain_bulk + p.c_wire;
    return out;
}

cplx gate_impedance(const GateBranch& b, double omega) {
    if (!(omega > 0.0))
        raise(Errc::InvalidArgument, "InvalidFrequency", "omega must be positive");
    if (!(b.r_eff > 0.0) || !(b.c_eq > 0.0))
        raise(Errc::InvalidArgument, "InvalidBranch", "branch R and C must be positive");
    return cplx(b.r_eff, -1.0 / (omega * b.c_eq));
}

cplx network_impedance(const BaselineNetwork& baseline,
                       std::span<const GateBranch> branches, double omega) {
    if (!(omega > 0.0))
        raise(Errc::InvalidArgument, "InvalidFrequency", "omega must be positive");
    // Admittance of branch r - j/(wc) written as wc(t + j)/(1 + t^2) with
    // t = w*r*c: one division per branch instead of a complex divide.
    double g = 0.0;
    double b = omega * baseline.shunt_c_f;
    for (const GateBranch& br : branches) {
        const double wc = omega * br.c_eq;
        const double t = wc * br.r_eff;
        const double inv = 1.0 / (1.0 + t * t);
        g += wc * t * inv;
        b += wc * inv;
    }
    const double re = baseline.series_r_ohm;
    const double im = omega * baseline.series_l_h;
    if (g == 0.0 && b == 0.0) return cplx(re, im);
    const double inv = 1.0 / (g * g + b * b);
    return cplx(re + g * inv, im - b * inv);
}

std::vector<ActivityProfile> default_profiles() {
    // Synthetic parameter ranges, not calibrated to any physical board.
    // Counts and RC windows are arranged so every class pair separates in
    // at least one spectral region, and so the class ordering differs
    // between regions (total capacitance ranks idle < background < aes ~
    // max_io while plateau resistance ranks max_io < background < idle <
    // aes). Band-dependent orderings keep distant frequency columns from
    // being mutually redundant, which would collapse the selection.
    return {
        {"idle", 24.0, 1.2, 1500.0, 1700.0, 0.25e-12, 0.35e-12, 0.01},
        {"max_io", 180.0, 9.0, 580.0, 620.0, 0.42e-12, 0.48e-12, 0.01},
        {"background_exp", 70.0, 2.5, 1150.0, 1250.0, 0.18e-12, 0.27e-12, 0.01},
        {"aes", 110.0, 6.0, 10450.0, 11550.0, 0.63e-12, 0.77e-12, 0.01},
    };
}

SimulatorConfig default_sim_config() {
    SimulatorConfig cfg;
    cfg.profiles = default_profiles();
    return cfg;
}

void validate_sim_config(const SimulatorConfig& cfg) {
    const auto bad = [](const std::string& what) {
        raise(Errc::Config, "ConfigError", what);
    };
    if (!(cfg.grid.start_hz > 0.0) || !std::isfinite(cfg.grid.start_hz))
        bad("grid.start_hz must be positive");
    if (!(cfg.grid.stop_hz > cfg.grid.start_hz) || !std::isfinite(cfg.grid.stop_hz))
        bad("grid.stop_hz must exceed grid.start_hz");
    if (cfg.grid.points < 2) bad("grid.points must be at least 2");
    if (!(cfg.z_ref > 0.0) || !std::isfinite(cfg.z_ref)) bad("z_ref must be positive");
    if (!(cfg.baseline.series_r_ohm > 0.0)) bad("baseline.series_r_ohm must be positive");
    if (!(cfg.baseline.series_l_h >= 0.0)) bad("baseline.series_l_h must be nonnegative");
    if (!(cfg.baseline.shunt_c_f >= 0.0)) bad("baseline.shunt_c_f must be nonnegative");
    if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma))
        bad("noise_sigma must be nonnegative");
    if (cfg.observations_per_class < 1) bad("observations_per_class must be at least 1");
    if (cfg.profiles.empty()) bad("profiles must not be empty");

    std::set<std::string> names;
    for (const ActivityProfile& p : cfg.profiles) {
        if (p.class_name.empty()) bad("profile class_name must not be empty");
        if (!names.insert(p.class_name).second)
            bad("duplicate profile class_name '" + p.class_name + "'");
        if (!(p.gates_mean > 0.0)) bad("gates_mean must be positive");
        if (!(p.gates_jitter >= 0.0)) bad("gates_jitter must be nonnegative");
        if (!(p.r_eff_min_ohm > 0.0) || !(p.r_eff_max_ohm >= p.r_eff_min_ohm))
            bad("r_eff range must satisfy 0 < min <= max");
        if (!(p.c_eq_min_f > 0.0) || !(p.c_eq_max_f >= p.c_eq_min_f))
            bad("c_eq range must satisfy 0 < min <= max");
        if (!(p.baseline_perturbation >= 0.0) || !(p.baseline_perturbation < 1.0))
            bad("baseline_perturbation must be in [0, 1)");
    }
}

namespace {

// json.at with a Config-category error instead of a json exception.
const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        raise(Errc::Config, "ConfigError", std::string("missing key '") + key + "'");
    return *it;
}

double as_number(const json& j, const char* what) {
    if (!j.is_number())
        raise(Errc::Config, "ConfigError", std::string(what) + " must be a number");
    return j.get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            raise(Errc::Config, "UnknownConfigKey",
                  "unknown key '" + it.key() + "' in " + where);
    }
}

std::pair<double, double> as_range(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        raise(Errc::Config, "ConfigError",
              std::string(what) + " must be a [min, max] number pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

SimulatorConfig sim_config_from_json(std::string_view json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded())
        raise(Errc::Parse, "MalformedJson", "config is not valid JSON");
    if (!j.is_object())
        raise(Errc::Config, "ConfigError", "config root must be a JSON object");

    reject_unknown(j, {"grid", "z_ref", "baseline", "noise_sigma",
                       "observations_per_class", "seed", "profiles"}, "config");

    SimulatorConfig cfg = default_sim_config();

    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, {"start_hz", "stop_hz", "points"}, "grid");
        if (g.contains("start_hz")) cfg.grid.start_hz = as_number(g["start_hz"], "grid.start_hz");
        if (g.contains("stop_hz")) cfg.grid.stop_hz = as_number(g["stop_hz"], "grid.stop_hz");
        if (g.contains("points")) {
            if (!g["points"].is_number_unsigned())
                raise(Errc::Config, "ConfigError", "grid.points must be a nonnegative integer");
            cfg.grid.points = g["points"].get<std::size_t>();
        }
    }
    if (j.contains("z_ref")) cfg.z_ref = as_number(j["z_ref"], "z_ref");
    if (j.contains("baseline")) {
        const json& b = j["baseline"];
        reject_unknown(b, {"series_r_ohm", "series_l_h", "shunt_c_f"}, "baseline");
        if (b.contains("series_r_ohm"))
            cfg.baseline.series_r_ohm = as_number(b["series_r_ohm"], "baseline.series_r_ohm");
        if (b.contains("series_l_h"))
            cfg.baseline.series_l_h = as_number(b["series_l_h"], "baseline.series_l_h");
        if (b.contains("shunt_c_f"))
            cfg.baseline.shunt_c_f = as_number(b["shunt_c_f"], "baseline.shunt_c_f");
    }
    if (j.contains("noise_sigma")) cfg.noise_sigma = as_number(j["noise_sigma"], "noise_sigma");
    if (j.contains("observations_per_class")) {
        if (!j["observations_per_class"].is_number_unsigned())
            raise(Errc::Config, "ConfigError",
                  "observations_per_class must be a nonnegative integer");
        cfg.observations_per_class = j["observations_per_class"].get<std::size_t>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            raise(Errc::Config, "ConfigError", "seed must be a nonnegative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("profiles")) {
        if (!j["profiles"].is_array())
            raise(Errc::Config, "ConfigError", "profiles must be an array");
        cfg.profiles.clear();
        for (const json& p : j["profiles"]) {
            reject_unknown(p, {"class", "gates_mean", "gates_jitter", "r_eff_ohm",
                               "c_eq_f", "baseline_perturbation"}, "profile");
            ActivityProfile ap;
            const json& name = need(p, "class");
            if (!name.is_string())
                raise(Errc::Config, "ConfigError", "profile class must be a string");
            ap.class_name = name.get<std::string>();
            ap.gates_mean = as_number(need(p, "gates_mean"), "gates_mean");
            ap.gates_jitter =
                p.contains("gates_jitter") ? as_number(p["gates_jitter"], "gates_jitter") : 0.0;
            std::tie(ap.r_eff_min_ohm, ap.r_eff_max_ohm) = as_range(need(p, "r_eff_ohm"), "r_eff_ohm");
            std::tie(ap.c_eq_min_f, ap.c_eq_max_f) = as_range(need(p, "c_eq_f"), "c_eq_f");
            ap.baseline_perturbation =
                p.contains("baseline_perturbation")
                    ? as_number(p["baseline_perturbation"], "baseline_perturbation")
                    : 0.0;
            cfg.profiles.push_back(std::move(ap));
        }
    }

    validate_sim_config(cfg);
    return cfg;
}

std::string sim_config_to_json(const SimulatorConfig& cfg) {
    json j;
    j["grid"] = {{"start_hz", cfg.grid.start_hz},
                 {"stop_hz", cfg.grid.stop_hz},
                 {"points", cfg.grid.points}};
    j["z_ref"] = cfg.z_ref;
    j["baseline"] = {{"series_r_ohm", cfg.baseline.series_r_ohm},
                     {"series_l_h", cfg.baseline.series_l_h},
                     {"shunt_c_f", cfg.baseline.shunt_c_f}};
    j["noise_sigma"] = cfg.noise_sigma;
    j["observations_per_class"] = cfg.observations_per_class;
    j["seed"] = cfg.seed;
    json profiles = json::array();
    for (const ActivityProfile& p : cfg.profiles) {
        profiles.push_back({{"class", p.class_name},
                            {"gates_mean", p.gates_mean},
                            {"gates_jitter", p.gates_jitter},
                            {"r_eff_ohm", {p.r_eff_min_ohm, p.r_eff_max_ohm}},
                            {"c_eq_f", {p.c_eq_min_f, p.c_eq_max_f}},
                            {"baseline_perturbation", p.baseline_perturbation}});
    }
    j["profiles"] = std::move(profiles);
    return j.dump(2) + "\n";
}

LabeledDataset synthesize_dataset(const SimulatorConfig& cfg) {
    validate_sim_config(cfg);

    const std::size_t n_classes = cfg.profiles.size();
    const std::size_t obs = cfg.observations_per_class;
    const std::size_t n_points = cfg.grid.points;
    const std::size_t total = n_classes * obs;

    LabeledDataset ds;
    ds.z_ref = cfg.z_ref;
    ds.frequencies_hz.resize(n_points);
    const double step = (cfg.grid.stop_hz - cfg.grid.start_hz) /
                        static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i)
        ds.frequencies_hz[i] = cfg.grid.start_hz + step * static_cast<double>(i);
    ds.frequencies_hz.back() = cfg.grid.stop_hz;

    for (const ActivityProfile& p : cfg.profiles) ds.classes.push_back(p.class_name);
    ds.labels.resize(total);
    ds.gamma.assign(total, {});
    ds.sources.resize(total);

    constexpr double two_pi = 6.283185307179586476925286766559;

    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        std::vector<GateBranch> branches;
        for (std::size_t t = begin; t < end; ++t) {
            const std::size_t ci = t / obs;
            const std::size_t oi = t % obs;
            const ActivityProfile& prof = cfg.profiles[ci];
            Rng rng(derive_seed(cfg.seed, "synthesize", ci, oi));

            const double raw = prof.gates_mean + prof.gates_jitter * rng.uniform(-1.0, 1.0);
            const long long n_gates = std::max(1ll, std::llround(raw));
            branches.clear();
            branches.reserve(static_cast<std::size_t>(n_gates));
            for (long long gidx = 0; gidx < n_gates; ++gidx) {
                GateBranch b;
                b.r_eff = rng.uniform(prof.r_eff_min_ohm, prof.r_eff_max_ohm);
                b.c_eq = rng.uniform(prof.c_eq_min_f, prof.c_eq_max_f);
                branches.push_back(b);
            }
            BaselineNetwork base = cfg.baseline;
            const double s = prof.baseline_perturbation;
            base.series_r_ohm *= 1.0 + s * rng.uniform(-1.0, 1.0);
            base.series_l_h *= 1.0 + s * rng.uniform(-1.0, 1.0);
            base.shunt_c_f *= 1.0 + s * rng.uniform(-1.0, 1.0);

            std::vector<cplx>& out = ds.gamma[t];
            out.resize(n_points);
            for (std::size_t i = 0; i < n_points; ++i) {
                const double omega = two_pi * ds.frequencies_hz[i];
                const cplx z = network_impedance(base, branches, omega);
                cplx g = impedance_to_reflection(z, cfg.z_ref);
                if (cfg.noise_sigma > 0.0) {
                    const double nre = cfg.noise_sigma * rng.normal();
                    const double nim = cfg.noise_sigma * rng.normal();
                    g += cplx(nre, nim);
                }
                out[i] = g;
            }
            ds.labels[t] = static_cast<int>(ci);
            ds.sources[t] = "synth:" + prof.class_name + ":" + std::to_string(oi);
        }
    });

    return ds;
}

} // namespace zscan
