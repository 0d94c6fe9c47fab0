// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zscan/rf.hpp"

namespace zscan {

enum class MosPolarity { Pmos, Nmos };

// Bias-point description of one transistor. Overdrive is evaluated on
// magnitudes (|V_D - V_S| - |V_t|) so PMOS and NMOS share one code path.
struct MosfetParams {
    double transconductance = 0.0; // k' in A/V^2
    double aspect_ratio = 0.0;     // W/L
    double v_threshold = 0.0;      // V
    double v_drain = 0.0;          // V
    double v_source = 0.0;         // V
    MosPolarity polarity = MosPolarity::Nmos;
};

// Triode-region on-resistance. Throws Errc::Numeric "SubthresholdBias"
// when the overdrive voltage is not positive.
double r_linear(const MosfetParams& p);

// Saturation-region on-resistance. Same bias precondition.
double r_saturation(const MosfetParams& p);

// Effective switching resistance: arithmetic mean of the two regions.
double r_effective(double r_lin, double r_sat);

struct CapacitanceParams {
    double c_overlap = 0.0;       // C_o, F/m
    double width = 0.0;           // W, m
    double k_bottom = 0.0;        // bottom-plate junction factor
    double area_drain = 0.0;      // AD, m^2
    double cj_bottom = 0.0;       // CJ, F/m^2
    double k_sidewall = 0.0;      // sidewall junction factor
    double perimeter_drain = 0.0; // PD, m
    double cj_sidewall = 0.0;     // CJSW, F/m
    double c_wire = 0.0;          // C_Y, F, taken from extraction
};

struct ParasiticCapacitance {
    double c_gate_drain = 0.0;
    double c_drain_bulk = 0.0;
    double c_total = 0.0;
};

// c_gd = 2*C_o*W; c_db = K_bp*AD*CJ + K_sw*PD*CJSW; total adds C_Y.
ParasiticCapacitance parasitic_capacitance(const CapacitanceParams& p);

// One switching gate reduced to a series RC branch to ground.
struct GateBranch {
    double r_eff = 0.0; // ohm, > 0
    double c_eq = 0.0;  // F, > 0
};

// Branch impedance r - j/(omega*c). omega must be positive.
cplx gate_impedance(const GateBranch& b, double omega);

// Board-level network around the device under test.
struct BaselineNetwork {
    double series_r_ohm = 5.0;
    double series_l_h = 5e-10;
    double shunt_c_f = 2e-12;
};

// Z = series R + jwL, in series with (shunt C parallel to all branches).
// With no branches and zero shunt C this degenerates to R + jwL.
cplx network_impedance(const BaselineNetwork& baseline,
                       std::span<const GateBranch> branches, double omega);

// Per-class synthesis recipe: how many gates switch and from which RC
// ranges their branch parameters are drawn. baseline_perturbation scales
// a per-observation multiplicative wobble on the baseline R, L and C.
struct ActivityProfile {
    std::string class_name;
    double gates_mean = 1.0;
    double gates_jitter = 0.0;
    double r_eff_min_ohm = 0.0;
    double r_eff_max_ohm = 0.0;
    double c_eq_min_f = 0.0;
    double c_eq_max_f = 0.0;
    double baseline_perturbation = 0.0;
};

struct FrequencyGrid {
    double start_hz = 5e5;
    double stop_hz = 4e9;
    std::size_t points = 10000;
};

struct SimulatorConfig {
    FrequencyGrid grid;
    double z_ref = 50.0;
    BaselineNetwork baseline;
    double noise_sigma = 0.01;
    std::size_t observations_per_class = 445;
    std::uint64_t seed = 0;
    std::vector<ActivityProfile> profiles; // empty means default_profiles()
};

// The four stock firmware-activity profiles: idle, max_io, background_exp,
// aes. Parameter ranges are synthetic; they are chosen so classes separate
// cleanly without noise and overlap realistically with it, and are fully
// overridable through the config file.
std::vector<ActivityProfile> default_profiles();

// Config whose profiles field is populated (never empty).
SimulatorConfig default_sim_config();

// Throws Errc::Config (kind "ConfigError") on any invariant violation.
void validate_sim_config(const SimulatorConfig& cfg);

// JSON round trip for SimulatorConfig. Omitted fields take defaults;
// unknown keys are rejected ("UnknownConfigKey") to catch typos.
SimulatorConfig sim_config_from_json(std::string_view json_text);
std::string sim_config_to_json(const SimulatorConfig& cfg);

// Deterministic synthesis: every (class, observation) pair draws from its
// own stream derived from (seed, class index, observation index), so the
// result is a pure function of the config and is stable under any thread
// count. Draw order per observation: gate count, then (r, c) per gate,
// then three baseline factors, then per-frequency noise (re, im).
LabeledDataset synthesize_dataset(const SimulatorConfig& cfg);

} // namespace zscan
