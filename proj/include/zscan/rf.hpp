// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "zscan/matrix.hpp"

namespace zscan {

using cplx = std::complex<double>;

// How a sweep is flattened into feature columns.
enum class Representation {
    ImpedanceMagnitude, // one column per frequency: |Z|
    ImpedanceRealImag,  // two columns per frequency, interleaved Re, Im
    ReflectionMagnitude // one column per frequency: |gamma|
};

Representation representation_from_name(std::string_view name);
std::string_view representation_name(Representation r);

// Columns per frequency point for a representation.
std::size_t representation_width(Representation r);

// One-port sweep: reflection coefficient samples on a positive, strictly
// increasing frequency grid, referenced to z_ref ohms.
struct SweepTrace {
    std::vector<double> frequencies_hz;
    std::vector<cplx> gamma;
    double z_ref = 50.0;
    std::string label;  // empty when unlabeled
    std::string source; // provenance: file path or synthesis id
};

// Structural invariants: matching lengths, at least min_points samples,
// finite values, positive strictly increasing frequencies, z_ref > 0.
// min_points defaults to 2 (a sweep); parsers accepting single-point
// captures pass 1. Throws Errc::InvalidArgument on violation.
void validate_trace(const SweepTrace& t, std::size_t min_points = 2);

// Passivity check for measured data: |gamma| must not exceed 1 + slack.
// Returns a warning string per point inside (1, 1 + slack]; throws
// Errc::InvalidArgument with kind "NotPassive" beyond the slack band.
// Not applied automatically: synthesized noise may push |gamma| slightly
// over 1, which is physical measurement behavior, not an input error.
std::vector<std::string> validate_passive(const SweepTrace& t, double slack = 0.05);

// Labeled sweep collection on one shared grid. Class roster order is
// first-appearance order unless a roster is supplied up front.
struct LabeledDataset {
    std::vector<double> frequencies_hz;
    double z_ref = 50.0;
    std::vector<std::string> classes;
    std::vector<int> labels;                 // index into classes, per trace
    std::vector<std::vector<cplx>> gamma;    // trace-major
    std::vector<std::string> sources;        // per trace

    std::size_t trace_count() const noexcept { return gamma.size(); }
    std::size_t point_count() const noexcept { return frequencies_hz.size(); }
    std::size_t class_count() const noexcept { return classes.size(); }
    std::vector<std::size_t> class_counts() const;
};

// Builds a dataset from traces. All traces must carry a nonempty label and
// bitwise identical grids ("GridMismatch" otherwise). When roster is
// nonempty it is frozen: labels outside it raise "UnknownLabel".
LabeledDataset dataset_from_traces(const std::vector<SweepTrace>& traces,
                                   const std::vector<std::string>& roster = {});

// Reflection coefficient to impedance: z = z_ref * (1 + g) / (1 - g).
// |1 - g| <= eps_denom means a near-open circuit with no finite impedance;
// throws Errc::Numeric with kind "NearOpenCircuit".
cplx reflection_to_impedance(cplx gamma, double z_ref, double eps_denom = 1e-12);

// Impedance to reflection coefficient: g = (z - z_ref) / (z + z_ref).
// Throws "DegenerateLoad" when |z + z_ref| <= eps_denom.
cplx impedance_to_reflection(cplx z, double z_ref, double eps_denom = 1e-12);

// Touchstone v1 one-port (.s1p) parser. Accepts RI, MA and DB formats and
// Hz/kHz/MHz/GHz units; the option line must precede all data rows.
// Parsing is total: any input yields a trace or a structured Errc::Parse
// error (kinds: MalformedHeader, NonMonotoneFrequencies, ArityError,
// UnsupportedFormat). Single-point files parse; dataset assembly is where
// the two-point minimum is enforced.
SweepTrace parse_touchstone(std::string_view text, std::string_view source = "");

// Dataset CSV: header "label,<f0>,<f1>,..." with frequency values in Hz as
// column names, one row per trace, complex samples encoded "re:im".
// Lines starting with '#' are metadata comments; "# z_ref=<ohms>" is
// written when z_ref differs from 50 and honored on read.
// read errors include "GridMismatch" and "UnknownLabel" (frozen roster).
LabeledDataset read_dataset_csv(std::string_view text,
                                const std::vector<std::string>& roster = {});
std::string write_dataset_csv(const LabeledDataset& ds);

// Numeric feature matrix for a dataset, one row per trace. Impedance
// representations clamp to clamp_ohms: near-open points (no finite Z)
// become exactly clamp_ohms (real part; imaginary part 0), finite values
// are clipped into [-clamp_ohms, clamp_ohms] per component. Clamped
// columns are recorded, deduplicated and sorted. Label-independent.
struct FeatureMatrix {
    Matrix values;
    Representation representation = Representation::ImpedanceMagnitude;
    double clamp_ohms = 1e6;
    std::vector<std::size_t> clamped_columns;

    // Frequency index behind a feature column.
    std::size_t frequency_index(std::size_t col) const {
        return representation == Representation::ImpedanceRealImag ? col / 2 : col;
    }
};

FeatureMatrix feature_matrix(const LabeledDataset& ds,
                             Representation repr = Representation::ImpedanceMagnitude,
                             double clamp_ohms = 1e6);

} // namespace zscan
