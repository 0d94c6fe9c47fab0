// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/rf.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "zscan/error.hpp"
#include "zscan/parallel.hpp"
#include "zscan/util.hpp"

namespace zscan {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split_char(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

// Full-token double parse; rejects partial consumption like "1.5x".
bool parse_double(std::string_view token, double& out) {
    token = trim(token);
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

constexpr double kPi = 3.14159265358979323846;

} // namespace

Representation representation_from_name(std::string_view name) {
    if (name == "impedance_magnitude") return Representation::ImpedanceMagnitude;
    if (name == "impedance_real_imag") return Representation::ImpedanceRealImag;
    if (name == "reflection_magnitude") return Representation::ReflectionMagnitude;
    raise(Errc::Config, "UnknownRepresentation",
          "unknown representation '" + std::string(name) + "'");
}

std::string_view representation_name(Representation r) {
    switch (r) {
        case Representation::ImpedanceMagnitude: return "impedance_magnitude";
        case Representation::ImpedanceRealImag: return "impedance_real_imag";
        case Representation::ReflectionMagnitude: return "reflection_magnitude";
    }
    return "impedance_magnitude";
}

std::size_t representation_width(Representation r) {
    return r == Representation::ImpedanceRealImag ? 2 : 1;
}

void validate_trace(const SweepTrace& t, std::size_t min_points) {
    if (t.frequencies_hz.size() != t.gamma.size())
        raise(Errc::InvalidArgument, "LengthMismatch",
              "frequency and sample counts differ");
    if (t.frequencies_hz.size() < min_points)
        raise(Errc::InvalidArgument, "TooFewPoints",
              "trace has " + std::to_string(t.frequencies_hz.size()) +
                  " points, needs at least " + std::to_string(min_points));
    if (!(t.z_ref > 0.0) || !std::isfinite(t.z_ref))
        raise(Errc::InvalidArgument, "InvalidReference",
              "reference impedance must be positive and finite");
    double prev = 0.0;
    for (std::size_t i = 0; i < t.frequencies_hz.size(); ++i) {
        const double f = t.frequencies_hz[i];
        if (!std::isfinite(f) || f <= prev)
            raise(Errc::InvalidArgument, "NonMonotoneFrequencies",
                  "frequencies must be positive and strictly increasing (point " +
                      std::to_string(i) + ")");
        prev = f;
        const cplx g = t.gamma[i];
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
            raise(Errc::InvalidArgument, "NonFiniteValue",
                  "non-finite sample at point " + std::to_string(i));
    }
}

std::vector<std::string> validate_passive(const SweepTrace& t, double slack) {
    validate_trace(t, 1);
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < t.gamma.size(); ++i) {
        const double mag = std::abs(t.gamma[i]);
        if (mag > 1.0 + slack)
            raise(Errc::InvalidArgument, "NotPassive",
                  "|gamma| = " + format_double(mag) + " at " +
                      format_double(t.frequencies_hz[i]) + " Hz exceeds 1 + " +
                      format_double(slack));
        if (mag > 1.0)
            warnings.push_back("point " + std::to_string(i) + " at " +
                               format_double(t.frequencies_hz[i]) + " Hz has |gamma| = " +
                               format_double(mag) + " slightly above 1");
    }
    return warnings;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
    std::vector<std::size_t> counts(classes.size(), 0);
    for (int l : labels) counts[static_cast<std::size_t>(l)]++;
    return counts;
}

LabeledDataset dataset_from_traces(const std::vector<SweepTrace>& traces,
                                   const std::vector<std::string>& roster) {
    LabeledDataset ds;
    ds.classes = roster;
    const bool frozen = !roster.empty();

    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < ds.classes.size(); ++i)
        index[ds.classes[i]] = static_cast<int>(i);

    for (std::size_t i = 0; i < traces.size(); ++i) {
        const SweepTrace& t = traces[i];
        validate_trace(t, 2);
        if (t.label.empty())
            raise(Errc::InvalidArgument, "MissingLabel",
                  "trace " + std::to_string(i) + " has no label");
        if (ds.gamma.empty() && ds.frequencies_hz.empty()) {
            ds.frequencies_hz = t.frequencies_hz;
            ds.z_ref = t.z_ref;
        } else if (t.frequencies_hz != ds.frequencies_hz || t.z_ref != ds.z_ref) {
            raise(Errc::InvalidArgument, "GridMismatch",
                  "trace " + std::to_string(i) +
                      " is on a different frequency grid or reference impedance");
        }
        auto it = index.find(t.label);
        int label;
        if (it != index.end()) {
            label = it->second;
        } else if (frozen) {
            raise(Errc::InvalidArgument, "UnknownLabel",
                  "label '" + t.label + "' is not in the class roster");
        } else {
            label = static_cast<int>(ds.classes.size());
            ds.classes.push_back(t.label);
            index[t.label] = label;
        }
        ds.labels.push_back(label);
        ds.gamma.push_back(t.gamma);
        ds.sources.push_back(t.source);
    }
    return ds;
}

cplx reflection_to_impedance(cplx gamma, double z_ref, double eps_denom) {
    const cplx den = cplx(1.0, 0.0) - gamma;
    if (std::abs(den) <= eps_denom)
        raise(Errc::Numeric, "NearOpenCircuit",
              "reflection coefficient too close to 1; impedance is unbounded");
    return z_ref * (cplx(1.0, 0.0) + gamma) / den;
}

cplx impedance_to_reflection(cplx z, double z_ref, double eps_denom) {
    const cplx den = z + z_ref;
    if (std::abs(den) <= eps_denom)
        raise(Errc::Numeric, "DegenerateLoad",
              "impedance too close to -z_ref; reflection is unbounded");
    return (z - z_ref) / den;
}

SweepTrace parse_touchstone(std::string_view text, std::string_view source) {
    enum class Format { RI, MA, DB };
    bool have_options = false;
    double freq_scale = 0.0;
    Format format = Format::RI;
    double z_ref = 50.0;

    SweepTrace trace;
    trace.source = std::string(source);

    for (std::string_view raw : split_lines(text)) {
        // '!' starts a comment, possibly after data on the same line.
        const std::size_t bang = raw.find('!');
        std::string_view line = trim(bang == std::string_view::npos ? raw : raw.substr(0, bang));
        if (line.empty()) continue;

        if (line.front() == '#') {
            if (have_options)
                raise(Errc::Parse, "MalformedHeader", "duplicate option line");
            if (!trace.frequencies_hz.empty())
                raise(Errc::Parse, "MalformedHeader", "option line after data rows");
            auto tokens = split_ws(line.substr(1));
            if (tokens.size() != 5)
                raise(Errc::Parse, "MalformedHeader",
                      "option line needs '<unit> S <RI|MA|DB> R <z_ref>'");

            const std::string unit = lower(tokens[0]);
            if (unit == "hz") freq_scale = 1.0;
            else if (unit == "khz") freq_scale = 1e3;
            else if (unit == "mhz") freq_scale = 1e6;
            else if (unit == "ghz") freq_scale = 1e9;
            else raise(Errc::Parse, "MalformedHeader",
                       "unknown frequency unit '" + std::string(tokens[0]) + "'");

            if (lower(tokens[1]) != "s")
                raise(Errc::Parse, "UnsupportedFormat",
                      "only S-parameter files are supported");

            const std::string fmt = lower(tokens[2]);
            if (fmt == "ri") format = Format::RI;
            else if (fmt == "ma") format = Format::MA;
            else if (fmt == "db") format = Format::DB;
            else raise(Errc::Parse, "MalformedHeader",
                       "unknown data format '" + std::string(tokens[2]) + "'");

            if (lower(tokens[3]) != "r")
                raise(Errc::Parse, "MalformedHeader", "expected 'R' before reference impedance");
            if (!parse_double(tokens[4], z_ref) || !(z_ref > 0.0) || !std::isfinite(z_ref))
                raise(Errc::Parse, "MalformedHeader",
                      "reference impedance must be a positive number");
            have_options = true;
            continue;
        }

        if (!have_options)
            raise(Errc::Parse, "MalformedHeader", "data before option line");

        auto tokens = split_ws(line);
        std::vector<double> nums(tokens.size());
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (!parse_double(tokens[i], nums[i]))
                raise(Errc::Parse, "ArityError",
                      "data row entry '" + std::string(tokens[i]) + "' is not a number");
        if (nums.size() == 9)
            raise(Errc::Parse, "UnsupportedFormat",
                  "row has 9 columns; multi-port files are not supported");
        if (nums.size() != 3)
            raise(Errc::Parse, "ArityError",
                  "one-port data row needs exactly 3 numbers, got " +
                      std::to_string(nums.size()));

        const double f = nums[0] * freq_scale;
        if (!std::isfinite(f) || f <= 0.0 ||
            (!trace.frequencies_hz.empty() && f <= trace.frequencies_hz.back()))
            raise(Errc::Parse, "NonMonotoneFrequencies",
                  "frequencies must be positive and strictly increasing");

        cplx g;
        switch (format) {
            case Format::RI:
                g = cplx(nums[1], nums[2]);
                break;
            case Format::MA:
                g = std::polar(nums[1], nums[2] * kPi / 180.0);
                break;
            case Format::DB:
                g = std::polar(std::pow(10.0, nums[1] / 20.0), nums[2] * kPi / 180.0);
                break;
        }
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
            raise(Errc::Parse, "NonFiniteValue", "data row produced a non-finite sample");

        trace.frequencies_hz.push_back(f);
        trace.gamma.push_back(g);
    }

    if (!have_options)
        raise(Errc::Parse, "MalformedHeader", "missing option line");
    if (trace.frequencies_hz.empty())
        raise(Errc::Parse, "MalformedHeader", "no data rows");
    trace.z_ref = z_ref;
    validate_trace(trace, 1);
    return trace;
}

LabeledDataset read_dataset_csv(std::string_view text,
                                const std::vector<std::string>& roster) {
    LabeledDataset ds;
    ds.classes = roster;
    const bool frozen = !roster.empty();
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < ds.classes.size(); ++i)
        index[ds.classes[i]] = static_cast<int>(i);

    bool have_header = false;
    std::size_t row_number = 0;

    for (std::string_view raw : split_lines(text)) {
        ++row_number;
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            if (body.substr(0, 6) == "z_ref=") {
                double z = 0.0;
                if (!parse_double(body.substr(6), z) || !(z > 0.0) || !std::isfinite(z))
                    raise(Errc::Parse, "MalformedCsvHeader", "invalid z_ref comment");
                ds.z_ref = z;
            }
            continue;
        }

        auto cells = split_char(line, ',');
        if (!have_header) {
            if (cells.size() < 3 || trim(cells[0]) != "label")
                raise(Errc::Parse, "MalformedCsvHeader",
                      "header must be 'label,<f0>,<f1>,...' with at least two frequencies");
            ds.frequencies_hz.resize(cells.size() - 1);
            double prev = 0.0;
            for (std::size_t i = 1; i < cells.size(); ++i) {
                double f = 0.0;
                if (!parse_double(cells[i], f) || !std::isfinite(f) || f <= prev)
                    raise(Errc::Parse, "NonMonotoneFrequencies",
                          "header frequencies must be positive, strictly increasing numbers");
                ds.frequencies_hz[i - 1] = f;
                prev = f;
            }
            have_header = true;
            continue;
        }

        if (cells.size() != ds.frequencies_hz.size() + 1)
            raise(Errc::Parse, "GridMismatch",
                  "row " + std::to_string(row_number) + " has " +
                      std::to_string(cells.size() - 1) + " samples, grid has " +
                      std::to_string(ds.frequencies_hz.size()));

        const std::string label(trim(cells[0]));
        if (label.empty())
            raise(Errc::Parse, "MissingLabel",
                  "row " + std::to_string(row_number) + " has an empty label");

        int label_idx;
        auto it = index.find(label);
        if (it != index.end()) {
            label_idx = it->second;
        } else if (frozen) {
            raise(Errc::Parse, "UnknownLabel",
                  "label '" + label + "' is not in the class roster");
        } else {
            label_idx = static_cast<int>(ds.classes.size());
            ds.classes.push_back(label);
            index[label] = label_idx;
        }

        std::vector<cplx> samples(ds.frequencies_hz.size());
        for (std::size_t i = 1; i < cells.size(); ++i) {
            auto parts = split_char(cells[i], ':');
            double re = 0.0, im = 0.0;
            if (parts.size() != 2 || !parse_double(parts[0], re) || !parse_double(parts[1], im))
                raise(Errc::Parse, "MalformedEntry",
                      "row " + std::to_string(row_number) + " column " + std::to_string(i) +
                          " is not 're:im'");
            if (!std::isfinite(re) || !std::isfinite(im))
                raise(Errc::Parse, "NonFiniteValue",
                      "row " + std::to_string(row_number) + " column " + std::to_string(i) +
                          " is not finite");
            samples[i - 1] = cplx(re, im);
        }
        ds.labels.push_back(label_idx);
        ds.gamma.push_back(std::move(samples));
        ds.sources.push_back("csv:row" + std::to_string(row_number));
    }

    if (!have_header)
        raise(Errc::Parse, "MalformedCsvHeader", "missing header row");
    return ds;
}

std::string write_dataset_csv(const LabeledDataset& ds) {
    std::string out;
    // Rough reservation: 32 bytes per complex cell keeps reallocation rare.
    out.reserve(64 + ds.trace_count() * (ds.point_count() * 32 + 16) + ds.point_count() * 16);

    if (ds.z_ref != 50.0) {
        out += "# z_ref=";
        out += format_double(ds.z_ref);
        out += '\n';
    }
    out += "label";
    for (double f : ds.frequencies_hz) {
        out += ',';
        out += format_double(f);
    }
    out += '\n';
    for (std::size_t i = 0; i < ds.trace_count(); ++i) {
        out += ds.classes[static_cast<std::size_t>(ds.labels[i])];
        for (const cplx& g : ds.gamma[i]) {
            out += ',';
            out += format_double(g.real());
            out += ':';
            out += format_double(g.imag());
        }
        out += '\n';
    }
    return out;
}

FeatureMatrix feature_matrix(const LabeledDataset& ds, Representation repr,
                             double clamp_ohms) {
    if (!(clamp_ohms > 0.0) || !std::isfinite(clamp_ohms))
        raise(Errc::Config, "InvalidClamp", "clamp must be positive and finite");
    const std::size_t n = ds.trace_count();
    const std::size_t m = ds.point_count();
    const std::size_t width = representation_width(repr);

    FeatureMatrix fm;
    fm.representation = repr;
    fm.clamp_ohms = clamp_ohms;
    fm.values = Matrix(n, m * width);

    // Near-open threshold shared with reflection_to_impedance.
    constexpr double eps = 1e-12;
    const double z_ref = ds.z_ref;

    std::unique_ptr<std::atomic<std::uint8_t>[]> clamped;
    if (repr != Representation::ReflectionMagnitude) {
        clamped = std::make_unique<std::atomic<std::uint8_t>[]>(m * width);
        for (std::size_t c = 0; c < m * width; ++c)
            clamped[c].store(0, std::memory_order_relaxed);
    }

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const std::vector<cplx>& row = ds.gamma[t];
            auto out = fm.values.row(t);
            for (std::size_t j = 0; j < m; ++j) {
                const cplx g = row[j];
                if (repr == Representation::ReflectionMagnitude) {
                    out[j] = std::abs(g);
                    continue;
                }
                const cplx den = cplx(1.0, 0.0) - g;
                const bool open = std::abs(den) <= eps;
                if (repr == Representation::ImpedanceMagnitude) {
                    double v = clamp_ohms;
                    bool hit = true;
                    if (!open) {
                        const double mag = std::abs(z_ref * (cplx(1.0, 0.0) + g) / den);
                        if (std::isfinite(mag) && mag <= clamp_ohms) {
                            v = mag;
                            hit = false;
                        }
                    }
                    if (hit) clamped[j].store(1, std::memory_order_relaxed);
                    out[j] = v;
                } else {
                    double re, im;
                    bool hit = false;
                    if (open) {
                        re = clamp_ohms;
                        im = 0.0;
                        hit = true;
                    } else {
                        const cplx z = z_ref * (cplx(1.0, 0.0) + g) / den;
                        re = z.real();
                        im = z.imag();
                        if (!std::isfinite(re) || re > clamp_ohms) { re = clamp_ohms; hit = true; }
                        else if (re < -clamp_ohms) { re = -clamp_ohms; hit = true; }
                        if (!std::isfinite(im) || im > clamp_ohms) { im = clamp_ohms; hit = true; }
                        else if (im < -clamp_ohms) { im = -clamp_ohms; hit = true; }
                    }
                    if (hit) {
                        clamped[2 * j].store(1, std::memory_order_relaxed);
                        clamped[2 * j + 1].store(1, std::memory_order_relaxed);
                    }
                    out[2 * j] = re;
                    out[2 * j + 1] = im;
                }
            }
        }
    });

    if (clamped) {
        for (std::size_t c = 0; c < m * width; ++c)
            if (clamped[c].load(std::memory_order_relaxed))
                fm.clamped_columns.push_back(c);
    }
    return fm;
}

} // namespace zscan
