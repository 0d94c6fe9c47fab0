// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "zscan/error.hpp"
#include "zscan/random.hpp"
#include "zscan/rf.hpp"

using namespace zscan;

namespace {

std::string ts_header(const char* unit, const char* fmt) {
    return std::string("# ") + unit + " S " + fmt + " R 50\n";
}

// Checks that fn() throws an Error with the given kind.
template <typename Fn>
std::string thrown_kind(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

} // namespace

TEST_SUITE("rf") {

TEST_CASE("reflection to impedance on reference points") {
    CHECK(reflection_to_impedance(cplx(0.0, 0.0), 50.0) == cplx(50.0, 0.0));
    CHECK(reflection_to_impedance(cplx(-1.0, 0.0), 50.0) == cplx(0.0, 0.0));
    const cplx z = reflection_to_impedance(cplx(0.2, 0.0), 50.0);
    CHECK(z.real() == doctest::Approx(75.0).epsilon(1e-14));
    CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("impedance to reflection on reference points") {
    CHECK(impedance_to_reflection(cplx(50.0, 0.0), 50.0) == cplx(0.0, 0.0));
    const cplx g = impedance_to_reflection(cplx(75.0, 0.0), 50.0);
    CHECK(g.real() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(g.imag() == doctest::Approx(0.0).epsilon(1e-14));
    const cplx s = impedance_to_reflection(cplx(0.0, 0.0), 50.0);
    CHECK(s.real() == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("conversion round trip over the unit disc") {
    Rng rng(derive_seed(42, "rf-roundtrip"));
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        // Uniform over |g| <= 0.99: keeps the denominator 1 - g away
        // from zero so the relative bound below is meaningful.
        cplx g;
        do {
            g = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        } while (std::abs(g) > 0.99);
        const cplx back = impedance_to_reflection(reflection_to_impedance(g, 50.0), 50.0);
        const double rel = std::abs(back - g) / std::max(1e-3, std::abs(g));
        worst = std::max(worst, rel);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("near-open reflection has no finite impedance") {
    CHECK(thrown_kind([] { reflection_to_impedance(cplx(1.0, 0.0), 50.0); }) ==
          "NearOpenCircuit");
    CHECK(thrown_kind([] { reflection_to_impedance(cplx(1.0 + 1e-13, 0.0), 50.0); }) ==
          "NearOpenCircuit");
    // Just outside the guard band: finite and huge.
    const cplx z = reflection_to_impedance(cplx(1.0 - 1e-9, 0.0), 50.0);
    CHECK(std::abs(z) > 1e9);
}

TEST_CASE("load at minus z_ref is degenerate") {
    CHECK(thrown_kind([] { impedance_to_reflection(cplx(-50.0, 0.0), 50.0); }) ==
          "DegenerateLoad");
}

TEST_CASE("touchstone RI basics") {
    const SweepTrace t = parse_touchstone(ts_header("GHz", "RI") + "1.0 0.2 0.0\n");
    REQUIRE(t.frequencies_hz.size() == 1);
    CHECK(t.frequencies_hz[0] == doctest::Approx(1e9).epsilon(1e-15));
    CHECK(t.gamma[0] == cplx(0.2, 0.0));
    CHECK(t.z_ref == 50.0);
}

TEST_CASE("touchstone MA angle convention") {
    const SweepTrace t = parse_touchstone(ts_header("MHz", "MA") + "500 1.0 180\n");
    CHECK(t.frequencies_hz[0] == doctest::Approx(5e8).epsilon(1e-15));
    CHECK(std::abs(t.gamma[0] - cplx(-1.0, 0.0)) <= 1e-12);
}

TEST_CASE("touchstone DB magnitude convention") {
    // -6.02059991327962... dB is magnitude 0.5 exactly in the 20*log10 sense.
    char row[128];
    std::snprintf(row, sizeof row, "2e6 %.17g 90\n", 20.0 * std::log10(0.5));
    const SweepTrace t = parse_touchstone(ts_header("Hz", "DB") + row);
    CHECK(std::abs(t.gamma[0] - cplx(0.0, 0.5)) <= 1e-12);
}

TEST_CASE("touchstone formats agree on the same sweep") {
    const std::vector<double> freqs = {1e6, 2e6, 3e6};
    const std::vector<cplx> gam = {{0.3, 0.4}, {-0.25, 0.1}, {0.05, -0.85}};
    std::string ri = ts_header("Hz", "RI");
    std::string ma = ts_header("Hz", "MA");
    std::string db = ts_header("Hz", "DB");
    char buf[256];
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const double mag = std::abs(gam[i]);
        const double ang = std::arg(gam[i]) * 180.0 / std::acos(-1.0);
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", freqs[i], gam[i].real(),
                      gam[i].imag());
        ri += buf;
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", freqs[i], mag, ang);
        ma += buf;
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", freqs[i],
                      20.0 * std::log10(mag), ang);
        db += buf;
    }
    const SweepTrace a = parse_touchstone(ri);
    const SweepTrace b = parse_touchstone(ma);
    const SweepTrace c = parse_touchstone(db);
    REQUIRE(a.frequencies_hz.size() == 3);
    REQUIRE(b.frequencies_hz.size() == 3);
    REQUIRE(c.frequencies_hz.size() == 3);
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        CHECK(std::abs(a.gamma[i] - b.gamma[i]) <= 1e-9);
        CHECK(std::abs(a.gamma[i] - c.gamma[i]) <= 1e-9);
        CHECK(std::abs(a.gamma[i] - gam[i]) <= 1e-9);
    }
}

TEST_CASE("touchstone unit scaling") {
    for (const auto& [unit, scale] :
         std::vector<std::pair<const char*, double>>{{"Hz", 1.0},
                                                     {"kHz", 1e3},
                                                     {"MHz", 1e6},
                                                     {"GHz", 1e9}}) {
        const SweepTrace t = parse_touchstone(ts_header(unit, "RI") + "2 0.1 0.0\n");
        CHECK(t.frequencies_hz[0] == doctest::Approx(2.0 * scale).epsilon(1e-15));
    }
}

TEST_CASE("touchstone comments and blank lines are ignored") {
    const std::string text = "! vendor banner\n\n" + ts_header("Hz", "RI") +
                             "! mid comment\n1e6 0.1 0.0\n2e6 0.2 0.0 ! inline\n";
    const SweepTrace t = parse_touchstone(text);
    CHECK(t.frequencies_hz.size() == 2);
    CHECK(t.gamma[1] == cplx(0.2, 0.0));
}

TEST_CASE("touchstone structured parse errors") {
    CHECK(thrown_kind([] { parse_touchstone(""); }) == "MalformedHeader");
    CHECK(thrown_kind([] { parse_touchstone("1e6 0.1 0.0\n"); }) == "MalformedHeader");
    CHECK(thrown_kind([] { parse_touchstone("# parsec S RI R 50\n1 0 0\n"); }) ==
          "MalformedHeader");
    CHECK(thrown_kind([] { parse_touchstone("# Hz S RI R 50\n"); }) == "MalformedHeader");
    CHECK(thrown_kind([] {
              parse_touchstone(ts_header("Hz", "RI") + "1e6 0 0\n1e6 0 0\n");
          }) == "NonMonotoneFrequencies");
    CHECK(thrown_kind([] {
              parse_touchstone(ts_header("Hz", "RI") + "2e6 0 0\n1e6 0 0\n");
          }) == "NonMonotoneFrequencies");
    CHECK(thrown_kind([] { parse_touchstone(ts_header("Hz", "RI") + "1e6 0.1\n"); }) ==
          "ArityError");
    CHECK(thrown_kind([] { parse_touchstone(ts_header("Hz", "RI") + "1e6 a b\n"); }) ==
          "ArityError");
    CHECK(thrown_kind([] { parse_touchstone("# Hz Y RI R 50\n1e6 0 0\n"); }) ==
          "UnsupportedFormat");
    CHECK(thrown_kind([] {
              parse_touchstone(ts_header("Hz", "RI") + "1e6 1 0 0 0 0 0 0 0\n");
          }) == "UnsupportedFormat");
}

TEST_CASE("single point parses but cannot form a dataset") {
    SweepTrace t = parse_touchstone(ts_header("Hz", "RI") + "1e6 0.1 0.0\n");
    CHECK(t.frequencies_hz.size() == 1);
    t.label = "a";
    SweepTrace u = t;
    u.label = "b";
    CHECK(thrown_kind([&] { dataset_from_traces({t, u}); }) == "TooFewPoints");
}

TEST_CASE("dataset assembly enforces one shared grid") {
    SweepTrace a = parse_touchstone(ts_header("Hz", "RI") + "1e6 0.1 0\n2e6 0.2 0\n");
    a.label = "x";
    SweepTrace b = parse_touchstone(ts_header("Hz", "RI") + "1e6 0.1 0\n3e6 0.2 0\n");
    b.label = "y";
    CHECK(thrown_kind([&] { dataset_from_traces({a, b}); }) == "GridMismatch");

    SweepTrace c = a;
    c.label.clear();
    CHECK(thrown_kind([&] { dataset_from_traces({a, c}); }) == "MissingLabel");

    SweepTrace d = a;
    d.label = "z";
    CHECK(thrown_kind([&] { dataset_from_traces({a, d}, {"x", "y"}); }) == "UnknownLabel");

    const LabeledDataset ds = dataset_from_traces({a, a, d});
    CHECK(ds.trace_count() == 3);
    CHECK(ds.classes == std::vector<std::string>{"x", "z"});
    CHECK(ds.class_counts() == std::vector<std::size_t>{2, 1});
}

TEST_CASE("dataset csv round trip is byte identical") {
    SweepTrace a = parse_touchstone(ts_header("Hz", "RI") +
                                    "1e6 0.125 -0.25\n2.5e6 -0.5 0.0625\n");
    a.label = "idle";
    SweepTrace b = a;
    b.label = "aes";
    b.gamma[0] = cplx(0.3, 0.7);
    const LabeledDataset ds = dataset_from_traces({a, b});
    const std::string text = write_dataset_csv(ds);
    const LabeledDataset back = read_dataset_csv(text);
    CHECK(back.classes == ds.classes);
    CHECK(back.labels == ds.labels);
    CHECK(back.frequencies_hz == ds.frequencies_hz);
    CHECK(back.gamma == ds.gamma);
    CHECK(write_dataset_csv(back) == text);
}

TEST_CASE("dataset csv keeps a non-default reference impedance") {
    SweepTrace a = parse_touchstone("# Hz S RI R 75\n1e6 0.1 0\n2e6 0.2 0\n");
    a.label = "x";
    SweepTrace b = a;
    b.label = "y";
    const LabeledDataset ds = dataset_from_traces({a, b});
    const std::string text = write_dataset_csv(ds);
    CHECK(text.find("z_ref=75") != std::string::npos);
    CHECK(read_dataset_csv(text).z_ref == 75.0);
}

TEST_CASE("dataset csv structured errors") {
    CHECK(thrown_kind([] { read_dataset_csv(""); }) == "MalformedCsvHeader");
    CHECK(thrown_kind([] { read_dataset_csv("label,1e6,2e6\nx,0:0\n"); }) ==
          "GridMismatch");
    CHECK(thrown_kind([] { read_dataset_csv("label,1e6,2e6\n,0:0,0:0\n"); }) ==
          "MissingLabel");
    CHECK(thrown_kind([] { read_dataset_csv("label,1e6,2e6\nx,0:0,zz:0\n"); }) ==
          "MalformedEntry");
    CHECK(thrown_kind([] { read_dataset_csv("label,2e6,1e6\nx,0:0,0:0\n"); }) ==
          "NonMonotoneFrequencies");
    CHECK(thrown_kind([] {
              read_dataset_csv("label,1e6,2e6\nq,0:0,0:0\n", {"x", "y"});
          }) == "UnknownLabel");
}

TEST_CASE("passivity validation uses a slack band") {
    SweepTrace t;
    t.frequencies_hz = {1e6, 2e6};
    t.gamma = {cplx(1.02, 0.0), cplx(0.5, 0.0)};
    t.z_ref = 50.0;
    const auto warnings = validate_passive(t, 0.05);
    CHECK(warnings.size() == 1);
    t.gamma[0] = cplx(1.06, 0.0);
    CHECK(thrown_kind([&] { validate_passive(t, 0.05); }) == "NotPassive");
}

TEST_CASE("feature matrix of a matched sweep is the reference impedance") {
    SweepTrace a;
    a.frequencies_hz = {1e6, 2e6, 3e6};
    a.gamma = {cplx(0, 0), cplx(0, 0), cplx(0, 0)};
    a.label = "x";
    SweepTrace b = a;
    b.label = "y";
    const LabeledDataset ds = dataset_from_traces({a, b});
    const FeatureMatrix fm = feature_matrix(ds);
    REQUIRE(fm.values.rows() == 2);
    REQUIRE(fm.values.cols() == 3);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(fm.values(r, c) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(fm.clamped_columns.empty());
}

TEST_CASE("feature representations and widths") {
    SweepTrace a;
    a.frequencies_hz = {1e6, 2e6};
    a.gamma = {cplx(0.2, 0.0), cplx(0.0, 0.5)};
    a.label = "x";
    SweepTrace b = a;
    b.label = "y";
    const LabeledDataset ds = dataset_from_traces({a, b});

    const FeatureMatrix mag = feature_matrix(ds, Representation::ImpedanceMagnitude);
    CHECK(mag.values.cols() == 2);
    CHECK(mag.values(0, 0) == doctest::Approx(75.0).epsilon(1e-12));

    const FeatureMatrix ri = feature_matrix(ds, Representation::ImpedanceRealImag);
    CHECK(ri.values.cols() == 4);
    CHECK(ri.frequency_index(3) == 1);
    const cplx z = reflection_to_impedance(cplx(0.0, 0.5), 50.0);
    CHECK(ri.values(0, 2) == doctest::Approx(z.real()).epsilon(1e-12));
    CHECK(ri.values(0, 3) == doctest::Approx(z.imag()).epsilon(1e-12));

    const FeatureMatrix refl = feature_matrix(ds, Representation::ReflectionMagnitude);
    CHECK(refl.values(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(refl.values(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("feature matrix clamps near-open points") {
    SweepTrace a;
    a.frequencies_hz = {1e6, 2e6};
    a.gamma = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    a.label = "x";
    SweepTrace b = a;
    b.label = "y";
    const LabeledDataset ds = dataset_from_traces({a, b});
    const FeatureMatrix fm = feature_matrix(ds, Representation::ImpedanceMagnitude, 1e6);
    CHECK(fm.values(0, 0) == 1e6);
    CHECK(fm.values(0, 1) == doctest::Approx(50.0));
    CHECK(fm.clamped_columns == std::vector<std::size_t>{0});
}

TEST_CASE("feature matrix ignores labels") {
    SweepTrace a;
    a.frequencies_hz = {1e6, 2e6};
    a.gamma = {cplx(0.1, 0.2), cplx(-0.3, 0.1)};
    a.label = "x";
    SweepTrace b = a;
    b.label = "y";
    b.gamma[0] = cplx(0.4, -0.2);
    LabeledDataset ds = dataset_from_traces({a, b});
    const FeatureMatrix before = feature_matrix(ds);
    std::swap(ds.labels[0], ds.labels[1]);
    const FeatureMatrix after = feature_matrix(ds);
    CHECK(before.values.data().size() == after.values.data().size());
    for (std::size_t i = 0; i < before.values.data().size(); ++i)
        CHECK(before.values.data()[i] == after.values.data()[i]);
}

TEST_CASE("representation names round trip") {
    for (const auto r : {Representation::ImpedanceMagnitude,
                         Representation::ImpedanceRealImag,
                         Representation::ReflectionMagnitude}) {
        CHECK(representation_from_name(representation_name(r)) == r);
        CHECK(representation_width(r) == (r == Representation::ImpedanceRealImag ? 2 : 1));
    }
    CHECK(thrown_kind([] { representation_from_name("bogus"); }) ==
          "UnknownRepresentation");
}

} // TEST_SUITE("rf")
