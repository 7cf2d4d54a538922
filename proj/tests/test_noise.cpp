// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "helpers.hpp"
#include "qmem/circuit.hpp"
#include "qmem/noise.hpp"

using namespace qmem;
using qmem::testing::binom_sigma;

TEST(EnvNoise, ErrorProbability) {
    EXPECT_EQ(env_error_prob(0, 1), 0.0);
    EXPECT_NEAR(env_error_prob(1e6, 1), 0.5, 1e-15);
    EXPECT_NEAR(env_error_prob(0.4, 1), 0.5 * (1 - std::exp(-0.4)), 1e-15);
    EXPECT_NEAR(env_error_prob(0.4, 1), 0.16484, 1e-5);
    double prev = 0;
    for (double t = 0.01; t < 5; t += 0.01) {
        double p = env_error_prob(t, 1);
        EXPECT_GT(p, prev);
        EXPECT_LT(p, 0.5);
        prev = p;
    }
    EXPECT_THROW(env_error_prob(-0.1, 1), ConfigError);
    EXPECT_THROW(env_error_prob(0.1, 0), ConfigError);
}

TEST(EnvNoise, ZeroDurationDrawsNothing) {
    StabilizerTableau t(3);
    auto before = t;
    RandomStream rng(1);
    apply_env_noise(t, 0, 3, env_error_prob(0, 1), EnvKind::Depolarizing, rng);
    EXPECT_EQ(t, before);
    EXPECT_EQ(rng.draws(), 0u);
}

TEST(EnvNoise, DepolarizingFlipRateOnZeroState) {
    const double tau = 0.3;
    const double p = env_error_prob(tau, 1);
    RandomStream rng(2);
    const int shots = 1000000;
    int flips = 0;
    for (int s = 0; s < shots; ++s) {
        StabilizerTableau t(1);
        apply_env_noise(t, 0, 1, p, EnvKind::Depolarizing, rng);
        flips += t.measure_z(0, rng) < 0;
    }
    double expect = 2.0 / 3.0 * p;
    EXPECT_NEAR(flips / double(shots), expect, 4 * binom_sigma(expect, shots));
}

TEST(EnvNoise, DephasingNeverFlipsZ) {
    RandomStream rng(3);
    for (int s = 0; s < 10000; ++s) {
        StabilizerTableau t(1);
        apply_env_noise(t, 0, 1, 0.4, EnvKind::Dephasing, rng);
        ASSERT_EQ(t.measure_z(0, rng), 1);
    }
}

// Two segments compose as independent flips. The saturating error law is not a semigroup, so
// one long segment is measurably different; both facts are checked against closed forms.
TEST(EnvNoise, CompositionOfSegments) {
    const double t1 = 0.15;
    const double t2 = 0.35;
    RandomStream rng(4);
    const int shots = 1000000;
    int split = 0;
    int whole = 0;
    for (int s = 0; s < shots; ++s) {
        StabilizerTableau a(1);
        apply_env_noise(a, 0, 1, env_error_prob(t1, 1), EnvKind::Depolarizing, rng);
        apply_env_noise(a, 0, 1, env_error_prob(t2, 1), EnvKind::Depolarizing, rng);
        split += a.measure_z(0, rng) < 0;
        StabilizerTableau b(1);
        apply_env_noise(b, 0, 1, env_error_prob(t1 + t2, 1), EnvKind::Depolarizing, rng);
        whole += b.measure_z(0, rng) < 0;
    }
    double f1 = 2.0 / 3.0 * env_error_prob(t1, 1);
    double f2 = 2.0 / 3.0 * env_error_prob(t2, 1);
    double composed = f1 + f2 - 2 * f1 * f2;
    double single = 2.0 / 3.0 * env_error_prob(t1 + t2, 1);
    double pa = split / double(shots);
    double pb = whole / double(shots);
    EXPECT_NEAR(pa, composed, 4 * binom_sigma(composed, shots));
    EXPECT_NEAR(pb, single, 4 * binom_sigma(single, shots));
    EXPECT_GT(composed - single, 8 * binom_sigma(single, shots));
}

TEST(EnvNoise, DisjointQubitsAreIndependent) {
    RandomStream rng(5);
    const int shots = 200000;
    std::array<double, 4> counts{};
    const double p = env_error_prob(0.5, 1);
    for (int s = 0; s < shots; ++s) {
        StabilizerTableau t(2);
        apply_env_noise(t, 0, 2, p, EnvKind::Depolarizing, rng);
        int a = t.measure_z(0, rng) < 0;
        int b = t.measure_z(1, rng) < 0;
        counts[static_cast<std::size_t>(2 * a + b)] += 1;
    }
    double f = 2.0 / 3.0 * p;
    std::array<double, 4> expect{(1 - f) * (1 - f), (1 - f) * f, f * (1 - f), f * f};
    double chi2 = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        double e = expect[i] * shots;
        chi2 += (counts[i] - e) * (counts[i] - e) / e;
    }
    // 3 degrees of freedom; 16.27 is the 0.999 quantile.
    EXPECT_LT(chi2, 16.27);
}

TEST(ElementNoise, ZeroRateNeverFaults) {
    RandomStream rng(6);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(sample_element_error(ElementKind::Gate2, 0.0, rng), 0);
    }
    EXPECT_EQ(rng.draws(), 0u);
}

TEST(ElementNoise, TwoQubitFaultsAreUniform) {
    RandomStream rng(7);
    const int shots = 1000000;
    std::array<int, 16> counts{};
    for (int i = 0; i < shots; ++i) {
        counts[static_cast<std::size_t>(sample_element_error(ElementKind::Gate2, 1.0, rng))]++;
    }
    EXPECT_EQ(counts[0], 0);
    const double f = 1.0 / 15;
    for (int c = 1; c < 16; ++c) {
        EXPECT_NEAR(counts[static_cast<std::size_t>(c)] / double(shots), f, 4 * binom_sigma(f, shots)) << c;
    }
}

TEST(ElementNoise, SingleQubitRateAndTypes) {
    RandomStream rng(8);
    const int shots = 1000000;
    std::array<int, 4> counts{};
    for (int i = 0; i < shots; ++i) {
        counts[static_cast<std::size_t>(sample_element_error(ElementKind::Gate1, 0.005, rng))]++;
    }
    int errors = shots - counts[0];
    EXPECT_NEAR(errors / double(shots), 0.005, 4 * binom_sigma(0.005, shots));
    for (int c = 1; c < 4; ++c) {
        EXPECT_NEAR(counts[static_cast<std::size_t>(c)] / double(errors), 1.0 / 3, 4 * binom_sigma(1.0 / 3, errors));
    }
}

TEST(ElementNoise, MeasurementFaultInvertsOutcome) {
    RandomStream rng(9);
    for (auto basis : kAllAxes) {
        StabilizerTableau t(1);
        Element prep = Element::prep(0, basis);
        NoFaults nf;
        execute(prep, t, nf, rng);
        InjectedFault flip{0, 1, 0};
        EXPECT_EQ(execute(Element::meas(0, basis), t, flip, rng), 1) << axis_char(basis);
        NoFaults again;
        StabilizerTableau u(1);
        execute(prep, u, again, rng);
        EXPECT_EQ(execute(Element::meas(0, basis), u, again, rng), 0);
    }
}

TEST(ElementNoise, PrepFaultFollowsPreparation) {
    RandomStream rng(10);
    StabilizerTableau t(1);
    InjectedFault z{0, 3, 0};
    execute(Element::prep(0, PauliAxis::X), t, z, rng);
    EXPECT_EQ(t.peek(PauliString::parse("X")), -1);
}
