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

#include "helpers.hpp"
#include "qmem/endpoints.hpp"

using namespace qmem;

namespace {

/// Element kinds of one noiseless Alice then Bob pass.
std::vector<ElementKind> chain_kinds(EndpointStyle style, const CodeSpec& code, PauliAxis axis, int sign,
                                     CzRealization cz) {
    std::vector<ElementKind> kinds;
    NoFaults rec{0, &kinds};
    RandomStream rng(1);
    StabilizerTableau t(code.n + endpoint_ancillas(style));
    alice_prepare(style, code, axis, sign, t, rec, rng, cz);
    bob_guess(style, code, t, axis, rec, rng);
    return kinds;
}

struct ScanResult {
    std::size_t injections = 0;
    std::size_t wrong = 0;
};

/// Injects every single fault into the Alice-Bob chain with nothing in between.
ScanResult scan_chain(EndpointStyle style, const CodeSpec& code, PauliAxis axis, int sign,
                      CzRealization cz = CzRealization::Native) {
    auto kinds = chain_kinds(style, code, axis, sign, cz);
    ScanResult r;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        for (int f = 1; f <= fault_choices(kinds[k]); ++f) {
            for (std::uint64_t rep = 0; rep < 4; ++rep) {
                InjectedFault inj{k, f, 0};
                RandomStream rng(stream_seed(11, k, static_cast<std::uint64_t>(f), rep));
                StabilizerTableau t(code.n + endpoint_ancillas(style));
                alice_prepare(style, code, axis, sign, t, inj, rng, cz);
                ++r.injections;
                if (bob_guess(style, code, t, axis, inj, rng) != sign) {
                    ++r.wrong;
                }
            }
        }
    }
    return r;
}

bool holds_codeword(const StabilizerTableau& t, const CodeSpec& code, PauliAxis axis, int sign) {
    for (const auto& g : code.stabilizers) {
        if (t.peek(g.widened(t.num_qubits())) != 1) {
            return false;
        }
    }
    return t.peek(code.logical(axis).widened(t.num_qubits())) == sign;
}

}  // namespace

TEST(Endpoints, SupportMatrix) {
    for (auto c : {CodeName::Five, CodeName::Steane, CodeName::Surface9}) {
        for (auto a : kAllAxes) {
            EXPECT_TRUE(endpoint_supports(EndpointStyle::Ideal, c, a));
            EXPECT_EQ(endpoint_supports(EndpointStyle::NoisyFT, c, a), c == CodeName::Steane && a == PauliAxis::Z);
            EXPECT_EQ(endpoint_supports(EndpointStyle::NoisyNonFT, c, a), c == CodeName::Five && a == PauliAxis::X);
        }
    }
    StabilizerTableau t(8);
    NoFaults nf;
    RandomStream rng(1);
    EXPECT_THROW(alice_prepare(EndpointStyle::NoisyFT, five_qubit_code(), PauliAxis::Z, 1, t, nf, rng),
                 ConfigError);
    EXPECT_THROW(alice_prepare(EndpointStyle::NoisyNonFT, five_qubit_code(), PauliAxis::Z, 1, t, nf, rng),
                 ConfigError);
    EXPECT_THROW(bob_guess(EndpointStyle::NoisyFT, steane_code(), t, PauliAxis::X, nf, rng), ConfigError);
    StabilizerTableau small(7);
    EXPECT_THROW(alice_prepare(EndpointStyle::NoisyFT, steane_code(), PauliAxis::Z, 1, small, nf, rng), ConfigError);
    EXPECT_EQ(*parse_endpoint_style("noisy_ft"), EndpointStyle::NoisyFT);
    EXPECT_FALSE(parse_endpoint_style("noisy"));
}

TEST(Endpoints, IdealRoundTripIsExact) {
    for (auto c : {CodeName::Five, CodeName::Steane, CodeName::Surface9}) {
        const CodeSpec& code = code_by_name(c);
        RandomStream rng(5);
        for (auto axis : kAllAxes) {
            for (int sign : {1, -1}) {
                for (int rep = 0; rep < 50; ++rep) {
                    StabilizerTableau t(code.n + 2);
                    NoFaults nf;
                    alice_prepare(EndpointStyle::Ideal, code, axis, sign, t, nf, rng);
                    ASSERT_TRUE(holds_codeword(t, code, axis, sign));
                    ASSERT_EQ(bob_guess(EndpointStyle::Ideal, code, t, axis, nf, rng), sign);
                    EXPECT_EQ(nf.count, 0u);
                }
            }
        }
    }
}

TEST(Endpoints, NoiselessNoisyFtPreparesExactCodeword) {
    const CodeSpec& code = steane_code();
    RandomStream rng(2);
    for (int sign : {1, -1}) {
        StabilizerTableau t(8);
        NoFaults nf;
        EXPECT_EQ(alice_prepare(EndpointStyle::NoisyFT, code, PauliAxis::Z, sign, t, nf, rng), 0u);
        EXPECT_TRUE(holds_codeword(t, code, PauliAxis::Z, sign));
        EXPECT_EQ(bob_guess(EndpointStyle::NoisyFT, code, t, PauliAxis::Z, nf, rng), sign);
    }
}

TEST(Endpoints, NoiselessNonFtPreparesExactCodeword) {
    const CodeSpec& code = five_qubit_code();
    RandomStream rng(2);
    for (auto cz : {CzRealization::Native, CzRealization::BasisChange}) {
        for (int sign : {1, -1}) {
            StabilizerTableau t(5);
            NoFaults nf;
            alice_prepare(EndpointStyle::NoisyNonFT, code, PauliAxis::X, sign, t, nf, rng, cz);
            EXPECT_TRUE(holds_codeword(t, code, PauliAxis::X, sign));
            EXPECT_EQ(bob_guess(EndpointStyle::NoisyNonFT, code, t, PauliAxis::X, nf, rng), sign);
        }
    }
    const PauliString& rep = detail::five_short_logical_x();
    EXPECT_EQ(rep.weight(), 3u);
    EXPECT_EQ(code.syndrome_of(rep), 0u);
    EXPECT_FALSE(code.is_logical_error(rep * code.logical_x));
}

TEST(Endpoints, NoisyFtChainSurvivesEverySingleFault) {
    for (int sign : {1, -1}) {
        auto r = scan_chain(EndpointStyle::NoisyFT, steane_code(), PauliAxis::Z, sign);
        EXPECT_GT(r.injections, 0u);
        EXPECT_EQ(r.wrong, 0u) << "sign " << sign;
    }
}

TEST(Endpoints, AcceptedNoisyFtStateHasCorrectableError) {
    // Stronger than the chain scan: a perfect decoder also recovers the accepted state.
    const CodeSpec& code = steane_code();
    for (int sign : {1, -1}) {
        std::vector<ElementKind> kinds;
        NoFaults rec{0, &kinds};
        RandomStream r0(1);
        StabilizerTableau t0(8);
        alice_prepare(EndpointStyle::NoisyFT, code, PauliAxis::Z, sign, t0, rec, r0);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            for (int f = 1; f <= fault_choices(kinds[k]); ++f) {
                InjectedFault inj{k, f, 0};
                RandomStream rng(stream_seed(4, k, static_cast<std::uint64_t>(f)));
                StabilizerTableau t(8);
                alice_prepare(EndpointStyle::NoisyFT, code, PauliAxis::Z, sign, t, inj, rng);
                EXPECT_EQ(ideal_correct_and_decode(code, t, PauliAxis::Z, rng), sign) << k << " " << f;
            }
        }
    }
}

TEST(Endpoints, NoisyFtBobCorrectsAnySingleMeasurementFlip) {
    const CodeSpec& code = steane_code();
    RandomStream rng(9);
    for (int sign : {1, -1}) {
        StabilizerTableau base(8);
        NoFaults nf;
        alice_prepare(EndpointStyle::Ideal, code, PauliAxis::Z, sign, base, nf, rng);
        for (std::uint64_t q = 0; q < 7; ++q) {
            StabilizerTableau t = base;
            InjectedFault inj{q, 1, 0};
            EXPECT_EQ(bob_guess(EndpointStyle::NoisyFT, code, t, PauliAxis::Z, inj, rng), sign) << q;
            EXPECT_EQ(inj.count, 7u);
        }
        // Two flips defeat the distance-3 correction.
        StabilizerTableau t = base;
        struct TwoFlips {
            int n = 0;
            int next(ElementKind) {
                return n++ < 2 ? 1 : 0;
            }
        } two;
        EXPECT_EQ(bob_guess(EndpointStyle::NoisyFT, code, t, PauliAxis::Z, two, rng), -sign);
    }
}

TEST(Endpoints, NonFtChainIsFirstOrderSensitive) {
    const CodeSpec& code = five_qubit_code();
    auto kinds = chain_kinds(EndpointStyle::NoisyNonFT, code, PauliAxis::X, 1, CzRealization::Native);
    auto r = scan_chain(EndpointStyle::NoisyNonFT, code, PauliAxis::X, 1);
    EXPECT_GT(r.wrong, 0u);

    // First-order prediction of the failure rate from the single-fault scan, per unit p_e.
    double slope = 0;
    {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            int choices = fault_choices(kinds[k]);
            std::size_t bad = 0;
            for (int f = 1; f <= choices; ++f) {
                for (int rep = 0; rep < 4; ++rep, ++idx) {
                    InjectedFault inj{k, f, 0};
                    RandomStream rng(stream_seed(11, k, static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(rep)));
                    StabilizerTableau t(5);
                    alice_prepare(EndpointStyle::NoisyNonFT, code, PauliAxis::X, 1, t, inj, rng);
                    bad += bob_guess(EndpointStyle::NoisyNonFT, code, t, PauliAxis::X, inj, rng) != 1;
                }
            }
            slope += static_cast<double>(bad) / (4.0 * choices);
        }
    }
    const double p = 0.002;
    const int shots = 200000;
    RandomStream rng(stream_seed(21, 0));
    int wrong = 0;
    for (int i = 0; i < shots; ++i) {
        SampledFaults sf{p, &rng};
        StabilizerTableau t(5);
        alice_prepare(EndpointStyle::NoisyNonFT, code, PauliAxis::X, 1, t, sf, rng);
        wrong += bob_guess(EndpointStyle::NoisyNonFT, code, t, PauliAxis::X, sf, rng) != 1;
    }
    double rate = static_cast<double>(wrong) / shots;
    double expected = slope * p;
    EXPECT_NEAR(rate, expected, 4 * qmem::testing::binom_sigma(expected, shots) + 2 * p * p * kinds.size() * kinds.size());
}

TEST(Endpoints, RejectedEncodingsAreRetried) {
    const CodeSpec& code = steane_code();
    RandomStream rng(stream_seed(5, 5));
    std::uint64_t rejected = 0;
    for (int i = 0; i < 2000; ++i) {
        SampledFaults sf{0.05, &rng};
        StabilizerTableau t(8);
        rejected += alice_prepare(EndpointStyle::NoisyFT, code, PauliAxis::Z, 1, t, sf, rng);
    }
    EXPECT_GT(rejected, 0u);
}
