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

#include "ft_check.hpp"
#include "helpers.hpp"
#include "qmem/ec_cycles.hpp"

using namespace qmem;

namespace {

struct Variant {
    CodeName code;
    EcStyle style;
};

const Variant kAll[] = {
    {CodeName::Five, EcStyle::NonFT},        {CodeName::Five, EcStyle::ShorFT},
    {CodeName::Five, EcStyle::FlagFT},       {CodeName::Steane, EcStyle::NonFT},
    {CodeName::Steane, EcStyle::ShorFT},     {CodeName::Steane, EcStyle::FlagFT},
    {CodeName::Surface9, EcStyle::NonFT},    {CodeName::Surface9, EcStyle::SurfaceOrderedFT},
};

std::string name(const Variant& v) {
    return std::string(code_label(v.code)) + "/" + ec_style_label(v.style);
}

}  // namespace

TEST(EcCycle, RejectsUnsupportedStyles) {
    EXPECT_THROW(EcCycle(surface9_code(), EcStyle::ShorFT), ConfigError);
    EXPECT_THROW(EcCycle(surface9_code(), EcStyle::FlagFT), ConfigError);
    EXPECT_THROW(EcCycle(five_qubit_code(), EcStyle::SurfaceOrderedFT), ConfigError);
    EXPECT_FALSE(parse_ec_style("foo"));
    EXPECT_EQ(*parse_ec_style("flag_ft"), EcStyle::FlagFT);
}

TEST(EcCycle, NoiselessCycleLeavesCodewordAlone) {
    for (const auto& v : kAll) {
        for (auto cz : {CzRealization::Native, CzRealization::BasisChange}) {
            EcCycle cyc(code_by_name(v.code), v.style, {cz, false});
            RandomStream rng(3);
            for (auto axis : kAllAxes) {
                auto t = encode_ideal(cyc.code(), axis, -1, cyc.ancillas());
                NoFaults nf;
                auto out = cyc.run(t, nf, rng);
                EXPECT_EQ(out.syndrome, 0u) << name(v);
                EXPECT_FALSE(out.flag_raised);
                EXPECT_TRUE(out.correction.is_identity());
                EXPECT_EQ(out.restarts, 0u);
                for (const auto& s : cyc.code().stabilizers) {
                    EXPECT_EQ(t.peek(s.widened(t.num_qubits())), 1);
                }
                EXPECT_EQ(t.peek(cyc.code().logical(axis).widened(t.num_qubits())), -1) << name(v);
            }
        }
    }
}

TEST(EcCycle, NoiselessCycleCorrectsAnySingleQubitError) {
    for (const auto& v : kAll) {
        EcCycle cyc(code_by_name(v.code), v.style);
        const auto& code = cyc.code();
        RandomStream rng(4);
        for (std::uint32_t q = 0; q < code.n; ++q) {
            for (auto a : kAllAxes) {
                auto t = encode_ideal(code, PauliAxis::Z, 1, cyc.ancillas());
                t.apply_pauli(PauliString::single(t.num_qubits(), q, a));
                NoFaults nf;
                auto out = cyc.run(t, nf, rng);
                EXPECT_NE(out.syndrome, 0u);
                for (const auto& s : code.stabilizers) {
                    EXPECT_EQ(t.peek(s.widened(t.num_qubits())), 1) << name(v);
                }
                EXPECT_EQ(t.peek(code.logical_z.widened(t.num_qubits())), 1) << name(v) << " q" << q;
            }
        }
    }
}

TEST(EcCycle, FlagTablesBuildWithoutCollisions) {
    for (auto cz : {CzRealization::Native, CzRealization::BasisChange}) {
        EcCycle five(five_qubit_code(), EcStyle::FlagFT, {cz, false});
        EcCycle steane(steane_code(), EcStyle::FlagFT, {cz, false});
        for (std::uint32_t j = 0; j < 4; ++j) {
            EXPECT_GT(five.flag_table_size(j), 1u);
        }
        for (std::uint32_t j = 0; j < 6; ++j) {
            EXPECT_GT(steane.flag_table_size(j), 1u);
        }
    }
}

TEST(EcCycle, FaultTolerantStylesSurviveEverySingleFault) {
    for (const auto& v : kAll) {
        if (v.style == EcStyle::NonFT) {
            continue;
        }
        for (auto cz : {CzRealization::Native, CzRealization::BasisChange}) {
            EcCycle cyc(code_by_name(v.code), v.style, {cz, false});
            for (auto axis : kAllAxes) {
                for (int sign : {1, -1}) {
                    auto rep = qmem::testing::single_fault_scan(cyc, axis, sign);
                    EXPECT_GT(rep.injections, 100u);
                    EXPECT_EQ(rep.logical_failures, 0u)
                        << name(v) << " axis " << axis_char(axis) << " sign " << sign << ": " << rep.first_failure;
                }
            }
        }
    }
}

TEST(EcCycle, NonFaultTolerantStyleHasHarmfulSingleFaults) {
    for (const auto& v : kAll) {
        if (v.style != EcStyle::NonFT) {
            continue;
        }
        EcCycle cyc(code_by_name(v.code), v.style);
        std::size_t failures = 0;
        for (auto axis : kAllAxes) {
            failures += qmem::testing::single_fault_scan(cyc, axis, 1).logical_failures;
        }
        EXPECT_GT(failures, 0u) << name(v);
    }
}

TEST(EcCycle, SampledRunIsDeterministic) {
    EcCycle cyc(steane_code(), EcStyle::ShorFT);
    auto run = [&] {
        RandomStream rng(55);
        auto t = encode_ideal(cyc.code(), PauliAxis::X, 1, cyc.ancillas());
        SampledFaults sf{0.05, &rng};
        std::vector<std::uint32_t> syn;
        for (int i = 0; i < 20; ++i) {
            syn.push_back(cyc.run(t, sf, rng).syndrome);
        }
        return std::make_pair(syn, t);
    };
    EXPECT_EQ(run(), run());
}
