#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <variant>

#include "beliefaudit/beliefaudit.hpp"
#include "oracles.hpp"

using namespace beliefaudit;

namespace {

SubsetMask m(std::uint32_t bits) { return SubsetMask{bits}; }

} // namespace

// --- OutcomeSpace -----------------------------------------------------------

TEST(OutcomeSpace, SmallestSpace) {
    auto s = make_space({"a"});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.num_subsets(), 2u);
}

TEST(OutcomeSpace, FourOutcomes) {
    auto s = make_space({"1", "2", "3", "4"});
    EXPECT_EQ(s.size(), 4u);
    EXPECT_EQ(s.subset({"2", "3", "4"}).bits(), 0b1110u);
    EXPECT_EQ(s.format(m(0b1110)), "{2,3,4}");
    EXPECT_EQ(s.complement(m(0b0010)).bits(), 0b1101u);
}

TEST(OutcomeSpace, RejectsDuplicatesAndBadSizes) {
    EXPECT_THROW(make_space({"a", "a"}), DuplicateLabel);
    EXPECT_THROW(make_space({}), SizeOutOfRange);
    std::vector<std::string> many;
    for (int i = 0; i < 25; ++i) many.push_back("w" + std::to_string(i));
    EXPECT_THROW(make_space(many), SizeOutOfRange);
    many.pop_back();
    EXPECT_NO_THROW(make_space(many));
}

TEST(OutcomeSpace, UnknownLabel) {
    auto s = make_space({"a", "b"});
    EXPECT_THROW(s.subset({"c"}), InvalidArgument);
}

// --- Lattice transforms -----------------------------------------------------

TEST(Lattice, TransformsMatchNaiveDoubleLoop) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 1; n <= 10; ++n) {
        std::vector<double> t(std::size_t{1} << n);
        for (double& v : t) v = u(rng);
        auto fast_z = t;
        lattice::zeta(fast_z);
        auto fast_m = t;
        lattice::mobius(fast_m);
        auto slow_z = oracle::naive_zeta(t);
        auto slow_m = oracle::naive_mobius(t);
        for (std::size_t a = 0; a < t.size(); ++a) {
            ASSERT_NEAR(fast_z[a], slow_z[a], 1e-13) << "n=" << n << " a=" << a;
            ASSERT_NEAR(fast_m[a], slow_m[a], 1e-13) << "n=" << n << " a=" << a;
        }
    }
}

TEST(Lattice, RejectsNonPowerOfTwo) {
    std::vector<double> t(3);
    EXPECT_THROW(lattice::zeta(t), InvalidArgument);
}

// --- MassFunction -----------------------------------------------------------

TEST(MassFunction, Validation) {
    auto s = make_space({"a", "b"});
    EXPECT_THROW(MassFunction(s, {{m(0), 1.0}}), InvalidArgument);
    EXPECT_THROW(MassFunction(s, {{m(1), 0.5}}), InvalidArgument);
    EXPECT_THROW(MassFunction(s, {{m(1), 0.5}, {m(1), 0.5}}), InvalidArgument);
    EXPECT_THROW(MassFunction(s, {{m(1), -0.5}, {m(2), 1.5}}), InvalidArgument);
    EXPECT_THROW(MassFunction(s, {{m(4), 1.0}}), InvalidArgument);
    EXPECT_NO_THROW(MassFunction(s, {{m(1), 0.5}, {m(3), 0.5}}));
}

// --- mass_to_belief ---------------------------------------------------------

TEST(MassToBelief, Vacuous) {
    auto s = make_space({"a", "b", "c"});
    auto bel = mass_to_belief(MassFunction::vacuous(s));
    for (std::uint32_t a = 0; a < 7; ++a) EXPECT_EQ(bel[m(a)], 0.0);
    EXPECT_EQ(bel[m(7)], 1.0);
}

TEST(MassToBelief, SingletonsGiveProbability) {
    auto s = oracle::numbered_space(4);
    std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    auto bel = mass_to_belief(MassFunction::from_probability(s, p));
    for (std::uint32_t a = 0; a < 16; ++a) {
        double expected = 0.0;
        for (int i = 0; i < 4; ++i) {
            if ((a >> i) & 1) expected += p[i];
        }
        EXPECT_NEAR(bel[m(a)], expected, 1e-15);
    }
}

TEST(MassToBelief, TwoOutcomeExample) {
    auto s = make_space({"a", "b"});
    auto bel = mass_to_belief(MassFunction(s, {{m(0b01), 0.3}, {m(0b11), 0.7}}));
    // Subset-sum enumeration over the 4 subsets.
    EXPECT_DOUBLE_EQ(bel[m(0b01)], 0.3);
    EXPECT_DOUBLE_EQ(bel[m(0b10)], 0.0);
    EXPECT_DOUBLE_EQ(bel[m(0b11)], 1.0);
}

TEST(MassToBelief, OutputIsMonotone) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = oracle::numbered_space(1 + trial % 7);
        auto bel = mass_to_belief(oracle::random_mass(s, rng, 10));
        for (std::size_t a = 0; a < s.num_subsets(); ++a) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                const std::size_t b = a | (std::size_t{1} << i);
                ASSERT_LE(bel[m(static_cast<std::uint32_t>(a))], bel[m(static_cast<std::uint32_t>(b))] + 1e-12);
            }
        }
    }
}

// --- belief_to_mass ---------------------------------------------------------

TEST(BeliefToMass, VacuousRoundTrip) {
    auto s = make_space({"a", "b", "c"});
    auto r = belief_to_mass(mass_to_belief(MassFunction::vacuous(s)).as_set_function());
    const auto& mass = std::get<MassFunction>(r);
    ASSERT_EQ(mass.focal_sets().size(), 1u);
    EXPECT_EQ(mass.focal_sets()[0].first, s.full());
    EXPECT_EQ(mass.focal_sets()[0].second, 1.0);
}

TEST(BeliefToMass, ExampleHasNegativeMass) {
    auto f = oracle::example_set_function();
    auto r = belief_to_mass(f);
    const auto* neg = std::get_if<NegativeMassReport>(&r);
    ASSERT_NE(neg, nullptr);
    // Inclusion-exclusion over the subsets of {2,3,4}: 1/2 - 3(1/2) ... gives -1/4.
    bool found = false;
    for (const auto& [set, v] : neg->negatives) {
        if (set == f.space().subset({"2", "3", "4"})) {
            EXPECT_NEAR(v, -0.25, 1e-15);
            found = true;
        }
    }
    EXPECT_TRUE(found);
    // The other three 3-sets are negative too; brute-force check of the list.
    auto oracle_mobius = oracle::naive_mobius(f.values());
    std::size_t expected = 0;
    for (std::size_t a = 1; a < 16; ++a) expected += oracle_mobius[a] < -1e-9;
    EXPECT_EQ(neg->negatives.size(), expected);
    EXPECT_EQ(expected, 4u);
}

TEST(BeliefToMass, ProbabilityGivesSingletons) {
    auto s = oracle::numbered_space(5);
    std::vector<double> p{0.05, 0.15, 0.2, 0.25, 0.35};
    auto f = induced_set_function(PriceModel::linear(s, p));
    const auto mass = std::get<MassFunction>(belief_to_mass(f));
    EXPECT_TRUE(mass.singleton_supported());
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(mass[SubsetMask::singleton(i)], p[i], 1e-15);
}

TEST(BeliefToMass, B1Violation) {
    auto s = make_space({"a", "b"});
    EXPECT_THROW(belief_to_mass(SetFunction(s, {0.1, 0.5, 0.5, 1.0})), B1Violation);
    EXPECT_THROW(belief_to_mass(SetFunction(s, {0.0, 0.5, 0.5, 0.9})), B1Violation);
}

TEST(BeliefToMass, TinyNegativesClamped) {
    auto s = make_space({"a", "b"});
    // m({a,b}) = 1 - 0.5 - (0.5 + 1e-10) = -1e-10: within noise.
    auto r = belief_to_mass(SetFunction(s, {0.0, 0.5, 0.5 + 1e-10, 1.0}));
    const auto& mass = std::get<MassFunction>(r);
    EXPECT_EQ(mass[s.full()], 0.0);
    EXPECT_NEAR(mass[m(1)] + mass[m(2)], 1.0, 1e-15);
}

TEST(BeliefToMass, RoundTripProperty) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = oracle::numbered_space(1 + trial % 12);
        auto mass = oracle::random_mass(s, rng, 1 + trial % 40);
        auto back = std::get<MassFunction>(belief_to_mass(mass_to_belief(mass).as_set_function()));
        for (std::size_t a = 0; a < s.num_subsets(); ++a) {
            const SubsetMask set{static_cast<std::uint32_t>(a)};
            ASSERT_NEAR(back[set], mass[set], 1e-12);
        }
    }
}

// --- is_belief_function -----------------------------------------------------

TEST(IsBeliefFunction, MassToBeliefOutputsAreBeliefs) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = oracle::numbered_space(1 + trial % 8);
        auto bel = mass_to_belief(oracle::random_mass(s, rng));
        EXPECT_TRUE(is_belief_function(bel.as_set_function()));
    }
}

TEST(IsBeliefFunction, ExampleWitness) {
    auto f = oracle::example_set_function();
    auto v = is_belief_function(f);
    ASSERT_FALSE(v);
    EXPECT_EQ(v.failure, BeliefVerdict::Failure::negative_mass);
    EXPECT_EQ(v.witness, f.space().subset({"2", "3", "4"}));
    EXPECT_NEAR(v.mass, -0.25, 1e-15);
    ASSERT_EQ(v.b2_family.size(), 3u);
    EXPECT_NEAR(check_b2_instance(f, v.b2_family), -0.25, 1e-15);
}

TEST(IsBeliefFunction, CountingMeasure) {
    auto s = oracle::numbered_space(5);
    std::vector<double> v(32);
    for (std::uint32_t a = 0; a < 32; ++a) v[a] = std::popcount(a) / 5.0;
    EXPECT_TRUE(is_belief_function(SetFunction(s, v)));
}

TEST(IsBeliefFunction, B1Failures) {
    auto s = make_space({"a", "b"});
    EXPECT_EQ(is_belief_function(SetFunction(s, {0.2, 0.5, 0.5, 1.0})).failure, BeliefVerdict::Failure::empty_set);
    EXPECT_EQ(is_belief_function(SetFunction(s, {0.0, 0.5, 0.5, 0.8})).failure, BeliefVerdict::Failure::full_set);
}

TEST(IsBeliefFunction, WitnessFamilySlackEqualsMass) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int negatives = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto s = oracle::numbered_space(2 + trial % 4);
        std::vector<double> v(s.num_subsets());
        for (double& x : v) x = u(rng);
        v.front() = 0.0;
        v.back() = 1.0;
        SetFunction f(s, v);
        auto verdict = is_belief_function(f);
        if (verdict || verdict.witness.size() < 2) continue;
        ++negatives;
        EXPECT_NEAR(check_b2_instance(f, verdict.b2_family), verdict.mass, 1e-12);
        EXPECT_LT(verdict.mass, 0.0);
    }
    EXPECT_GT(negatives, 50);
}

// --- check_b2_instance ------------------------------------------------------

TEST(CheckB2, SingleSetIsZero) {
    auto f = oracle::example_set_function();
    for (std::uint32_t a = 0; a < 16; ++a) EXPECT_EQ(check_b2_instance(f, {m(a)}), 0.0);
}

TEST(CheckB2, ExamplePair) {
    auto f = oracle::example_set_function();
    const auto& s = f.space();
    EXPECT_DOUBLE_EQ(check_b2_instance(f, {s.subset({"2", "3"}), s.subset({"2", "4"})}), -0.25);
}

TEST(CheckB2, ProbabilityIsExact) {
    auto s = oracle::numbered_space(5);
    // Dyadic probabilities keep every partial sum exact.
    auto f = induced_set_function(PriceModel::linear(s, {0.5, 0.125, 0.125, 0.0625, 0.1875}));
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::uint32_t> pick(0, 31);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SubsetMask> fam(1 + trial % 5);
        for (auto& a : fam) a = m(pick(rng));
        EXPECT_EQ(check_b2_instance(f, fam), 0.0);
    }
}

TEST(CheckB2, MatchesBruteForceAndHoldsForBeliefs) {
    std::mt19937_64 rng(4);
    for (std::size_t n = 1; n <= 5; ++n) {
        auto s = oracle::numbered_space(n);
        for (int trial = 0; trial < 4; ++trial) {
            auto bel = mass_to_belief(oracle::random_mass(s, rng, 12)).as_set_function();
            const std::uint32_t count = static_cast<std::uint32_t>(s.num_subsets());
            // Every family of up to 3 distinct subsets.
            for (std::uint32_t a = 0; a < count; ++a) {
                for (std::uint32_t b = a + 1; b < count; ++b) {
                    ASSERT_GE(check_b2_instance(bel, {m(a), m(b)}), -1e-9);
                    for (std::uint32_t c = b + 1; c < count; ++c) {
                        const double slack = check_b2_instance(bel, {m(a), m(b), m(c)});
                        ASSERT_GE(slack, -1e-9);
                        std::uint32_t fam[] = {a, b, c};
                        ASSERT_NEAR(slack, oracle::b2_slack(bel.values(), fam, count - 1), 1e-12);
                    }
                }
            }
        }
    }
}

TEST(CheckB2, FamilyLimits) {
    auto f = oracle::example_set_function();
    std::vector<SubsetMask> big(21, m(1));
    EXPECT_THROW(check_b2_instance(f, big), FamilyTooLarge);
    big.resize(20);
    EXPECT_NO_THROW(check_b2_instance(f, big));
    EXPECT_THROW(check_b2_instance(f, std::vector<SubsetMask>{}), InvalidArgument);
}

// --- plausibility -----------------------------------------------------------

TEST(Plausibility, Vacuous) {
    auto s = oracle::numbered_space(3);
    auto bel = mass_to_belief(MassFunction::vacuous(s));
    for (std::uint32_t a = 1; a < 7; ++a) EXPECT_EQ(plausibility(bel, m(a)), 1.0);
}

TEST(Plausibility, ProbabilityEqualsBelief) {
    auto s = oracle::numbered_space(4);
    auto bel = mass_to_belief(MassFunction::from_probability(s, std::vector<double>{0.5, 0.25, 0.125, 0.125}));
    for (std::uint32_t a = 0; a < 16; ++a) EXPECT_DOUBLE_EQ(plausibility(bel, m(a)), bel[m(a)]);
}

TEST(Plausibility, ExampleSetFunctionConjugate) {
    // The example's induced set function is not a belief function, so the
    // conjugate is evaluated directly on its values.
    auto f = oracle::example_set_function();
    const auto& s = f.space();
    EXPECT_DOUBLE_EQ(1.0 - f[s.complement(s.subset({"2"}))], 0.5);
}

TEST(Plausibility, DominatesBelief) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        auto s = oracle::numbered_space(1 + trial % 6);
        auto bel = mass_to_belief(oracle::random_mass(s, rng));
        for (std::size_t a = 0; a < s.num_subsets(); ++a) {
            SubsetMask set{static_cast<std::uint32_t>(a)};
            EXPECT_GE(plausibility(bel, set), bel[set] - 1e-12);
        }
    }
}

TEST(BeliefFunction, FromValuesValidates) {
    EXPECT_THROW(BeliefFunction::from_values(oracle::example_set_function()), InvalidArgument);
    auto s = make_space({"a", "b"});
    EXPECT_THROW(BeliefFunction::from_values(SetFunction(s, {0.0, 0.2, 0.2, 0.5})), B1Violation);
    auto bel = BeliefFunction::from_values(SetFunction(s, {0.0, 0.2, 0.3, 1.0}));
    EXPECT_DOUBLE_EQ(plausibility(bel, m(1)), 0.7);
}
