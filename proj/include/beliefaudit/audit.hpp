#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "beliefaudit/errors.hpp"
#include "beliefaudit/gamble.hpp"
#include "beliefaudit/outcome_space.hpp"
#include "beliefaudit/price_model.hpp"
#include "beliefaudit/set_function.hpp"
#include "beliefaudit/tolerances.hpp"

namespace beliefaudit {

/// Seeded sampling parameters. Random gambles have payoffs uniform in
/// [-payoff_range, payoff_range].
struct SamplePlan {
    std::size_t num_samples = 256;
    double payoff_range = 1.0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Independent deterministic stream for each audit phase.
inline std::mt19937_64 phase_engine(std::uint64_t seed, std::uint32_t phase) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), phase};
    return std::mt19937_64(seq);
}

inline Gamble random_gamble(const OutcomeSpace& space, double range, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> payoff(-range, range);
    std::vector<double> p(space.size());
    for (double& v : p) v = payoff(rng);
    return Gamble(space, std::move(p));
}

inline SubsetMask mask_at(std::size_t a) { return SubsetMask{static_cast<std::uint32_t>(a)}; }

} // namespace detail

// ---------------------------------------------------------------------------
// Coherence probes

/// Outcome of one sampled property: how many instances held and the worst slack.
struct PropertyProbe {
    std::size_t checked = 0;
    std::size_t passed = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    /// Gambles attaining the worst slack.
    std::vector<Gamble> worst_witness;

    bool ok() const { return passed == checked; }

    void record(double slack, double noise, std::vector<Gamble> witness) {
        ++checked;
        if (slack >= -noise) ++passed;
        if (slack < worst_slack) {
            worst_slack = slack;
            worst_witness = std::move(witness);
        }
    }
};

struct CoherenceProbeReport {
    PropertyProbe lower_bound;      // buy(X) >= min X
    PropertyProbe upper_bound;      // buy(X) <= max X
    PropertyProbe homogeneity;      // buy(lX) = l buy(X), relative
    PropertyProbe superadditivity;  // buy(X+Y) >= buy(X) + buy(Y)
    PropertyProbe translation;      // buy(X + c) = buy(X) + c

    bool all_passed() const {
        return lower_bound.ok() && upper_bound.ok() && homogeneity.ok() && superadditivity.ok() &&
               translation.ok();
    }
};

inline constexpr std::array<double, 3> probe_scales{0.5, 2.0, 10.0};

/// Samples the coherence characterization of a buy functional: the lower
/// bound, positive homogeneity and superadditivity, plus the upper bound and
/// translation that follow from them. Complementary indicator pairs
/// (1_A, 1_{A^c}) are always included in the superadditivity probe.
template <BuyFunctional F>
CoherenceProbeReport coherence_probe(const OutcomeSpace& space, const F& buy_fn, const SamplePlan& plan,
                                     Tolerances tol = default_tolerances) {
    if (plan.num_samples == 0) throw InvalidArgument("sample plan needs at least one sample");
    CoherenceProbeReport r;
    auto rng = detail::phase_engine(plan.seed, 1);
    std::uniform_real_distribution<double> shift(-plan.payoff_range, plan.payoff_range);
    std::uniform_real_distribution<double> scale(0.01, 10.0);

    for (std::size_t k = 0; k < plan.num_samples; ++k) {
        Gamble x = detail::random_gamble(space, plan.payoff_range, rng);
        Gamble y = detail::random_gamble(space, plan.payoff_range, rng);
        const double bx = buy_fn(x);
        const double by = buy_fn(y);

        r.lower_bound.record(bx - x.min(), tol.noise, {x});
        r.upper_bound.record(x.max() - bx, tol.noise, {x});

        for (double lambda : {probe_scales[k % probe_scales.size()], scale(rng)}) {
            const double scaled = buy_fn(x.scaled(lambda));
            const double rel = std::abs(scaled - lambda * bx) / std::max(1.0, std::abs(lambda * bx));
            r.homogeneity.record(-rel, tol.noise, {x, Gamble::constant(space, lambda)});
        }

        r.superadditivity.record(buy_fn(x + y) - bx - by, tol.noise, {x, y});

        const double c = shift(rng);
        r.translation.record(-std::abs(buy_fn(x.shifted(c)) - bx - c), tol.noise,
                             {x, Gamble::constant(space, c)});
    }

    // Complementary indicators: exhaustively for small spaces, sampled otherwise.
    auto complementary = [&](SubsetMask a) {
        Gamble ia = Gamble::indicator(space, a);
        Gamble ic = Gamble::indicator(space, space.complement(a));
        r.superadditivity.record(buy_fn(ia + ic) - buy_fn(ia) - buy_fn(ic), tol.noise, {ia, ic});
    };
    if (space.size() <= 12) {
        for (std::size_t a = 0; a < space.num_subsets(); ++a) complementary(detail::mask_at(a));
    } else {
        std::uniform_int_distribution<std::uint32_t> pick(0, space.full().bits());
        for (std::size_t k = 0; k < plan.num_samples; ++k) complementary(SubsetMask{pick(rng)});
    }
    return r;
}

inline CoherenceProbeReport coherence_probe(const PriceModel& pm, const SamplePlan& plan,
                                            Tolerances tol = default_tolerances) {
    return coherence_probe(pm.space(), pm, plan, tol);
}

// ---------------------------------------------------------------------------
// Sure loss

struct Transaction {
    Gamble gamble;
    double price;
};

/// Gambles bought and sold at stated prices.
struct TransactionLedger {
    std::vector<Transaction> buys;
    std::vector<Transaction> sells;
};

/// Ledger whose prices are the model's own buy and sell prices.
template <BuyFunctional F>
TransactionLedger price_ledger(const F& buy_fn, const std::vector<Gamble>& buys, const std::vector<Gamble>& sells) {
    TransactionLedger ledger;
    for (const auto& x : buys) ledger.buys.push_back({x, static_cast<double>(buy_fn(x))});
    for (const auto& y : sells) ledger.sells.push_back({y, -static_cast<double>(buy_fn(-y))});
    return ledger;
}

struct Exposure {
    /// max over outcomes of the net payoff of the ledger.
    double value;
    /// Outcome attaining the maximum (lowest index on ties).
    std::size_t outcome;

    bool is_dutch_book(Tolerances tol = default_tolerances) const { return value < -tol.noise; }
};

/// max over w of sum_i (X_i(w) - price_i) + sum_j (price_j - Y_j(w)).
inline Exposure sure_loss_exposure(const OutcomeSpace& space, const TransactionLedger& ledger) {
    if (ledger.buys.empty() && ledger.sells.empty()) throw InvalidArgument("ledger is empty");
    std::vector<double> net(space.size(), 0.0);
    for (const auto& t : ledger.buys) {
        require_same_space(space, t.gamble.space());
        for (std::size_t i = 0; i < net.size(); ++i) net[i] += t.gamble[i] - t.price;
    }
    for (const auto& t : ledger.sells) {
        require_same_space(space, t.gamble.space());
        for (std::size_t i = 0; i < net.size(); ++i) net[i] += t.price - t.gamble[i];
    }
    auto it = std::max_element(net.begin(), net.end());
    return {*it, static_cast<std::size_t>(it - net.begin())};
}

inline Exposure sure_loss_exposure(const PriceModel& pm, const TransactionLedger& ledger) {
    return sure_loss_exposure(pm.space(), ledger);
}

/// Worst exposure over seeded random ledgers (up to 5 buys and 5 sells)
/// priced by the functional itself.
template <BuyFunctional F>
double sampled_sure_loss(const OutcomeSpace& space, const F& buy_fn, const SamplePlan& plan) {
    auto rng = detail::phase_engine(plan.seed, 2);
    std::uniform_int_distribution<int> count(0, 5);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < plan.num_samples; ++k) {
        std::vector<Gamble> buys, sells;
        int nb = count(rng), ns = count(rng);
        if (nb + ns == 0) nb = 1;
        for (int i = 0; i < nb; ++i) buys.push_back(detail::random_gamble(space, plan.payoff_range, rng));
        for (int i = 0; i < ns; ++i) sells.push_back(detail::random_gamble(space, plan.payoff_range, rng));
        worst = std::min(worst, sure_loss_exposure(space, price_ledger(buy_fn, buys, sells)).value);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Probability (additivity) check

struct ProbabilityVerdict {
    bool is_probability = true;
    /// Disjoint pair (A, B) with buy(1_{A u B}) != buy(1_A) + buy(1_B).
    std::optional<std::pair<SubsetMask, SubsetMask>> witness;
    /// buy(1_{A u B}) - buy(1_A) - buy(1_B) at the witness.
    double gap = 0.0;
};

/// Additivity of an induced set function on disjoint pairs. Each set is
/// compared with its lowest singleton plus the remainder, in ascending mask
/// order; additivity on all disjoint pairs follows by induction.
inline ProbabilityVerdict probability_check(const SetFunction& f, Tolerances tol = default_tolerances) {
    ProbabilityVerdict v;
    auto fail = [&](SubsetMask a, SubsetMask b, double gap) {
        v.is_probability = false;
        v.witness = std::make_pair(a, b);
        v.gap = gap;
        return v;
    };
    const double empty = f[SubsetMask::empty()];
    if (std::abs(empty) > tol.noise) return fail(SubsetMask::empty(), SubsetMask::empty(), -empty);
    for (std::size_t a = 1; a < f.space().num_subsets(); ++a) {
        const SubsetMask s = detail::mask_at(a);
        if (s.size() < 2) continue;
        const SubsetMask low = SubsetMask::singleton(s.lowest());
        const SubsetMask rest = s.without(s.lowest());
        const double gap = f[s] - f[low] - f[rest];
        if (std::abs(gap) > tol.noise) return fail(low, rest, gap);
    }
    return v;
}

inline ProbabilityVerdict probability_check(const PriceModel& pm, Tolerances tol = default_tolerances) {
    return probability_check(induced_set_function(pm), tol);
}

// ---------------------------------------------------------------------------
// Certificates

/// Two gamble collections whose summed guaranteed revenues satisfy
/// sum min_S xs <= sum min_S ys for every nonempty S, while the summed buy
/// prices satisfy sum buy(xs) > sum buy(ys).
struct ViolationCertificate {
    struct NegativeMass {
        SubsetMask s0;
        double mass;
    };
    struct ChoquetGap {
        Gamble gamble;
    };

    std::vector<Gamble> xs;
    std::vector<Gamble> ys;
    double buy_gap = 0.0;
    std::variant<NegativeMass, ChoquetGap> kind;
};

/// Moebius value of f at S0 by direct alternating sum over the subsets of S0.
inline double mobius_at(const SetFunction& f, SubsetMask s0) {
    double total = 0.0;
    const std::uint32_t full = s0.bits();
    for (std::uint32_t b = full;; b = (b - 1) & full) {
        const int missing = std::popcount(full & ~b);
        total += (missing % 2 == 0 ? 1.0 : -1.0) * f[SubsetMask{b}];
        if (b == 0) break;
    }
    return total;
}

namespace detail {

/// Splits the inclusion-exclusion terms of a family into odd-order
/// intersections (xs) and the union plus even-order intersections (ys).
inline void inclusion_exclusion_split(const OutcomeSpace& space, std::span<const SubsetMask> family,
                                      std::vector<SubsetMask>& xs, std::vector<SubsetMask>& ys) {
    SubsetMask all;
    for (auto a : family) all = all | a;
    ys.push_back(all);
    const std::size_t count = std::size_t{1} << family.size();
    std::vector<SubsetMask> inter(count);
    inter[0] = space.full();
    for (std::size_t sub = 1; sub < count; ++sub) {
        inter[sub] = inter[sub & (sub - 1)] & family[static_cast<std::size_t>(std::countr_zero(sub))];
        (std::popcount(sub) % 2 == 1 ? xs : ys).push_back(inter[sub]);
    }
}

} // namespace detail

/// Certificate built from a negative Moebius value of the induced set
/// function f at S0 (|S0| >= 2). The family {S0 \ {s}} has B2 slack m(S0);
/// when two of its members already have negative slack the two-set family
/// with the most negative slack is used instead.
inline ViolationCertificate certificate_from_negative_mass(const SetFunction& f, SubsetMask s0,
                                                           Tolerances tol = default_tolerances) {
    const OutcomeSpace& space = f.space();
    if (!space.contains(s0)) throw InvalidArgument("S0 outside the outcome space");
    const double m = mobius_at(f, s0);
    if (m >= -tol.noise) {
        throw NotNegative("Moebius value at " + space.format(s0) + " is " + std::to_string(m) + ", not negative");
    }
    if (s0.size() < 2) {
        throw SingletonCore("a negative mass on the singleton " + space.format(s0) +
                            " does not come from a B2 family");
    }

    std::vector<SubsetMask> family = deletion_family(s0);
    std::sort(family.begin(), family.end());
    if (family.size() > 2) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        double best_slack = -tol.noise;
        for (std::size_t i = 0; i < family.size(); ++i) {
            for (std::size_t j = i + 1; j < family.size(); ++j) {
                const double slack = check_b2_instance(f, {family[i], family[j]});
                if (slack < best_slack) {
                    best_slack = slack;
                    best = std::make_pair(i, j);
                }
            }
        }
        if (best) family = {family[best->first], family[best->second]};
    }

    std::vector<SubsetMask> xs_sets, ys_sets;
    detail::inclusion_exclusion_split(space, family, xs_sets, ys_sets);
    ViolationCertificate cert;
    double gap = 0.0;
    for (auto a : xs_sets) {
        cert.xs.push_back(Gamble::indicator(space, a));
        gap += f[a];
    }
    for (auto a : ys_sets) {
        cert.ys.push_back(Gamble::indicator(space, a));
        gap -= f[a];
    }
    cert.buy_gap = gap;
    cert.kind = ViolationCertificate::NegativeMass{s0, m};
    return cert;
}

/// Certificate from a gamble whose price disagrees with the Choquet integral
/// of the induced belief function. X is shifted to have minimum zero and
/// compared against its layers (y_k - y_{k-1}) 1_{X >= y_k}, which have the
/// same summed guaranteed revenue under every belief valuation.
template <BuyFunctional F>
ViolationCertificate certificate_from_choquet_gap(const OutcomeSpace& space, const F& buy_fn, const Gamble& x,
                                                  Tolerances tol = default_tolerances) {
    require_same_space(space, x.space());
    const Gamble base = x.shifted(-x.min());
    std::vector<double> levels(base.payoff().begin(), base.payoff().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<Gamble> layers;
    double previous = 0.0;
    for (double y : levels) {
        if (y == previous) continue;
        SubsetMask upper;
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (base[i] >= y) upper = upper.with(i);
        }
        layers.push_back(Gamble::indicator(space, upper, y - previous));
        previous = y;
    }

    double layer_total = 0.0;
    for (const auto& g : layers) layer_total += static_cast<double>(buy_fn(g));
    const double gap = static_cast<double>(buy_fn(base)) - layer_total;
    if (std::abs(gap) <= tol.noise) {
        throw NoGap("price of the gamble matches its layer decomposition (gap " + std::to_string(gap) + ")");
    }

    ViolationCertificate cert;
    if (gap > 0) {
        cert.xs = {base};
        cert.ys = std::move(layers);
    } else {
        cert.xs = std::move(layers);
        cert.ys = {base};
    }
    cert.buy_gap = std::abs(gap);
    cert.kind = ViolationCertificate::ChoquetGap{x};
    return cert;
}

inline ViolationCertificate certificate_from_choquet_gap(const PriceModel& pm, const Gamble& x,
                                                         Tolerances tol = default_tolerances) {
    return certificate_from_choquet_gap(pm.space(), pm, x, tol);
}

namespace detail {

/// sum over gambles of min_{w in S} g(w), for every subset S (entry 0 unused).
inline std::vector<double> summed_minima(const OutcomeSpace& space, const std::vector<Gamble>& gambles) {
    const std::size_t count = space.num_subsets();
    std::vector<double> total(count, 0.0);
    std::vector<double> mins(count);
    for (const auto& g : gambles) {
        require_same_space(space, g.space());
        mins[0] = std::numeric_limits<double>::infinity();
        for (std::size_t a = 1; a < count; ++a) {
            const std::size_t low = static_cast<std::size_t>(std::countr_zero(a));
            mins[a] = std::min(mins[a & (a - 1)], g[low]);
            total[a] += mins[a];
        }
    }
    return total;
}

} // namespace detail

/// Checks guaranteed-revenue dominance over every nonempty core and the
/// strict reverse inequality of summed buy prices.
template <BuyFunctional F>
bool verify_certificate(const OutcomeSpace& space, const F& buy_fn, const ViolationCertificate& cert,
                        Tolerances tol = default_tolerances) {
    const auto lhs = detail::summed_minima(space, cert.xs);
    const auto rhs = detail::summed_minima(space, cert.ys);
    for (std::size_t a = 1; a < lhs.size(); ++a) {
        if (lhs[a] > rhs[a] + tol.exact) return false;
    }
    double gap = 0.0;
    for (const auto& g : cert.xs) gap += static_cast<double>(buy_fn(g));
    for (const auto& g : cert.ys) gap -= static_cast<double>(buy_fn(g));
    return gap > tol.noise;
}

inline bool verify_certificate(const PriceModel& pm, const ViolationCertificate& cert,
                               Tolerances tol = default_tolerances) {
    return verify_certificate(pm.space(), pm, cert, tol);
}

// ---------------------------------------------------------------------------
// B-consistency audit

struct AuditReport {
    OutcomeSpace space;
    std::string model_kind;
    CoherenceProbeReport coherence;
    /// Worst no-sure-loss exposure over model-priced random ledgers.
    double sure_loss_worst = 0.0;
    ProbabilityVerdict probability;
    bool is_b_consistent = false;
    std::variant<MassFunction, NegativeMassReport> induced_mass;
    /// Number of gambles on which Choquet agreement was checked and the largest gap seen.
    std::size_t choquet_checks = 0;
    double choquet_max_gap = 0.0;
    std::optional<ViolationCertificate> certificate;
    bool certificate_verified = false;
    Tolerances tolerances;
    SamplePlan plan;

    bool is_probability() const { return probability.is_probability; }
};

namespace detail {

template <BuyFunctional F>
AuditReport run_audit(const OutcomeSpace& space, const F& buy_fn, const SetFunction& induced, std::string kind,
                      const SamplePlan& plan, Tolerances tol) {
    if (plan.num_samples == 0) throw InvalidArgument("sample plan needs at least one sample");
    auto coherence = coherence_probe(space, buy_fn, plan, tol);
    const double sure_loss = sampled_sure_loss(space, buy_fn, plan);
    auto probability = probability_check(induced, tol);
    auto mass = belief_to_mass(induced, tol);

    AuditReport report{space, std::move(kind), std::move(coherence), sure_loss, probability, false,
                       std::move(mass), 0, 0.0, std::nullopt, false, tol, plan};

    if (auto* neg = std::get_if<NegativeMassReport>(&report.induced_mass)) {
        if (auto pick = smallest_negative(*neg, 2)) {
            report.certificate = certificate_from_negative_mass(induced, pick->first, tol);
        } else {
            // Only singletons are negative: buy(1_{a}) < 0 = buy of nothing.
            const auto& [a, m] = neg->negatives.front();
            ViolationCertificate cert;
            cert.ys = {Gamble::indicator(space, a)};
            cert.buy_gap = -induced[a];
            cert.kind = ViolationCertificate::NegativeMass{a, m};
            report.certificate = std::move(cert);
        }
    } else {
        const auto& m = std::get<MassFunction>(report.induced_mass);
        const BeliefFunction bel = mass_to_belief(m);
        std::optional<Gamble> offender;
        double offender_gap = 0.0;
        auto check = [&](const Gamble& g, double choquet) {
            ++report.choquet_checks;
            const double gap = std::abs(static_cast<double>(buy_fn(g)) - choquet);
            report.choquet_max_gap = std::max(report.choquet_max_gap, gap);
            if (gap > tol.noise && !offender) {
                offender = g;
                offender_gap = gap;
            }
        };
        for (std::size_t a = 0; a < space.num_subsets(); ++a) {
            check(Gamble::indicator(space, mask_at(a)), bel[mask_at(a)]);
        }
        auto rng = phase_engine(plan.seed, 3);
        for (std::size_t k = 0; k < plan.num_samples; ++k) {
            Gamble g = random_gamble(space, plan.payoff_range, rng);
            check(g, choquet_value(m, g));
        }
        if (offender) {
            report.certificate = certificate_from_choquet_gap(space, buy_fn, *offender, tol);
        } else {
            report.is_b_consistent = true;
        }
    }
    if (report.certificate) report.certificate_verified = verify_certificate(space, buy_fn, *report.certificate, tol);
    return report;
}

} // namespace detail

/// Decides B-consistency of an arbitrary buy functional through the Choquet
/// characterization: the induced set function must have nonnegative Moebius
/// transform and the functional must agree with the resulting Choquet
/// integral on every indicator and on the sampled gambles. Assumes the
/// functional is coherent; throws B1Violation if buy(0) != 0 or buy(1) != 1.
template <BuyFunctional F>
AuditReport b_consistency_audit(const OutcomeSpace& space, const F& buy_fn, const SamplePlan& plan,
                                Tolerances tol = default_tolerances) {
    return detail::run_audit(space, buy_fn, induced_set_function(space, buy_fn), "custom", plan, tol);
}

inline AuditReport b_consistency_audit(const PriceModel& pm, const SamplePlan& plan,
                                       Tolerances tol = default_tolerances) {
    return detail::run_audit(pm.space(), pm, induced_set_function(pm), pm.kind(), plan, tol);
}

} // namespace beliefaudit
