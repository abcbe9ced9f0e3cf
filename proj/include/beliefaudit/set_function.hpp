#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "beliefaudit/errors.hpp"
#include "beliefaudit/lattice.hpp"
#include "beliefaudit/outcome_space.hpp"
#include "beliefaudit/tolerances.hpp"

namespace beliefaudit {

/// Dense real-valued function on the subsets of an outcome space.
class SetFunction {
public:
    SetFunction(OutcomeSpace space, std::vector<double> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (values_.size() != space_.num_subsets()) {
            throw InvalidArgument("set function needs " + std::to_string(space_.num_subsets()) +
                                  " values, got " + std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!std::isfinite(v)) throw InvalidArgument("set function values must be finite");
        }
    }

    /// All-zero set function.
    explicit SetFunction(OutcomeSpace space)
        : space_(std::move(space)), values_(space_.num_subsets(), 0.0) {}

    const OutcomeSpace& space() const { return space_; }
    std::span<const double> values() const { return values_; }
    double operator[](SubsetMask a) const { return values_[a.index()]; }
    double at(SubsetMask a) const {
        if (!space_.contains(a)) throw InvalidArgument("subset outside the outcome space");
        return values_[a.index()];
    }

private:
    OutcomeSpace space_;
    std::vector<double> values_;
};

/// Basic belief assignment: strictly positive weights on nonempty focal
/// sets, summing to one. Focal sets are kept in ascending mask order.
class MassFunction {
public:
    using Entry = std::pair<SubsetMask, double>;

    MassFunction(OutcomeSpace space, std::vector<Entry> focal, Tolerances tol = default_tolerances)
        : space_(std::move(space)), focal_(std::move(focal)) {
        std::sort(focal_.begin(), focal_.end(),
                  [](const Entry& a, const Entry& b) { return a.first < b.first; });
        double total = 0.0;
        for (std::size_t k = 0; k < focal_.size(); ++k) {
            const auto& [set, w] = focal_[k];
            if (!space_.contains(set)) throw InvalidArgument("focal set outside the outcome space");
            if (set.is_empty()) throw InvalidArgument("the empty set cannot carry mass");
            if (k > 0 && focal_[k - 1].first == set) {
                throw InvalidArgument("focal set " + space_.format(set) + " listed twice");
            }
            if (!std::isfinite(w) || w <= 0.0 || w > 1.0 + tol.exact) {
                throw InvalidArgument("mass of " + space_.format(set) + " must lie in (0,1]");
            }
            total += w;
        }
        if (std::abs(total - 1.0) > tol.exact) {
            throw InvalidArgument("masses sum to " + std::to_string(total) + ", expected 1");
        }
    }

    /// Mass concentrated on the whole space (total ignorance).
    static MassFunction vacuous(const OutcomeSpace& space) {
        return MassFunction(space, {{space.full(), 1.0}});
    }

    /// Mass on singletons given by a probability vector; zero entries are dropped.
    static MassFunction from_probability(const OutcomeSpace& space, std::span<const double> p,
                                         Tolerances tol = default_tolerances) {
        if (p.size() != space.size()) throw InvalidArgument("probability vector has wrong length");
        std::vector<Entry> focal;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] != 0.0) focal.emplace_back(SubsetMask::singleton(i), p[i]);
        }
        return MassFunction(space, std::move(focal), tol);
    }

    const OutcomeSpace& space() const { return space_; }
    const std::vector<Entry>& focal_sets() const { return focal_; }

    double operator[](SubsetMask a) const {
        auto it = std::lower_bound(focal_.begin(), focal_.end(), a,
                                   [](const Entry& e, SubsetMask m) { return e.first < m; });
        return (it != focal_.end() && it->first == a) ? it->second : 0.0;
    }

    /// Dense table of length 2^n.
    std::vector<double> dense() const {
        std::vector<double> t(space_.num_subsets(), 0.0);
        for (const auto& [set, w] : focal_) t[set.index()] = w;
        return t;
    }

    bool singleton_supported() const {
        return std::all_of(focal_.begin(), focal_.end(),
                           [](const Entry& e) { return e.first.size() == 1; });
    }

private:
    OutcomeSpace space_;
    std::vector<Entry> focal_;
};

/// A set function satisfying B1 whose Moebius transform is nonnegative.
class BeliefFunction {
public:
    /// Validates B1 and total monotonicity; throws B1Violation or InvalidArgument.
    static BeliefFunction from_values(const SetFunction& f, Tolerances tol = default_tolerances);

    const OutcomeSpace& space() const { return space_; }
    std::span<const double> values() const { return values_; }
    double operator[](SubsetMask a) const { return values_[a.index()]; }

    SetFunction as_set_function() const { return SetFunction(space_, values_); }

private:
    friend BeliefFunction mass_to_belief(const MassFunction& m);
    BeliefFunction(OutcomeSpace space, std::vector<double> values)
        : space_(std::move(space)), values_(std::move(values)) {}

    OutcomeSpace space_;
    std::vector<double> values_;
};

/// Subsets whose Moebius value is below -tol.noise, ascending mask order.
struct NegativeMassReport {
    OutcomeSpace space;
    std::vector<std::pair<SubsetMask, double>> negatives;
    /// The raw Moebius transform, dense.
    std::vector<double> mobius;
};

/// Bel(A) = sum of m(C) over focal C contained in A.
inline BeliefFunction mass_to_belief(const MassFunction& m) {
    std::vector<double> t = m.dense();
    lattice::zeta(t);
    // Bel(Omega) is 1 up to rounding in the mass sum; pin the B1 endpoints.
    t.front() = 0.0;
    t.back() = 1.0;
    for (double& v : t) v = std::clamp(v, 0.0, 1.0);
    return BeliefFunction(m.space(), std::move(t));
}

/// Raw Moebius transform of f, dense.
inline std::vector<double> mobius_transform(const SetFunction& f) {
    std::vector<double> t(f.values().begin(), f.values().end());
    lattice::mobius(t);
    return t;
}

inline void require_b1(const SetFunction& f, Tolerances tol) {
    const double lo = f[SubsetMask::empty()];
    const double hi = f[f.space().full()];
    if (std::abs(lo) > tol.exact) {
        throw B1Violation("f(empty) = " + std::to_string(lo) + ", expected 0");
    }
    if (std::abs(hi - 1.0) > tol.exact) {
        throw B1Violation("f(Omega) = " + std::to_string(hi) + ", expected 1");
    }
}

/// Builds a mass function from a dense Moebius table whose entries are all
/// >= -tol.noise: tiny negatives and rounding residues up to tol.exact are
/// zeroed and the total renormalized.
inline MassFunction mass_from_mobius(const OutcomeSpace& space, std::span<const double> mobius,
                                     Tolerances tol = default_tolerances) {
    std::vector<MassFunction::Entry> focal;
    double total = 0.0;
    for (std::size_t a = 1; a < mobius.size(); ++a) {
        if (mobius[a] < -tol.noise) {
            throw InvalidArgument("Moebius value below tolerance at " +
                                  space.format(SubsetMask{static_cast<std::uint32_t>(a)}));
        }
        if (mobius[a] > tol.exact) {
            focal.emplace_back(SubsetMask{static_cast<std::uint32_t>(a)}, mobius[a]);
            total += mobius[a];
        }
    }
    if (std::abs(total - 1.0) <= tol.noise && total != 1.0) {
        for (auto& e : focal) e.second /= total;
    }
    return MassFunction(space, std::move(focal), tol);
}

/// Moebius inversion. Returns the mass function when every Moebius value is
/// >= -tol.noise, otherwise a report listing the offending subsets.
inline std::variant<MassFunction, NegativeMassReport> belief_to_mass(const SetFunction& f,
                                                                     Tolerances tol = default_tolerances) {
    require_b1(f, tol);
    std::vector<double> t = mobius_transform(f);
    NegativeMassReport report{f.space(), {}, {}};
    for (std::size_t a = 1; a < t.size(); ++a) {
        if (t[a] < -tol.noise) report.negatives.emplace_back(SubsetMask{static_cast<std::uint32_t>(a)}, t[a]);
    }
    if (!report.negatives.empty()) {
        report.mobius = std::move(t);
        return report;
    }
    return mass_from_mobius(f.space(), t, tol);
}

inline BeliefFunction BeliefFunction::from_values(const SetFunction& f, Tolerances tol) {
    auto r = belief_to_mass(f, tol);
    if (auto* neg = std::get_if<NegativeMassReport>(&r)) {
        const auto& [set, v] = neg->negatives.front();
        throw InvalidArgument("not a belief function: Moebius value " + std::to_string(v) + " at " +
                              f.space().format(set));
    }
    return BeliefFunction(f.space(), std::vector<double>(f.values().begin(), f.values().end()));
}

/// Of the negative entries with at least `min_size` elements, the one with the
/// fewest elements; ties go to the highest mask, i.e. the set avoiding the
/// earliest outcomes.
inline std::optional<std::pair<SubsetMask, double>> smallest_negative(const NegativeMassReport& r,
                                                                      int min_size = 1) {
    std::optional<std::pair<SubsetMask, double>> best;
    for (const auto& e : r.negatives) {
        if (e.first.size() < min_size) continue;
        if (!best || e.first.size() < best->first.size() ||
            (e.first.size() == best->first.size() && e.first > best->first)) {
            best = e;
        }
    }
    return best;
}

/// The family {S0 \ {s} : s in S0}.
inline std::vector<SubsetMask> deletion_family(SubsetMask s0) {
    std::vector<SubsetMask> family;
    for (auto s : s0.members()) family.push_back(s0.without(s));
    return family;
}

struct BeliefVerdict {
    enum class Failure { none, empty_set, full_set, negative_mass };

    Failure failure = Failure::none;
    /// Subset with negative Moebius value (negative_mass only).
    SubsetMask witness;
    double mass = 0.0;
    /// {S0 \ {s}} for |S0| >= 2; its B2 slack equals `mass`.
    std::vector<SubsetMask> b2_family;
    std::string reason;

    bool is_belief() const { return failure == Failure::none; }
    explicit operator bool() const { return is_belief(); }
};

inline BeliefVerdict is_belief_function(const SetFunction& f, Tolerances tol = default_tolerances) {
    BeliefVerdict v;
    try {
        require_b1(f, tol);
    } catch (const B1Violation& e) {
        v.failure = std::abs(f[SubsetMask::empty()]) > tol.exact ? BeliefVerdict::Failure::empty_set
                                                                  : BeliefVerdict::Failure::full_set;
        v.reason = e.what();
        return v;
    }
    auto r = belief_to_mass(f, tol);
    if (auto* neg = std::get_if<NegativeMassReport>(&r)) {
        auto [s0, m] = *smallest_negative(*neg);
        v.failure = BeliefVerdict::Failure::negative_mass;
        v.witness = s0;
        v.mass = m;
        if (s0.size() >= 2) v.b2_family = deletion_family(s0);
        v.reason = "negative Moebius value " + std::to_string(m) + " at " + f.space().format(s0);
    }
    return v;
}

inline constexpr std::size_t max_b2_family = 20;

/// f(union A_i) - sum over nonempty I of (-1)^{|I|+1} f(intersection over I of A_i).
inline double check_b2_instance(const SetFunction& f, std::span<const SubsetMask> family) {
    const std::size_t n = family.size();
    if (n == 0) throw InvalidArgument("B2 family must contain at least one set");
    if (n > max_b2_family) {
        throw FamilyTooLarge("B2 family of " + std::to_string(n) + " sets exceeds the limit of " +
                             std::to_string(max_b2_family));
    }
    SubsetMask all;
    for (auto a : family) {
        if (!f.space().contains(a)) throw InvalidArgument("family member outside the outcome space");
        all = all | a;
    }
    // Intersections over sub-families, built incrementally from the lowest index.
    const std::size_t count = std::size_t{1} << n;
    std::vector<SubsetMask> inter(count);
    inter[0] = f.space().full();
    double alternating = 0.0;
    for (std::size_t sub = 1; sub < count; ++sub) {
        const std::size_t low = static_cast<std::size_t>(std::countr_zero(sub));
        inter[sub] = inter[sub & (sub - 1)] & family[low];
        const double sign = (std::popcount(sub) % 2 == 1) ? 1.0 : -1.0;
        alternating += sign * f[inter[sub]];
    }
    return f[all] - alternating;
}

inline double check_b2_instance(const SetFunction& f, std::initializer_list<SubsetMask> family) {
    std::vector<SubsetMask> v(family);
    return check_b2_instance(f, std::span<const SubsetMask>(v));
}

/// 1 - Bel(complement of A).
inline double plausibility(const BeliefFunction& bel, SubsetMask a) {
    return 1.0 - bel[bel.space().complement(a)];
}

} // namespace beliefaudit
