#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "beliefaudit/errors.hpp"
#include "beliefaudit/gamble.hpp"
#include "beliefaudit/outcome_space.hpp"
#include "beliefaudit/set_function.hpp"

namespace beliefaudit {

/// Two-valued valuation B(A) = 1 iff core is contained in A.
class BeliefValuation {
public:
    BeliefValuation(OutcomeSpace space, SubsetMask core) : space_(std::move(space)), core_(core) {
        if (core_.is_empty()) throw InvalidArgument("belief valuation core must be nonempty");
        if (!space_.contains(core_)) throw InvalidArgument("core outside the outcome space");
    }

    const OutcomeSpace& space() const { return space_; }
    SubsetMask core() const { return core_; }

    bool operator()(SubsetMask a) const { return core_.subset_of(a); }

    /// Singleton core: the classical truth valuation at one outcome.
    bool is_truth_valuation() const { return core_.size() == 1; }

private:
    OutcomeSpace space_;
    SubsetMask core_;
};

/// Worst payoff of X over the core.
inline double guaranteed_revenue(const BeliefValuation& v, const Gamble& x) {
    require_same_space(v.space(), x.space());
    return x.min_over(v.core());
}

struct ValuationRejection {
    enum class Bullet { not_two_valued, complement_clash, monotonicity, intersection_closure, full_set };
    Bullet bullet;
    std::string reason;
};

/// Accepts f iff it is a belief valuation and returns it; otherwise names the
/// first failed condition.
inline std::variant<BeliefValuation, ValuationRejection> is_belief_valuation(const SetFunction& f) {
    using Bullet = ValuationRejection::Bullet;
    const OutcomeSpace& space = f.space();
    const std::size_t count = space.num_subsets();
    auto mask = [](std::size_t a) { return SubsetMask{static_cast<std::uint32_t>(a)}; };

    for (std::size_t a = 0; a < count; ++a) {
        const double v = f[mask(a)];
        if (v != 0.0 && v != 1.0) {
            return ValuationRejection{Bullet::not_two_valued,
                                      "value at " + space.format(mask(a)) + " is not 0 or 1"};
        }
    }
    for (std::size_t a = 0; a < count; ++a) {
        const SubsetMask s = mask(a);
        if (f[s] == 1.0 && f[space.complement(s)] == 1.0) {
            return ValuationRejection{Bullet::complement_clash, "both " + space.format(s) + " and its complement " +
                                                                    space.format(space.complement(s)) + " have value 1"};
        }
    }
    // Closure under adding one element at a time gives closure under supersets.
    for (std::size_t a = 0; a < count; ++a) {
        const SubsetMask s = mask(a);
        if (f[s] != 1.0) continue;
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (!s.contains(i) && f[s.with(i)] != 1.0) {
                return ValuationRejection{Bullet::monotonicity, space.format(s) + " has value 1 but its superset " +
                                                                    space.format(s.with(i)) + " does not"};
            }
        }
    }
    // For monotone f, closure under intersection holds iff the intersection of
    // all value-1 sets has value 1.
    SubsetMask core = space.full();
    bool any = false;
    for (std::size_t a = 0; a < count; ++a) {
        if (f[mask(a)] == 1.0) {
            core = core & mask(a);
            any = true;
        }
    }
    if (any && f[core] != 1.0) {
        return ValuationRejection{Bullet::intersection_closure,
                                  "the intersection " + space.format(core) + " of all value-1 sets has value 0"};
    }
    if (f[space.full()] != 1.0) {
        return ValuationRejection{Bullet::full_set, "value at the whole space is not 1"};
    }
    return BeliefValuation(space, core);
}

} // namespace beliefaudit
