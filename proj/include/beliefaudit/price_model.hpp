#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "beliefaudit/errors.hpp"
#include "beliefaudit/gamble.hpp"
#include "beliefaudit/lattice.hpp"
#include "beliefaudit/outcome_space.hpp"
#include "beliefaudit/set_function.hpp"
#include "beliefaudit/tolerances.hpp"

namespace beliefaudit {

/// Anything that quotes a maximum buying price for a gamble.
template <class F>
concept BuyFunctional = requires(const F& f, const Gamble& x) {
    { f(x) } -> std::convertible_to<double>;
};

namespace detail {

inline void require_probability_vector(std::span<const double> p, std::size_t n, Tolerances tol,
                                       const char* what) {
    if (p.size() != n) {
        throw InvalidArgument(std::string(what) + " has " + std::to_string(p.size()) +
                              " entries, expected " + std::to_string(n));
    }
    double total = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidArgument(std::string(what) + " has a negative entry");
        total += v;
    }
    if (std::abs(total - 1.0) > tol.exact) {
        throw InvalidArgument(std::string(what) + " sums to " + std::to_string(total) + ", expected 1");
    }
}

inline double dot(std::span<const double> p, std::span<const double> x) {
    return std::inner_product(p.begin(), p.end(), x.begin(), 0.0);
}

/// Additive set function A -> sum of p over A, dense over all subsets.
inline std::vector<double> additive_table(std::span<const double> p) {
    std::vector<double> t(std::size_t{1} << p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) t[std::size_t{1} << i] = p[i];
    lattice::zeta(t);
    return t;
}

} // namespace detail

/// Expectation under a single probability vector.
struct Linear {
    std::vector<double> prob;
};

/// Choquet integral with respect to the belief function of a mass function.
struct Choquet {
    MassFunction mass;
};

/// Minimum expectation over a finite list of probability vectors.
struct LowerEnvelope {
    std::vector<std::vector<double>> rows;
};

/// sum over focal S of m(S) * min_{w in S} X(w).
inline double choquet_value(const MassFunction& m, const Gamble& x) {
    require_same_space(m.space(), x.space());
    double total = 0.0;
    for (const auto& [set, w] : m.focal_sets()) total += w * x.min_over(set);
    return total;
}

/// A representable buy function: linear, Choquet, or a lower envelope.
class PriceModel {
public:
    using Representation = std::variant<Linear, Choquet, LowerEnvelope>;

    PriceModel(OutcomeSpace space, Linear lin, Tolerances tol = default_tolerances)
        : space_(std::move(space)), rep_(std::move(lin)) {
        detail::require_probability_vector(std::get<Linear>(rep_).prob, space_.size(), tol,
                                           "probability vector");
    }

    explicit PriceModel(Choquet ch) : space_(ch.mass.space()), rep_(std::move(ch)) {}

    PriceModel(OutcomeSpace space, LowerEnvelope env, Tolerances tol = default_tolerances)
        : space_(std::move(space)), rep_(std::move(env)) {
        const auto& rows = std::get<LowerEnvelope>(rep_).rows;
        if (rows.empty()) throw InvalidArgument("lower envelope needs at least one row");
        for (const auto& r : rows) detail::require_probability_vector(r, space_.size(), tol, "envelope row");
    }

    static PriceModel linear(const OutcomeSpace& space, std::vector<double> p) {
        return PriceModel(space, Linear{std::move(p)});
    }
    static PriceModel choquet(MassFunction m) { return PriceModel(Choquet{std::move(m)}); }
    static PriceModel lower_envelope(const OutcomeSpace& space, std::vector<std::vector<double>> rows) {
        return PriceModel(space, LowerEnvelope{std::move(rows)});
    }

    const OutcomeSpace& space() const { return space_; }
    const Representation& representation() const { return rep_; }

    const char* kind() const {
        return std::visit(
            [](const auto& r) -> const char* {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Linear>) return "linear";
                else if constexpr (std::is_same_v<T, Choquet>) return "choquet";
                else return "lower_envelope";
            },
            rep_);
    }

    /// Maximum price the model pays for X.
    double buy(const Gamble& x) const {
        require_same_space(space_, x.space());
        return std::visit(
            [&](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Linear>) {
                    return detail::dot(r.prob, x.payoff());
                } else if constexpr (std::is_same_v<T, Choquet>) {
                    return choquet_value(r.mass, x);
                } else {
                    double best = INFINITY;
                    for (const auto& row : r.rows) best = std::min(best, detail::dot(row, x.payoff()));
                    return best;
                }
            },
            rep_);
    }

    /// Minimum price the model sells X for: -buy(-X).
    double sell(const Gamble& x) const { return -buy(-x); }

    double operator()(const Gamble& x) const { return buy(x); }

private:
    OutcomeSpace space_;
    Representation rep_;
};

inline double buy(const PriceModel& pm, const Gamble& x) { return pm.buy(x); }
inline double sell(const PriceModel& pm, const Gamble& x) { return pm.sell(x); }

/// The two-valued acceptance function recovered from the buy price.
inline bool accepts(const PriceModel& pm, const Gamble& x) { return pm.buy(x) >= 0.0; }

/// A -> buy(1_A) by pricing every indicator gamble.
template <BuyFunctional F>
SetFunction induced_set_function(const OutcomeSpace& space, const F& buy_fn) {
    std::vector<double> t(space.num_subsets());
    for (std::size_t a = 0; a < t.size(); ++a) {
        t[a] = static_cast<double>(buy_fn(Gamble::indicator(space, SubsetMask{static_cast<std::uint32_t>(a)})));
    }
    return SetFunction(space, std::move(t));
}

/// A -> buy(1_A), computed per representation with lattice sums.
inline SetFunction induced_set_function(const PriceModel& pm) {
    std::vector<double> t = std::visit(
        [&](const auto& r) -> std::vector<double> {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Linear>) {
                return detail::additive_table(r.prob);
            } else if constexpr (std::is_same_v<T, Choquet>) {
                auto bel = mass_to_belief(r.mass);
                return {bel.values().begin(), bel.values().end()};
            } else {
                std::vector<double> best = detail::additive_table(r.rows.front());
                for (std::size_t k = 1; k < r.rows.size(); ++k) {
                    auto t = detail::additive_table(r.rows[k]);
                    for (std::size_t a = 0; a < t.size(); ++a) best[a] = std::min(best[a], t[a]);
                }
                return best;
            }
        },
        pm.representation());
    return SetFunction(pm.space(), std::move(t));
}

/// Choquet integral in layer form: sum_j (y_j - y_{j-1}) Bel({X >= y_j}) with
/// y_0 = 0 and y_1 < ... < y_K the distinct payoffs. Payoffs closer than
/// tol.exact to the previous distinct value share its layer.
inline double choquet_layer_cake(const BeliefFunction& bel, const Gamble& x,
                                 Tolerances tol = default_tolerances) {
    require_same_space(bel.space(), x.space());
    std::vector<double> levels(x.payoff().begin(), x.payoff().end());
    std::sort(levels.begin(), levels.end());
    double total = 0.0;
    double previous = 0.0;
    bool have_level = false;
    for (double y : levels) {
        if (have_level && y - previous < tol.exact) continue;
        SubsetMask upper;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] >= y) upper = upper.with(i);
        }
        total += (y - previous) * bel[upper];
        previous = y;
        have_level = true;
    }
    return total;
}

} // namespace beliefaudit
