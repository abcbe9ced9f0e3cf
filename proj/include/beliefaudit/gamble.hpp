#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "beliefaudit/errors.hpp"
#include "beliefaudit/outcome_space.hpp"

namespace beliefaudit {

/// A bet on the outcome space: payoff(i) is paid out if outcome i obtains.
class Gamble {
public:
    Gamble(OutcomeSpace space, std::vector<double> payoff)
        : space_(std::move(space)), payoff_(std::move(payoff)) {
        if (payoff_.size() != space_.size()) {
            throw InvalidArgument("gamble needs " + std::to_string(space_.size()) + " payoffs, got " +
                                  std::to_string(payoff_.size()));
        }
        for (double v : payoff_) {
            if (!std::isfinite(v)) throw InvalidArgument("gamble payoffs must be finite");
        }
    }

    static Gamble constant(const OutcomeSpace& space, double c) {
        return Gamble(space, std::vector<double>(space.size(), c));
    }

    /// 1_A, scaled by `height`.
    static Gamble indicator(const OutcomeSpace& space, SubsetMask a, double height = 1.0) {
        if (!space.contains(a)) throw InvalidArgument("indicator set outside the outcome space");
        std::vector<double> p(space.size(), 0.0);
        for (auto i : a.members()) p[i] = height;
        return Gamble(space, std::move(p));
    }

    const OutcomeSpace& space() const { return space_; }
    std::span<const double> payoff() const { return payoff_; }
    std::size_t size() const { return payoff_.size(); }
    double operator[](std::size_t i) const { return payoff_[i]; }

    double min() const { return *std::min_element(payoff_.begin(), payoff_.end()); }
    double max() const { return *std::max_element(payoff_.begin(), payoff_.end()); }

    /// Minimum payoff over the members of a nonempty set.
    double min_over(SubsetMask s) const {
        double m = INFINITY;
        for (std::uint32_t b = s.bits(); b != 0; b &= b - 1) {
            m = std::min(m, payoff_[static_cast<std::size_t>(std::countr_zero(b))]);
        }
        return m;
    }

    bool is_indicator() const {
        return std::all_of(payoff_.begin(), payoff_.end(), [](double v) { return v == 0.0 || v == 1.0; });
    }

    Gamble operator-() const { return scaled(-1.0); }

    Gamble scaled(double lambda) const {
        std::vector<double> p(payoff_);
        for (double& v : p) v *= lambda;
        return Gamble(space_, std::move(p));
    }

    Gamble shifted(double c) const {
        std::vector<double> p(payoff_);
        for (double& v : p) v += c;
        return Gamble(space_, std::move(p));
    }

    friend Gamble operator+(const Gamble& x, const Gamble& y) {
        require_same_space(x.space_, y.space_);
        std::vector<double> p(x.payoff_);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += y.payoff_[i];
        return Gamble(x.space_, std::move(p));
    }
    friend Gamble operator-(const Gamble& x, const Gamble& y) { return x + (-y); }
    friend Gamble operator*(double lambda, const Gamble& x) { return x.scaled(lambda); }

    friend bool operator==(const Gamble& x, const Gamble& y) {
        return x.space_ == y.space_ && x.payoff_ == y.payoff_;
    }

private:
    OutcomeSpace space_;
    std::vector<double> payoff_;
};

} // namespace beliefaudit
