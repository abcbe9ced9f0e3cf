#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "beliefaudit/errors.hpp"

namespace beliefaudit {

inline constexpr std::size_t max_outcomes = 24;

/// A subset of the outcome space: bit i is set iff outcome i is a member.
class SubsetMask {
public:
    constexpr SubsetMask() = default;
    constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

    static constexpr SubsetMask empty() { return SubsetMask{}; }
    static constexpr SubsetMask singleton(std::size_t i) { return SubsetMask{std::uint32_t{1} << i}; }

    constexpr std::uint32_t bits() const { return bits_; }
    constexpr std::size_t index() const { return bits_; }
    constexpr bool is_empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
    constexpr bool subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }

    /// Index of the smallest member; undefined on the empty set.
    constexpr std::size_t lowest() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }

    constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask{bits_ | o.bits_}; }
    constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask{bits_ & o.bits_}; }
    constexpr SubsetMask without(std::size_t i) const { return SubsetMask{bits_ & ~(std::uint32_t{1} << i)}; }
    constexpr SubsetMask with(std::size_t i) const { return SubsetMask{bits_ | (std::uint32_t{1} << i)}; }

    constexpr auto operator<=>(const SubsetMask&) const = default;

    /// Members in ascending index order.
    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
            out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
        }
        return out;
    }

private:
    std::uint32_t bits_ = 0;
};

/// Ordered finite set of labelled outcomes.
///
/// Cheap to copy: the label table is shared and immutable. Two spaces are
/// equal when their label sequences are equal.
class OutcomeSpace {
public:
    explicit OutcomeSpace(std::vector<std::string> labels) {
        if (labels.empty() || labels.size() > max_outcomes) {
            throw SizeOutOfRange("outcome space must have between 1 and " +
                                 std::to_string(max_outcomes) + " outcomes, got " +
                                 std::to_string(labels.size()));
        }
        std::unordered_set<std::string> seen;
        for (const auto& l : labels) {
            if (!seen.insert(l).second) throw DuplicateLabel(l);
        }
        labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
    }

    std::size_t size() const { return labels_->size(); }
    /// Number of subsets, 2^n.
    std::size_t num_subsets() const { return std::size_t{1} << size(); }
    SubsetMask full() const { return SubsetMask{static_cast<std::uint32_t>(num_subsets() - 1)}; }
    SubsetMask complement(SubsetMask a) const { return SubsetMask{~a.bits() & full().bits()}; }
    bool contains(SubsetMask a) const { return a.bits() < num_subsets(); }

    const std::vector<std::string>& labels() const { return *labels_; }
    const std::string& label(std::size_t i) const { return labels_->at(i); }

    std::optional<std::size_t> index_of(const std::string& label) const {
        for (std::size_t i = 0; i < size(); ++i) {
            if ((*labels_)[i] == label) return i;
        }
        return std::nullopt;
    }

    /// Builds a mask from labels; throws InvalidArgument on unknown labels.
    SubsetMask subset(std::span<const std::string> labels) const {
        SubsetMask m;
        for (const auto& l : labels) {
            auto i = index_of(l);
            if (!i) throw InvalidArgument("unknown outcome label '" + l + "'");
            m = m.with(*i);
        }
        return m;
    }
    SubsetMask subset(std::initializer_list<std::string> labels) const {
        std::vector<std::string> v(labels);
        return subset(std::span<const std::string>(v));
    }

    /// Labels of the members of `a`, in canonical order.
    std::vector<std::string> labels_of(SubsetMask a) const {
        std::vector<std::string> out;
        for (auto i : a.members()) out.push_back(label(i));
        return out;
    }

    /// "{a,b}" style rendering.
    std::string format(SubsetMask a) const {
        std::string s = "{";
        bool first = true;
        for (auto i : a.members()) {
            if (!first) s += ",";
            s += label(i);
            first = false;
        }
        return s + "}";
    }

    friend bool operator==(const OutcomeSpace& a, const OutcomeSpace& b) {
        return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
    }

private:
    std::shared_ptr<const std::vector<std::string>> labels_;
};

inline OutcomeSpace make_space(std::vector<std::string> labels) {
    return OutcomeSpace(std::move(labels));
}

inline void require_same_space(const OutcomeSpace& a, const OutcomeSpace& b) {
    if (!(a == b)) throw SpaceMismatch();
}

} // namespace beliefaudit
