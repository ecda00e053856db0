#pragma once

#include "imcergo/model.hpp"

#include <cstddef>
#include <vector>

namespace imcergo {

/// State of the upper expected time-average recursion after `k` steps.
struct AverageRecursionState {
    std::size_t k = 0;
    /// Running sum: m_tilde_1 = f, m_tilde_k = f + upper(m_tilde_{k-1}).
    Gamble m_tilde;
    /// m_tilde / k, the upper expected time average over k time instants.
    Gamble m_bar;
};

/// Upper transition operator of a separately specified set of transition
/// matrices. Holds a reference; the model must outlive the operator.
class UpperTransitionOperator {
public:
    explicit UpperTransitionOperator(const TransitionModel& model) : model_(&model) {}

    const TransitionModel& model() const noexcept { return *model_; }
    std::size_t size() const noexcept { return model_->size(); }

    /// (upper h)(x) = sup over row x of E[h].
    Gamble apply_upper(const Gamble& h) const;
    Gamble apply_lower(const Gamble& h) const;
    /// upper^k f; k = 0 is the identity.
    Gamble iterate_upper(const Gamble& f, std::size_t k) const;
    Gamble iterate_lower(const Gamble& f, std::size_t k) const;
    /// f + upper(h)
    Gamble apply_topical(const Gamble& f, const Gamble& h) const;

    /// Requires k >= 1.
    AverageRecursionState average_recursion(const Gamble& f, std::size_t k) const;
    /// States for k = 1..k_max, each step reusing the previous running sum.
    std::vector<AverageRecursionState> average_trace(const Gamble& f, std::size_t k_max) const;

private:
    void check(const Gamble& h) const;

    const TransitionModel* model_;
};

} // namespace imcergo
