#include "imcergo/operator.hpp"

namespace imcergo {

void UpperTransitionOperator::check(const Gamble& h) const {
    if (h.size() != size()) {
        throw Error(Errc::DimensionMismatch, "gamble has " + std::to_string(h.size()) +
                                                 " entries, model has " + std::to_string(size()) + " states");
    }
}

Gamble UpperTransitionOperator::apply_upper(const Gamble& h) const {
    check(h);
    std::vector<double> out(size());
    for (std::size_t x = 0; x < size(); ++x) out[x] = row_upper_expectation(model_->row(x), h);
    return Gamble(std::move(out));
}

Gamble UpperTransitionOperator::apply_lower(const Gamble& h) const { return -apply_upper(-h); }

Gamble UpperTransitionOperator::iterate_upper(const Gamble& f, std::size_t k) const {
    check(f);
    Gamble g = f;
    for (std::size_t i = 0; i < k; ++i) g = apply_upper(g);
    return g;
}

Gamble UpperTransitionOperator::iterate_lower(const Gamble& f, std::size_t k) const {
    return -iterate_upper(-f, k);
}

Gamble UpperTransitionOperator::apply_topical(const Gamble& f, const Gamble& h) const {
    check(f);
    return f + apply_upper(h);
}

AverageRecursionState UpperTransitionOperator::average_recursion(const Gamble& f, std::size_t k) const {
    if (k == 0) throw Error(Errc::InvalidArgument, "average_recursion needs k >= 1");
    check(f);
    Gamble m = f;
    for (std::size_t i = 2; i <= k; ++i) m = apply_topical(f, m);
    Gamble bar = m / static_cast<double>(k);
    return {k, std::move(m), std::move(bar)};
}

std::vector<AverageRecursionState> UpperTransitionOperator::average_trace(const Gamble& f,
                                                                          std::size_t k_max) const {
    if (k_max == 0) throw Error(Errc::InvalidArgument, "average_trace needs k_max >= 1");
    check(f);
    std::vector<AverageRecursionState> trace;
    trace.reserve(k_max);
    Gamble m = f;
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (k > 1) m = apply_topical(f, m);
        trace.push_back({k, m, m / static_cast<double>(k)});
    }
    return trace;
}

} // namespace imcergo
