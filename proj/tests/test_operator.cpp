#include "imcergo/graph.hpp"
#include "imcergo/operator.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

#include <doctest.h>

using namespace imcergo;
using namespace imcergo::testing;

TEST_CASE("apply_upper and apply_lower examples") {
    const auto ex1 = swap_model();
    const auto ex2 = vacuous_return_model();
    const UpperTransitionOperator op1(ex1), op2(ex2);

    CHECK(op2.apply_upper(Gamble{0, 1}) == Gamble{1, 0});
    CHECK(op1.apply_upper(Gamble{0, 1}) == Gamble{1, 0});
    CHECK(op2.apply_upper(Gamble::constant(2, 3.5)) == Gamble::constant(2, 3.5));
    CHECK(op2.apply_lower(Gamble::constant(2, -2)) == Gamble::constant(2, -2));
    CHECK(op1.apply_lower(Gamble{0, 1}) == Gamble{1, 0});

    // Extreme matrices of the vacuous-return model: row a in {delta_a, delta_b}, row b = delta_a.
    // min over them of T 1_b: row a -> 0, row b -> 0.
    CHECK(op2.apply_lower(Gamble{0, 1}) == Gamble{0, 0});
    CHECK_THROWS_AS(op2.apply_upper(Gamble{0, 1, 2}), Error);
}

TEST_CASE("iterate_upper examples") {
    const auto ex1 = swap_model();
    const auto ex2 = vacuous_return_model();
    const UpperTransitionOperator op1(ex1), op2(ex2);
    CHECK(op2.iterate_upper(Gamble{0, 1}, 2) == Gamble{1, 1});
    CHECK(op2.iterate_upper(Gamble{0.3, -2}, 0) == Gamble{0.3, -2});
    CHECK(op1.iterate_upper(Gamble{4, 9}, 2) == Gamble{4, 9});
    CHECK(op1.iterate_upper(Gamble{4, 9}, 3) == Gamble{9, 4});
    for (std::size_t k = 2; k < 10; ++k) CHECK(op2.iterate_upper(Gamble{-1, 2.5}, k) == Gamble{2.5, 2.5});
}

TEST_CASE("apply_topical examples") {
    const auto ex1 = swap_model();
    const auto ex2 = vacuous_return_model();
    const UpperTransitionOperator op1(ex1), op2(ex2);
    CHECK(op2.apply_topical(Gamble{0, 1}, Gamble::zero(2)) == Gamble{0, 1});
    CHECK(op2.apply_topical(Gamble::zero(2), Gamble{0.2, 0.7}) == op2.apply_upper(Gamble{0.2, 0.7}));
    // f + T h = [0,1] + [1,0]
    CHECK(op1.apply_topical(Gamble{0, 1}, Gamble{0, 1}) == Gamble{1, 1});
}

TEST_CASE("average_recursion and average_trace examples") {
    const auto ex1 = swap_model();
    const auto ex2 = vacuous_return_model();
    const UpperTransitionOperator op1(ex1), op2(ex2);
    const Gamble ind_b{0, 1};

    CHECK(op2.average_recursion(ind_b, 2).m_bar == Gamble{0.5, 0.5});
    const auto s3 = op2.average_recursion(ind_b, 3);
    CHECK(s3.m_tilde == Gamble{1, 2});
    CHECK(s3.m_bar[0] == doctest::Approx(1.0 / 3));
    CHECK(s3.m_bar[1] == doctest::Approx(2.0 / 3));
    CHECK(op2.average_recursion(Gamble::constant(2, 1.75), 7).m_bar == Gamble::constant(2, 1.75));
    CHECK_THROWS_AS(op2.average_recursion(ind_b, 0), Error);

    // Swap chain by hand: m~ = [0,1], [1,1], [1,2], [2,2]
    const auto trace = op1.average_trace(ind_b, 4);
    REQUIRE(trace.size() == 4);
    CHECK(trace[0].m_bar == Gamble{0, 1});
    CHECK(trace[1].m_bar == Gamble{0.5, 0.5});
    CHECK(trace[2].m_bar[0] == doctest::Approx(1.0 / 3));
    CHECK(trace[2].m_bar[1] == doctest::Approx(2.0 / 3));
    CHECK(trace[3].m_bar == Gamble{0.5, 0.5});

    const auto single = op2.average_trace(Gamble{0.1, 0.9}, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].m_bar == Gamble{0.1, 0.9});
    CHECK(op2.average_trace(ind_b, 3).back().m_bar == s3.m_bar);
}

TEST_CASE("trace entries equal average_recursion at the same k") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const auto m = random_model(rng);
        const UpperTransitionOperator op(m);
        const Gamble f = random_gamble(rng, m.size());
        const auto trace = op.average_trace(f, 12);
        for (std::size_t k = 1; k <= 12; ++k) {
            const auto s = op.average_recursion(f, k);
            CHECK(trace[k - 1].m_tilde == s.m_tilde);
            CHECK(trace[k - 1].m_bar == s.m_bar);
            CHECK(s.m_bar == s.m_tilde / static_cast<double>(k));
            CHECK(s.m_bar.max() <= f.max() + 1e-12);
            CHECK(s.m_bar.min() >= f.min() - 1e-12);
        }
    }
}

TEST_CASE("apply_upper matches the brute-force row oracle") {
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        const auto m = random_model(rng);
        const UpperTransitionOperator op(m);
        const Gamble h = random_gamble(rng, m.size(), 2.0);
        CHECK(sup_distance(op.apply_upper(h), brute_apply_upper(m, h)) <= 1e-12);
    }
}

TEST_CASE("iterates of the upper operator are coherent (k <= 5)") {
    Rng rng(7);
    for (int t = 0; t < 40; ++t) {
        const auto m = random_model(rng);
        const UpperTransitionOperator op(m);
        const std::size_t n = m.size();
        for (std::size_t k = 1; k <= 5; ++k) {
            const Gamble h = random_gamble(rng, n, 2.0);
            const Gamble g = random_gamble(rng, n, 2.0);
            const double lambda = uniform(rng, 0.0, 3.0);
            const double mu = uniform(rng, -3.0, 3.0);
            const double tol = 1e-9 * 8.0;
            const Gamble th = op.iterate_upper(h, k);
            const Gamble tg = op.iterate_upper(g, k);
            const Gamble sum = op.iterate_upper(h + g, k);
            const Gamble scaled = op.iterate_upper(lambda * h, k);
            const Gamble shifted = op.iterate_upper(h + mu, k);
            const Gamble diff = op.iterate_upper(h - g, k);
            for (std::size_t x = 0; x < n; ++x) {
                CHECK(sum[x] <= th[x] + tg[x] + tol);
                CHECK(std::abs(scaled[x] - lambda * th[x]) <= tol);
                CHECK(std::abs(shifted[x] - mu - th[x]) <= tol);
                CHECK(th[x] <= h.max() + tol);
                CHECK(th[x] >= h.min() - tol);
                CHECK(th[x] - tg[x] <= diff[x] + tol);
            }
            std::vector<double> bump(n);
            for (double& b : bump) b = uniform(rng, 0.0, 1.0);
            const Gamble hi = h + Gamble(bump);
            const Gamble thi = op.iterate_upper(hi, k);
            for (std::size_t x = 0; x < n; ++x) CHECK(th[x] <= thi[x] + tol);
        }
    }
}

TEST_CASE("sup-norm non-expansiveness") {
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        const auto m = random_model(rng);
        const UpperTransitionOperator op(m);
        const Gamble h = random_gamble(rng, m.size(), 3.0);
        const Gamble g = random_gamble(rng, m.size(), 3.0);
        CHECK(sup_distance(op.apply_upper(h), op.apply_upper(g)) <= sup_distance(h, g) + 1e-12);
    }
}

TEST_CASE("topical map deviates from the upper operator by at most k |f|") {
    Rng rng(9);
    for (int t = 0; t < 40; ++t) {
        const auto m = random_model(rng);
        const UpperTransitionOperator op(m);
        const Gamble f = random_gamble(rng, m.size());
        const Gamble h = random_gamble(rng, m.size(), 2.0);
        Gamble plain = h, topical = h;
        for (std::size_t k = 1; k <= 6; ++k) {
            plain = op.apply_upper(plain);
            topical = op.apply_topical(f, topical);
            CHECK(sup_distance(plain, topical) <= static_cast<double>(k) * f.sup_norm() + 1e-9);
        }
    }
}

TEST_CASE("closed classes are never left and outside mass decreases") {
    Rng rng(10);
    for (int t = 0; t < 60; ++t) {
        const auto m = random_model(rng);
        const UpperTransitionOperator op(m);
        const auto d = decompose(build_graph(m));
        for (std::size_t c : d.closed_classes()) {
            const auto& cls = d.classes[c];
            const auto inside = to_mask(m.size(), cls);
            StateSet outside;
            for (std::size_t x = 0; x < m.size(); ++x) {
                if (!inside[x]) outside.push_back(x);
            }
            if (outside.empty()) continue;
            const Gamble ind = Gamble::indicator(m.size(), outside);
            Gamble prev = ind;
            for (std::size_t k = 1; k <= 5; ++k) {
                const Gamble cur = op.apply_upper(prev);
                for (std::size_t x : cls) CHECK(cur[x] == 0.0);
                for (std::size_t x = 0; x < m.size(); ++x) CHECK(cur[x] <= prev[x] + 1e-12);
                prev = cur;
            }
        }
    }
}
