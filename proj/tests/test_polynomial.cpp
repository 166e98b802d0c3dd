#include <catch2/catch_amalgamated.hpp>

#include "airyspec/polynomial.hpp"

using airyspec::Polynomial;
using airyspec::bigint;

namespace {

Polynomial poly(std::initializer_list<long long> ascending) {
    std::vector<bigint> c;
    for (long long v : ascending) c.emplace_back(v);
    return Polynomial(std::move(c));
}

}  // namespace

TEST_CASE("basic polynomial arithmetic") {
    const Polynomial p = poly({1, 0, 3});  // 1 + 3x^2
    CHECK(p.degree() == 2);
    CHECK(p.coeff(0) == 1);
    CHECK(p.coeff(1) == 0);
    CHECK(p.coeff(2) == 3);
    CHECK(p.coeff(7) == 0);

    CHECK(p.derivative() == poly({0, 6}));
    CHECK(p.shifted_up() == poly({0, 1, 0, 3}));
    CHECK(p + poly({0, 2}) == poly({1, 2, 3}));

    CHECK(p(bigint(2)) == 13);
    CHECK(p(2.0) == 13.0);

    const Polynomial zero;
    CHECK(zero.degree() == -1);
    CHECK(zero.derivative() == zero);
    CHECK(zero(3.0) == 0.0);
}

TEST_CASE("derivative polynomial pairs match the hand-computed table") {
    // Ai^(n) = p_n Ai + q_n Ai', generated by p' + x q and p + q'.
    const std::pair<Polynomial, Polynomial> expected[] = {
        {poly({1}), poly({})},            // n = 0
        {poly({}), poly({1})},            // n = 1
        {poly({0, 1}), poly({})},         // n = 2
        {poly({1}), poly({0, 1})},        // n = 3
        {poly({0, 0, 1}), poly({2})},     // n = 4
        {poly({0, 4}), poly({0, 0, 1})},  // n = 5
        {poly({4, 0, 0, 1}), poly({0, 6})},
        {poly({0, 0, 9}), poly({10, 0, 0, 1})},
        {poly({0, 28, 0, 0, 1}), poly({0, 0, 12})},
        {poly({28, 0, 0, 16}), poly({0, 52, 0, 0, 1})},
        {poly({0, 0, 100, 0, 0, 1}), poly({80, 0, 0, 20})},  // n = 10
    };
    for (unsigned n = 0; n <= 10; ++n) {
        const auto [p, q] = airyspec::derivative_polynomials(n);
        INFO("n = " << n);
        CHECK(p == expected[n].first);
        CHECK(q == expected[n].second);
    }
}

TEST_CASE("derivative polynomials satisfy the differentiated recursion") {
    // Differentiating Ai^(n) = p_n Ai + q_n Ai' once more gives
    // p_{n+1} = p_n' + x q_n and q_{n+1} = p_n + q_n'.
    for (unsigned n = 0; n <= 30; ++n) {
        const auto [p, q] = airyspec::derivative_polynomials(n);
        const auto [pn, qn] = airyspec::derivative_polynomials(n + 1);
        INFO("n = " << n);
        CHECK(pn == p.derivative() + q.shifted_up());
        CHECK(qn == p + q.derivative());
    }
}
