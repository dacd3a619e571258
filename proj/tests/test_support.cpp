#include <doctest.h>

#include <random>
#include <set>

#include "bandsurf/errors.hpp"
#include "bandsurf/support.hpp"
#include "helpers.hpp"

using namespace bandsurf;
using bandsurf::testing::square;

namespace {

// Independent oracle: try every shift in a generous box and test containment
// with a std::set.
std::size_t brute_force_shift_count(const SupportSet& gamma, const SupportSet& lambda) {
    std::set<Freq> g(gamma.begin(), gamma.end());
    const std::size_t n = gamma.dims();
    std::size_t count = 0;
    std::vector<int> l(n, -20);
    while (true) {
        bool ok = true;
        for (const auto& k : lambda) {
            Freq m(n);
            for (std::size_t d = 0; d < n; ++d) m[d] = k[d] + l[d];
            if (!g.count(m)) {
                ok = false;
                break;
            }
        }
        count += ok ? 1 : 0;
        std::size_t d = 0;
        while (d < n && ++l[d] > 20) l[d++] = -20;
        if (d == n) break;
    }
    return count;
}

SupportSet random_set(std::mt19937_64& rng, std::size_t n, int spread, std::size_t size) {
    std::uniform_int_distribution<int> u(-spread, spread);
    std::vector<Freq> f;
    for (std::size_t i = 0; i < size; ++i) {
        Freq k(n);
        for (auto& v : k) v = u(rng);
        f.push_back(k);
    }
    return SupportSet(n, f);
}

} // namespace

TEST_CASE("rect_support counts and errors") {
    CHECK(rect_support(std::vector<int>{-1, -1}, std::vector<int>{1, 1}).size() == 9);
    const auto single = rect_support(std::vector<int>{0, 0}, std::vector<int>{0, 0});
    CHECK(single.size() == 1);
    CHECK(single[0] == Freq{0, 0});
    CHECK(rect_support(std::vector<int>{-2, -2, -2}, std::vector<int>{2, 2, 2}).size() == 125);
    CHECK_THROWS_AS(rect_support(std::vector<int>{0, 0}, std::vector<int>{1}), DimensionMismatch);
    CHECK_THROWS_AS(rect_support(std::vector<int>{1}, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("canonical order is lexicographic and deduplicated") {
    SupportSet s(2, {{1, 0}, {-1, 2}, {1, 0}, {0, 0}});
    REQUIRE(s.size() == 3);
    CHECK(s[0] == Freq{-1, 2});
    CHECK(s[1] == Freq{0, 0});
    CHECK(s[2] == Freq{1, 0});
    CHECK(s.index_of({0, 0}) == 1);
    CHECK(s.index_of({5, 5}) == -1);
    CHECK_THROWS_AS(SupportSet(2, {}), std::invalid_argument);
    CHECK_THROWS_AS(SupportSet(2, {{1, 2, 3}}), DimensionMismatch);
}

TEST_CASE("lq balls") {
    const auto diamond = lq_ball_support(2, 1, Norm::L1);
    CHECK(diamond.size() == 5);
    CHECK(diamond == SupportSet(2, {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}));

    std::size_t brute = 0;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) brute += (a * a + b * b <= 4) ? 1 : 0;
    CHECK(brute == 13);
    CHECK(lq_ball_support(2, 2, Norm::L2).size() == brute);

    CHECK(lq_ball_support(2, 1, Norm::Inf) == rect_support(std::vector<int>{-1, -1}, std::vector<int>{1, 1}));
    CHECK_THROWS_AS(parse_norm("3"), std::invalid_argument);
    CHECK_THROWS_AS(lq_ball_support(2, -1, Norm::L2), std::invalid_argument);
}

TEST_CASE("shift complement matches paper counts") {
    CHECK(shift_complement(square(11), square(5)).size() == 49);
    CHECK(square(11).size() - shift_complement(square(11), square(5)).size() == 72);
    CHECK(shift_complement(square(13), square(3)).size() == 121);
    CHECK(square(13).size() - shift_complement(square(13), square(3)).size() == 48);
    const auto self = shift_complement(square(3), square(3));
    REQUIRE(self.size() == 1);
    CHECK(self[0] == Freq{0, 0});
    CHECK_THROWS_AS(shift_complement(square(3), bandsurf::testing::cube(3)), DimensionMismatch);
    CHECK(shift_complement(square(3), square(5)).empty());
}

TEST_CASE("rect shift complement equals product formula and brute force") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 3; ++n) {
        const int max_side = n == 3 ? 7 : 15;
        for (int trial = 0; trial < 12; ++trial) {
            std::vector<int> glo(n), ghi(n), llo(n), lhi(n);
            std::size_t expected = 1;
            for (std::size_t d = 0; d < n; ++d) {
                const int big = std::uniform_int_distribution<int>(1, max_side)(rng);
                const int small = std::uniform_int_distribution<int>(1, big)(rng);
                glo[d] = std::uniform_int_distribution<int>(-3, 3)(rng);
                ghi[d] = glo[d] + big - 1;
                llo[d] = std::uniform_int_distribution<int>(-3, 3)(rng);
                lhi[d] = llo[d] + small - 1;
                expected *= static_cast<std::size_t>(big - small + 1);
            }
            const auto gamma = rect_support(glo, ghi);
            const auto lambda = rect_support(llo, lhi);
            const auto shifts = shift_complement(gamma, lambda);
            CHECK(shifts.size() == expected);
            CHECK(brute_force_shift_count(gamma, lambda) == expected);
        }
    }
}

TEST_CASE("shift complement of origin is the whole set") {
    const SupportSet origin(2, {{0, 0}});
    const auto g = square(5);
    const auto s = shift_complement(g, origin);
    CHECK(s == g.freqs());
    // and a strictly larger lambda containing the origin gives a proper subset
    CHECK(shift_complement(g, square(3)).size() < g.size());
    for (const auto& l : shift_complement(g, square(3))) CHECK(g.contains(l));
}

TEST_CASE("minkowski sum") {
    CHECK(minkowski_sum(square(3), square(3)) == square(5));
    CHECK(minkowski_sum(square(3), SupportSet(2, {{0, 0}})) == square(3));
    const auto s = minkowski_sum(SupportSet(2, {{0, 1}}), SupportSet(2, {{1, 0}}));
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Freq{1, 1});
    CHECK_THROWS_AS(minkowski_sum(square(3), bandsurf::testing::cube(3)), DimensionMismatch);
}

TEST_CASE("minkowski sum is commutative and associative") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = random_set(rng, 2, 3, 4);
        const auto b = random_set(rng, 2, 3, 5);
        const auto c = random_set(rng, 2, 2, 3);
        CHECK(minkowski_sum(a, b) == minkowski_sum(b, a));
        CHECK(minkowski_sum(minkowski_sum(a, b), c) == minkowski_sum(a, minkowski_sum(b, c)));
    }
}

TEST_CASE("symmetry and max frequency") {
    CHECK(square(3).is_symmetric());
    CHECK_FALSE(SupportSet(1, {{0}, {1}}).is_symmetric());
    CHECK(square(7).max_abs_freq() == 3);
}
