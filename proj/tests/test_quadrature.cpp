#include <doctest.h>

#include <cmath>
#include <numeric>

#include "twostep/errors.hpp"
#include "twostep/quadrature.hpp"

using namespace twostep;
using namespace twostep::quadrature;

TEST_SUITE("quadrature") {

TEST_CASE("reference rule matches the closed-form Legendre zeros") {
    // ξ² = 3/7 ∓ (2/7)√(6/5), w = (18 ± √30)/36
    const double inner = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double outer = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double w_inner = (18.0 + std::sqrt(30.0)) / 36.0;
    const double w_outer = (18.0 - std::sqrt(30.0)) / 36.0;
    const auto& ref = gauss_legendre4();
    const double nodes[4] = {-outer, -inner, inner, outer};
    const double weights[4] = {w_outer, w_inner, w_inner, w_outer};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(ref.nodes[i] - nodes[i]) <= 1e-15);
        CHECK(std::abs(ref.weights[i] - weights[i]) <= 1e-15);
    }
}

TEST_CASE("n = 4 nodes and weights") {
    const auto rule = composite_gl4(4);
    const double nodes[4] = {0.9305682, 0.6699905, 0.3300095, 0.0694318};
    const double weights[4] = {0.1739274, 0.3260726, 0.3260726, 0.1739274};
    REQUIRE(rule.n == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(rule.nodes[i] == doctest::Approx(nodes[i]).epsilon(1e-7));
        CHECK(rule.weights[i] == doctest::Approx(weights[i]).epsilon(1e-7));
    }
}

TEST_CASE("invalid sizes") {
    CHECK_THROWS_AS(composite_gl4(5), InvalidSize);
    CHECK_THROWS_AS(composite_gl4(0), InvalidSize);
    CHECK_THROWS_AS(composite_gl4(2), InvalidSize);
    CHECK_THROWS_AS(composite_gl4(1002), InvalidSize);
}

TEST_CASE("weights sum to one and nodes are strictly decreasing") {
    for (std::size_t n : {4u, 8u, 64u, 1024u, 4096u}) {
        const auto rule = composite_gl4(n);
        REQUIRE(rule.nodes.size() == n);
        REQUIRE(rule.weights.size() == n);
        const double sum = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
        CHECK(std::abs(sum - 1.0) <= 1e-14);
        CHECK(rule.nodes.front() < 1.0);
        CHECK(rule.nodes.back() > 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(rule.nodes[i] > rule.nodes[i + 1]);
        for (double w : rule.weights) CHECK(w > 0.0);
    }
}

TEST_CASE("nodes stay inside their cell") {
    const std::size_t n = 64;
    const auto rule = composite_gl4(n);
    const double width = 4.0 / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Descending order: node i sits in cell (n - 1 - i) / 4 counted from 0.
        const double cell = double((n - 1 - i) / 4);
        CHECK(rule.nodes[i] > cell * width);
        CHECK(rule.nodes[i] < (cell + 1) * width);
    }
}

TEST_CASE("monomials up to degree 7 are integrated exactly") {
    for (std::size_t n : {4u, 8u, 64u}) {
        const auto rule = composite_gl4(n);
        for (int d = 0; d <= 7; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], d);
            CAPTURE(n);
            CAPTURE(d);
            CHECK(std::abs(s - 1.0 / (d + 1)) <= 1e-14);
        }
    }
}

TEST_CASE("degree 8 is not exact on a single cell") {
    const auto rule = composite_gl4(4);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 8);
    CHECK(std::abs(s - 1.0 / 9.0) > 1e-8);
}

}
