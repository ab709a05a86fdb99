#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>
#include <vector>

#include "simplex.hpp"

using namespace cexplain;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Little fixed-size LP builder; bounds default to [0, inf).
struct Lp {
    MilpProblem p;
    std::vector<double> lo, hi;

    explicit Lp(std::vector<double> objective) {
        p.objective = std::move(objective);
        for (std::size_t i = 0; i < p.objective.size(); ++i) {
            MilpVariable v;
            v.name = "x" + std::to_string(i);
            p.vars.push_back(v);
            lo.push_back(0.0);
            hi.push_back(kInf);
        }
    }

    void row(std::vector<double> coeffs, RowSense sense, double rhs) {
        MilpRow r;
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            if (coeffs[j] != 0.0) r.terms.push_back({(int)j, coeffs[j]});
        r.sense = sense;
        r.rhs = rhs;
        p.rows.push_back(std::move(r));
    }

    LpResult solve(const LpOptions& opt = {}) const {
        return solve_lp(p, lo, hi, opt);
    }
};

}  // namespace

TEST_CASE("textbook two-variable maximisation") {
    // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18; optimum (2, 6).
    Lp lp({-3.0, -5.0});
    lp.row({1.0, 0.0}, RowSense::LessEq, 4.0);
    lp.row({0.0, 2.0}, RowSense::LessEq, 12.0);
    lp.row({3.0, 2.0}, RowSense::LessEq, 18.0);
    const auto r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-36.0).epsilon(1e-10));
    CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.x[1] == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("equality and greater-equal rows need phase one") {
    // min 2x + 3y st x + y = 4, y - x >= 1; optimum (1.5, 2.5).
    Lp lp({2.0, 3.0});
    lp.row({1.0, 1.0}, RowSense::Equal, 4.0);
    lp.row({-1.0, 1.0}, RowSense::GreaterEq, 1.0);
    const auto r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(10.5).epsilon(1e-10));
    CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(r.x[1] == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("contradictory rows are infeasible") {
    Lp lp({1.0, 1.0});
    lp.row({1.0, 1.0}, RowSense::LessEq, 1.0);
    lp.row({1.0, 1.0}, RowSense::GreaterEq, 2.0);
    lp.hi = {1.0, 1.0};
    CHECK(lp.solve().status == LpStatus::Infeasible);
}

TEST_CASE("bounds can be the only active constraints") {
    Lp lp({-1.0, -1.0});
    lp.row({1.0, 1.0}, RowSense::LessEq, 10.0);
    lp.hi = {3.0, 2.0};
    const auto r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-5.0).epsilon(1e-10));
    CHECK(r.x[0] == doctest::Approx(3.0));
    CHECK(r.x[1] == doctest::Approx(2.0));
}

TEST_CASE("nonzero lower bounds shift the optimum") {
    // min x + y st x + y >= 3 with x in [2, 5], y in [0.5, 5].
    Lp lp({1.0, 1.0});
    lp.row({1.0, 1.0}, RowSense::GreaterEq, 3.0);
    lp.lo = {2.0, 0.5};
    lp.hi = {5.0, 5.0};
    const auto r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.x[0] >= 2.0 - 1e-9);
    CHECK(r.x[1] >= 0.5 - 1e-9);
}

TEST_CASE("missing upper bound lets the objective run away") {
    Lp lp({-1.0, 0.0});
    lp.row({0.0, 1.0}, RowSense::LessEq, 1.0);
    CHECK(lp.solve().status == LpStatus::Unbounded);
}

TEST_CASE("equality-only system with a unique point") {
    Lp lp({0.0, 0.0, 1.0});
    lp.row({1.0, 1.0, 0.0}, RowSense::Equal, 1.0);
    lp.row({1.0, -1.0, 0.0}, RowSense::Equal, 0.0);
    lp.row({0.0, 1.0, 1.0}, RowSense::Equal, 2.0);
    const auto r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.x[2] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(r.objective == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
    // Dantzig pricing cycles on this one without the stall fallback.
    Lp lp({-0.75, 150.0, -0.02, 6.0});
    lp.row({0.25, -60.0, -1.0 / 25.0, 9.0}, RowSense::LessEq, 0.0);
    lp.row({0.5, -90.0, -1.0 / 50.0, 3.0}, RowSense::LessEq, 0.0);
    lp.row({0.0, 0.0, 1.0, 0.0}, RowSense::LessEq, 1.0);
    const auto r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-0.05).epsilon(1e-9));
    CHECK(r.x[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("column order does not change the optimum") {
    // Same polytope twice with the columns swapped.
    Lp a({-2.0, -3.0});
    a.row({1.0, 2.0}, RowSense::LessEq, 8.0);
    a.row({3.0, 1.0}, RowSense::LessEq, 9.0);
    Lp b({-3.0, -2.0});
    b.row({2.0, 1.0}, RowSense::LessEq, 8.0);
    b.row({1.0, 3.0}, RowSense::LessEq, 9.0);
    const auto ra = a.solve();
    const auto rb = b.solve();
    REQUIRE(ra.status == LpStatus::Optimal);
    REQUIRE(rb.status == LpStatus::Optimal);
    CHECK(ra.objective == doctest::Approx(rb.objective).epsilon(1e-12));
    CHECK(ra.x[0] == doctest::Approx(rb.x[1]).epsilon(1e-10));
    CHECK(ra.x[1] == doctest::Approx(rb.x[0]).epsilon(1e-10));
}

TEST_CASE("iteration limit reports instead of spinning") {
    Lp lp({-3.0, -5.0});
    lp.row({1.0, 0.0}, RowSense::LessEq, 4.0);
    lp.row({0.0, 2.0}, RowSense::LessEq, 12.0);
    lp.row({3.0, 2.0}, RowSense::LessEq, 18.0);
    lp.hi = {100.0, 100.0};
    LpOptions opt;
    opt.iteration_limit = 1;
    const auto r = lp.solve(opt);
    CHECK(r.status == LpStatus::IterationLimit);
    CHECK(r.iterations <= 1);
}

TEST_CASE("fixed variables stay put") {
    Lp lp({-1.0, -1.0});
    lp.row({1.0, 1.0}, RowSense::LessEq, 5.0);
    lp.lo = {2.0, 0.0};
    lp.hi = {2.0, 10.0};
    const auto r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(2.0));
    CHECK(r.x[1] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.objective == doctest::Approx(-5.0).epsilon(1e-10));
}
