#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "paretodd/sat.hpp"

using namespace paretodd;

namespace {

// Reference decision procedure: try all assignments.
bool brute_force_sat(int numVars, const std::vector<Clause>& clauses) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << numVars); ++mask) {
        Assignment model(static_cast<std::size_t>(numVars) + 1, false);
        for (int v = 1; v <= numVars; ++v) model[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1;
        bool ok = true;
        for (const auto& c : clauses)
            if (!clause_satisfied(c, model)) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("basic satisfiable and unsatisfiable formulas") {
    {
        SatSolver s(2);
        s.add_clause({1, 2});
        s.add_clause({-1});
        REQUIRE(s.solve() == SatSolver::Result::sat);
        CHECK_FALSE(s.model()[1]);
        CHECK(s.model()[2]);
    }
    {
        SatSolver s(1);
        s.add_clause({1});
        s.add_clause({-1});
        CHECK(s.solve() == SatSolver::Result::unsat);
    }
    {
        SatSolver s(0);  // empty formula
        CHECK(s.solve() == SatSolver::Result::sat);
    }
}

TEST_CASE("pigeonhole 4 into 3 is unsatisfiable") {
    // var(p, h) = p*3 + h + 1 for pigeon p in 0..3, hole h in 0..2
    SatSolver s(12);
    auto var = [](int p, int h) { return p * 3 + h + 1; };
    for (int p = 0; p < 4; ++p) s.add_clause({var(p, 0), var(p, 1), var(p, 2)});
    for (int h = 0; h < 3; ++h)
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) s.add_clause({-var(p, h), -var(q, h)});
    CHECK(s.solve() == SatSolver::Result::unsat);
}

TEST_CASE("random 3-SAT agrees with exhaustive search") {
    std::mt19937_64 g(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int numVars = 3 + static_cast<int>(g() % 10);
        const int numClauses = 2 + static_cast<int>(g() % (3 * static_cast<std::uint64_t>(numVars)));
        std::vector<Clause> clauses;
        for (int i = 0; i < numClauses; ++i) {
            Clause c;
            const int len = 1 + static_cast<int>(g() % 3);
            for (int j = 0; j < len; ++j) {
                const int v = 1 + static_cast<int>(g() % static_cast<std::uint64_t>(numVars));
                c.push_back(g() % 2 ? v : -v);
            }
            clauses.push_back(std::move(c));
        }
        SatSolver s(numVars);
        for (const auto& c : clauses) s.add_clause(c);
        const bool expect = brute_force_sat(numVars, clauses);
        const bool got = s.solve() == SatSolver::Result::sat;
        if (got != expect) FAIL("disagreement on trial " << trial);
        if (got) {
            const auto& m = s.model();
            for (const auto& c : clauses)
                if (!clause_satisfied(c, m)) FAIL("returned model violates a clause, trial " << trial);
        }
    }
    SUCCEED();
}

TEST_CASE("clauses may introduce variables on the fly") {
    SatSolver s;
    s.add_clause({5});
    s.add_clause({-5, 9});
    REQUIRE(s.solve() == SatSolver::Result::sat);
    CHECK(s.model()[5]);
    CHECK(s.model()[9]);
}
