#include <catch2/catch_amalgamated.hpp>

#include "paretodd/circuits.hpp"
#include "paretodd/sat.hpp"

using namespace paretodd;

namespace {

// Fresh 7-bit word of input variables.
Word input_word(CnfBuilder& b, int width = 7) {
    Word w;
    for (int i = 0; i < width; ++i) w.push_back(b.new_var());
    return w;
}

void set_word(const Word& w, std::uint64_t value, std::vector<bool>& assignment) {
    for (std::size_t i = 0; i < w.size(); ++i)
        assignment[static_cast<std::size_t>(w[i])] = (value >> i) & 1;
}

}  // namespace

TEST_CASE("ripple adder matches integer addition on all in-range 7-bit pairs") {
    CnfBuilder b;
    const Word x = input_word(b), y = input_word(b);
    const Word sum = ripple_add(b, x, y);
    for (std::uint64_t a = 0; a <= 100; ++a) {
        for (std::uint64_t c = 0; a + c <= 127 && c <= 100; ++c) {
            std::vector<bool> assignment(static_cast<std::size_t>(b.num_vars()) + 1, false);
            set_word(x, a, assignment);
            set_word(y, c, assignment);
            if (eval_word(b, sum, assignment) != a + c) {
                FAIL("adder mismatch at " << a << " + " << c);
            }
        }
    }
    SUCCEED();
}

TEST_CASE("comparators match integer comparison on all 7-bit pairs") {
    CnfBuilder b;
    const Word v = input_word(b), bound = input_word(b);
    const Lit lt = less_than(b, v, bound);
    const Lit gt = greater_than(b, v, bound);
    for (std::uint64_t a = 0; a <= 127; ++a) {
        for (std::uint64_t c = 0; c <= 127; ++c) {
            std::vector<bool> assignment(static_cast<std::size_t>(b.num_vars()) + 1, false);
            set_word(v, a, assignment);
            set_word(bound, c, assignment);
            if (b.eval_lit(lt, assignment) != (a < c)) FAIL("lt mismatch at " << a << "," << c);
            if (b.eval_lit(gt, assignment) != (a > c)) FAIL("gt mismatch at " << a << "," << c);
        }
    }
    SUCCEED();
}

TEST_CASE("adder CNF forbids overflow past the word width") {
    CnfBuilder b;
    const Word x = input_word(b, 3);
    (void)ripple_add(b, x, const_word(5, 3));
    SatSolver s(b.num_vars());
    for (const auto& c : b.hard()) s.add_clause(c);
    // force x = 4 so the true sum 9 needs 4 bits
    s.add_clause({-x[0]});
    s.add_clause({-x[1]});
    s.add_clause({x[2]});
    CHECK(s.solve() == SatSolver::Result::unsat);
}

TEST_CASE("gated words carry the constant exactly when the gate holds") {
    CnfBuilder b;
    const Lit gate = b.new_var();
    const Word w = gated_const_word(b, gate, 42, 7);
    std::vector<bool> assignment(static_cast<std::size_t>(b.num_vars()) + 1, false);
    assignment[static_cast<std::size_t>(gate)] = true;
    CHECK(eval_word(b, w, assignment) == 42);
    assignment[static_cast<std::size_t>(gate)] = false;
    CHECK(eval_word(b, w, assignment) == 0);
}

TEST_CASE("bits_for covers the value range") {
    CHECK(bits_for(0) == 1);
    CHECK(bits_for(1) == 1);
    CHECK(bits_for(2) == 2);
    CHECK(bits_for(100) == 7);
    CHECK(bits_for(127) == 7);
    CHECK(bits_for(128) == 8);
}
