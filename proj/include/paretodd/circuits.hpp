#pragma once

#include <cstdint>
#include <vector>

#include "paretodd/cnf.hpp"

namespace paretodd {

// Little-endian words of literals (bit 0 = least significant). Built on
// CnfBuilder gates, so a word can be both constrained in CNF and evaluated
// as a plain Boolean circuit.
using Word = std::vector<Lit>;

inline Word const_word(std::uint64_t value, int width) {
    Word w(static_cast<std::size_t>(width), kLitFalse);
    for (int i = 0; i < width; ++i)
        if ((value >> i) & 1) w[static_cast<std::size_t>(i)] = kLitTrue;
    return w;
}

inline Word zero_word(int width) { return Word(static_cast<std::size_t>(width), kLitFalse); }

// value if `gate` is true, else zero: bit_i = gate & value_bit_i.
inline Word gated_const_word(CnfBuilder& b, Lit gate, std::uint64_t value, int width) {
    Word w(static_cast<std::size_t>(width), kLitFalse);
    for (int i = 0; i < width; ++i)
        if ((value >> i) & 1) w[static_cast<std::size_t>(i)] = gate;
    (void)b;
    return w;
}

inline std::uint64_t eval_word(const CnfBuilder& b, const Word& w, std::vector<bool>& assignment) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (b.eval_lit(w[i], assignment)) v |= std::uint64_t{1} << i;
    return v;
}

// Ripple-carry adder. The caller guarantees the true sum fits in `width`
// bits; the dropped carry-out is asserted false so no model can overflow.
inline Word ripple_add(CnfBuilder& b, const Word& x, const Word& y) {
    const std::size_t width = x.size();
    Word out(width, kLitFalse);
    Lit carry = kLitFalse;
    for (std::size_t i = 0; i < width; ++i) {
        const Lit a = x[i], c = y[i];
        const Lit axc = b.mk_xor(a, c);
        out[i] = b.mk_xor(axc, carry);
        // carry-out = (a & c) | (carry & (a ^ c))
        carry = b.mk_or({b.mk_and(a, c), b.mk_and(carry, axc)});
    }
    b.add_unit(lit_neg(carry));
    return out;
}

// value < bound, most-significant-bit-first lexicographic chain.
inline Lit less_than(CnfBuilder& b, const Word& value, const Word& bound) {
    Lit smaller = kLitFalse;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const Lit vi = value[i], bi = bound[i];
        smaller = b.mk_or({b.mk_and(lit_neg(vi), bi), b.mk_and(b.mk_eq(vi, bi), smaller)});
    }
    return smaller;
}

inline Lit greater_than(CnfBuilder& b, const Word& value, const Word& bound) {
    return less_than(b, bound, value);
}

inline int bits_for(std::uint64_t value) {
    int w = 1;
    while ((std::uint64_t{1} << w) <= value) ++w;
    return w;
}

}  // namespace paretodd
