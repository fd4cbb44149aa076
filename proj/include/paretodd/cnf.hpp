#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace paretodd {

// Literals are DIMACS-style signed ints: +v / -v, v >= 1. Two sentinel
// values stand for the constants so gate builders can fold them away and
// emitted clauses never mention them.
using Lit = int;
inline constexpr Lit kLitTrue = std::numeric_limits<int>::max();
inline constexpr Lit kLitFalse = -kLitTrue;

inline bool is_const(Lit l) { return l == kLitTrue || l == kLitFalse; }
inline Lit lit_neg(Lit l) { return -l; }

using Clause = std::vector<Lit>;

// Soft clauses are unit; each belongs to one objective family.
enum class SoftFamily { correctness, explainability, other };

struct SoftClause {
    Lit lit = 0;
    std::int64_t weight = 0;
    SoftFamily family = SoftFamily::other;
};

// CNF under construction. Every auxiliary variable introduced by a gate
// records its defining function, so a circuit can also be evaluated as a
// plain Boolean function from an assignment of its input variables.
class CnfBuilder {
public:
    enum class Op : std::uint8_t { input, and_, or_, xor_ };

    struct GateDef {
        Op op = Op::input;
        std::vector<Lit> args;
    };

    int num_vars() const { return static_cast<int>(defs_.size()); }
    const std::vector<Clause>& hard() const { return hard_; }
    const std::vector<SoftClause>& soft() const { return soft_; }

    int new_var() {
        defs_.push_back(GateDef{});
        return num_vars();
    }

    void add_clause(Clause c) {
        for (Lit l : c)
            if (l == kLitTrue) return;  // trivially satisfied
        std::erase(c, kLitFalse);
        hard_.push_back(std::move(c));
    }

    void add_unit(Lit l) {
        if (l == kLitTrue) return;
        if (l == kLitFalse) { hard_.push_back({}); return; }
        hard_.push_back({l});
    }

    void add_soft(Lit l, std::int64_t weight, SoftFamily family) {
        if (weight <= 0) throw std::invalid_argument("soft clause weight must be positive");
        soft_.push_back({l, weight, family});
    }

    // y <-> a & b (Tseitin, constants folded)
    Lit mk_and(Lit a, Lit b) {
        if (a == kLitFalse || b == kLitFalse) return kLitFalse;
        if (a == kLitTrue) return b;
        if (b == kLitTrue) return a;
        if (a == b) return a;
        if (a == -b) return kLitFalse;
        const Lit y = define(Op::and_, {a, b});
        hard_.push_back({-y, a});
        hard_.push_back({-y, b});
        hard_.push_back({y, -a, -b});
        return y;
    }

    // y <-> OR of lits
    Lit mk_or(std::vector<Lit> lits) {
        Clause kept;
        for (Lit l : lits) {
            if (l == kLitTrue) return kLitTrue;
            if (l == kLitFalse) continue;
            kept.push_back(l);
        }
        if (kept.empty()) return kLitFalse;
        if (kept.size() == 1) return kept[0];
        const Lit y = define(Op::or_, kept);
        for (Lit l : kept) hard_.push_back({-l, y});
        Clause c{-y};
        c.insert(c.end(), kept.begin(), kept.end());
        hard_.push_back(std::move(c));
        return y;
    }

    Lit mk_and_list(std::vector<Lit> lits) {
        std::vector<Lit> neg;
        neg.reserve(lits.size());
        for (Lit l : lits) neg.push_back(lit_neg(l));
        return lit_neg(mk_or(std::move(neg)));
    }

    // y <-> a xor b
    Lit mk_xor(Lit a, Lit b) {
        if (a == kLitFalse) return b;
        if (b == kLitFalse) return a;
        if (a == kLitTrue) return lit_neg(b);
        if (b == kLitTrue) return lit_neg(a);
        if (a == b) return kLitFalse;
        if (a == -b) return kLitTrue;
        const Lit y = define(Op::xor_, {a, b});
        hard_.push_back({-y, a, b});
        hard_.push_back({-y, -a, -b});
        hard_.push_back({y, -a, b});
        hard_.push_back({y, a, -b});
        return y;
    }

    // y <-> (a <-> b)
    Lit mk_eq(Lit a, Lit b) { return lit_neg(mk_xor(a, b)); }

    // a -> b
    void add_implication(Lit a, Lit b) { add_clause({lit_neg(a), b}); }

    // exactly-one via at-least-one + pairwise at-most-one
    void add_exactly_one(const std::vector<Lit>& lits) {
        add_clause(Clause(lits.begin(), lits.end()));
        for (std::size_t i = 0; i < lits.size(); ++i)
            for (std::size_t j = i + 1; j < lits.size(); ++j)
                add_clause({lit_neg(lits[i]), lit_neg(lits[j])});
    }

    // Evaluate a literal under an assignment of the non-gate (input)
    // variables, computing gate outputs on demand in definition order.
    // `assignment` is indexed by variable (1-based); gate entries are
    // overwritten.
    bool eval_lit(Lit l, std::vector<bool>& assignment) const {
        if (l == kLitTrue) return true;
        if (l == kLitFalse) return false;
        const int v = l > 0 ? l : -l;
        const bool val = eval_var(v, assignment);
        return l > 0 ? val : !val;
    }

    void eval_gates(std::vector<bool>& assignment) const {
        for (int v = 1; v <= num_vars(); ++v) eval_var(v, assignment);
    }

private:
    Lit define(Op op, std::vector<Lit> args) {
        defs_.push_back(GateDef{op, std::move(args)});
        return num_vars();
    }

    bool eval_var(int v, std::vector<bool>& assignment) const {
        const GateDef& d = defs_[static_cast<std::size_t>(v - 1)];
        if (d.op == Op::input) return assignment[static_cast<std::size_t>(v)];
        bool val = false;
        switch (d.op) {
            case Op::and_:
                val = true;
                for (Lit a : d.args) val = val && eval_lit(a, assignment);
                break;
            case Op::or_:
                val = false;
                for (Lit a : d.args) val = val || eval_lit(a, assignment);
                break;
            case Op::xor_:
                val = false;
                for (Lit a : d.args) val = val != eval_lit(a, assignment);
                break;
            case Op::input: break;
        }
        assignment[static_cast<std::size_t>(v)] = val;
        return val;
    }

    std::vector<GateDef> defs_;
    std::vector<Clause> hard_;
    std::vector<SoftClause> soft_;
};

// Final weighted CNF: hard clauses plus unit soft clauses.
struct WcnfInstance {
    int numVars = 0;
    std::vector<Clause> hard;
    std::vector<SoftClause> soft;

    std::int64_t soft_total() const {
        std::int64_t t = 0;
        for (const auto& s : soft) t += s.weight;
        return t;
    }

    std::int64_t top_weight() const { return soft_total() + 1; }

    // Classic WDIMACS: "p wcnf <nvars> <nclauses> <top>", hard clauses
    // carry the top weight.
    void write_wcnf(std::ostream& os) const {
        os << "p wcnf " << numVars << ' ' << hard.size() + soft.size() << ' ' << top_weight()
           << '\n';
        for (const auto& c : hard) {
            os << top_weight();
            for (Lit l : c) os << ' ' << l;
            os << " 0\n";
        }
        for (const auto& s : soft) os << s.weight << ' ' << s.lit << " 0\n";
    }
};

// Model as truth values indexed by variable (1-based).
using Assignment = std::vector<bool>;

inline bool clause_satisfied(const Clause& c, const Assignment& model) {
    for (Lit l : c) {
        const int v = l > 0 ? l : -l;
        if (v >= static_cast<int>(model.size())) continue;
        const bool val = model[static_cast<std::size_t>(v)];
        if ((l > 0) == val) return true;
    }
    return false;
}

}  // namespace paretodd
