#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "paretodd/circuits.hpp"
#include "paretodd/cnf.hpp"
#include "paretodd/model.hpp"

namespace paretodd {

// Variable bookkeeping for one encoded instance. Node/predicate/label
// indices are 0-based here; node 0 is the root.
struct VarPool {
    int n = 0;
    int numPredicates = 0;
    int numLabels = 0;
    int cmax = 0;

    std::vector<std::vector<int>> lam;                // [node][pred] -> var
    std::vector<std::vector<std::vector<int>>> tau;   // [node][branch][target] -> var
    std::vector<Lit> used;                            // [node] reachability literal
    std::vector<std::vector<Lit>> lamUsed;            // [node][pred] used-with-predicate literal
    std::vector<std::vector<int>> leafMatch;          // [label][sample] -> var (unit-fixed)
    std::vector<Lit> rootMatch;                       // [sample] match literal at the root

    // Branch targets are numbered: later internal nodes first, then leaves.
    int num_targets(int node) const { return (n - 1 - node) + numLabels; }
    bool target_is_leaf(int node, int t) const { return t >= n - 1 - node; }
    int target_node(int node, int t) const { return node + 1 + t; }
    int target_label(int node, int t) const { return t - (n - 1 - node); }
};

// Builds the weighted CNF: structure, sample matching, correctness softs,
// explainability softs, and (optionally) the explainability threshold
// circuit. Single-use; call the encode_* steps then finish().
class Encoder {
public:
    explicit Encoder(InterpretationClassSpec spec) : spec_(std::move(spec)) {
        spec_.validate();
        pool_.n = spec_.nodeBound;
        pool_.numPredicates = static_cast<int>(spec_.predicates.size());
        pool_.numLabels = static_cast<int>(spec_.labels.size());
        pool_.cmax = spec_.cmax();
    }

    // Template shape: exactly one predicate per node, exactly one target per
    // valid branch, no transitions on branches beyond the predicate's arity.
    void encode_structure() {
        const int n = pool_.n;
        pool_.lam.assign(static_cast<std::size_t>(n), {});
        pool_.tau.assign(static_cast<std::size_t>(n), {});
        for (int i = 0; i < n; ++i) {
            auto& lamRow = pool_.lam[static_cast<std::size_t>(i)];
            for (int p = 0; p < pool_.numPredicates; ++p) lamRow.push_back(b_.new_var());
            std::vector<Lit> lamLits(lamRow.begin(), lamRow.end());
            b_.add_exactly_one(lamLits);

            auto& tauNode = pool_.tau[static_cast<std::size_t>(i)];
            tauNode.assign(static_cast<std::size_t>(pool_.cmax), {});
            for (int c = 0; c < pool_.cmax; ++c) {
                auto& row = tauNode[static_cast<std::size_t>(c)];
                for (int t = 0; t < pool_.num_targets(i); ++t) row.push_back(b_.new_var());
                // at most one target per branch
                for (std::size_t a = 0; a < row.size(); ++a)
                    for (std::size_t b2 = a + 1; b2 < row.size(); ++b2)
                        b_.add_clause({-row[a], -row[b2]});
                for (int p = 0; p < pool_.numPredicates; ++p) {
                    const int arity = spec_.predicates[static_cast<std::size_t>(p)].arity;
                    const Lit lam = lamRow[static_cast<std::size_t>(p)];
                    if (c < arity) {
                        Clause atLeast{-lam};
                        atLeast.insert(atLeast.end(), row.begin(), row.end());
                        b_.add_clause(std::move(atLeast));
                    } else {
                        for (int t : row) b_.add_clause({-lam, -t});
                    }
                }
            }
        }
    }

    // Backward match propagation from the leaves: the branch a sample takes
    // at a node is a compile-time constant of its predicate.
    void encode_samples(const SampleSet& S) {
        const int n = pool_.n;
        const std::size_t m = S.samples.size();
        pool_.leafMatch.assign(static_cast<std::size_t>(pool_.numLabels), {});
        for (int l = 0; l < pool_.numLabels; ++l) {
            for (std::size_t s = 0; s < m; ++s) {
                const int v = b_.new_var();
                pool_.leafMatch[static_cast<std::size_t>(l)].push_back(v);
                const bool agrees =
                    S.samples[s].label == spec_.labels[static_cast<std::size_t>(l)];
                b_.add_unit(agrees ? v : -v);
            }
        }
        // per-sample branch of each predicate
        std::vector<std::vector<int>> branchOf(m,
                                               std::vector<int>(static_cast<std::size_t>(pool_.numPredicates)));
        for (std::size_t s = 0; s < m; ++s)
            for (int p = 0; p < pool_.numPredicates; ++p)
                branchOf[s][static_cast<std::size_t>(p)] = evaluate_predicate(
                    spec_.predicates[static_cast<std::size_t>(p)], S.samples[s].input);

        std::vector<std::vector<Lit>> match(static_cast<std::size_t>(n),
                                            std::vector<Lit>(m, kLitFalse));
        for (int i = n - 1; i >= 0; --i) {
            for (std::size_t s = 0; s < m; ++s) {
                std::vector<Lit> terms;
                for (int p = 0; p < pool_.numPredicates; ++p) {
                    const int c = branchOf[s][static_cast<std::size_t>(p)];
                    std::vector<Lit> conj{pool_.lam[static_cast<std::size_t>(i)]
                                                   [static_cast<std::size_t>(p)]};
                    const auto& row =
                        pool_.tau[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
                    for (int t = 0; t < pool_.num_targets(i); ++t) {
                        const Lit tr = row[static_cast<std::size_t>(t)];
                        Lit targetMatch;
                        if (pool_.target_is_leaf(i, t)) {
                            const int l = pool_.target_label(i, t);
                            targetMatch =
                                S.samples[s].label == spec_.labels[static_cast<std::size_t>(l)]
                                    ? kLitTrue
                                    : kLitFalse;
                        } else {
                            targetMatch = match[static_cast<std::size_t>(pool_.target_node(i, t))][s];
                        }
                        conj.push_back(b_.mk_or({-tr, targetMatch}));
                    }
                    terms.push_back(b_.mk_and_list(std::move(conj)));
                }
                match[static_cast<std::size_t>(i)][s] = b_.mk_or(std::move(terms));
            }
        }
        pool_.rootMatch = match[0];
    }

    void encode_correctness_soft(const SampleSet& S) {
        if (S.samples.empty()) throw input_error("encode_correctness_soft: empty sample set");
        for (std::size_t s = 0; s < S.samples.size(); ++s) {
            correctnessTotal_ += S.samples[s].weight;
            b_.add_soft(materialize(pool_.rootMatch[s]), S.samples[s].weight,
                        SoftFamily::correctness);
        }
    }

    // Reachability from the root plus the used-with-predicate literals;
    // softs reward unused nodes and favored predicates.
    void encode_explainability() {
        const int n = pool_.n;
        pool_.used.assign(static_cast<std::size_t>(n), kLitFalse);
        {
            const int u1 = b_.new_var();
            b_.add_unit(u1);  // the root is always used
            pool_.used[0] = u1;
        }
        for (int i = 1; i < n; ++i) {
            std::vector<Lit> incoming;
            for (int ip = 0; ip < i; ++ip) {
                for (int c = 0; c < pool_.cmax; ++c) {
                    const int t = i - ip - 1;  // target index of node i from node ip
                    const Lit tr = pool_.tau[static_cast<std::size_t>(ip)]
                                            [static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
                    incoming.push_back(b_.mk_and(tr, pool_.used[static_cast<std::size_t>(ip)]));
                }
            }
            pool_.used[static_cast<std::size_t>(i)] = b_.mk_or(std::move(incoming));
        }
        pool_.lamUsed.assign(static_cast<std::size_t>(n), {});
        for (int i = 0; i < n; ++i) {
            for (int p = 0; p < pool_.numPredicates; ++p)
                pool_.lamUsed[static_cast<std::size_t>(i)].push_back(
                    b_.mk_and(pool_.used[static_cast<std::size_t>(i)],
                              pool_.lam[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)]));
        }
        for (int i = 0; i < n; ++i) {
            const int wu = spec_.nodeUnusedWeight[static_cast<std::size_t>(i)];
            explainabilityTotal_ += wu;
            if (wu > 0)
                b_.add_soft(materialize(lit_neg(pool_.used[static_cast<std::size_t>(i)])), wu,
                            SoftFamily::explainability);
            for (int p = 0; p < pool_.numPredicates; ++p) {
                const int wp = spec_.predicates[static_cast<std::size_t>(p)].weight;
                explainabilityTotal_ += wp;
                if (wp > 0)
                    b_.add_soft(materialize(pool_.lamUsed[static_cast<std::size_t>(i)]
                                                         [static_cast<std::size_t>(p)]),
                                wp, SoftFamily::explainability);
            }
        }
    }

    // Hard restriction lo <= e <= hi on the explainability sum: per-node
    // 7-bit weight words, two ripple-carry chains, one final add, and
    // strict comparators against hi+1 and lo-1. Call after
    // encode_explainability. Empty intervals are the caller's concern.
    void encode_threshold(int lo, int hi) {
        if (lo < grid::kMin || hi > grid::kMax || lo > hi)
            throw input_error("encode_threshold: bad interval");
        constexpr int kWidth = 7;  // weights live on the 0..100 grid
        Word accU = zero_word(kWidth);
        Word accL = zero_word(kWidth);
        for (int i = 0; i < pool_.n; ++i) {
            const std::uint64_t wu =
                static_cast<std::uint64_t>(spec_.nodeUnusedWeight[static_cast<std::size_t>(i)]);
            const Word wordU = gated_const_word(
                b_, lit_neg(pool_.used[static_cast<std::size_t>(i)]), wu, kWidth);
            accU = ripple_add(b_, accU, wordU);
            Word wordL(kWidth, kLitFalse);
            for (int bit = 0; bit < kWidth; ++bit) {
                std::vector<Lit> setters;
                for (int p = 0; p < pool_.numPredicates; ++p) {
                    const int wp = spec_.predicates[static_cast<std::size_t>(p)].weight;
                    if ((wp >> bit) & 1)
                        setters.push_back(pool_.lamUsed[static_cast<std::size_t>(i)]
                                                       [static_cast<std::size_t>(p)]);
                }
                wordL[static_cast<std::size_t>(bit)] = b_.mk_or(std::move(setters));
            }
            accL = ripple_add(b_, accL, wordL);
        }
        const Word fin = ripple_add(b_, accU, accL);
        if (hi < grid::kMax)
            b_.add_unit(less_than(b_, fin, const_word(static_cast<std::uint64_t>(hi) + 1, kWidth)));
        if (lo > grid::kMin)
            b_.add_unit(greater_than(b_, fin, const_word(static_cast<std::uint64_t>(lo) - 1, kWidth)));
    }

    WcnfInstance finish() {
        WcnfInstance inst;
        inst.numVars = b_.num_vars();
        inst.hard = b_.hard();
        inst.soft = b_.soft();
        return inst;
    }

    const VarPool& pool() const { return pool_; }
    CnfBuilder& builder() { return b_; }
    std::int64_t correctness_total() const { return correctnessTotal_; }
    std::int64_t explainability_total() const { return explainabilityTotal_; }

private:
    // Soft clauses need a real literal; pin constants to a fresh variable.
    Lit materialize(Lit l) {
        if (!is_const(l)) return l;
        const int v = b_.new_var();
        b_.add_unit(l == kLitTrue ? v : -v);
        return v;
    }

    InterpretationClassSpec spec_;
    CnfBuilder b_;
    VarPool pool_;
    std::int64_t correctnessTotal_ = 0;
    std::int64_t explainabilityTotal_ = 0;
};

struct EncodedProblem {
    WcnfInstance inst;
    VarPool pool;
    std::int64_t correctnessTotal = 0;
};

inline EncodedProblem build_full(const InterpretationClassSpec& spec, const SampleSet& S,
                                 std::optional<std::pair<int, int>> bounds = std::nullopt) {
    Encoder enc(spec);
    enc.encode_structure();
    enc.encode_samples(S);
    enc.encode_correctness_soft(S);
    enc.encode_explainability();
    if (bounds) enc.encode_threshold(bounds->first, bounds->second);
    EncodedProblem out{enc.finish(), enc.pool(), enc.correctness_total()};
    return out;
}

}  // namespace paretodd
