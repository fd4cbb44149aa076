#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "paretodd/cnf.hpp"

namespace paretodd {

// Complete CDCL satisfiability solver: two-literal watching, first-UIP
// conflict analysis with clause minimization, activity-based branching,
// phase saving, Luby restarts and LBD-driven learnt-clause deletion.
// Clauses may be added between solve() calls to strengthen the instance.
class SatSolver {
public:
    enum class Result { sat, unsat };

    explicit SatSolver(int numVars = 0) { ensure_vars(numVars); }

    void ensure_vars(int n) {
        if (n <= numVars_) return;
        numVars_ = n;
        const std::size_t sz = static_cast<std::size_t>(numVars_) + 1;
        value_.resize(sz, kUndef);
        reason_.resize(sz, -1);
        level_.resize(sz, 0);
        activity_.resize(sz, 0.0);
        polarity_.resize(sz, false);
        heapPos_.resize(sz, -1);
        seen_.resize(sz, 0);
        levelSeen_.resize(sz + 1, 0);
        watches_.resize(2 * sz);
    }

    // DIMACS-style literals. Call before solve().
    void add_clause(const Clause& dimacs) {
        if (unsat_) return;
        std::vector<int> lits;
        lits.reserve(dimacs.size());
        for (Lit l : dimacs) {
            const int v = std::abs(l);
            if (v > numVars_) ensure_vars(v);
            lits.push_back(to_internal(l));
        }
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 0; i + 1 < lits.size(); ++i)
            if ((lits[i] ^ lits[i + 1]) == 1) return;  // tautology
        // drop literals already false at level 0, satisfied clause -> drop
        std::vector<int> kept;
        for (int l : lits) {
            const signed char v = lit_value(l);
            if (v == kTrue) return;
            if (v == kUndef) kept.push_back(l);
        }
        if (kept.empty()) { unsat_ = true; return; }
        if (kept.size() == 1) {
            if (!enqueue(kept[0], -1)) { unsat_ = true; return; }
            if (propagate() != -1) unsat_ = true;
            return;
        }
        const int ci = static_cast<int>(clauses_.size());
        clauses_.push_back({std::move(kept)});
        watch(ci, 0);
        watch(ci, 1);
    }

    Result solve() {
        if (unsat_) return Result::unsat;
        rebuild_heap();
        if (propagate() != -1) { unsat_ = true; return Result::unsat; }
        std::int64_t conflictsUntilRestart = luby_restart_limit();
        while (true) {
            const int confl = propagate();
            if (confl != -1) {
                ++conflicts_;
                --conflictsUntilRestart;
                if (decision_level() == 0) { unsat_ = true; return Result::unsat; }
                std::vector<int> learnt;
                int backLevel = 0;
                const int lbd = analyze(confl, learnt, backLevel);
                backtrack(backLevel);
                attach_learnt(learnt, lbd);
                decay_activity();
            } else {
                if (conflictsUntilRestart <= 0) {
                    backtrack(0);
                    ++restarts_;
                    conflictsUntilRestart = luby_restart_limit();
                    if (numLearnt_ > learntLimit_) {
                        reduce_learnt();
                        learntLimit_ += learntLimit_ / 2;
                    }
                }
                const int next = pick_branch_var();
                if (next == 0) {
                    extract_model();
                    backtrack(0);
                    return Result::sat;
                }
                trailLim_.push_back(static_cast<int>(trail_.size()));
                const int lit = 2 * next + (polarity_[static_cast<std::size_t>(next)] ? 0 : 1);
                enqueue(lit, -1);
            }
        }
    }

    // Valid after solve() returned sat. Indexed by variable, 1-based.
    const Assignment& model() const { return model_; }

    std::int64_t conflicts() const { return conflicts_; }

private:
    static constexpr signed char kTrue = 1, kFalse = -1, kUndef = 0;

    struct InternalClause {
        std::vector<int> lits;
        bool learnt = false;
        int lbd = 0;
    };

    static int to_internal(Lit l) { return l > 0 ? 2 * l : -2 * l + 1; }
    static int neg(int l) { return l ^ 1; }
    static int var_of(int l) { return l >> 1; }

    signed char lit_value(int l) const {
        const signed char v = value_[static_cast<std::size_t>(var_of(l))];
        if (v == kUndef) return kUndef;
        return (l & 1) ? static_cast<signed char>(-v) : v;
    }

    void watch(int clauseIdx, int pos) {
        const int l = clauses_[static_cast<std::size_t>(clauseIdx)].lits[static_cast<std::size_t>(pos)];
        watches_[static_cast<std::size_t>(l)].push_back(clauseIdx);
    }

    bool enqueue(int l, int reason) {
        const int v = var_of(l);
        const signed char cur = lit_value(l);
        if (cur == kFalse) return false;
        if (cur == kTrue) return true;
        value_[static_cast<std::size_t>(v)] = (l & 1) ? kFalse : kTrue;
        reason_[static_cast<std::size_t>(v)] = reason;
        level_[static_cast<std::size_t>(v)] = decision_level();
        trail_.push_back(l);
        return true;
    }

    // Returns conflicting clause index or -1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            const int p = trail_[qhead_++];
            const int falsified = neg(p);
            auto& wl = watches_[static_cast<std::size_t>(falsified)];
            std::size_t i = 0, j = 0;
            int conflict = -1;
            while (i < wl.size()) {
                const int ci = wl[i++];
                auto& lits = clauses_[static_cast<std::size_t>(ci)].lits;
                // ensure falsified literal is at position 1
                if (lits[0] == falsified) std::swap(lits[0], lits[1]);
                if (lit_value(lits[0]) == kTrue) { wl[j++] = ci; continue; }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (lit_value(lits[k]) != kFalse) {
                        std::swap(lits[1], lits[k]);
                        watches_[static_cast<std::size_t>(lits[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                wl[j++] = ci;
                if (!enqueue(lits[0], ci)) {
                    conflict = ci;
                    while (i < wl.size()) wl[j++] = wl[i++];
                    break;
                }
            }
            wl.resize(j);
            if (conflict != -1) return conflict;
        }
        return -1;
    }

    int decision_level() const { return static_cast<int>(trailLim_.size()); }

    // Returns the literal block distance of the learnt clause.
    int analyze(int conflict, std::vector<int>& outLearnt, int& outLevel) {
        outLearnt.clear();
        outLearnt.push_back(0);  // slot for the asserting literal
        int counter = 0;
        int p = -1;
        std::size_t trailIdx = trail_.size();
        int clauseIdx = conflict;
        while (true) {
            const auto& lits = clauses_[static_cast<std::size_t>(clauseIdx)].lits;
            for (std::size_t k = (p == -1 ? 0 : 1); k < lits.size(); ++k) {
                const int q = lits[k];
                const int v = var_of(q);
                if (seen_[static_cast<std::size_t>(v)] || level_[static_cast<std::size_t>(v)] == 0)
                    continue;
                seen_[static_cast<std::size_t>(v)] = 1;
                bump_activity(v);
                if (level_[static_cast<std::size_t>(v)] == decision_level())
                    ++counter;
                else
                    outLearnt.push_back(q);
            }
            // next literal on the trail that is marked
            do {
                --trailIdx;
                p = trail_[trailIdx];
            } while (!seen_[static_cast<std::size_t>(var_of(p))]);
            seen_[static_cast<std::size_t>(var_of(p))] = 0;
            --counter;
            if (counter == 0) break;
            clauseIdx = reason_[static_cast<std::size_t>(var_of(p))];
        }
        outLearnt[0] = neg(p);
        const std::vector<int> marked(outLearnt.begin(), outLearnt.end());
        // drop literals whose reason clause lies entirely within the learnt
        // clause (self-subsumption); keeps learnt clauses short
        std::size_t w = 1;
        for (std::size_t k = 1; k < outLearnt.size(); ++k)
            if (!redundant(outLearnt[k])) outLearnt[w++] = outLearnt[k];
        outLearnt.resize(w);
        // backtrack level = max level among the other literals
        outLevel = 0;
        std::size_t maxIdx = 1;
        for (std::size_t k = 1; k < outLearnt.size(); ++k) {
            const int lv = level_[static_cast<std::size_t>(var_of(outLearnt[k]))];
            if (lv > outLevel) { outLevel = lv; maxIdx = k; }
        }
        if (outLearnt.size() > 1) std::swap(outLearnt[1], outLearnt[maxIdx]);
        int lbd = 0;
        for (int l : outLearnt) {
            const int lv = level_[static_cast<std::size_t>(var_of(l))];
            if (!levelSeen_[static_cast<std::size_t>(lv)]) {
                levelSeen_[static_cast<std::size_t>(lv)] = 1;
                ++lbd;
            }
        }
        for (int l : outLearnt)
            levelSeen_[static_cast<std::size_t>(level_[static_cast<std::size_t>(var_of(l))])] = 0;
        for (int l : marked) seen_[static_cast<std::size_t>(var_of(l))] = 0;
        return lbd;
    }

    bool redundant(int q) const {
        const int r = reason_[static_cast<std::size_t>(var_of(q))];
        if (r == -1) return false;
        const auto& lits = clauses_[static_cast<std::size_t>(r)].lits;
        for (std::size_t k = 1; k < lits.size(); ++k) {
            const int v = var_of(lits[k]);
            if (!seen_[static_cast<std::size_t>(v)] && level_[static_cast<std::size_t>(v)] != 0)
                return false;
        }
        return true;
    }

    void attach_learnt(const std::vector<int>& learnt, int lbd) {
        if (learnt.size() == 1) {
            enqueue(learnt[0], -1);
            return;
        }
        const int ci = static_cast<int>(clauses_.size());
        clauses_.push_back({learnt, true, lbd});
        ++numLearnt_;
        watch(ci, 0);
        watch(ci, 1);
        enqueue(learnt[0], ci);
    }

    // Only called at decision level 0, where no reason clause can still be
    // needed by conflict analysis: drop the worst half of the learnt clauses
    // (highest LBD first) and rebuild the watch lists.
    void reduce_learnt() {
        std::vector<int> learntIdx;
        for (std::size_t i = 0; i < clauses_.size(); ++i)
            if (clauses_[i].learnt) learntIdx.push_back(static_cast<int>(i));
        std::sort(learntIdx.begin(), learntIdx.end(), [this](int a, int b) {
            const auto& ca = clauses_[static_cast<std::size_t>(a)];
            const auto& cb = clauses_[static_cast<std::size_t>(b)];
            if (ca.lbd != cb.lbd) return ca.lbd > cb.lbd;
            return ca.lits.size() > cb.lits.size();
        });
        std::vector<char> drop(clauses_.size(), 0);
        std::size_t removed = 0;
        for (std::size_t i = 0; i < learntIdx.size() / 2; ++i) {
            const auto& c = clauses_[static_cast<std::size_t>(learntIdx[i])];
            if (c.lbd <= 2) break;  // sorted, so the rest are at least as good
            drop[static_cast<std::size_t>(learntIdx[i])] = 1;
            ++removed;
        }
        if (removed == 0) return;
        std::size_t out = 0;
        for (std::size_t i = 0; i < clauses_.size(); ++i)
            if (!drop[i]) {
                if (out != i) clauses_[out] = std::move(clauses_[i]);
                ++out;
            }
        clauses_.resize(out);
        numLearnt_ -= static_cast<std::int64_t>(removed);
        for (auto& wl : watches_) wl.clear();
        for (std::size_t i = 0; i < clauses_.size(); ++i) {
            watch(static_cast<int>(i), 0);
            watch(static_cast<int>(i), 1);
        }
        std::fill(reason_.begin(), reason_.end(), -1);
    }

    void backtrack(int toLevel) {
        if (decision_level() <= toLevel) return;
        const int boundary = trailLim_[static_cast<std::size_t>(toLevel)];
        for (int i = static_cast<int>(trail_.size()) - 1; i >= boundary; --i) {
            const int v = var_of(trail_[static_cast<std::size_t>(i)]);
            polarity_[static_cast<std::size_t>(v)] =
                value_[static_cast<std::size_t>(v)] == kTrue;
            value_[static_cast<std::size_t>(v)] = kUndef;
            heap_insert(v);
        }
        trail_.resize(static_cast<std::size_t>(boundary));
        trailLim_.resize(static_cast<std::size_t>(toLevel));
        qhead_ = trail_.size();
    }

    // ---- branching heap (max activity) ----
    void bump_activity(int v) {
        activity_[static_cast<std::size_t>(v)] += activityInc_;
        if (activity_[static_cast<std::size_t>(v)] > 1e100) {
            for (auto& a : activity_) a *= 1e-100;
            activityInc_ *= 1e-100;
        }
        heap_update(v);
    }

    void decay_activity() { activityInc_ /= 0.95; }

    void rebuild_heap() {
        heap_.clear();
        std::fill(heapPos_.begin(), heapPos_.end(), -1);
        for (int v = 1; v <= numVars_; ++v)
            if (value_[static_cast<std::size_t>(v)] == kUndef) heap_insert(v);
    }

    bool heap_less(int a, int b) const {
        return activity_[static_cast<std::size_t>(a)] < activity_[static_cast<std::size_t>(b)];
    }

    void heap_insert(int v) {
        if (heapPos_[static_cast<std::size_t>(v)] != -1) return;
        heapPos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heap_up(static_cast<int>(heap_.size()) - 1);
    }

    void heap_update(int v) {
        const int pos = heapPos_[static_cast<std::size_t>(v)];
        if (pos != -1) heap_up(pos);
    }

    void heap_up(int i) {
        while (i > 0) {
            const int parent = (i - 1) / 2;
            if (!heap_less(heap_[static_cast<std::size_t>(parent)],
                           heap_[static_cast<std::size_t>(i)]))
                break;
            heap_swap(i, parent);
            i = parent;
        }
    }

    void heap_down(int i) {
        const int n = static_cast<int>(heap_.size());
        while (true) {
            int largest = i;
            const int l = 2 * i + 1, r = 2 * i + 2;
            if (l < n && heap_less(heap_[static_cast<std::size_t>(largest)],
                                   heap_[static_cast<std::size_t>(l)]))
                largest = l;
            if (r < n && heap_less(heap_[static_cast<std::size_t>(largest)],
                                   heap_[static_cast<std::size_t>(r)]))
                largest = r;
            if (largest == i) break;
            heap_swap(i, largest);
            i = largest;
        }
    }

    void heap_swap(int i, int j) {
        std::swap(heap_[static_cast<std::size_t>(i)], heap_[static_cast<std::size_t>(j)]);
        heapPos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
        heapPos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(j)])] = j;
    }

    int pick_branch_var() {
        while (!heap_.empty()) {
            const int v = heap_[0];
            heap_swap(0, static_cast<int>(heap_.size()) - 1);
            heap_.pop_back();
            heapPos_[static_cast<std::size_t>(v)] = -1;
            if (!heap_.empty()) heap_down(0);
            if (value_[static_cast<std::size_t>(v)] == kUndef) return v;
        }
        return 0;
    }

    // ---- restarts ----
    static std::int64_t luby(std::int64_t i) {
        // position i+1 inside the order-k sequence (seq(k-1) seq(k-1) 2^(k-1))
        std::int64_t k = 1;
        while ((std::int64_t{1} << k) - 1 < i + 1) ++k;
        while ((std::int64_t{1} << k) - 1 != i + 1) {
            --k;
            if (i + 1 > (std::int64_t{1} << k) - 1) i -= (std::int64_t{1} << k) - 1;
        }
        return std::int64_t{1} << (k - 1);
    }

    std::int64_t luby_restart_limit() { return 100 * luby(restarts_); }

    void extract_model() {
        model_.assign(static_cast<std::size_t>(numVars_) + 1, false);
        for (int v = 1; v <= numVars_; ++v)
            model_[static_cast<std::size_t>(v)] = value_[static_cast<std::size_t>(v)] == kTrue;
    }

    int numVars_ = 0;
    bool unsat_ = false;
    std::vector<InternalClause> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<signed char> value_;
    std::vector<int> reason_;
    std::vector<int> level_;
    std::vector<int> trail_;
    std::vector<int> trailLim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    std::vector<bool> polarity_;
    std::vector<int> heap_;
    std::vector<int> heapPos_;
    std::vector<signed char> seen_;
    std::vector<signed char> levelSeen_;
    double activityInc_ = 1.0;
    std::int64_t conflicts_ = 0;
    std::int64_t restarts_ = 0;
    std::int64_t numLearnt_ = 0;
    std::int64_t learntLimit_ = 2000;
    Assignment model_;
};

}  // namespace paretodd
