#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "paretodd/model.hpp"

namespace paretodd {

// Exhaustive enumeration of small interpretation classes; the independent
// ground truth the solver pipeline is tested against.

// Visits every syntactically valid full-template diagram exactly once:
// every predicate assignment per slot crossed with every transition
// assignment over the topological order (unreachable slots included, to
// match what the soft clauses score).
inline void enumerate_class(const InterpretationClassSpec& spec,
                            const std::function<void(const DecisionDiagram&)>& visit) {
    const int n = spec.nodeBound;
    DecisionDiagram d;
    d.nodes.resize(static_cast<std::size_t>(n));

    std::function<void(int)> fillNode = [&](int i) {
        if (i == n) {
            visit(d);
            return;
        }
        for (const Predicate& p : spec.predicates) {
            DiagramNode& node = d.nodes[static_cast<std::size_t>(i)];
            node.predicate = p.id;
            node.transitions.assign(static_cast<std::size_t>(p.arity), Target{});
            std::function<void(int)> fillBranch = [&](int c) {
                if (c == p.arity) {
                    fillNode(i + 1);
                    return;
                }
                for (int j = i + 1; j < n; ++j) {
                    node.transitions[static_cast<std::size_t>(c)] = Target::to_node(j);
                    fillBranch(c + 1);
                }
                for (const Label& l : spec.labels) {
                    node.transitions[static_cast<std::size_t>(c)] = Target::to_leaf(l);
                    fillBranch(c + 1);
                }
            };
            fillBranch(0);
        }
    };
    fillNode(0);
}

struct FrontEntry {
    MeasurePair measures;
    DecisionDiagram witness;
};

// Exact Pareto front by full enumeration: evaluate (c, e) for every
// diagram, keep the non-dominated pairs with one witness each.
inline std::vector<FrontEntry> exact_front(const InterpretationClassSpec& spec,
                                           const SampleSet& S) {
    std::vector<FrontEntry> all;
    enumerate_class(spec, [&](const DecisionDiagram& d) {
        const MeasurePair m = measures_of(d, spec, S);
        for (const auto& e : all)
            if (e.measures == m) return;  // keep the first witness per pair
        all.push_back({m, d});
    });
    std::vector<FrontEntry> front;
    for (const auto& a : all) {
        bool dominated = false;
        for (const auto& b : all)
            if (dominates(b.measures, a.measures)) { dominated = true; break; }
        if (!dominated) front.push_back(a);
    }
    std::sort(front.begin(), front.end(),
              [](const FrontEntry& a, const FrontEntry& b) { return a.measures < b.measures; });
    return front;
}

}  // namespace paretodd
