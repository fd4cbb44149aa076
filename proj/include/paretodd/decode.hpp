#pragma once

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "paretodd/cnf.hpp"
#include "paretodd/encoder.hpp"
#include "paretodd/maxsat.hpp"
#include "paretodd/model.hpp"

namespace paretodd {

struct internal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool lit_true(Lit l, const Assignment& model) {
    if (l == kLitTrue) return true;
    if (l == kLitFalse) return false;
    const int v = l > 0 ? l : -l;
    const bool val = model[static_cast<std::size_t>(v)];
    return l > 0 ? val : !val;
}

// Reads the structural variables of a satisfying assignment back into a
// full-template diagram (all n slots instantiated; unreachable slots are
// kept so the measure bookkeeping matches the soft-clause semantics).
inline DecisionDiagram decode_assignment(const VarPool& pool, const InterpretationClassSpec& spec,
                                         const Assignment& model) {
    DecisionDiagram d;
    for (int i = 0; i < pool.n; ++i) {
        int chosen = -1;
        for (int p = 0; p < pool.numPredicates; ++p) {
            if (lit_true(pool.lam[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)], model)) {
                if (chosen != -1)
                    throw internal_error("decode: two predicates assigned to one node");
                chosen = p;
            }
        }
        if (chosen == -1) throw internal_error("decode: node without a predicate");
        const Predicate& pred = spec.predicates[static_cast<std::size_t>(chosen)];
        DiagramNode node;
        node.predicate = pred.id;
        for (int c = 0; c < pred.arity; ++c) {
            int target = -1;
            const auto& row = pool.tau[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            for (int t = 0; t < pool.num_targets(i); ++t) {
                if (lit_true(row[static_cast<std::size_t>(t)], model)) {
                    if (target != -1) throw internal_error("decode: two targets on one branch");
                    target = t;
                }
            }
            if (target == -1) throw internal_error("decode: branch without a target");
            if (pool.target_is_leaf(i, target))
                node.transitions.push_back(Target::to_leaf(
                    spec.labels[static_cast<std::size_t>(pool.target_label(i, target))]));
            else
                node.transitions.push_back(Target::to_node(pool.target_node(i, target)));
        }
        d.nodes.push_back(std::move(node));
    }
    return d;
}

// Drops unreachable slots and renumbers the survivors; used for exports.
inline DecisionDiagram prune_unreachable(const DecisionDiagram& d, int nodeBound) {
    const auto used = used_slots(d, nodeBound);
    std::vector<int> remap(d.nodes.size(), -1);
    DecisionDiagram out;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        if (!used[i]) continue;
        remap[i] = static_cast<int>(out.nodes.size());
        out.nodes.push_back(d.nodes[i]);
    }
    for (auto& node : out.nodes)
        for (auto& t : node.transitions)
            if (!t.leaf) t.node = remap[static_cast<std::size_t>(t.node)];
    return out;
}

struct MeasureMismatch {
    std::string what;
};

// Guards the bridge between clause weights and measures: the decoded
// diagram's (c, e) recomputed from first principles must match the
// per-family satisfied soft weights exactly.
inline std::optional<MeasureMismatch> verify_measures(const DecisionDiagram& d, const SampleSet& S,
                                                      const InterpretationClassSpec& spec,
                                                      std::int64_t satCorrectness,
                                                      std::int64_t satExplainability) {
    std::int64_t agree = 0;
    for (const auto& s : S.samples)
        if (evaluate_diagram(d, spec, s.input) == s.label) agree += s.weight;
    if (agree != satCorrectness)
        return MeasureMismatch{"correctness: recomputed " + std::to_string(agree) +
                               " != satisfied soft weight " + std::to_string(satCorrectness)};
    const int e = explainability_measure(d, spec);
    if (e != satExplainability)
        return MeasureMismatch{"explainability: recomputed " + std::to_string(e) +
                               " != satisfied soft weight " + std::to_string(satExplainability)};
    return std::nullopt;
}

// DOT rendering: diamond predicate nodes, box label leaves, edges named by
// threshold intervals or categorical values.
inline std::string branch_description(const Predicate& p, int branch) {
    if (const auto* t = std::get_if<BranchingSpec::Thresholds>(&p.branching.kind)) {
        std::ostringstream os;
        const auto& cuts = t->cuts;
        if (branch == 0)
            os << "< " << cuts.front();
        else if (branch == static_cast<int>(cuts.size()))
            os << ">= " << cuts.back();
        else
            os << "[" << cuts[static_cast<std::size_t>(branch - 1)] << ", "
               << cuts[static_cast<std::size_t>(branch)] << ")";
        return os.str();
    }
    const auto& c = std::get<BranchingSpec::Categorical>(p.branching.kind);
    std::string vals;
    for (const auto& [v, b] : c.branches) {
        if (b != branch) continue;
        if (!vals.empty()) vals += ",";
        vals += std::to_string(v);
    }
    if (c.defaultBranch == branch) vals += vals.empty() ? "other" : ",other";
    return vals;
}

inline void write_dot(std::ostream& os, const DecisionDiagram& d,
                      const InterpretationClassSpec& spec) {
    os << "digraph interpretation {\n";
    for (std::size_t i = 0; i < d.nodes.size(); ++i)
        os << "  n" << i << " [shape=diamond, label=\"" << d.nodes[i].predicate << "\"];\n";
    std::vector<Label> leaves;
    for (std::size_t i = 0; i < d.nodes.size(); ++i)
        for (const auto& t : d.nodes[i].transitions)
            if (t.leaf && std::find(leaves.begin(), leaves.end(), t.label) == leaves.end())
                leaves.push_back(t.label);
    for (std::size_t l = 0; l < leaves.size(); ++l)
        os << "  leaf" << l << " [shape=box, label=\"" << leaves[l] << "\"];\n";
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        const Predicate& p = find_predicate(spec, d.nodes[i].predicate);
        for (std::size_t c = 0; c < d.nodes[i].transitions.size(); ++c) {
            const Target& t = d.nodes[i].transitions[c];
            os << "  n" << i << " -> ";
            if (t.leaf) {
                const auto it = std::find(leaves.begin(), leaves.end(), t.label);
                os << "leaf" << (it - leaves.begin());
            } else {
                os << "n" << t.node;
            }
            os << " [label=\"" << branch_description(p, static_cast<int>(c)) << "\"];\n";
        }
    }
    os << "}\n";
}

}  // namespace paretodd
