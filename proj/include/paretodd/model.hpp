#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "paretodd/rational.hpp"

namespace paretodd {

using Label = std::string;

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --------------------------------------------------------------------------
// Features and branchings
// --------------------------------------------------------------------------

// A feature maps an input vector to a single real.
struct FeatureSpec {
    struct Projection { int column; };
    struct AbsProjection { int column; };
    struct Affine {
        std::vector<double> coefficients;
        double offset = 0.0;
    };
    std::variant<Projection, AbsProjection, Affine> kind;

    double evaluate(const std::vector<double>& input) const {
        if (const auto* p = std::get_if<Projection>(&kind)) {
            check_column(p->column, input.size());
            return input[static_cast<std::size_t>(p->column)];
        }
        if (const auto* p = std::get_if<AbsProjection>(&kind)) {
            check_column(p->column, input.size());
            const double v = input[static_cast<std::size_t>(p->column)];
            return v < 0 ? -v : v;
        }
        const auto& a = std::get<Affine>(kind);
        if (a.coefficients.size() != input.size())
            throw input_error("affine feature: coefficient count != input dimension");
        double acc = a.offset;
        for (std::size_t i = 0; i < input.size(); ++i) acc += a.coefficients[i] * input[i];
        return acc;
    }

    int max_column() const {
        if (const auto* p = std::get_if<Projection>(&kind)) return p->column;
        if (const auto* p = std::get_if<AbsProjection>(&kind)) return p->column;
        return static_cast<int>(std::get<Affine>(kind).coefficients.size()) - 1;
    }

private:
    static void check_column(int column, std::size_t dim) {
        if (column < 0 || static_cast<std::size_t>(column) >= dim)
            throw input_error("feature column " + std::to_string(column) + " out of range");
    }
};

// A branching partitions a feature's range into arity cells.
struct BranchingSpec {
    struct Thresholds {
        std::vector<double> cuts;  // strictly increasing; branch = #cuts <= value
    };
    struct Categorical {
        std::map<std::int64_t, int> branches;  // value -> branch
        int defaultBranch = 0;
    };
    std::variant<Thresholds, Categorical> kind;

    int branch_of(double value) const {
        if (const auto* t = std::get_if<Thresholds>(&kind)) {
            int b = 0;
            for (double cut : t->cuts)
                if (cut <= value) ++b;
            return b;
        }
        const auto& c = std::get<Categorical>(kind);
        auto it = c.branches.find(static_cast<std::int64_t>(value));
        return it == c.branches.end() ? c.defaultBranch : it->second;
    }

    int arity() const {
        if (const auto* t = std::get_if<Thresholds>(&kind))
            return static_cast<int>(t->cuts.size()) + 1;
        const auto& c = std::get<Categorical>(kind);
        int hi = c.defaultBranch;
        for (const auto& [v, b] : c.branches) hi = std::max(hi, b);
        return hi + 1;
    }
};

struct Predicate {
    std::string id;
    FeatureSpec feature;
    BranchingSpec branching;
    int arity = 0;
    int weight = 0;  // explainability preference, grid value 0..100

    static Predicate make(std::string id, FeatureSpec f, BranchingSpec b, int weight) {
        Predicate p;
        p.id = std::move(id);
        p.feature = std::move(f);
        p.branching = std::move(b);
        p.weight = weight;
        p.arity = p.branching.arity();
        if (p.arity < 2) throw input_error("predicate " + p.id + ": arity must be >= 2");
        if (weight < 0 || weight > 100)
            throw input_error("predicate " + p.id + ": weight outside 0..100");
        if (const auto* c = std::get_if<BranchingSpec::Categorical>(&p.branching.kind)) {
            for (const auto& [v, b2] : c->branches)
                if (b2 < 0 || b2 >= p.arity)
                    throw input_error("predicate " + p.id + ": categorical branch out of range");
        }
        if (const auto* t = std::get_if<BranchingSpec::Thresholds>(&p.branching.kind)) {
            for (std::size_t i = 1; i < t->cuts.size(); ++i)
                if (!(t->cuts[i - 1] < t->cuts[i]))
                    throw input_error("predicate " + p.id + ": thresholds not strictly increasing");
        }
        return p;
    }
};

// --------------------------------------------------------------------------
// Interpretation class
// --------------------------------------------------------------------------

struct InterpretationClassSpec {
    std::vector<Predicate> predicates;
    std::vector<Label> labels;
    int nodeBound = 1;                   // template slots n
    std::vector<int> nodeUnusedWeight;   // one grid value per slot
    int inputDimension = 0;

    int cmax() const {
        int c = 0;
        for (const auto& p : predicates) c = std::max(c, p.arity);
        return c;
    }

    int label_index(const Label& l) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return static_cast<int>(i);
        return -1;
    }

    // The per-slot maxima must sum to at most 100 so every achievable
    // explainability value fits the 7-bit grid.
    void validate() const {
        if (predicates.empty()) throw input_error("class spec: no predicates");
        if (labels.empty()) throw input_error("class spec: no labels");
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j]) throw input_error("class spec: duplicate label");
        if (nodeBound < 1) throw input_error("class spec: nodeBound must be >= 1");
        if (nodeUnusedWeight.size() != static_cast<std::size_t>(nodeBound))
            throw input_error("class spec: need one unused-node weight per slot");
        int maxPred = 0;
        for (const auto& p : predicates) {
            maxPred = std::max(maxPred, p.weight);
            if (p.feature.max_column() >= inputDimension)
                throw input_error("predicate " + p.id + ": feature column beyond input dimension");
        }
        int total = 0;
        for (int w : nodeUnusedWeight) {
            if (w < 0 || w > 100) throw input_error("class spec: unused-node weight outside 0..100");
            total += std::max(w, maxPred);
        }
        if (total > 100)
            throw input_error("class spec: sum of per-slot max weights exceeds 100");
    }
};

// --------------------------------------------------------------------------
// Samples
// --------------------------------------------------------------------------

struct Sample {
    std::vector<double> input;
    Label label;
    std::int64_t weight = 1;
};

struct SampleSet {
    std::vector<Sample> samples;

    std::int64_t total_weight() const {
        std::int64_t t = 0;
        for (const auto& s : samples) t += s.weight;
        return t;
    }
};

// --------------------------------------------------------------------------
// Decision diagrams
// --------------------------------------------------------------------------

// Branch target: a later internal node (index into nodes, 0-based) or a leaf.
struct Target {
    bool leaf = false;
    int node = -1;      // valid when !leaf
    Label label;        // valid when leaf

    static Target to_node(int j) { return Target{false, j, {}}; }
    static Target to_leaf(Label l) { return Target{true, -1, std::move(l)}; }

    friend bool operator==(const Target& a, const Target& b) {
        if (a.leaf != b.leaf) return false;
        return a.leaf ? a.label == b.label : a.node == b.node;
    }
};

struct DiagramNode {
    std::string predicate;          // predicate id
    std::vector<Target> transitions;  // one per branch, size = predicate arity
};

// An instantiated template: nodes are topologically ordered, node 0 is the
// root, and node i only targets nodes j > i or leaves. A diagram may carry
// fewer nodes than the class's nodeBound; the remaining slots count as
// unused for the explainability measure.
struct DecisionDiagram {
    std::vector<DiagramNode> nodes;

    friend bool operator==(const DecisionDiagram& a, const DecisionDiagram& b) {
        if (a.nodes.size() != b.nodes.size()) return false;
        for (std::size_t i = 0; i < a.nodes.size(); ++i) {
            if (a.nodes[i].predicate != b.nodes[i].predicate) return false;
            if (!(a.nodes[i].transitions == b.nodes[i].transitions)) return false;
        }
        return true;
    }
};

// --------------------------------------------------------------------------
// Measures
// --------------------------------------------------------------------------

// Explainability values live on the integer grid 0..100 (two decimal digits
// of the normalized score).
namespace grid {
inline constexpr int kMin = 0;
inline constexpr int kMax = 100;
inline int pred(int e) { return e - 1; }
inline int succ(int e) { return e + 1; }
}  // namespace grid

struct MeasurePair {
    Rational correctness;   // in [0,1]
    int explainability = 0;  // grid value

    friend bool operator==(const MeasurePair& a, const MeasurePair& b) {
        return a.correctness == b.correctness && a.explainability == b.explainability;
    }
    friend bool operator<(const MeasurePair& a, const MeasurePair& b) {
        if (a.correctness != b.correctness) return a.correctness < b.correctness;
        return a.explainability < b.explainability;
    }
};

// (c,e) <= (c',e') component-wise.
inline bool preceq(const MeasurePair& a, const MeasurePair& b) {
    return a.correctness <= b.correctness && a.explainability <= b.explainability;
}

// Strict domination: b is at least as good in both components and better in one.
inline bool dominates(const MeasurePair& b, const MeasurePair& a) {
    return preceq(a, b) && !(a == b);
}

inline std::vector<MeasurePair> max_preceq(std::vector<MeasurePair> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<MeasurePair> out;
    for (const auto& a : pairs) {
        bool dominated = false;
        for (const auto& b : pairs)
            if (dominates(b, a)) { dominated = true; break; }
        if (!dominated) out.push_back(a);
    }
    return out;
}

// --------------------------------------------------------------------------
// Evaluation
// --------------------------------------------------------------------------

inline int evaluate_predicate(const Predicate& p, const std::vector<double>& input) {
    const int b = p.branching.branch_of(p.feature.evaluate(input));
    if (b < 0 || b >= p.arity)
        throw input_error("predicate " + p.id + ": branch outside arity");
    return b;
}

inline const Predicate& find_predicate(const InterpretationClassSpec& spec, const std::string& id) {
    for (const auto& p : spec.predicates)
        if (p.id == id) return p;
    throw input_error("unknown predicate id: " + id);
}

inline Label evaluate_diagram(const DecisionDiagram& d, const InterpretationClassSpec& spec,
                              const std::vector<double>& input) {
    if (d.nodes.empty()) throw input_error("evaluate_diagram: empty diagram");
    int i = 0;
    while (true) {
        const DiagramNode& node = d.nodes[static_cast<std::size_t>(i)];
        const Predicate& p = find_predicate(spec, node.predicate);
        const int c = evaluate_predicate(p, input);
        const Target& t = node.transitions[static_cast<std::size_t>(c)];
        if (t.leaf) return t.label;
        i = t.node;  // strictly increasing by the acyclicity invariant
    }
}

inline Rational correctness_measure(const DecisionDiagram& d, const InterpretationClassSpec& spec,
                                    const SampleSet& S) {
    if (S.samples.empty()) throw input_error("correctness_measure: empty sample set");
    std::int64_t agree = 0, total = 0;
    for (const auto& s : S.samples) {
        total += s.weight;
        if (evaluate_diagram(d, spec, s.input) == s.label) agree += s.weight;
    }
    return Rational(agree, total);
}

// Slots reachable from the root within the diagram (root always used).
inline std::vector<bool> used_slots(const DecisionDiagram& d, int nodeBound) {
    std::vector<bool> used(static_cast<std::size_t>(nodeBound), false);
    if (d.nodes.empty()) return used;
    used[0] = true;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        if (!used[i]) continue;
        for (const auto& t : d.nodes[i].transitions)
            if (!t.leaf) used[static_cast<std::size_t>(t.node)] = true;
    }
    return used;
}

// Sum over the n template slots: predicate weight if the slot is used,
// unused-node reward otherwise.
inline int explainability_measure(const DecisionDiagram& d, const InterpretationClassSpec& spec) {
    const auto used = used_slots(d, spec.nodeBound);
    int e = 0;
    for (int i = 0; i < spec.nodeBound; ++i) {
        if (static_cast<std::size_t>(i) < d.nodes.size() && used[static_cast<std::size_t>(i)])
            e += find_predicate(spec, d.nodes[static_cast<std::size_t>(i)].predicate).weight;
        else
            e += spec.nodeUnusedWeight[static_cast<std::size_t>(i)];
    }
    return e;
}

inline MeasurePair measures_of(const DecisionDiagram& d, const InterpretationClassSpec& spec,
                               const SampleSet& S) {
    return MeasurePair{correctness_measure(d, spec, S), explainability_measure(d, spec)};
}

// --------------------------------------------------------------------------
// Validation
// --------------------------------------------------------------------------

inline std::vector<std::string> validate_diagram(const DecisionDiagram& d,
                                                 const InterpretationClassSpec& spec) {
    std::vector<std::string> violations;
    if (d.nodes.empty()) {
        violations.push_back("diagram has no nodes");
        return violations;
    }
    if (d.nodes.size() > static_cast<std::size_t>(spec.nodeBound))
        violations.push_back("diagram exceeds the class node bound");
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& node = d.nodes[i];
        const Predicate* p = nullptr;
        for (const auto& q : spec.predicates)
            if (q.id == node.predicate) { p = &q; break; }
        if (!p) {
            violations.push_back("node " + std::to_string(i + 1) + ": unknown predicate '" +
                                 node.predicate + "'");
            continue;
        }
        if (node.transitions.size() != static_cast<std::size_t>(p->arity))
            violations.push_back("node " + std::to_string(i + 1) +
                                 ": transition count != predicate arity");
        for (std::size_t c = 0; c < node.transitions.size(); ++c) {
            const Target& t = node.transitions[c];
            if (t.leaf) {
                if (spec.label_index(t.label) < 0)
                    violations.push_back("node " + std::to_string(i + 1) + " branch " +
                                         std::to_string(c) + ": unknown leaf label");
            } else {
                if (t.node <= static_cast<int>(i))
                    violations.push_back("node " + std::to_string(i + 1) + " branch " +
                                         std::to_string(c) + ": backward or self edge");
                if (t.node < 0 || t.node >= static_cast<int>(d.nodes.size()))
                    violations.push_back("node " + std::to_string(i + 1) + " branch " +
                                         std::to_string(c) + ": target out of range");
            }
        }
    }
    return violations;
}

}  // namespace paretodd
