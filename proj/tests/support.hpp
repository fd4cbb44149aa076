#pragma once

// Shared helpers for the test suite: tiny hand-built class specs and a
// deterministic generator of random toy instances small enough for
// exhaustive enumeration.

#include <cstdint>
#include <random>
#include <vector>

#include "paretodd/model.hpp"

namespace testsupport {

using namespace paretodd;

inline Predicate threshold_pred(const std::string& id, int column, std::vector<double> cuts,
                                int weight) {
    FeatureSpec f;
    f.kind = FeatureSpec::Projection{column};
    BranchingSpec b;
    b.kind = BranchingSpec::Thresholds{std::move(cuts)};
    return Predicate::make(id, std::move(f), std::move(b), weight);
}

// One binary predicate, two labels, one node: the smallest useful class.
inline InterpretationClassSpec tiny_spec(int predWeight = 10, int unusedWeight = 20) {
    InterpretationClassSpec spec;
    spec.predicates.push_back(threshold_pred("p", 0, {0.5}, predWeight));
    spec.labels = {"A", "B"};
    spec.nodeBound = 1;
    spec.nodeUnusedWeight = {unusedWeight};
    spec.inputDimension = 1;
    return spec;
}

struct ToyInstance {
    InterpretationClassSpec spec;
    SampleSet samples;
};

// Deterministic random toy instance: n in 1..3, up to 3 threshold
// predicates with arity <= 3 over a 2-dimensional input, 2 labels, grid
// weights respecting the sum-of-maxima <= 100 invariant, and <= 40 samples
// labeled by a random scripted rule with a few label flips.
inline ToyInstance random_toy(std::uint64_t seed) {
    std::mt19937_64 g(seed);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
    };
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    ToyInstance t;
    t.spec.labels = {"A", "B"};
    t.spec.inputDimension = 2;
    t.spec.nodeBound = pick(1, 3);

    const int numPreds = pick(1, 3);
    const int slotCap = 100 / t.spec.nodeBound;
    for (int p = 0; p < numPreds; ++p) {
        const int arity = pick(2, 3);
        std::vector<double> cuts;
        double cut = uniform(0.1, 0.5);
        for (int c = 1; c < arity; ++c) {
            cuts.push_back(cut);
            cut += uniform(0.1, 0.3);
        }
        t.spec.predicates.push_back(threshold_pred("p" + std::to_string(p), pick(0, 1),
                                                   std::move(cuts), pick(0, slotCap)));
    }
    for (int i = 0; i < t.spec.nodeBound; ++i)
        t.spec.nodeUnusedWeight.push_back(pick(0, slotCap));
    t.spec.validate();

    const int m = pick(5, 40);
    const double r0 = uniform(0.2, 0.8), r1 = uniform(0.2, 0.8);
    const bool pol = pick(0, 1) == 1;
    for (int k = 0; k < m; ++k) {
        Sample s;
        s.input = {uniform(0.0, 1.0), uniform(0.0, 1.0)};
        bool a = ((s.input[0] < r0) == (s.input[1] < r1)) == pol;
        if (pick(0, 9) == 0) a = !a;  // noise keeps the front interesting
        s.label = a ? "A" : "B";
        s.weight = 1;
        t.samples.samples.push_back(std::move(s));
    }
    return t;
}

}  // namespace testsupport
