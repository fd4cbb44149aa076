#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "paretodd/decode.hpp"
#include "paretodd/encoder.hpp"
#include "paretodd/maxsat.hpp"
#include "paretodd/model.hpp"

namespace paretodd {

// A worklist triple: explainability interval plus the correctness floor a
// find must beat to count as a new Pareto point.
struct Region {
    int eLow = grid::kMin;
    int eHigh = grid::kMax;
    Rational cFloor{0, 1};

    bool empty() const { return eLow > eHigh; }
};

// MaxSAT backend: the built-in solver or an external command.
using MaxSatBackend = std::function<SolveOutcome(const WcnfInstance&)>;

inline MaxSatBackend builtin_backend() {
    return [](const WcnfInstance& inst) { return solve(inst); };
}

inline MaxSatBackend external_backend(std::string command) {
    return [command](const WcnfInstance& inst) { return solve_external(inst, command); };
}

struct SynthesisResult {
    DecisionDiagram diagram;  // full template; prune for display
    MeasurePair measures;
};

// One Pareto-optimal solve restricted to explainability in [eLow, eHigh].
// Returns nullopt iff no diagram of the class achieves an e in the
// interval. Measures are recomputed from the decoded diagram and checked
// against the per-family satisfied soft weights.
inline std::optional<SynthesisResult> quint_synt(const InterpretationClassSpec& spec,
                                                 const SampleSet& S, int eLow, int eHigh,
                                                 const MaxSatBackend& backend) {
    if (eLow > eHigh) return std::nullopt;
    if (eLow < grid::kMin || eHigh > grid::kMax)
        throw input_error("quint_synt: bounds outside the explainability grid");
    const EncodedProblem prob = build_full(spec, S, std::make_pair(eLow, eHigh));
    const SolveOutcome outcome = backend(prob.inst);
    if (outcome.status != SolveOutcome::Status::optimal) return std::nullopt;

    const DecisionDiagram d = decode_assignment(prob.pool, spec, outcome.model);
    const std::int64_t satC =
        satisfied_soft_weight(prob.inst, outcome.model, SoftFamily::correctness);
    const std::int64_t satE =
        satisfied_soft_weight(prob.inst, outcome.model, SoftFamily::explainability);
    if (auto mismatch = verify_measures(d, S, spec, satC, satE))
        throw internal_error("quint_synt: " + mismatch->what);

    SynthesisResult r;
    r.diagram = d;
    r.measures = MeasurePair{Rational(satC, prob.correctnessTotal), static_cast<int>(satE)};
    return r;
}

struct TraceStep {
    Region region;
    std::string outcome;  // "found" | "dominated" | "none"
    std::optional<MeasurePair> measures;
    std::vector<Region> pushed;
    double seconds = 0.0;
};

struct FrontPoint {
    DecisionDiagram diagram;
    MeasurePair measures;
    Region region;  // the worklist region this point was found in
};

struct ParetoFront {
    std::vector<FrontPoint> entries;
    std::vector<TraceStep> trace;

    int po() const { return static_cast<int>(entries.size()); }
    int tnp() const { return static_cast<int>(trace.size()); }
};

enum class WorklistOrder { lifo, fifo };

// Complete front enumeration by region splitting. A found point (c, e)
// with c above the floor is recorded and spawns the better-correctness
// interval [eLow, e-1] (floor c) and the better-explainability interval
// [e+1, eHigh] (floor unchanged); a dominated find only prunes the upper
// end of the interval. Empty intervals are never pushed.
inline ParetoFront explore_poi(const InterpretationClassSpec& spec, const SampleSet& S,
                               const MaxSatBackend& backend,
                               WorklistOrder order = WorklistOrder::lifo) {
    if (S.samples.empty()) throw input_error("explore_poi: empty sample set");
    ParetoFront front;
    std::deque<Region> worklist;
    worklist.push_back(Region{grid::kMin, grid::kMax, Rational(0, 1)});
    // Each push strictly shrinks the interval, so pops are bounded by the
    // grid size per branch; the cap only guards against encoding bugs.
    const int popCap = 2 * (grid::kMax - grid::kMin + 1);

    while (!worklist.empty()) {
        Region region;
        if (order == WorklistOrder::lifo) {
            region = worklist.back();
            worklist.pop_back();
        } else {
            region = worklist.front();
            worklist.pop_front();
        }
        if (front.tnp() >= popCap)
            throw internal_error("explore_poi: worklist pop cap exceeded");

        TraceStep step;
        step.region = region;
        const auto start = std::chrono::steady_clock::now();
        const auto result = quint_synt(spec, S, region.eLow, region.eHigh, backend);
        step.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        auto push = [&](Region r) {
            if (r.empty()) return;
            worklist.push_back(r);
            step.pushed.push_back(r);
        };

        if (!result) {
            step.outcome = "none";
        } else {
            step.measures = result->measures;
            const int e = result->measures.explainability;
            if (result->measures.correctness > region.cFloor) {
                step.outcome = "found";
                front.entries.push_back(FrontPoint{result->diagram, result->measures, region});
                push(Region{region.eLow, grid::pred(e), result->measures.correctness});
                push(Region{grid::succ(e), region.eHigh, region.cFloor});
            } else {
                step.outcome = "dominated";
                push(Region{region.eLow, grid::pred(e), region.cFloor});
            }
        }
        front.trace.push_back(std::move(step));
    }
    return front;
}

struct FrontReport {
    int po = 0;
    int tnp = 0;
    double minSeconds = 0.0;
    double maxSeconds = 0.0;
    double medianSeconds = 0.0;
};

inline FrontReport front_report(const ParetoFront& front) {
    FrontReport r;
    r.po = front.po();
    r.tnp = front.tnp();
    std::vector<double> times;
    for (const auto& step : front.trace) times.push_back(step.seconds);
    if (!times.empty()) {
        std::sort(times.begin(), times.end());
        r.minSeconds = times.front();
        r.maxSeconds = times.back();
        r.medianSeconds = times[times.size() / 2];
    }
    return r;
}

}  // namespace paretodd
