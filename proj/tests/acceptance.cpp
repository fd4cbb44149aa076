// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "paretodd/bruteforce.hpp"
#include "paretodd/config.hpp"
#include "paretodd/explorer.hpp"
#include "paretodd/oracle.hpp"
#include "support.hpp"

using namespace paretodd;
using testsupport::random_toy;
using testsupport::ToyInstance;

namespace {

bool gAllPass = true;

void criterion(int number, const std::string& title, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", number, title.c_str(),
                secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) gAllPass = false;
}

std::vector<ToyInstance> toy_suite() {
    std::vector<ToyInstance> toys;
    for (std::uint64_t seed = 200; seed < 220; ++seed) toys.push_back(random_toy(seed));
    return toys;
}

std::vector<MeasurePair> front_pairs(const ParetoFront& f) {
    std::vector<MeasurePair> out;
    for (const auto& e : f.entries) out.push_back(e.measures);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MeasurePair> front_pairs(const std::vector<FrontEntry>& f) {
    std::vector<MeasurePair> out;
    for (const auto& e : f) out.push_back(e.measures);
    std::sort(out.begin(), out.end());
    return out;
}

// fast clause evaluation against a bitmask assignment (var v = bit v-1)
bool mask_satisfies(const Clause& c, std::uint64_t mask) {
    for (Lit l : c) {
        const int v = l > 0 ? l : -l;
        const bool val = (mask >> (v - 1)) & 1;
        if ((l > 0) == val) return true;
    }
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string srcDir = argc > 1 ? argv[1] : "..";
    const auto toys = toy_suite();

    criterion(1, "explored fronts equal brute-force fronts on 20 toy instances", [&](std::string& d) {
        for (std::size_t k = 0; k < toys.size(); ++k) {
            const auto& toy = toys[k];
            const ParetoFront got = explore_poi(toy.spec, toy.samples, builtin_backend());
            const auto expect = exact_front(toy.spec, toy.samples);
            if (front_pairs(got) != front_pairs(expect)) {
                d = "pair-set mismatch on toy " + std::to_string(k);
                return false;
            }
            std::set<std::pair<std::int64_t, int>> seen;
            for (const auto& e : got.entries) {
                if (!seen.insert({e.measures.correctness.num * 1000000 + e.measures.correctness.den,
                                  e.measures.explainability}).second) {
                    d = "duplicate measure pair on toy " + std::to_string(k);
                    return false;
                }
                if (measures_of(e.diagram, toy.spec, toy.samples) != e.measures) {
                    d = "witness measures disagree on toy " + std::to_string(k);
                    return false;
                }
                for (const auto& o : got.entries)
                    if (!(o.measures == e.measures) && dominates(o.measures, e.measures)) {
                        d = "comparable entries on toy " + std::to_string(k);
                        return false;
                    }
            }
        }
        d = std::to_string(toys.size()) + " instances, exact agreement";
        return true;
    });

    criterion(2, "built-in MaxSAT optimum equals exhaustive enumeration", [&](std::string& d) {
        std::mt19937_64 g(4242);
        int externalChecked = 0;
        const char* external = std::getenv("PARETODD_MAXSAT_SOLVER");
        for (int trial = 0; trial < 100; ++trial) {
            WcnfInstance inst;
            inst.numVars = 2 + static_cast<int>(g() % 19);  // up to 20 variables
            const int numHard = static_cast<int>(g() % (2 * static_cast<std::uint64_t>(inst.numVars)));
            for (int i = 0; i < numHard; ++i) {
                Clause c;
                const int len = 1 + static_cast<int>(g() % 3);
                for (int j = 0; j < len; ++j) {
                    const int v = 1 + static_cast<int>(g() % static_cast<std::uint64_t>(inst.numVars));
                    c.push_back(g() % 2 ? v : -v);
                }
                inst.hard.push_back(std::move(c));
            }
            const int numSoft = 1 + static_cast<int>(g() % static_cast<std::uint64_t>(inst.numVars));
            for (int i = 0; i < numSoft; ++i) {
                const int v = 1 + static_cast<int>(g() % static_cast<std::uint64_t>(inst.numVars));
                inst.soft.push_back({g() % 2 ? v : -v, 1 + static_cast<std::int64_t>(g() % 5),
                                     SoftFamily::other});
            }

            std::int64_t best = -1;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.numVars); ++mask) {
                bool hardOk = true;
                for (const auto& c : inst.hard)
                    if (!mask_satisfies(c, mask)) { hardOk = false; break; }
                if (!hardOk) continue;
                std::int64_t soft = 0;
                for (const auto& s : inst.soft)
                    if (mask_satisfies({s.lit}, mask)) soft += s.weight;
                best = std::max(best, soft);
            }

            const auto out = solve(inst);
            if (best < 0) {
                if (out.status != SolveOutcome::Status::unsatisfiable_hard) {
                    d = "missed hard-UNSAT on trial " + std::to_string(trial);
                    return false;
                }
                continue;
            }
            if (out.status != SolveOutcome::Status::optimal || out.optimum != best) {
                d = "optimum mismatch on trial " + std::to_string(trial);
                return false;
            }
            if (external && trial < 50) {
                const auto ext = solve_external(inst, external);
                if (ext.status != SolveOutcome::Status::optimal || ext.optimum != best) {
                    d = "external solver mismatch on trial " + std::to_string(trial);
                    return false;
                }
                ++externalChecked;
            }
        }
        d = externalChecked > 0
                ? "external bridge cross-checked on " + std::to_string(externalChecked) + " instances"
                : "no external solver configured (set PARETODD_MAXSAT_SOLVER); built-in verified";
        return true;
    });

    criterion(3, "adder and comparator circuits match integer arithmetic exhaustively",
              [&](std::string& d) {
        CnfBuilder b;
        Word x, y;
        for (int i = 0; i < 7; ++i) x.push_back(b.new_var());
        for (int i = 0; i < 7; ++i) y.push_back(b.new_var());
        const Word sum = ripple_add(b, x, y);
        const Lit lt = less_than(b, x, y);
        const Lit gt = greater_than(b, x, y);
        long checks = 0;
        for (std::uint64_t a = 0; a <= 127; ++a) {
            for (std::uint64_t c = 0; c <= 127; ++c) {
                std::vector<bool> assignment(static_cast<std::size_t>(b.num_vars()) + 1, false);
                for (int i = 0; i < 7; ++i) {
                    assignment[static_cast<std::size_t>(x[i])] = (a >> i) & 1;
                    assignment[static_cast<std::size_t>(y[i])] = (c >> i) & 1;
                }
                if (a + c <= 127) {
                    if (eval_word(b, sum, assignment) != a + c) {
                        d = "adder mismatch at " + std::to_string(a) + "+" + std::to_string(c);
                        return false;
                    }
                    ++checks;
                }
                if (b.eval_lit(lt, assignment) != (a < c) || b.eval_lit(gt, assignment) != (a > c)) {
                    d = "comparator mismatch at " + std::to_string(a) + "," + std::to_string(c);
                    return false;
                }
                ++checks;
            }
        }
        d = std::to_string(checks) + " circuit evaluations, zero mismatches";
        return true;
    });

    criterion(4, "decoded measures equal per-family satisfied soft weights on every solve",
              [&](std::string& d) {
        int solves = 0;
        for (std::size_t k = 0; k < toys.size(); ++k) {
            const auto& toy = toys[k];
            std::mt19937_64 g(900 + k);
            std::vector<std::pair<int, int>> intervals = {{0, 100}};
            for (int r = 0; r < 3; ++r) {
                int lo = static_cast<int>(g() % 101), hi = static_cast<int>(g() % 101);
                if (lo > hi) std::swap(lo, hi);
                intervals.push_back({lo, hi});
            }
            for (const auto& [lo, hi] : intervals) {
                const EncodedProblem prob = build_full(toy.spec, toy.samples,
                                                       std::make_pair(lo, hi));
                const auto out = solve(prob.inst);
                if (out.status != SolveOutcome::Status::optimal) continue;
                const DecisionDiagram diag = decode_assignment(prob.pool, toy.spec, out.model);
                const auto satC = satisfied_soft_weight(prob.inst, out.model,
                                                        SoftFamily::correctness);
                const auto satE = satisfied_soft_weight(prob.inst, out.model,
                                                        SoftFamily::explainability);
                if (auto mismatch = verify_measures(diag, toy.samples, toy.spec, satC, satE)) {
                    d = "toy " + std::to_string(k) + ": " + mismatch->what;
                    return false;
                }
                ++solves;
            }
        }
        d = std::to_string(solves) + " solver calls verified exactly";
        return true;
    });

    criterion(5, "interval-restricted synthesis maximizes correctness at each achievable e",
              [&](std::string& d) {
        int checks = 0;
        for (std::size_t k = 0; k < toys.size(); ++k) {
            const auto& toy = toys[k];
            std::map<int, Rational> bestAt;  // e -> max correctness
            enumerate_class(toy.spec, [&](const DecisionDiagram& diag) {
                const MeasurePair m = measures_of(diag, toy.spec, toy.samples);
                auto it = bestAt.find(m.explainability);
                if (it == bestAt.end() || it->second < m.correctness)
                    bestAt[m.explainability] = m.correctness;
            });
            for (const auto& [e, c] : bestAt) {
                const auto result = quint_synt(toy.spec, toy.samples, e, e, builtin_backend());
                if (!result) {
                    d = "toy " + std::to_string(k) + ": no result at achievable e=" +
                        std::to_string(e);
                    return false;
                }
                if (result->measures.explainability != e || !(result->measures.correctness == c)) {
                    d = "toy " + std::to_string(k) + ": suboptimal at e=" + std::to_string(e);
                    return false;
                }
                ++checks;
            }
        }
        d = std::to_string(checks) + " (instance, e) pairs exact";
        return true;
    });

    criterion(6, "argmax of random strictly increasing linear objectives lies on the front",
              [&](std::string& d) {
        for (std::size_t k = 0; k < toys.size(); ++k) {
            const auto& toy = toys[k];
            const ParetoFront got = explore_poi(toy.spec, toy.samples, builtin_backend());
            const auto pairs = front_pairs(got);
            const std::int64_t total = toy.samples.total_weight();

            std::vector<MeasurePair> all;
            enumerate_class(toy.spec, [&](const DecisionDiagram& diag) {
                all.push_back(measures_of(diag, toy.spec, toy.samples));
            });

            std::mt19937_64 g(7000 + k);
            for (int trial = 0; trial < 50; ++trial) {
                const std::int64_t w1 = 1 + static_cast<std::int64_t>(g() % 100);
                const std::int64_t w2 = 1 + static_cast<std::int64_t>(g() % 100);
                // objective scaled by the sample-weight total stays integral:
                // w1*agree + w2*e*total
                auto objective = [&](const MeasurePair& m) {
                    const std::int64_t agree = m.correctness.num * (total / m.correctness.den);
                    return w1 * agree + w2 * m.explainability * total;
                };
                std::int64_t best = objective(all[0]);
                for (const auto& m : all) best = std::max(best, objective(m));
                for (const auto& m : all) {
                    if (objective(m) != best) continue;
                    if (std::find(pairs.begin(), pairs.end(), m) == pairs.end()) {
                        d = "toy " + std::to_string(k) + ": argmax pair missing from front";
                        return false;
                    }
                }
            }
        }
        d = "50 objectives per instance, zero misses";
        return true;
    });

    criterion(7, "PAC sample-size formulas reproduce worked values and are monotone",
              [&](std::string& d) {
        if (pac_sample_size({0.05, 0.05, true, 20}) != 120) { d = "realizable 120 failed"; return false; }
        if (pac_sample_size({0.05, 0.1, false, 20}) != 1337) { d = "agnostic 1337 failed"; return false; }
        if (pac_sample_size({0.5, 0.5, true, 1}) != 2) { d = "ceil(ln 2 / 0.5) != 2"; return false; }
        const double deltas[] = {0.01, 0.05, 0.1, 0.2, 0.4};
        const double epsilons[] = {0.01, 0.05, 0.1, 0.2, 0.4};
        const std::uint64_t sizes[] = {2, 10, 100, 10000, 1000000};
        for (bool realizable : {true, false}) {
            for (int di = 0; di < 5; ++di)
                for (int ei = 0; ei < 5; ++ei)
                    for (int si = 0; si < 5; ++si) {
                        const auto m = pac_sample_size({deltas[di], epsilons[ei], realizable,
                                                        sizes[si]});
                        if (di > 0 && pac_sample_size({deltas[di - 1], epsilons[ei], realizable,
                                                       sizes[si]}) < m) {
                            d = "not decreasing in delta"; return false;
                        }
                        if (ei > 0 && pac_sample_size({deltas[di], epsilons[ei - 1], realizable,
                                                       sizes[si]}) < m) {
                            d = "not decreasing in epsilon"; return false;
                        }
                        if (si > 0 && pac_sample_size({deltas[di], epsilons[ei], realizable,
                                                       sizes[si - 1]}) > m) {
                            d = "not increasing in class size"; return false;
                        }
                    }
        }
        d = "worked values exact; 2x5x5x5 grid monotone";
        return true;
    });

    criterion(8, "synthetic airplane run shows a strict tradeoff front at PAC scale",
              [&](std::string& d) {
        const EngineConfig cfg = load_config(srcDir + "/configs/airplane.json");
        PacParams p;
        p.delta = 0.05;
        p.epsilon = 0.05;
        p.realizable = true;
        p.classSize = class_size_upper_bound(cfg.spec);
        const std::int64_t m = pac_sample_size(p);
        const SampleSet S = draw_samples(cfg.oracle, cfg.spec.labels, m, 1);

        const auto start = std::chrono::steady_clock::now();
        const ParetoFront front = explore_poi(cfg.spec, S, builtin_backend());
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (front.po() < 3) { d = "only " + std::to_string(front.po()) + " front points"; return false; }
        if (front.po() > front.tnp()) { d = "PO > TNP"; return false; }
        auto pairs = front_pairs(front);
        for (std::size_t i = 1; i < pairs.size(); ++i) {
            // sorted by ascending c: e must strictly decrease
            if (!(pairs[i - 1].correctness < pairs[i].correctness) ||
                pairs[i - 1].explainability <= pairs[i].explainability) {
                d = "front not strictly tradeoff-ordered";
                return false;
            }
        }
        for (const auto& step : front.trace) {
            if (step.outcome == "none" && step.seconds >= 1.0) {
                d = "infeasible-interval solve took " + std::to_string(step.seconds) + "s";
                return false;
            }
        }
        if (secs >= 600.0) { d = "run took " + std::to_string(secs) + "s"; return false; }
        std::ostringstream os;
        os << "m=" << m << ", PO=" << front.po() << ", TNP=" << front.tnp() << ", "
           << static_cast<int>(secs) << "s";
        d = os.str();
        return true;
    });

    criterion(9, "fixed seed and built-in solver reproduce front.json byte-for-byte",
              [&](std::string& d) {
        const EngineConfig cfg = load_config(srcDir + "/configs/bankloan.json");
        auto run = [&] {
            const SampleSet S = draw_samples(cfg.oracle, cfg.spec.labels, 60, 7);
            const ParetoFront front = explore_poi(cfg.spec, S, builtin_backend());
            return front_to_json(front, cfg).dump(2);
        };
        const std::string a = run();
        const std::string b = run();
        if (a != b) { d = "serialized fronts differ"; return false; }
        d = std::to_string(a.size()) + " bytes identical across two runs";
        return true;
    });

    return gAllPass ? 0 : 1;
}
