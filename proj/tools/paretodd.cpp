// Command-line front end: sample-size bounds, Pareto-front exploration,
// single interval-restricted synthesis, and diagram evaluation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "paretodd/bruteforce.hpp"
#include "paretodd/config.hpp"
#include "paretodd/explorer.hpp"
#include "paretodd/oracle.hpp"

namespace {

using namespace paretodd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitOracle = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNoInterpretation = 4;

// --solver takes "builtin" or an external solver command; the
// PARETODD_MAXSAT_SOLVER environment variable, when set, wins.
MaxSatBackend backend_from(const std::string& solverFlag) {
    if (const char* env = std::getenv("PARETODD_MAXSAT_SOLVER"); env && *env)
        return external_backend(env);
    if (solverFlag == "builtin") return builtin_backend();
    return external_backend(solverFlag);
}

SampleSet obtain_samples(const EngineConfig& cfg, const std::string& samplesPath,
                         std::int64_t m, std::uint64_t seed, double delta, double epsilon) {
    if (!samplesPath.empty())
        return read_samples_csv(samplesPath, cfg.spec.labels, cfg.oracle.labeler);
    if (m <= 0) {
        PacParams p;
        p.delta = delta;
        p.epsilon = epsilon;
        p.realizable = true;
        p.classSize = class_size_upper_bound(cfg.spec);
        m = pac_sample_size(p);
    }
    return draw_samples(cfg.oracle, cfg.spec.labels, m, seed);
}

std::string fmt_rational(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s (%.4f)", r.str().c_str(), r.to_double());
    return buf;
}

int cmd_sample_size(const std::string& configPath, double delta, double epsilon, bool agnostic) {
    const EngineConfig cfg = load_config(configPath);
    PacParams p;
    p.delta = delta;
    p.epsilon = epsilon;
    p.realizable = !agnostic;
    p.classSize = class_size_upper_bound(cfg.spec);
    const std::int64_t m = pac_sample_size(p);
    std::cout << "class size bound |E| <= " << p.classSize << "\n"
              << (agnostic ? "agnostic" : "realizable") << " sample size m = " << m << "\n";
    return kExitOk;
}

int cmd_explore(const std::string& configPath, const std::string& samplesPath, std::int64_t m,
                std::uint64_t seed, double delta, double epsilon, const std::string& solverFlag,
                const std::string& outDir, const std::string& orderFlag) {
    const EngineConfig cfg = load_config(configPath);
    const SampleSet S = obtain_samples(cfg, samplesPath, m, seed, delta, epsilon);
    const WorklistOrder order =
        orderFlag == "fifo" ? WorklistOrder::fifo : WorklistOrder::lifo;

    const ParetoFront front = explore_poi(cfg.spec, S, backend_from(solverFlag), order);

    std::filesystem::create_directories(outDir);
    {
        std::ofstream os(outDir + "/front.json");
        os << front_to_json(front, cfg).dump(2) << '\n';
    }
    {
        std::ofstream os(outDir + "/trace.jsonl");
        write_trace_jsonl(os, front);
    }
    {
        std::ofstream os(outDir + "/samples.csv");
        write_samples_csv(os, S, cfg.inputNames);
    }
    for (std::size_t k = 0; k < front.entries.size(); ++k) {
        std::ofstream os(outDir + "/diagram-" + std::to_string(k) + ".dot");
        write_dot(os, prune_unreachable(front.entries[k].diagram, cfg.spec.nodeBound), cfg.spec);
        std::ofstream js(outDir + "/diagram-" + std::to_string(k) + ".json");
        js << diagram_to_json(prune_unreachable(front.entries[k].diagram, cfg.spec.nodeBound), cfg)
                  .dump(2)
           << '\n';
    }

    const FrontReport rep = front_report(front);
    std::cout << "samples: " << S.samples.size() << "\n";
    std::cout << "front (" << rep.po << " points):\n";
    for (const auto& entry : front.entries)
        std::cout << "  c = " << fmt_rational(entry.measures.correctness)
                  << "  e = " << entry.measures.explainability << "/100\n";
    std::printf("PO = %d  TNP = %d  solve time min/median/max = %.3fs / %.3fs / %.3fs\n", rep.po,
                rep.tnp, rep.minSeconds, rep.medianSeconds, rep.maxSeconds);
    std::cout << "wrote " << outDir << "/front.json, trace.jsonl, samples.csv, "
              << front.entries.size() << " diagram files\n";
    return kExitOk;
}

int cmd_synth(const std::string& configPath, const std::string& samplesPath, std::int64_t m,
              std::uint64_t seed, double delta, double epsilon, const std::string& solverFlag,
              int eLow, int eHigh, const std::string& outPath) {
    if (eLow < grid::kMin || eHigh > grid::kMax)
        throw CLI::ValidationError("--e-low/--e-high must lie in 0..100");
    const EngineConfig cfg = load_config(configPath);
    const SampleSet S = obtain_samples(cfg, samplesPath, m, seed, delta, epsilon);
    const auto result = quint_synt(cfg.spec, S, eLow, eHigh, backend_from(solverFlag));
    if (!result) {
        std::cout << "no interpretation with explainability in [" << eLow << ", " << eHigh
                  << "]\n";
        return kExitNoInterpretation;
    }
    std::cout << "c = " << fmt_rational(result->measures.correctness)
              << "  e = " << result->measures.explainability << "/100\n";
    const DecisionDiagram pruned = prune_unreachable(result->diagram, cfg.spec.nodeBound);
    if (!outPath.empty()) {
        std::ofstream os(outPath);
        os << diagram_to_json(pruned, cfg).dump(2) << '\n';
        std::cout << "wrote " << outPath << "\n";
    } else {
        write_dot(std::cout, pruned, cfg.spec);
    }
    return kExitOk;
}

int cmd_eval(const std::string& diagramPath, const std::string& samplesPath) {
    std::ifstream is(diagramPath);
    if (!is) throw config_error("cannot open diagram file: " + diagramPath);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw config_error("diagram " + diagramPath + ": " + e.what());
    }
    const EngineConfig cfg = class_from_json(j.at("class"));
    const DecisionDiagram d = diagram_nodes_from_json(j.at("nodes"));
    if (const auto violations = validate_diagram(d, cfg.spec); !violations.empty())
        throw config_error("diagram " + diagramPath + ": " + violations.front());
    const SampleSet S = read_samples_csv(samplesPath, cfg.spec.labels, cfg.oracle.labeler);
    const MeasurePair mp = measures_of(d, cfg.spec, S);
    std::cout << "c = " << fmt_rational(mp.correctness) << "  e = " << mp.explainability
              << "/100\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pareto-optimal decision-diagram interpretations of black-box classifiers"};
    app.require_subcommand(1);

    std::string configPath, samplesPath, solverFlag = "builtin", outDir = "out",
                orderFlag = "lifo", diagramPath, outPath;
    std::int64_t m = 0;
    std::uint64_t seed = 1;
    double delta = 0.05, epsilon = 0.05;
    bool agnostic = false;
    int eLow = 0, eHigh = 100;

    auto* sampleSize = app.add_subcommand("sample-size", "PAC sample-size bound for a config");
    sampleSize->add_option("--config", configPath, "class/oracle config JSON")->required();
    sampleSize->add_option("--delta", delta, "confidence parameter in (0,1)");
    sampleSize->add_option("--epsilon", epsilon, "accuracy parameter in (0,1)");
    sampleSize->add_flag("--agnostic", agnostic, "agnostic bound instead of realizable");

    auto addSampleOpts = [&](CLI::App* c) {
        c->add_option("--config", configPath, "class/oracle config JSON")->required();
        c->add_option("--samples", samplesPath, "sample CSV (skips the oracle)");
        c->add_option("--m", m, "sample count (default: PAC realizable bound)");
        c->add_option("--seed", seed, "RNG seed for oracle sampling");
        c->add_option("--delta", delta, "PAC delta when --m is absent");
        c->add_option("--epsilon", epsilon, "PAC epsilon when --m is absent");
        c->add_option("--solver", solverFlag, "'builtin' or an external MaxSAT command");
    };

    auto* explore = app.add_subcommand("explore", "enumerate the full Pareto front");
    addSampleOpts(explore);
    explore->add_option("--out", outDir, "output directory");
    explore->add_option("--order", orderFlag, "worklist order: lifo|fifo")
        ->check(CLI::IsMember({"lifo", "fifo"}));

    auto* synth = app.add_subcommand("synth", "one Pareto-optimal solve on an e-interval");
    addSampleOpts(synth);
    synth->add_option("--e-low", eLow, "explainability lower bound, grid 0..100");
    synth->add_option("--e-high", eHigh, "explainability upper bound, grid 0..100");
    synth->add_option("--out", outPath, "write diagram JSON here (default: DOT to stdout)");

    auto* eval = app.add_subcommand("eval", "measures of a diagram on a sample CSV");
    eval->add_option("--diagram", diagramPath, "self-contained diagram JSON")->required();
    eval->add_option("--samples", samplesPath, "sample CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sampleSize->parsed()) return cmd_sample_size(configPath, delta, epsilon, agnostic);
        if (explore->parsed())
            return cmd_explore(configPath, samplesPath, m, seed, delta, epsilon, solverFlag,
                               outDir, orderFlag);
        if (synth->parsed())
            return cmd_synth(configPath, samplesPath, m, seed, delta, epsilon, solverFlag, eLow,
                             eHigh, outPath);
        if (eval->parsed()) return cmd_eval(diagramPath, samplesPath);
    } catch (const oracle_error& e) {
        std::cerr << "oracle error: " << e.what() << "\n";
        return kExitOracle;
    } catch (const solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const internal_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
