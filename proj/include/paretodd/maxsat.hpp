#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "paretodd/circuits.hpp"
#include "paretodd/cnf.hpp"
#include "paretodd/sat.hpp"

namespace paretodd {

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveOutcome {
    enum class Status { optimal, unsatisfiable_hard };
    Status status = Status::unsatisfiable_hard;
    Assignment model;          // indexed by variable, 1-based; valid when optimal
    std::int64_t optimum = 0;  // satisfied soft weight
};

// Exact clause-by-clause evaluation of a full assignment.
inline std::pair<bool, std::int64_t> check_model(const WcnfInstance& inst,
                                                 const Assignment& model) {
    bool hardOk = true;
    for (const auto& c : inst.hard)
        if (!clause_satisfied(c, model)) { hardOk = false; break; }
    std::int64_t soft = 0;
    for (const auto& s : inst.soft)
        if (clause_satisfied({s.lit}, model)) soft += s.weight;
    return {hardOk, soft};
}

inline std::int64_t satisfied_soft_weight(const WcnfInstance& inst, const Assignment& model,
                                          SoftFamily family) {
    std::int64_t w = 0;
    for (const auto& s : inst.soft)
        if (s.family == family && clause_satisfied({s.lit}, model)) w += s.weight;
    return w;
}

// SAT-based linear search on the satisfied soft weight. The falsified-soft
// cost is tracked by a generalized totalizer ladder built once into a single
// solver; each improved model tightens the bound by asserting one more unit
// clause, so all learnt clauses carry over until the bound is unsatisfiable.
inline SolveOutcome solve(const WcnfInstance& inst) {
    SolveOutcome out;
    SatSolver s(inst.numVars);
    for (const auto& c : inst.hard) s.add_clause(c);
    if (s.solve() == SatSolver::Result::unsat) return out;
    out.status = SolveOutcome::Status::optimal;
    out.model = s.model();
    out.model.resize(static_cast<std::size_t>(inst.numVars) + 1);
    out.optimum = check_model(inst, out.model).second;
    const std::int64_t total = inst.soft_total();
    if (out.optimum >= total) return out;

    // Totalizer outputs: sorted (sum, literal) pairs where the literal is
    // implied true whenever the falsified-soft weight reaches the sum, capped
    // at the loosest cost bound this search will ever assert.
    const std::int64_t cap = total - out.optimum;
    int nextVar = inst.numVars;
    using Outs = std::vector<std::pair<std::int64_t, Lit>>;
    const auto merge = [&](const Outs& a, const Outs& b) {
        std::map<std::int64_t, Lit> outs;
        const auto lit_for = [&](std::int64_t sum) {
            auto it = outs.find(sum);
            if (it == outs.end()) it = outs.emplace(sum, ++nextVar).first;
            return it->second;
        };
        for (const auto& [sa, la] : a) s.add_clause({-la, lit_for(sa)});
        for (const auto& [sb, lb] : b) s.add_clause({-lb, lit_for(sb)});
        for (const auto& [sa, la] : a)
            for (const auto& [sb, lb] : b)
                s.add_clause({-la, -lb, lit_for(std::min(sa + sb, cap))});
        Outs r(outs.begin(), outs.end());
        // reaching a higher sum implies every lower output
        for (std::size_t i = 1; i < r.size(); ++i)
            s.add_clause({-r[i].second, r[i - 1].second});
        return r;
    };
    std::vector<Outs> level;
    for (const auto& sc : inst.soft)
        level.push_back({{std::min<std::int64_t>(sc.weight, cap), -sc.lit}});
    while (level.size() > 1) {
        std::vector<Outs> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2)
            next.push_back(merge(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
        level.swap(next);
    }
    const Outs& root = level.front();

    while (out.optimum < total) {
        // forbid a falsified-soft cost of total - optimum or more
        const std::int64_t k = total - out.optimum;
        const auto it = std::lower_bound(
            root.begin(), root.end(), k,
            [](const std::pair<std::int64_t, Lit>& p, std::int64_t v) { return p.first < v; });
        if (it == root.end())
            throw solver_error("internal MaxSAT search lost its bound ladder");
        s.add_clause({-it->second});
        if (s.solve() == SatSolver::Result::unsat) break;
        Assignment m = s.model();
        m.resize(static_cast<std::size_t>(inst.numVars) + 1);
        const auto [hardOk, soft] = check_model(inst, m);
        if (!hardOk || soft <= out.optimum)
            throw solver_error("internal MaxSAT search produced an invalid model");
        out.model = std::move(m);
        out.optimum = soft;
    }
    return out;
}

// Bridge to an external MaxSAT solver speaking the standard evaluation
// output ("s ...", "o <cost>", "v <literals>"). The returned model is
// always re-verified and the optimum recomputed from it.
inline SolveOutcome solve_external(const WcnfInstance& inst, const std::string& solverCommand) {
    char path[] = "/tmp/paretodd-XXXXXX.wcnf";
    const int fd = mkstemps(path, 5);
    if (fd < 0) throw solver_error("cannot create temporary WCNF file");
    {
        std::ofstream os(path);
        inst.write_wcnf(os);
    }
    ::close(fd);
    const std::string cmd = solverCommand + " " + path + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        ::unlink(path);
        throw solver_error("cannot launch external solver: " + solverCommand);
    }
    std::string output;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    const int rc = ::pclose(pipe);
    ::unlink(path);

    std::string status;
    std::vector<std::string> valueTokens;
    std::int64_t reportedCost = -1;
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.size() < 2) continue;
        if (line[0] == 's' && line[1] == ' ') status = line.substr(2);
        if (line[0] == 'o' && line[1] == ' ')
            reportedCost = std::strtoll(line.c_str() + 2, nullptr, 10);
        if (line[0] == 'v' && line[1] == ' ') {
            std::istringstream toks(line.substr(2));
            std::string t;
            while (toks >> t) valueTokens.push_back(t);
        }
    }
    if (status.find("UNSATISFIABLE") != std::string::npos) return SolveOutcome{};
    if (status.find("OPTIMUM FOUND") == std::string::npos)
        throw solver_error("external solver did not report an optimum (exit " +
                           std::to_string(rc) + "): " + status);

    Assignment model(static_cast<std::size_t>(inst.numVars) + 1, false);
    if (valueTokens.size() == 1 && valueTokens[0].find_first_not_of("01") == std::string::npos &&
        valueTokens[0].size() >= static_cast<std::size_t>(inst.numVars)) {
        for (int v = 1; v <= inst.numVars; ++v)
            model[static_cast<std::size_t>(v)] = valueTokens[0][static_cast<std::size_t>(v - 1)] == '1';
    } else {
        for (const auto& t : valueTokens) {
            const long l = std::strtol(t.c_str(), nullptr, 10);
            if (l == 0) continue;
            const int v = static_cast<int>(l > 0 ? l : -l);
            if (v <= inst.numVars) model[static_cast<std::size_t>(v)] = l > 0;
        }
    }
    const auto [hardOk, soft] = check_model(inst, model);
    if (!hardOk) throw solver_error("external solver model violates hard clauses");
    // reported cost counts unsatisfied soft weight; it must agree with the model
    if (reportedCost >= 0 && inst.soft_total() - reportedCost != soft)
        throw solver_error("external solver cost disagrees with its model");
    SolveOutcome out;
    out.status = SolveOutcome::Status::optimal;
    out.model = std::move(model);
    out.optimum = soft;
    return out;
}

}  // namespace paretodd
