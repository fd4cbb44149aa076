#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "paretodd/model.hpp"

namespace paretodd {

struct oracle_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// PAC sample sizes
// ---------------------------------------------------------------------------

struct PacParams {
    double delta = 0.05;
    double epsilon = 0.05;
    bool realizable = true;
    std::uint64_t classSize = 0;
};

// Realizable: ceil(ln(|E|/delta)/eps); agnostic: ceil(2 ln(2|E|/delta)/eps^2).
inline std::int64_t pac_sample_size(const PacParams& p) {
    if (p.classSize == 0) throw input_error("pac_sample_size: class size must be positive");
    if (!(p.delta > 0.0 && p.delta < 1.0) || !(p.epsilon > 0.0 && p.epsilon < 1.0))
        throw input_error("pac_sample_size: delta and epsilon must lie in (0,1)");
    const long double lnE = std::log(static_cast<long double>(p.classSize));
    long double m;
    if (p.realizable)
        m = (lnE - std::log(static_cast<long double>(p.delta))) / p.epsilon;
    else
        m = 2.0L * (std::log(2.0L) + lnE - std::log(static_cast<long double>(p.delta))) /
            (static_cast<long double>(p.epsilon) * p.epsilon);
    return static_cast<std::int64_t>(std::ceil(m));
}

// Product over slots of |P| * (slots-after + |L|)^cmax: an over-count of the
// syntactic diagrams, which only ever enlarges the PAC sample size.
// Saturates at UINT64_MAX.
inline std::uint64_t class_size_upper_bound(const InterpretationClassSpec& spec) {
    const unsigned __int128 cap = ~std::uint64_t{0};
    unsigned __int128 total = 1;
    const int n = spec.nodeBound;
    const std::uint64_t numP = spec.predicates.size();
    for (int i = 1; i <= n; ++i) {
        unsigned __int128 targets = static_cast<std::uint64_t>(n - i) + spec.labels.size();
        unsigned __int128 perNode = numP;
        for (int c = 0; c < spec.cmax(); ++c) {
            perNode *= targets;
            if (perNode > cap) return ~std::uint64_t{0};
        }
        total *= perNode;
        if (total > cap) return ~std::uint64_t{0};
    }
    return static_cast<std::uint64_t>(total);
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

struct DomainDim {
    struct Range { double lo, hi; };
    struct Choice { std::vector<double> values; };
    std::variant<Range, Choice> kind;
};

// Maps a raw oracle output token to a label.
struct LabelerSpec {
    enum class Kind { index, map };
    Kind kind = Kind::index;
    std::map<std::string, Label> tokenMap;      // kind == map
    std::optional<Label> defaultLabel;          // kind == map

    Label apply(const std::string& token, const std::vector<Label>& labels) const {
        if (kind == Kind::index) {
            const double v = std::strtod(token.c_str(), nullptr);
            const long idx = std::lround(v);
            if (idx < 0 || static_cast<std::size_t>(idx) >= labels.size())
                throw oracle_error("labeler: output '" + token + "' is not a label index");
            return labels[static_cast<std::size_t>(idx)];
        }
        const auto it = tokenMap.find(token);
        if (it != tokenMap.end()) return it->second;
        if (defaultLabel) return *defaultLabel;
        throw oracle_error("labeler: unmapped output token '" + token + "'");
    }
};

struct OracleSpec {
    struct Dataset { std::string path; };
    struct Subprocess { std::string command; };
    struct Builtin { std::string name; };
    std::variant<Dataset, Subprocess, Builtin> kind;
    LabelerSpec labeler;
    std::vector<DomainDim> inputDomain;
};

// Deterministic RNG with explicit scaling, so fixed seeds are
// bit-reproducible regardless of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(g_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(g_() % n); }

private:
    std::mt19937_64 g_;
};

// Scripted stand-ins for the trained black boxes; query access only.
inline const std::map<std::string, std::function<double(const std::vector<double>&)>>&
builtin_models() {
    static const std::map<std::string, std::function<double(const std::vector<double>&)>> models =
        {
            {"const0", [](const std::vector<double>&) { return 0.0; }},
            // (time, clouds, position) -> alert decision for trusting a
            // runway-tracking perception module
            {"airplane",
             [](const std::vector<double>& in) {
                 const double t = in[0], clouds = in[1], pos = std::abs(in[2]);
                 if (pos >= 2.5) return 1.0;
                 if (pos < 0.5) return 0.0;
                 const bool morning = t >= 8.0 && t < 12.0;
                 if (!morning) return 1.0;
                 if (clouds >= 4.0) return 1.0;
                 return 0.0;
             }},
            // (age, income, credit, dependents) -> loan approval
            {"bankloan",
             [](const std::vector<double>& in) {
                 const double age = in[0], income = in[1];
                 if (age < 30.0) return 0.0;
                 if (age < 50.0 && income < 6000.0) return 0.0;
                 return 1.0;
             }},
            // (unit-clause fraction, avg clause length) -> solvability
            {"prover",
             [](const std::vector<double>& in) {
                 const double f1 = in[0], f10 = in[1];
                 if (f10 >= 3.0) return 0.0;
                 if (f1 >= 0.5) return 1.0;
                 if (f1 >= 0.25 && f10 < 2.0) return 1.0;
                 return 0.0;
             }},
        };
    return models;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw oracle_error("cannot open CSV file: " + path);
    CsvTable t;
    std::string line;
    if (std::getline(is, line)) t.header = detail::split_csv_line(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        t.rows.push_back(detail::split_csv_line(line));
    }
    return t;
}

// Line-oriented child process: one comma-separated input vector per query
// on stdin, one raw output token per answer line on stdout.
class SubprocessOracle {
public:
    explicit SubprocessOracle(const std::string& command) {
        int toChild[2], fromChild[2];
        if (::pipe(toChild) != 0 || ::pipe(fromChild) != 0)
            throw oracle_error("cannot create oracle pipes");
        pid_ = ::fork();
        if (pid_ < 0) throw oracle_error("cannot fork oracle process");
        if (pid_ == 0) {
            ::dup2(toChild[0], 0);
            ::dup2(fromChild[1], 1);
            ::close(toChild[0]); ::close(toChild[1]);
            ::close(fromChild[0]); ::close(fromChild[1]);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            std::_Exit(127);
        }
        ::close(toChild[0]);
        ::close(fromChild[1]);
        in_ = ::fdopen(toChild[1], "w");
        out_ = ::fdopen(fromChild[0], "r");
        if (!in_ || !out_) throw oracle_error("cannot open oracle streams");
    }

    ~SubprocessOracle() {
        if (in_) ::fclose(in_);
        if (out_) ::fclose(out_);
        if (pid_ > 0) {
            int status = 0;
            ::waitpid(pid_, &status, 0);
        }
    }

    SubprocessOracle(const SubprocessOracle&) = delete;
    SubprocessOracle& operator=(const SubprocessOracle&) = delete;

    std::string query(const std::vector<double>& input) {
        std::ostringstream line;
        for (std::size_t i = 0; i < input.size(); ++i) {
            if (i) line << ',';
            line << input[i];
        }
        line << '\n';
        const std::string s = line.str();
        if (std::fwrite(s.data(), 1, s.size(), in_) != s.size() || std::fflush(in_) != 0)
            throw oracle_error("oracle query failed on input: " + s);
        char buf[512];
        if (!std::fgets(buf, sizeof buf, out_))
            throw oracle_error("oracle gave no answer for input: " + s);
        std::string answer(buf);
        while (!answer.empty() && (answer.back() == '\n' || answer.back() == '\r'))
            answer.pop_back();
        return answer;
    }

    // Waits for the child; nonzero exit is an oracle error.
    void finish() {
        if (in_) { ::fclose(in_); in_ = nullptr; }
        if (out_) { ::fclose(out_); out_ = nullptr; }
        if (pid_ > 0) {
            int status = 0;
            ::waitpid(pid_, &status, 0);
            pid_ = -1;
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
                throw oracle_error("oracle process exited abnormally");
        }
    }

private:
    pid_t pid_ = -1;
    std::FILE* in_ = nullptr;
    std::FILE* out_ = nullptr;
};

inline std::vector<double> sample_input(const std::vector<DomainDim>& domain, Rng& rng) {
    std::vector<double> input;
    input.reserve(domain.size());
    for (const auto& dim : domain) {
        if (const auto* r = std::get_if<DomainDim::Range>(&dim.kind))
            input.push_back(rng.uniform(r->lo, r->hi));
        else {
            const auto& c = std::get<DomainDim::Choice>(dim.kind);
            if (c.values.empty()) throw input_error("input domain: empty choice set");
            input.push_back(c.values[rng.index(c.values.size())]);
        }
    }
    return input;
}

// m i.i.d. samples: inputs uniform over the declared domain (dataset
// oracles sample file rows with replacement), labels via oracle + labeler,
// unit correctness weights. Deterministic under a fixed seed.
inline SampleSet draw_samples(const OracleSpec& spec, const std::vector<Label>& labels,
                              std::int64_t m, std::uint64_t seed) {
    if (m < 1) throw input_error("draw_samples: need m >= 1");
    Rng rng(seed);
    SampleSet out;
    out.samples.reserve(static_cast<std::size_t>(m));

    auto push = [&](std::vector<double> input, const std::string& token) {
        Sample s;
        s.input = std::move(input);
        s.label = spec.labeler.apply(token, labels);
        s.weight = 1;
        out.samples.push_back(std::move(s));
    };

    if (const auto* d = std::get_if<OracleSpec::Dataset>(&spec.kind)) {
        const CsvTable table = read_csv(d->path);
        if (table.rows.empty()) throw oracle_error("dataset oracle: no rows in " + d->path);
        for (std::int64_t k = 0; k < m; ++k) {
            const auto& row = table.rows[rng.index(table.rows.size())];
            if (row.size() < 2) throw oracle_error("dataset oracle: row with fewer than 2 columns");
            std::vector<double> input;
            for (std::size_t i = 0; i + 1 < row.size(); ++i)
                input.push_back(std::strtod(row[i].c_str(), nullptr));
            push(std::move(input), row.back());
        }
        return out;
    }
    if (const auto* s = std::get_if<OracleSpec::Subprocess>(&spec.kind)) {
        SubprocessOracle proc(s->command);
        for (std::int64_t k = 0; k < m; ++k) {
            std::vector<double> input = sample_input(spec.inputDomain, rng);
            const std::string token = proc.query(input);
            push(std::move(input), token);
        }
        proc.finish();
        return out;
    }
    const auto& b = std::get<OracleSpec::Builtin>(spec.kind);
    const auto& models = builtin_models();
    const auto it = models.find(b.name);
    if (it == models.end()) throw oracle_error("unknown builtin model: " + b.name);
    for (std::int64_t k = 0; k < m; ++k) {
        std::vector<double> input = sample_input(spec.inputDomain, rng);
        char token[64];
        std::snprintf(token, sizeof token, "%g", it->second(input));
        push(std::move(input), token);
    }
    return out;
}

}  // namespace paretodd
