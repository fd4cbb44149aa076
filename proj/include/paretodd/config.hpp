#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "paretodd/explorer.hpp"
#include "paretodd/model.hpp"
#include "paretodd/oracle.hpp"

namespace paretodd {

using json = nlohmann::ordered_json;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EngineConfig {
    InterpretationClassSpec spec;
    OracleSpec oracle;
    std::vector<std::string> inputNames;
};

// ---------------------------------------------------------------------------
// Config pieces
// ---------------------------------------------------------------------------

inline FeatureSpec feature_from_json(const json& j) {
    FeatureSpec f;
    const std::string kind = j.at("kind");
    if (kind == "projection")
        f.kind = FeatureSpec::Projection{j.at("column").get<int>()};
    else if (kind == "abs_projection")
        f.kind = FeatureSpec::AbsProjection{j.at("column").get<int>()};
    else if (kind == "affine")
        f.kind = FeatureSpec::Affine{j.at("coefficients").get<std::vector<double>>(),
                                     j.value("offset", 0.0)};
    else
        throw config_error("unknown feature kind: " + kind);
    return f;
}

inline json feature_to_json(const FeatureSpec& f) {
    json j;
    if (const auto* p = std::get_if<FeatureSpec::Projection>(&f.kind)) {
        j["kind"] = "projection";
        j["column"] = p->column;
    } else if (const auto* p = std::get_if<FeatureSpec::AbsProjection>(&f.kind)) {
        j["kind"] = "abs_projection";
        j["column"] = p->column;
    } else {
        const auto& a = std::get<FeatureSpec::Affine>(f.kind);
        j["kind"] = "affine";
        j["coefficients"] = a.coefficients;
        j["offset"] = a.offset;
    }
    return j;
}

inline BranchingSpec branching_from_json(const json& j) {
    BranchingSpec b;
    const std::string kind = j.at("kind");
    if (kind == "thresholds") {
        b.kind = BranchingSpec::Thresholds{j.at("cuts").get<std::vector<double>>()};
    } else if (kind == "categorical") {
        BranchingSpec::Categorical c;
        for (const auto& [key, val] : j.at("map").items())
            c.branches[std::stoll(key)] = val.get<int>();
        c.defaultBranch = j.value("default", 0);
        b.kind = std::move(c);
    } else {
        throw config_error("unknown branching kind: " + kind);
    }
    return b;
}

inline json branching_to_json(const BranchingSpec& b) {
    json j;
    if (const auto* t = std::get_if<BranchingSpec::Thresholds>(&b.kind)) {
        j["kind"] = "thresholds";
        j["cuts"] = t->cuts;
    } else {
        const auto& c = std::get<BranchingSpec::Categorical>(b.kind);
        j["kind"] = "categorical";
        json m = json::object();
        for (const auto& [v, br] : c.branches) m[std::to_string(v)] = br;
        j["map"] = std::move(m);
        j["default"] = c.defaultBranch;
    }
    return j;
}

inline LabelerSpec labeler_from_json(const json& j) {
    LabelerSpec l;
    const std::string kind = j.value("kind", "index");
    if (kind == "index") {
        l.kind = LabelerSpec::Kind::index;
    } else if (kind == "map") {
        l.kind = LabelerSpec::Kind::map;
        for (const auto& [key, val] : j.at("map").items())
            l.tokenMap[key] = val.get<std::string>();
        if (j.contains("default")) l.defaultLabel = j.at("default").get<std::string>();
    } else {
        throw config_error("unknown labeler kind: " + kind);
    }
    return l;
}

inline json labeler_to_json(const LabelerSpec& l) {
    json j;
    if (l.kind == LabelerSpec::Kind::index) {
        j["kind"] = "index";
    } else {
        j["kind"] = "map";
        json m = json::object();
        for (const auto& [k, v] : l.tokenMap) m[k] = v;
        j["map"] = std::move(m);
        if (l.defaultLabel) j["default"] = *l.defaultLabel;
    }
    return j;
}

inline std::vector<DomainDim> domain_from_json(const json& inputs) {
    std::vector<DomainDim> out;
    for (const auto& j : inputs) {
        DomainDim d;
        const std::string kind = j.at("kind");
        if (kind == "range")
            d.kind = DomainDim::Range{j.at("min").get<double>(), j.at("max").get<double>()};
        else if (kind == "choice")
            d.kind = DomainDim::Choice{j.at("values").get<std::vector<double>>()};
        else
            throw config_error("unknown input kind: " + kind);
        out.push_back(std::move(d));
    }
    return out;
}

inline json domain_to_json(const std::vector<DomainDim>& domain,
                           const std::vector<std::string>& names) {
    json out = json::array();
    for (std::size_t i = 0; i < domain.size(); ++i) {
        json j;
        j["name"] = i < names.size() ? names[i] : "x" + std::to_string(i);
        if (const auto* r = std::get_if<DomainDim::Range>(&domain[i].kind)) {
            j["kind"] = "range";
            j["min"] = r->lo;
            j["max"] = r->hi;
        } else {
            j["kind"] = "choice";
            j["values"] = std::get<DomainDim::Choice>(domain[i].kind).values;
        }
        out.push_back(std::move(j));
    }
    return out;
}

inline EngineConfig config_from_json(const json& j) {
    EngineConfig cfg;
    const json& inputs = j.at("inputs");
    for (const auto& in : inputs) cfg.inputNames.push_back(in.value("name", ""));
    cfg.spec.inputDimension = static_cast<int>(inputs.size());
    cfg.spec.labels = j.at("labels").get<std::vector<Label>>();
    cfg.spec.nodeBound = j.at("nodeBound").get<int>();

    const json& weights = j.at("weights");
    const json& unused = weights.at("unusedNode");
    if (unused.is_array())
        cfg.spec.nodeUnusedWeight = unused.get<std::vector<int>>();
    else
        cfg.spec.nodeUnusedWeight.assign(static_cast<std::size_t>(cfg.spec.nodeBound),
                                         unused.get<int>());
    const json& predWeights = weights.at("predicates");
    for (const auto& pj : j.at("predicates")) {
        const std::string id = pj.at("id");
        if (!predWeights.contains(id))
            throw config_error("weights.predicates is missing predicate '" + id + "'");
        cfg.spec.predicates.push_back(Predicate::make(id, feature_from_json(pj.at("feature")),
                                                      branching_from_json(pj.at("branching")),
                                                      predWeights.at(id).get<int>()));
    }
    cfg.spec.validate();

    if (j.contains("oracle")) {
        const json& oj = j.at("oracle");
        const std::string kind = oj.at("kind");
        if (kind == "builtin")
            cfg.oracle.kind = OracleSpec::Builtin{oj.at("name").get<std::string>()};
        else if (kind == "subprocess")
            cfg.oracle.kind = OracleSpec::Subprocess{oj.at("command").get<std::string>()};
        else if (kind == "dataset")
            cfg.oracle.kind = OracleSpec::Dataset{oj.at("path").get<std::string>()};
        else
            throw config_error("unknown oracle kind: " + kind);
        cfg.oracle.labeler = labeler_from_json(j.value("labeler", json{{"kind", "index"}}));
        cfg.oracle.inputDomain = domain_from_json(inputs);
    }
    return cfg;
}

inline EngineConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file: " + path);
    json j;
    try {
        is >> j;
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw config_error("config " + path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Diagram JSON (self-contained: carries the class context it needs)
// ---------------------------------------------------------------------------

inline json diagram_nodes_to_json(const DecisionDiagram& d) {
    json nodes = json::array();
    for (const auto& node : d.nodes) {
        json nj;
        nj["predicate"] = node.predicate;
        json trans = json::array();
        for (const auto& t : node.transitions) {
            if (t.leaf)
                trans.push_back(json{{"leaf", t.label}});
            else
                trans.push_back(json{{"node", t.node}});
        }
        nj["transitions"] = std::move(trans);
        nodes.push_back(std::move(nj));
    }
    return nodes;
}

inline DecisionDiagram diagram_nodes_from_json(const json& nodes) {
    DecisionDiagram d;
    for (const auto& nj : nodes) {
        DiagramNode node;
        node.predicate = nj.at("predicate");
        for (const auto& tj : nj.at("transitions")) {
            if (tj.contains("leaf"))
                node.transitions.push_back(Target::to_leaf(tj.at("leaf").get<std::string>()));
            else
                node.transitions.push_back(Target::to_node(tj.at("node").get<int>()));
        }
        d.nodes.push_back(std::move(node));
    }
    return d;
}

inline json class_to_json(const EngineConfig& cfg) {
    json cj;
    cj["labels"] = cfg.spec.labels;
    cj["nodeBound"] = cfg.spec.nodeBound;
    cj["unusedNodeWeights"] = cfg.spec.nodeUnusedWeight;
    cj["inputDimension"] = cfg.spec.inputDimension;
    cj["inputNames"] = cfg.inputNames;
    json preds = json::array();
    for (const auto& p : cfg.spec.predicates) {
        json pj;
        pj["id"] = p.id;
        pj["feature"] = feature_to_json(p.feature);
        pj["branching"] = branching_to_json(p.branching);
        pj["weight"] = p.weight;
        preds.push_back(std::move(pj));
    }
    cj["predicates"] = std::move(preds);
    cj["labeler"] = labeler_to_json(cfg.oracle.labeler);
    return cj;
}

inline EngineConfig class_from_json(const json& cj) {
    EngineConfig cfg;
    cfg.spec.labels = cj.at("labels").get<std::vector<Label>>();
    cfg.spec.nodeBound = cj.at("nodeBound").get<int>();
    cfg.spec.nodeUnusedWeight = cj.at("unusedNodeWeights").get<std::vector<int>>();
    cfg.spec.inputDimension = cj.at("inputDimension").get<int>();
    cfg.inputNames = cj.value("inputNames", std::vector<std::string>{});
    for (const auto& pj : cj.at("predicates"))
        cfg.spec.predicates.push_back(
            Predicate::make(pj.at("id"), feature_from_json(pj.at("feature")),
                            branching_from_json(pj.at("branching")), pj.at("weight").get<int>()));
    if (cj.contains("labeler")) cfg.oracle.labeler = labeler_from_json(cj.at("labeler"));
    cfg.spec.validate();
    return cfg;
}

inline json diagram_to_json(const DecisionDiagram& d, const EngineConfig& cfg) {
    json j;
    j["class"] = class_to_json(cfg);
    j["nodes"] = diagram_nodes_to_json(d);
    return j;
}

// ---------------------------------------------------------------------------
// Measures, regions, fronts
// ---------------------------------------------------------------------------

inline json rational_to_json(const Rational& r) {
    return json{{"num", r.num}, {"den", r.den}};
}

inline json measures_to_json(const MeasurePair& m) {
    json j;
    j["correctness"] = rational_to_json(m.correctness);
    j["correctness_decimal"] = m.correctness.to_double();
    j["explainability_grid"] = m.explainability;
    j["explainability"] = m.explainability / 100.0;
    return j;
}

inline json region_to_json(const Region& r) {
    return json{{"e_low", r.eLow}, {"e_high", r.eHigh}, {"c_floor", rational_to_json(r.cFloor)}};
}

inline json front_to_json(const ParetoFront& front, const EngineConfig& cfg) {
    json j;
    j["summary"] = json{{"pareto_points", front.po()}, {"regions_explored", front.tnp()}};
    json entries = json::array();
    for (const auto& entry : front.entries) {
        json ej;
        ej["measures"] = measures_to_json(entry.measures);
        ej["region"] = region_to_json(entry.region);
        ej["diagram"] = diagram_nodes_to_json(prune_unreachable(entry.diagram, cfg.spec.nodeBound));
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    j["class"] = class_to_json(cfg);
    return j;
}

inline void write_trace_jsonl(std::ostream& os, const ParetoFront& front) {
    for (const auto& step : front.trace) {
        json j;
        j["region"] = region_to_json(step.region);
        j["outcome"] = step.outcome;
        if (step.measures) j["measures"] = measures_to_json(*step.measures);
        json pushed = json::array();
        for (const auto& r : step.pushed) pushed.push_back(region_to_json(r));
        j["pushed"] = std::move(pushed);
        j["seconds"] = step.seconds;
        os << j.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Sample CSV: feature columns as declared, final column the raw output
// ---------------------------------------------------------------------------

inline void write_samples_csv(std::ostream& os, const SampleSet& S,
                              const std::vector<std::string>& inputNames) {
    for (std::size_t i = 0; i < inputNames.size(); ++i) os << inputNames[i] << ',';
    os << "output\n";
    for (const auto& s : S.samples) {
        for (double v : s.input) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf << ',';
        }
        os << s.label << '\n';
    }
}

// The final column is mapped through the labeler; a token that already
// names a label is taken as-is, so our own CSV output round-trips.
inline SampleSet read_samples_csv(const std::string& path, const std::vector<Label>& labels,
                                  const LabelerSpec& labeler) {
    const CsvTable table = read_csv(path);
    SampleSet out;
    for (const auto& row : table.rows) {
        if (row.size() < 2) throw oracle_error("samples CSV: row with fewer than 2 columns");
        Sample s;
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            s.input.push_back(std::strtod(row[i].c_str(), nullptr));
        const std::string& token = row.back();
        if (std::find(labels.begin(), labels.end(), token) != labels.end())
            s.label = token;
        else
            s.label = labeler.apply(token, labels);
        s.weight = 1;
        out.samples.push_back(std::move(s));
    }
    return out;
}

}  // namespace paretodd
