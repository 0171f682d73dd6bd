#include "mei/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mei {

GeneratedInstance parse_instance(std::istream& in) {
    long long lb = -1, budget = -1;
    int n = -1, m = -1, k = -1;
    std::vector<std::pair<VertexId, VertexId>> edges, pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "#") {
            std::string key;
            ls >> key;
            if (key == "lb") ls >> lb;
            if (key == "budget") ls >> budget;
            continue;
        }
        if (tag == "p") {
            if (!(ls >> n >> m >> k)) throw ParseError("bad header at line " + std::to_string(lineno));
            continue;
        }
        if (tag == "e" || tag == "f") {
            int u, v;
            if (!(ls >> u >> v)) throw ParseError("bad edge at line " + std::to_string(lineno));
            (tag == "e" ? edges : pairs).push_back({u, v});
            continue;
        }
        throw ParseError("unknown line tag '" + tag + "' at line " + std::to_string(lineno));
    }
    if (n < 0) throw ParseError("missing header");
    if (static_cast<int>(edges.size()) != m) throw ParseError("edge count mismatch");
    if (static_cast<int>(pairs.size()) != k) throw ParseError("pair count mismatch");
    GeneratedInstance inst{Multigraph::build(n, edges), InsertionSet{}, lb, budget};
    inst.pairs = InsertionSet::make(inst.graph, pairs);
    return inst;
}

void serialize_instance(std::ostream& out, const GeneratedInstance& inst) {
    if (inst.certified_lower_bound >= 0) out << "# lb " << inst.certified_lower_bound << "\n";
    if (inst.budget >= 0) out << "# budget " << inst.budget << "\n";
    out << "p " << inst.graph.vertex_count() << ' ' << inst.graph.edge_count() << ' '
        << inst.pairs.size() << "\n";
    for (const auto& e : inst.graph.edges()) out << "e " << e.u << ' ' << e.v << "\n";
    for (auto [u, v] : inst.pairs.pairs) out << "f " << u << ' ' << v << "\n";
}

GeneratedInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_instance(in);
}

void save_instance(const std::string& path, const GeneratedInstance& inst) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    serialize_instance(out, inst);
}

std::string report_to_json(const MeiReport& rep, const Multigraph& g, bool dump_embedding,
                           double wall_ms, bool with_timing) {
    nlohmann::ordered_json j;
    j["mode"] = rep.mode == Mode::Weak ? "weak" : "strong";
    j["vertices"] = g.vertex_count();
    j["edges"] = g.edge_count();
    j["k"] = rep.k;
    j["max_degree"] = rep.delta;
    j["ins_sigma"] = rep.ins_sigma;
    j["crossings_with_graph"] = rep.crossings_with_graph;
    j["crossings_between_inserted"] = rep.crossings_between_inserted;
    j["total"] = rep.total;
    j["guarantee_weak"] = rep.guarantee_weak;
    j["guarantee_strong"] = rep.guarantee_strong;
    j["cr_multiplier"] = rep.cr_multiplier;
    j["cr_additive"] = rep.cr_additive;
    j["single_insertions"] = rep.single_values;
    nlohmann::ordered_json walks = nlohmann::ordered_json::array();
    for (const auto& w : rep.walks) {
        nlohmann::ordered_json jw;
        jw["source"] = w.source;
        jw["target"] = w.target;
        jw["length"] = w.length();
        jw["crossed_edges"] = w.crossed_edges;
        walks.push_back(jw);
    }
    j["walks"] = walks;
    if (dump_embedding) j["rotation_system"] = rep.rotation_dump;
    if (with_timing) j["wall_time_ms"] = wall_ms;
    return j.dump(2) + "\n";
}

std::string dump_preference(const NodePreference& p) {
    std::ostringstream os;
    if (p.is_void()) return "void";
    os << p.node << ": peers=(" << p.peer1 << "," << p.peer2 << ")";
    os << " label=" << (p.switching ? "SWITCHING" : "NONSWITCHING");
    os << " faces=[";
    if (p.face1 >= 0) os << p.face1;
    os << ",";
    if (p.face2 >= 0) os << p.face2;
    os << "]";
    return os.str();
}

} // namespace mei
