// Command line interface: solve, oracle, gen, bench.

#include <CLI11.hpp>

#include "mei/io.hpp"
#include "mei/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

using namespace mei;

namespace {

int cmd_solve(const std::string& input, const std::string& mode_str, const std::string& out_path,
              bool dump_embedding, const std::string& planarize_path, bool with_timing) {
    GeneratedInstance inst{Multigraph{}, InsertionSet{}, -1, -1};
    try {
        inst = load_instance(input);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    Mode mode = mode_str == "weak" ? Mode::Weak : Mode::Strong;
    try {
        auto t0 = std::chrono::steady_clock::now();
        MeiReport rep = run_mei(inst.graph, inst.pairs, mode);
        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        std::string json = report_to_json(rep, inst.graph, dump_embedding, ms, with_timing);
        if (out_path.empty() || out_path == "-") {
            std::cout << json;
        } else {
            std::ofstream out(out_path);
            out << json;
        }
        if (!planarize_path.empty()) {
            ConTree con = ConTree::build(inst.graph);
            EmbedBase base(inst.graph, con);
            // rebuild the embedding from the report's rotation dump
            PlaneEmbedding g0 = PlaneEmbedding::from_rotations(inst.graph, rep.rotation_dump);
            auto pl = planarize(g0, rep.walks);
            GeneratedInstance pinst{std::move(pl.graph), InsertionSet{}, -1, -1};
            save_instance(planarize_path, pinst);
        }
        return 0;
    } catch (const NotPlanarError& e) {
        std::cerr << e.what() << " (input graph admits no plane embedding)\n";
        return 2;
    } catch (const DisconnectedError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

int cmd_oracle(const std::string& input, long long cap) {
    GeneratedInstance inst{Multigraph{}, InsertionSet{}, -1, -1};
    try {
        inst = load_instance(input);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    try {
        nlohmann::ordered_json j;
        std::vector<int> singles;
        for (auto [a, b] : inst.pairs.pairs) singles.push_back(exact_ins_single(inst.graph, a, b, cap));
        j["exact_single_insertions"] = singles;
        j["exact_ins_prime"] =
            inst.pairs.size() == 0 ? 0 : exact_ins_prime(inst.graph, inst.pairs, cap);
        std::cout << j.dump(2) << "\n";
        return 0;
    } catch (const TooManyEmbeddingsError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const NotPlanarError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DisconnectedError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

Multigraph make_grid(int target_vertices, std::vector<std::pair<VertexId, VertexId>>* edges_out) {
    int side = 1;
    while (side * side < target_vertices) ++side;
    auto id = [&](int x, int y) { return y * side + x; };
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            if (x + 1 < side) edges.push_back({id(x, y), id(x + 1, y)});
            if (y + 1 < side) edges.push_back({id(x, y), id(x, y + 1)});
        }
    if (edges_out) *edges_out = edges;
    return Multigraph::build(side * side, edges);
}

int cmd_bench(const std::vector<int>& sizes, int k, int repeats, std::uint64_t seed) {
    std::cout << "size\tvertices\tmedian_ms\tratio\n";
    double prev = -1;
    for (int size : sizes) {
        Multigraph g = make_grid(size, nullptr);
        std::mt19937_64 rng(seed);
        std::vector<std::pair<VertexId, VertexId>> pairs;
        while (static_cast<int>(pairs.size()) < k) {
            VertexId a = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(g.vertex_count()));
            VertexId b = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(g.vertex_count()));
            if (a == b || g.has_edge_between(a, b)) continue;
            pairs.push_back({a, b});
        }
        InsertionSet F = InsertionSet::make(g, pairs);
        std::vector<double> times;
        long long total = -1;
        for (int rep = 0; rep < repeats; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            MeiReport r = run_mei(g, F, Mode::Strong);
            auto t1 = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            total = r.total;
        }
        std::sort(times.begin(), times.end());
        double med = times[times.size() / 2];
        std::cout << size << "\t" << g.vertex_count() << "\t" << med << "\t";
        if (prev > 0)
            std::cout << med / prev;
        else
            std::cout << "-";
        std::cout << "\t(total=" << total << ")\n";
        prev = med;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximate multiple edge insertion for connected planar multigraphs"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "run the insertion algorithm on an instance file");
    std::string input, out_path, mode_str = "strong", planarize_path;
    bool dump_embedding = false, with_timing = false;
    solve->add_option("--input", input, "instance file")->required();
    solve->add_option("--mode", mode_str, "weak|strong")
        ->check(CLI::IsMember({"weak", "strong"}));
    solve->add_option("--out", out_path, "report path (default stdout)");
    solve->add_flag("--dump-embedding", dump_embedding, "include the rotation system");
    solve->add_option("--planarize", planarize_path, "write the planarized graph here");
    solve->add_flag("--timing", with_timing, "include wall time in the report");

    auto* oracle = app.add_subcommand("oracle", "exact values by embedding enumeration");
    std::string oracle_input;
    long long cap = 100000;
    oracle->add_option("--input", oracle_input, "instance file")->required();
    oracle->add_option("--cap", cap, "embedding enumeration cap");

    auto* gen = app.add_subcommand("gen", "generate an instance");
    std::string family, gen_out;
    int r = 1, l = 2, m = 2, delta = 4, n = 100, extra_k = 4, zn = 3, zl = 0;
    std::uint64_t seed = 1;
    std::vector<std::string> zedges;
    gen->add_option("--family", family, "I|II|III|ziegler|random")->required();
    gen->add_option("--r", r, "construction I scale");
    gen->add_option("--l", l, "construction II face half-length");
    gen->add_option("--m", m, "construction III pair count (power of two)");
    gen->add_option("--delta", delta, "construction III degree bound (multiple of 4)");
    gen->add_option("--n", n, "random: vertex count");
    gen->add_option("--k", extra_k, "random: insertion pair count");
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--zn", zn, "ziegler: path length n");
    gen->add_option("--zl", zl, "ziegler: crossing budget");
    gen->add_option("--zedge", zedges, "ziegler: H edge as u,v (repeatable)");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    auto* bench = app.add_subcommand("bench", "runtime scaling on grid-like graphs");
    std::string bench_family = "grid";
    std::vector<int> sizes;
    int bk = 8, repeats = 3;
    std::uint64_t bseed = 7;
    bench->add_option("--family", bench_family, "grid")->check(CLI::IsMember({"grid"}));
    bench->add_option("--sizes", sizes, "vertex counts")->delimiter(',');
    bench->add_option("--k", bk, "insertion pairs");
    bench->add_option("--repeats", repeats, "repetitions per size");
    bench->add_option("--seed", bseed, "seed for the pairs");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed())
        return cmd_solve(input, mode_str, out_path, dump_embedding, planarize_path, with_timing);
    if (oracle->parsed()) return cmd_oracle(oracle_input, cap);
    if (gen->parsed()) {
        try {
            GeneratedInstance inst{Multigraph{}, InsertionSet{}, -1, -1};
            if (family == "I") {
                inst = gen_construction_I(r);
            } else if (family == "II") {
                inst = gen_construction_II(l);
            } else if (family == "III") {
                inst = gen_construction_III(m, delta);
            } else if (family == "ziegler") {
                std::vector<std::pair<int, int>> he;
                for (const auto& s : zedges) {
                    auto comma = s.find(',');
                    if (comma == std::string::npos) throw BadParamsError("--zedge needs u,v");
                    he.push_back({std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))});
                }
                inst = gen_ziegler(he, zn, zl);
            } else if (family == "random") {
                inst = gen_random_planar(n, extra_k, seed);
            } else {
                std::cerr << "unknown family " << family << "\n";
                return 1;
            }
            if (gen_out.empty() || gen_out == "-")
                serialize_instance(std::cout, inst);
            else
                save_instance(gen_out, inst);
            return 0;
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return 1;
        }
    }
    if (bench->parsed()) return cmd_bench(sizes, bk, repeats, bseed);
    return 1;
}
