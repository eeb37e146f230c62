#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "subcount/compiler.hpp"
#include "subcount/count.hpp"
#include "subcount/errors.hpp"
#include "subcount/graph.hpp"
#include "subcount/io.hpp"
#include "subcount/isub_index.hpp"
#include "subcount/oracle.hpp"
#include "subcount/pattern.hpp"
#include "subcount/stream_gen.hpp"

namespace {

using namespace subcount;

struct MismatchFailure {
    std::string message;
};

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

// Splits a query name into (registered pattern, count kind). An exact
// registered name is induced; otherwise `.sub` / `.hom` suffixes select the
// other two counts for their base pattern.
enum class CountKind { Induced, Sub, Hom };

std::pair<std::string, CountKind> resolve_query(
    const std::string& name, const std::vector<std::pair<std::string, Pattern>>& patterns) {
    auto registered = [&](const std::string& s) {
        return std::any_of(patterns.begin(), patterns.end(),
                           [&](const auto& np) { return np.first == s; });
    };
    if (registered(name)) return {name, CountKind::Induced};
    auto ends_with = [&](const char* suffix) {
        std::string_view sv(suffix);
        return name.size() > sv.size() && name.compare(name.size() - sv.size(), sv.size(), sv) == 0;
    };
    if (ends_with(".sub")) {
        std::string base = name.substr(0, name.size() - 4);
        if (registered(base)) return {base, CountKind::Sub};
    } else if (ends_with(".hom")) {
        std::string base = name.substr(0, name.size() - 4);
        if (registered(base)) return {base, CountKind::Hom};
    }
    throw GraphError("query names unregistered pattern: " + name);
}

Count oracle_count(const Pattern& p, const ColoredGraph& g, CountKind kind) {
    OracleLimits lim;
    switch (kind) {
    case CountKind::Sub: return sub_count(p, g, lim);
    case CountKind::Hom: return hom_count(p, g, lim);
    default: return isub_count(p, g, lim);
    }
}

Count index_count(const ISubIndex& idx, const std::string& base, CountKind kind) {
    switch (kind) {
    case CountKind::Sub: return idx.count_sub(base);
    case CountKind::Hom: return idx.count_hom(base);
    default: return idx.count_induced(base);
    }
}

void print_stats(const ISubIndex& idx) {
    const auto& aug = idx.cascade();
    std::cerr << "stats: engines=" << idx.engine_count()
              << " levels=" << aug.level_count() << "\n";
    for (int l = 0; l < aug.level_count(); ++l)
        std::cerr << "stats: level " << l << " cap=" << aug.level_cap(l)
                  << " max_in_degree=" << aug.level_max_in_degree(l) << "\n";
    auto w = idx.work();
    std::cerr << "stats: flips=" << w.flips << " fork_inserts=" << w.fork_inserts
              << " fork_deletes=" << w.fork_deletes << " enum_steps=" << w.enum_steps << "\n";
}

struct RunArgs {
    std::string graph_path, patterns_path, ops_path;
    std::string mode = "dynamic";
    std::uint64_t seed = 0x5eed;
    unsigned max_pattern_size = 5;
    bool strict = false;
    bool stats = false;
};

int cmd_run(const RunArgs& a) {
    auto gin = open_or_throw(a.graph_path);
    GraphFile gf = read_graph_file(gin);
    auto pin = open_or_throw(a.patterns_path);
    auto patterns = read_pattern_file(pin);
    auto oin = open_or_throw(a.ops_path);
    auto ops = read_op_script(oin);

    const bool dynamic = a.mode != "oracle";
    const bool oracle = a.mode != "dynamic";

    IndexOptions opts;
    opts.seed = a.seed;
    opts.strict = a.strict;
    opts.max_pattern_vertices = static_cast<std::uint8_t>(a.max_pattern_size);
    std::optional<ISubIndex> idx;
    if (dynamic) idx.emplace(gf.graph, patterns, gf.k, opts);
    ColoredGraph shadow = gf.graph;

    auto pattern_by_name = [&](const std::string& base) -> const Pattern& {
        for (const auto& [name, p] : patterns)
            if (name == base) return p;
        throw InternalError("resolved name disappeared: " + base);
    };

    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Op& op = ops[i];
        switch (op.kind) {
        case Op::Kind::AddEdge:
            if (op.c > gf.k)
                throw GraphError("op " + std::to_string(i) + ": color exceeds declared k");
            if (idx) idx->add_edge(op.u, op.v, op.c);
            if (oracle) shadow.add_edge(op.u, op.v, op.c);
            break;
        case Op::Kind::RemoveEdge:
            if (idx) idx->remove_edge(op.u, op.v);
            if (oracle) shadow.remove_edge(op.u, op.v);
            break;
        case Op::Kind::Recolor:
            if (op.c > gf.k)
                throw GraphError("op " + std::to_string(i) + ": color exceeds declared k");
            if (idx) idx->recolor_edge(op.u, op.v, op.c);
            if (oracle) shadow.recolor_edge(op.u, op.v, op.c);
            break;
        case Op::Kind::AddVertex:
            if (idx) idx->add_vertex(op.u);
            if (oracle) shadow.add_vertex(op.u);
            break;
        case Op::Kind::RemoveVertex:
            if (idx) idx->remove_isolated_vertex(op.u);
            if (oracle) shadow.remove_vertex(op.u);
            break;
        case Op::Kind::Query: {
            auto [base, kind] = resolve_query(op.name, patterns);
            Count value(0);
            if (idx) value = index_count(*idx, base, kind);
            if (oracle) {
                Count check = oracle_count(pattern_by_name(base), shadow, kind);
                if (!idx) {
                    value = check;
                } else if (!(value == check)) {
                    throw MismatchFailure{"op " + std::to_string(i) + " query " + op.name +
                                          ": engine " + value.str() + " != oracle " +
                                          check.str()};
                }
            }
            std::cout << i << "\t" << op.name << "\t" << value.str() << "\n";
            break;
        }
        }
    }
    if (a.stats && idx) print_stats(*idx);
    return 0;
}

struct CompileArgs {
    std::string patterns_path;
    unsigned colors = 0; // 0 = use the largest color mentioned
    unsigned max_pattern_size = 5;
    std::uint64_t member_guard = 1'000'000;
};

int cmd_compile(const CompileArgs& a) {
    auto pin = open_or_throw(a.patterns_path);
    auto patterns = read_pattern_file(pin);
    Color k = static_cast<Color>(a.colors);
    if (k == 0) {
        k = 1;
        for (const auto& [name, p] : patterns) k = std::max(k, pattern_max_color(p));
    }

    CompileLimits limits;
    limits.max_pattern_vertices = static_cast<std::uint8_t>(a.max_pattern_size);
    limits.max_generated_members = a.member_guard;
    ClassInterner interner;
    for (const auto& [name, p] : patterns) {
        PatternPlans plans = compile_pattern(p, k, interner, limits);
        std::cout << "pattern " << name << ": vertices " << int(p.n) << ", edges "
                  << p.edges.size() << ", colors " << k << "\n";
        std::cout << "  plan terms: induced " << plans.induced.terms.size() << ", sub "
                  << plans.sub.terms.size() << ", hom " << plans.hom.terms.size() << "\n";
        auto comps = pattern_components(p);
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            Pattern comp = induced_pattern(p, comps[ci]);
            if (comp.n == 1) {
                std::cout << "  component " << ci << ": single vertex\n";
                continue;
            }
            auto classes = member_classes(comp, k, a.member_guard);
            std::int64_t labeled = 0;
            for (const auto& cls : classes) labeled += cls.multiplicity;
            std::cout << "  component " << ci << ": " << int(comp.n) << " vertices, depth "
                      << augmentation_depth(comp.n) << ", labeled members " << labeled
                      << ", classes " << classes.size() << "\n";
            for (std::size_t j = 0; j < classes.size(); ++j) {
                auto compiled = compile_directed(classes[j].rep);
                std::cout << "    class " << j << ": " << int(classes[j].rep.n)
                          << " vertices, " << classes[j].rep.edges.size() << " arcs, "
                          << compiled->clans.size() << " clans, multiplicity "
                          << classes[j].multiplicity << "\n";
            }
        }
    }
    std::cout << "distinct engines: " << interner.entries().size() << "\n";
    return 0;
}

struct BenchArgs {
    std::size_t n = 2000;
    std::size_t edges = 0; // 0 = 3n
    int degeneracy = 3;
    unsigned colors = 1;
    std::uint64_t seed = 0x5eed;
    std::string patterns_path;
    std::size_t queries = 20000;
    std::size_t recount_samples = 3;
    bool stats = false;
};

std::uint64_t percentile(std::vector<std::uint64_t>& v, double p) {
    if (v.empty()) return 0;
    std::size_t i = static_cast<std::size_t>(p * static_cast<double>(v.size() - 1));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i), v.end());
    return v[i];
}

int cmd_bench(const BenchArgs& a) {
    using clock = std::chrono::steady_clock;
    std::vector<std::pair<std::string, Pattern>> patterns;
    if (a.patterns_path.empty()) {
        Pattern tri{3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}}};
        patterns.emplace_back("tri", tri);
    } else {
        auto pin = open_or_throw(a.patterns_path);
        patterns = read_pattern_file(pin);
    }
    Color k = static_cast<Color>(std::max(1u, a.colors));
    std::size_t m = a.edges ? a.edges : 3 * a.n;
    auto stream = bounded_degeneracy_stream(a.n, a.degeneracy, m, k, a.seed);

    ColoredGraph g;
    for (std::size_t i = 0; i < a.n; ++i) g.add_vertex();
    IndexOptions opts;
    opts.seed = a.seed;
    ISubIndex idx(g, patterns, k, opts);
    ColoredGraph mirror = g;

    std::vector<std::uint64_t> insert_ns;
    insert_ns.reserve(stream.size());
    std::vector<double> recount_ns;
    std::size_t stride = a.recount_samples ? std::max<std::size_t>(1, stream.size() / a.recount_samples)
                                           : stream.size() + 1;
    OracleLimits lim;
    lim.unchecked = true; // benchmark hosts exceed the correctness-guard sizes
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const auto& e = stream[i];
        auto t0 = clock::now();
        idx.add_edge(e.u, e.v, e.color);
        auto t1 = clock::now();
        insert_ns.push_back(static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
        mirror.add_edge(e.u, e.v, e.color);
        if ((i + 1) % stride == 0) {
            auto r0 = clock::now();
            Count c = isub_count(patterns[0].second, mirror, lim);
            auto r1 = clock::now();
            (void)c;
            recount_ns.push_back(static_cast<double>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(r1 - r0).count()));
        }
    }

    std::cout << "bench n=" << a.n << " m=" << stream.size() << " d=" << a.degeneracy
              << " k=" << k << " seed=" << a.seed << "\n";

    // Queries are pure arithmetic; time them in a batch to beat clock noise.
    std::vector<std::uint64_t> query_ns;
    for (const auto& [name, p] : patterns) {
        auto q0 = clock::now();
        Count sink(0);
        for (std::size_t r = 0; r < a.queries; ++r) sink += idx.count_induced(name);
        auto q1 = clock::now();
        auto total =
            std::chrono::duration_cast<std::chrono::nanoseconds>(q1 - q0).count();
        query_ns.push_back(static_cast<std::uint64_t>(
            static_cast<double>(total) / std::max<std::size_t>(1, a.queries)));
        std::cout << "query " << name << "\tns_per_op=" << query_ns.back()
                  << "\tresult=" << idx.count_induced(name).str() << "\n";
    }

    std::cout << "insert_ns p50=" << percentile(insert_ns, 0.50)
              << " p90=" << percentile(insert_ns, 0.90)
              << " p99=" << percentile(insert_ns, 0.99)
              << " max=" << *std::max_element(insert_ns.begin(), insert_ns.end()) << "\n";
    if (!recount_ns.empty()) {
        double mean = std::accumulate(recount_ns.begin(), recount_ns.end(), 0.0) /
                      static_cast<double>(recount_ns.size());
        std::cout << "recount_ns mean=" << static_cast<std::uint64_t>(mean)
                  << " samples=" << recount_ns.size() << "\n";
        if (!query_ns.empty() && query_ns.front() > 0)
            std::cout << "recount_over_query=" << static_cast<std::uint64_t>(
                             mean / static_cast<double>(query_ns.front()))
                      << "x\n";
    }
    if (a.stats) print_stats(idx);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic exact counting of small colored patterns in sparse graphs"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "execute an op script against a graph");
    run_cmd->add_option("--graph", run.graph_path, "graph file")->required();
    run_cmd->add_option("--patterns", run.patterns_path, "pattern file")->required();
    run_cmd->add_option("--ops", run.ops_path, "op script")->required();
    run_cmd->add_option("--mode", run.mode, "dynamic | oracle | both")
        ->check(CLI::IsMember({"dynamic", "oracle", "both"}));
    run_cmd->add_option("--seed", run.seed, "orientation tie-break seed");
    run_cmd->add_option("--max-pattern-size", run.max_pattern_size, "pattern vertex guard");
    run_cmd->add_flag("--strict-class", run.strict, "fail instead of widening in-degree caps");
    run_cmd->add_flag("--stats", run.stats, "print cascade statistics to stderr");

    CompileArgs comp;
    auto* comp_cmd = app.add_subcommand("compile", "show compiled plan shapes for patterns");
    comp_cmd->add_option("--patterns", comp.patterns_path, "pattern file")->required();
    comp_cmd->add_option("--colors", comp.colors, "host color count (default: largest used)");
    comp_cmd->add_option("--max-pattern-size", comp.max_pattern_size, "pattern vertex guard");
    comp_cmd->add_option("--member-guard", comp.member_guard, "generated member guard");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "time updates and queries on a random stream");
    bench_cmd->add_option("--n", bench.n, "vertex count");
    bench_cmd->add_option("--edges", bench.edges, "edge insertions (default 3n)");
    bench_cmd->add_option("--degeneracy", bench.degeneracy, "stream degeneracy bound");
    bench_cmd->add_option("--colors", bench.colors, "color count");
    bench_cmd->add_option("--seed", bench.seed, "stream + orientation seed");
    bench_cmd->add_option("--patterns", bench.patterns_path, "pattern file (default: triangle)");
    bench_cmd->add_option("--queries", bench.queries, "query repetitions");
    bench_cmd->add_option("--recount-samples", bench.recount_samples,
                          "from-scratch recount sample points");
    bench_cmd->add_flag("--stats", bench.stats, "print cascade statistics to stderr");

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return cmd_run(run);
        if (comp_cmd->parsed()) return cmd_compile(comp);
        if (bench_cmd->parsed()) return cmd_bench(bench);
        return 1;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const MismatchFailure& e) {
        std::cerr << "mismatch: " << e.message << "\n";
        return 4;
    } catch (const subcount::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const subcount::GuardError& e) {
        std::cerr << "guard error: " << e.what() << "\n";
        return 3;
    } catch (const subcount::SparsityError& e) {
        std::cerr << "sparsity error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
