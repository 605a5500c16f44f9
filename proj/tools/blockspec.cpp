// Command-line driver: generate planted models, run the clustering
// algorithms, sweep parameters, and run the lemma audits.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockspec/blockspec.hpp"

using json = nlohmann::ordered_json;
using namespace blockspec;

namespace {

int default_threads() {
    if (const char* env = std::getenv("BLOCKSPEC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

DeltaMode parse_delta(const std::string& text, double& value) {
    if (text == "theory") return DeltaMode::Theoretical;
    if (text == "estimate") return DeltaMode::Estimated;
    try {
        std::size_t used = 0;
        value = std::stod(text, &used);
        if (used != text.size() || !(value > 0.0)) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw CLI::ValidationError("--delta", "expected 'theory', 'estimate', or a positive number");
    }
    return DeltaMode::Explicit;
}

struct AlgoConfig {
    std::string algorithm = "power";
    double p = 0.0;
    double q = 0.0;
    int k = 0;
    int r = 0;
    std::string delta = "theory";
    std::uint64_t seed = 0;  // svd2 halving seed
    std::optional<int> s_star_hint;
};

Clustering run_algorithm(const Matrix& a, const AlgoConfig& cfg) {
    double delta_value = 0.0;
    const DeltaMode mode = parse_delta(cfg.delta, delta_value);
    if (cfg.algorithm == "power") {
        const Matrix b = center(a, cfg.q);
        PowerConfig pc;
        pc.r = cfg.r;
        pc.p = cfg.p;
        pc.q = cfg.q;
        pc.delta_mode = mode;
        pc.delta_value = delta_value;
        pc.s_star_hint = cfg.s_star_hint;
        return power_iteration_cluster(b, pc);
    }
    SvdConfig sc;
    sc.k = cfg.k;
    sc.p = cfg.p;
    sc.q = cfg.q;
    sc.delta_mode = mode;
    sc.delta_value = delta_value;
    if (cfg.algorithm == "csvd") return centered_svd_cluster(center(a, cfg.q), sc);
    if (cfg.algorithm == "svd1") return svd1_cluster(a, sc);
    if (cfg.algorithm == "svd2") return svd2_cluster(a, sc, cfg.seed);
    throw CLI::ValidationError("--algorithm", "unknown algorithm '" + cfg.algorithm + "'");
}

/// Log-domain pairwise distances in the space the algorithm thresholds,
/// for separation-gap reporting. svd2 splits the vertex set, so its gap
/// is not defined over all pairs; callers treat the empty matrix as "n/a".
Matrix algorithm_distances(const Matrix& a, const AlgoConfig& cfg) {
    if (cfg.algorithm == "power") {
        const Matrix b = center(a, cfg.q);
        const int n = static_cast<int>(b.rows());
        const int r = cfg.r > 0 ? cfg.r : default_power_exponent(n);
        return log_row_distances(scaled_power(b, r));
    }
    if (cfg.algorithm == "csvd" || cfg.algorithm == "svd1") {
        const Matrix m = cfg.algorithm == "csvd" ? center(a, cfg.q) : a;
        const EigenDecomposition d = sym_eigen(m);
        const Matrix coords = d.eigenvectors.leftCols(cfg.k).transpose() * m;
        return column_log_distances(coords);
    }
    return Matrix();
}

json report_json(const RecoveryReport& rep) {
    return json{{"exact_all", rep.exact_all},
                {"exact_largest", rep.exact_largest},
                {"accuracy", rep.accuracy},
                {"per_cluster_jaccard", rep.per_cluster_jaccard}};
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------- generate

int cmd_generate(int n, int k, const std::vector<int>& sizes, double p, double q,
                 std::uint64_t seed, bool self_loops, const std::string& out) {
    BlockParams params;
    params.n = n;
    params.p = p;
    params.q = q;
    params.sizes = sizes;
    params.k = k;
    auto model = make_planted(params, seed, self_loops);
    const Matrix a = sample_ssbm(model);

    write_edge_list_file(out + ".edges", a);
    write_labels_file(out + ".labels", model.labels);

    json meta{{"n", n},
              {"p", p},
              {"q", q},
              {"seed", seed},
              {"self_loops", self_loops},
              {"generated_at", std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count()}};
    if (!sizes.empty())
        meta["sizes"] = sizes;
    else
        meta["k"] = k;
    write_text_file(out + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << out << ".edges, " << out << ".labels, " << out << ".meta.json\n";
    return 0;
}

// ---------------------------------------------------------------- cluster

int cmd_cluster(const std::string& graph, const std::string& labels_path,
                const AlgoConfig& cfg, const std::string& out) {
    const Matrix a = read_edge_list_file(graph);
    const Clustering c = run_algorithm(a, cfg);

    json result{{"algorithm", c.algorithm},
                {"n", a.rows()},
                {"threshold_log", c.threshold_log},
                {"groups", c.groups},
                {"largest", c.largest},
                {"report", nullptr}};
    if (!labels_path.empty()) {
        const auto truth = read_labels_file(labels_path);
        result["report"] = report_json(compare(c, truth));
    }
    const std::string text = result.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
    return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepPoint {
    int index = 0;
    BlockParams params;
};

std::vector<double> number_or_array(const json& v) {
    if (v.is_array()) return v.get<std::vector<double>>();
    return {v.get<double>()};
}

int cmd_sweep(const std::string& spec_path, const std::string& out, int threads) {
    std::ifstream is(spec_path);
    if (!is) throw std::runtime_error("cannot open spec: " + spec_path);
    json spec = json::parse(is);

    std::vector<std::string> missing;
    for (const char* key : {"n", "p", "q", "trials"})
        if (!spec.contains(key)) missing.push_back(key);
    if (!spec.contains("k") && !spec.contains("sizes")) missing.push_back("k|sizes");
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "sweep spec missing fields:";
        for (const auto& f : missing) msg << " " << f;
        throw std::runtime_error(msg.str());
    }

    const int n = spec["n"].get<int>();
    const int trials = spec["trials"].get<int>();
    if (trials < 1) throw std::runtime_error("sweep spec: trials must be >= 1");
    const std::uint64_t base_seed = spec.value("base_seed", 0ULL);
    AlgoConfig cfg;
    cfg.algorithm = spec.value("algorithm", std::string("power"));
    cfg.r = spec.value("r", 0);
    cfg.delta = spec.value("delta", std::string("theory"));
    const bool self_loops = spec.value("self_loops", true);

    std::vector<SweepPoint> points;
    for (double p : number_or_array(spec["p"]))
        for (double q : number_or_array(spec["q"])) {
            SweepPoint pt;
            pt.index = static_cast<int>(points.size());
            pt.params.n = n;
            pt.params.p = p;
            pt.params.q = q;
            if (spec.contains("sizes"))
                pt.params.sizes = spec["sizes"].get<std::vector<int>>();
            else
                pt.params.k = spec["k"].get<int>();
            pt.params.validate();
            points.push_back(std::move(pt));
        }

    struct Row {
        double accuracy = 0.0;
        bool exact_all = false, exact_largest = false;
        double max_within_log = 0.0, min_cross_log = 0.0, gap = 0.0;
        std::uint64_t seed = 0;
        long long wall_ms = 0;
    };
    const int total = static_cast<int>(points.size()) * trials;
    std::vector<Row> rows(total);

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::string first_error;
    auto worker = [&] {
        for (int job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
            const SweepPoint& pt = points[job / trials];
            const int trial = job % trials;
            try {
                const auto start = std::chrono::steady_clock::now();
                Row& row = rows[job];
                row.seed = derive_seed(base_seed, static_cast<std::uint64_t>(job));

                AlgoConfig acfg = cfg;
                acfg.p = pt.params.p;
                acfg.q = pt.params.q;
                acfg.k = pt.params.cluster_count();
                acfg.seed = derive_seed(row.seed, 1);
                if (cfg.delta == "theory" && cfg.algorithm == "power")
                    acfg.s_star_hint = static_cast<int>(pt.params.mean_cluster_size());

                auto model = make_planted(pt.params, row.seed, self_loops);
                const Matrix a = sample_ssbm(model);
                const Clustering c = run_algorithm(a, acfg);
                const RecoveryReport rep = compare(c, model.labels);
                row.accuracy = rep.accuracy;
                row.exact_all = rep.exact_all;
                row.exact_largest = rep.exact_largest;

                const Matrix dist = algorithm_distances(a, acfg);
                if (dist.size() > 0) {
                    const SeparationStats st = separation_stats(dist, model.labels);
                    row.max_within_log = st.max_within_log;
                    row.min_cross_log = st.min_cross_log;
                    row.gap = st.gap();
                } else {
                    row.max_within_log = row.min_cross_log = row.gap =
                        std::numeric_limits<double>::quiet_NaN();
                }
                row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::max(1, std::min(threads, total));
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (!first_error.empty()) throw std::runtime_error("sweep trial failed: " + first_error);

    std::ostringstream csv;
    csv << "schema=1,point,n,k,p,q,trial,seed,algorithm,accuracy,exact_all,exact_largest,"
           "max_within_log,min_cross_log,gap,wall_ms\n";
    csv.precision(17);
    for (int job = 0; job < total; ++job) {
        const SweepPoint& pt = points[job / trials];
        const Row& row = rows[job];
        csv << "r," << pt.index << ',' << pt.params.n << ',' << pt.params.cluster_count() << ','
            << pt.params.p << ',' << pt.params.q << ',' << job % trials << ',' << row.seed << ','
            << cfg.algorithm << ',' << row.accuracy << ',' << (row.exact_all ? 1 : 0) << ','
            << (row.exact_largest ? 1 : 0) << ',' << row.max_within_log << ','
            << row.min_cross_log << ',' << row.gap << ',' << row.wall_ms << '\n';
    }
    if (out.empty())
        std::cout << csv.str();
    else
        write_text_file(out, csv.str());
    return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::vector<std::string>& audits, int n, int k, double p, double q, int r,
               int t, std::uint64_t seed, const std::string& out) {
    BlockParams params;
    params.n = n;
    params.p = p;
    params.q = q;
    params.k = k;
    auto model = make_planted(params, seed);
    const Matrix b = center(sample_ssbm(model), q);
    const auto sn = split(b, model);
    const int rr = r > 0 ? r : default_power_exponent(n);

    bool identity_failed = false;
    std::ostringstream os;
    os.precision(17);
    auto emit = [&](json rec) { os << rec.dump() << "\n"; };

    for (const std::string& audit : audits) {
        json rec{{"audit", audit}, {"n", n}, {"k", k}, {"p", p}, {"q", q}, {"seed", seed}};
        if (audit == "encodings") {
            auto enc = enumerate_encodings(t);
            const double bound = std::pow(static_cast<double>(t), t);
            const bool pass = static_cast<double>(enc.size()) <= bound;
            rec["t"] = t;
            rec["count"] = enc.size();
            rec["bound"] = bound;
            rec["pass"] = pass;
            identity_failed |= !pass;
        } else if (audit == "decomposition") {
            auto terms = decompose_terms(sn, rr);
            const double err = decomposition_error(sn, terms);
            rec["r"] = rr;
            rec["rel_error"] = err;
            rec["pass"] = err <= 1e-9;
            identity_failed |= err > 1e-9;
        } else if (audit == "group-sum") {
            auto res = group_sum_oracle(sn.R, sn.L, 0, n - 1, t);
            rec["t"] = t;
            rec["total"] = res.total;
            rec["direct"] = res.direct;
            rec["rel_error"] = res.rel_error;
            rec["pass"] = res.rel_error <= 1e-10;
            identity_failed |= res.rel_error > 1e-10;
        } else if (audit == "partition") {
            auto res = partition_unbiasedness_check(sn.R, sn.L, 0, n - 1, t);
            rec["t"] = t;
            rec["w_direct"] = res.w_direct;
            rec["w_from_partitions"] = res.w_from_partitions;
            rec["rel_error"] = res.rel_error;
            rec["pass"] = res.rel_error <= 1e-9;
            identity_failed |= res.rel_error > 1e-9;
        } else if (audit == "norms") {
            auto terms = decompose_terms(sn, rr);
            const int s_star = estimate_s_star(b, p, q);
            auto rep = audit_norm_lemmas(terms, delta_power_log(s_star, p, q, rr), model);
            rec["r"] = rr;
            rec["m_ratio"] = rep.m_ratio;
            rec["mp_ratio"] = rep.mp_ratio;
            rec["rr_ratio"] = rep.rr_ratio;
            rec["lr_cross_over_2delta"] = rep.lr_cross_over_2delta;
            rec["bar"] = rep.bar;
            rec["pass"] = rep.pass;  // empirical envelope, not an exact identity
        } else if (audit == "entry-bound") {
            auto rep = audit_entry_bound_rtl(sn, t, model.largest_cluster_size(), p, q);
            rec["t"] = t;
            rec["rtl_max_entry"] = rep.rtl_max_entry;
            rec["rtl_envelope"] = rep.rtl_envelope;
            rec["rtl_ratio"] = rep.rtl_ratio;
            rec["ltr_max_entry"] = rep.ltr_max_entry;
            rec["ltr_envelope"] = rep.ltr_envelope;
            rec["ltr_ratio"] = rep.ltr_ratio;
            rec["pass"] = rep.rtl_ratio <= 1.0 && rep.ltr_ratio <= 1.0;  // empirical envelope
        } else if (audit == "projection") {
            auto rep = audit_projection_scaling(b, k, rr, p, q);
            rec["r"] = rr;
            rec["topk_max_deviation"] = rep.topk_max_deviation;
            rec["tail_max"] = rep.tail_max;
        } else {
            throw CLI::ValidationError("--audit", "unknown audit '" + audit + "'");
        }
        emit(std::move(rec));
    }
    if (out.empty())
        std::cout << os.str();
    else
        write_text_file(out, os.str());
    return identity_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral clustering for planted block models"};
    app.require_subcommand(1);

    int n = 100, k = 2, r = 0, t = 2;
    std::vector<int> sizes;
    double p = 0.6, q = 0.1;
    std::uint64_t seed = 0;
    std::string out, graph, labels, self_loops_text = "on";
    int threads = default_threads();
    AlgoConfig cfg;
    std::vector<std::string> audits{"encodings", "decomposition", "group-sum", "partition"};

    auto* gen = app.add_subcommand("generate", "Sample a planted model to disk");
    gen->add_option("--n", n, "vertex count")->required();
    gen->add_option("--k", k, "cluster count (uniform assignment)");
    gen->add_option("--sizes", sizes, "explicit cluster sizes (overrides --k)")->delimiter(',');
    gen->add_option("--p", p, "intra-cluster edge probability")->required();
    gen->add_option("--q", q, "inter-cluster edge probability")->required();
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--self-loops", self_loops_text, "on|off")
        ->check(CLI::IsMember({"on", "off"}));
    gen->add_option("--out", out, "output path prefix")->required();

    auto* clu = app.add_subcommand("cluster", "Cluster a graph file");
    clu->add_option("--graph", graph, "edge-list file")->required();
    clu->add_option("--labels", labels, "planted labels file (optional)");
    clu->add_option("--algorithm", cfg.algorithm, "power|csvd|svd1|svd2")
        ->check(CLI::IsMember({"power", "csvd", "svd1", "svd2"}));
    clu->add_option("--p", cfg.p, "intra-cluster edge probability")->required();
    clu->add_option("--q", cfg.q, "inter-cluster edge probability")->required();
    clu->add_option("--k", cfg.k, "cluster count (projection algorithms)");
    clu->add_option("--r", cfg.r, "power exponent (0 = ceil(ln n))");
    clu->add_option("--delta", cfg.delta, "theory|estimate|<value>");
    clu->add_option("--s-star", cfg.s_star_hint, "target cluster size for --delta theory");
    clu->add_option("--seed", cfg.seed, "seed for the svd2 halving");
    clu->add_option("--out", out, "result JSON path (default stdout)");

    auto* swp = app.add_subcommand("sweep", "Run a parameter sweep from a JSON spec");
    swp->add_option("--spec", graph, "sweep spec JSON file")->required();
    swp->add_option("--out", out, "CSV output path (default stdout)");
    swp->add_option("--threads", threads, "worker threads (default $BLOCKSPEC_THREADS)");

    auto* ver = app.add_subcommand("verify", "Run lemma audits on a sampled instance");
    ver->add_option("--audit", audits,
                    "encodings|decomposition|group-sum|partition|norms|entry-bound|projection")
        ->delimiter(',');
    ver->add_option("--n", n, "vertex count");
    ver->add_option("--k", k, "cluster count");
    ver->add_option("--p", p, "intra-cluster edge probability");
    ver->add_option("--q", q, "inter-cluster edge probability");
    ver->add_option("--r", r, "power exponent (0 = ceil(ln n))");
    ver->add_option("--t", t, "middle-term length for the combinatorial audits");
    ver->add_option("--seed", seed, "RNG seed");
    ver->add_option("--out", out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(n, sizes.empty() ? k : 0, sizes, p, q, seed,
                                self_loops_text == "on", out);
        if (clu->parsed()) return cmd_cluster(graph, labels, cfg, out);
        if (swp->parsed()) return cmd_sweep(graph, out, threads);
        if (ver->parsed()) return cmd_verify(audits, n, k, p, q, r, t, seed, out);
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
