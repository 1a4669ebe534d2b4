// Command-line front end: run PCA algorithms on Matrix Market files, generate
// and sparsify synthetic data, benchmark parameter sweeps, and evaluate the
// analytic flop/speedup model.
//
// Exit codes: 0 success, 2 bad flags or parameters, 3 I/O error,
// 4 numerical error (rank deficiency or a size guard).

#include "frpca/frpca.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <Eigen/Core>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using frpca::Index;
using Scalar = double;
using Matrix = frpca::Matrix<Scalar>;
using Vector = frpca::Vector<Scalar>;
using Csr = frpca::SparseMatrixCsr<Scalar>;
using json = nlohmann::ordered_json;

constexpr int kExitBadArgs = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_values_csv(const std::string& path, const Vector& values) {
    std::ofstream out(path);
    if (!out) throw frpca::IoError("cannot open '" + path + "' for writing");
    for (Index i = 0; i < values.size(); ++i) out << format_double(values(i)) << "\n";
    if (!out) throw frpca::IoError("failed while writing '" + path + "'");
}

void write_matrix_csv(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out) throw frpca::IoError("cannot open '" + path + "' for writing");
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j > 0) out << ",";
            out << format_double(M(i, j));
        }
        out << "\n";
    }
    if (!out) throw frpca::IoError("failed while writing '" + path + "'");
}

frpca::PcaAlgorithm parse_algorithm(const std::string& name) {
    if (name == "frpca") return frpca::PcaAlgorithm::Frpca;
    if (name == "frpcat") return frpca::PcaAlgorithm::Frpcat;
    if (name == "auto") return frpca::PcaAlgorithm::Auto;
    if (name == "basic") return frpca::PcaAlgorithm::BasicRpca;
    if (name == "basict") return frpca::PcaAlgorithm::BasicRpcat;
    if (name == "eigsvds") return frpca::PcaAlgorithm::EigSvds;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string strip_extension(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

int resolve_threads(int cli_threads, bool deterministic) {
    int threads = cli_threads;
    if (threads <= 0) {
        if (const char* env = std::getenv("FRPCA_THREADS")) threads = std::atoi(env);
    }
    if (threads <= 0) threads = 1;
    if (deterministic) threads = 1;
    Eigen::setNbThreads(threads);
    return threads;
}

// Rough analytic peak-allocation model: the CSR arrays plus the dense panels
// each algorithm keeps alive at once. Reported as an estimate, not a
// measurement.
std::uint64_t estimate_peak_bytes(frpca::PcaAlgorithm alg, Index m, Index n, Index nnz, Index k,
                                  Index l) {
    const std::uint64_t csr = 8ull * (static_cast<std::uint64_t>(m) + 1 + 2ull * nnz);
    const std::uint64_t word = 8ull;
    std::uint64_t panels = 0;
    switch (alg) {
        case frpca::PcaAlgorithm::BasicRpca:
            panels = word * static_cast<std::uint64_t>(l) * (3ull * m + 3ull * n);
            break;
        case frpca::PcaAlgorithm::BasicRpcat:
            panels = word * static_cast<std::uint64_t>(l) * (3ull * m + 3ull * n);
            break;
        case frpca::PcaAlgorithm::Frpca:
            panels = word * static_cast<std::uint64_t>(l) * (3ull * m + 2ull * n);
            break;
        case frpca::PcaAlgorithm::Frpcat:
            panels = word * static_cast<std::uint64_t>(l) * (2ull * m + 3ull * n);
            break;
        case frpca::PcaAlgorithm::EigSvds:
            panels = word * (2ull * n * n);
            break;
        default:
            panels = 0;
    }
    const std::uint64_t result = word * static_cast<std::uint64_t>(k) * (m + n);
    const std::uint64_t small = word * 3ull * l * l;
    return csr + panels + result + small;
}

struct RunOptions {
    std::string input;
    std::string algorithm = "auto";
    Index k = 0;
    Index q = 2;
    Index p = 0;
    bool p_given = false;
    Index oversample = 5;
    Index gram_limit = 20000;
    std::uint64_t seed = 0;
    bool deterministic = false;
    bool save_vectors = false;
    bool evaluate = false;
    std::string out_prefix;
    int threads = 0;
};

int cmd_run(const RunOptions& opt) {
    const int threads = resolve_threads(opt.threads, opt.deterministic);
    const frpca::PcaAlgorithm requested = parse_algorithm(opt.algorithm);
    Csr A = frpca::load_matrix_market<Scalar>(opt.input);

    frpca::PcaConfig cfg;
    cfg.k = opt.k;
    cfg.oversample = opt.oversample;
    cfg.passes = opt.q;
    cfg.power = opt.p_given ? opt.p : std::max<Index>(0, (opt.q - 2) / 2);
    cfg.seed = opt.seed;
    cfg.deterministic = opt.deterministic;

    frpca::RunStats<Scalar> stats;
    frpca::SvdResult<Scalar> result;
    frpca::PcaAlgorithm dispatched = requested;

    const auto t0 = std::chrono::steady_clock::now();
    switch (requested) {
        case frpca::PcaAlgorithm::BasicRpca:
            result = frpca::basic_rpca(A, cfg, &stats);
            break;
        case frpca::PcaAlgorithm::BasicRpcat:
            result = frpca::basic_rpcat(A, cfg, &stats);
            break;
        case frpca::PcaAlgorithm::Frpca:
            result = frpca::frpca(A, cfg, &stats);
            break;
        case frpca::PcaAlgorithm::Frpcat:
            result = frpca::frpcat(A, cfg, &stats);
            break;
        case frpca::PcaAlgorithm::EigSvds: {
            const std::uint64_t before = A.passCount();
            result = frpca::eig_svds(A, cfg.k, opt.gram_limit);
            stats.passes_over_matrix = A.passCount() - before;
            break;
        }
        case frpca::PcaAlgorithm::Auto: {
            frpca::AutoPcaResult<Scalar> r = frpca::auto_pca(A, cfg, &stats);
            result = std::move(r.svd);
            dispatched = r.dispatched;
            break;
        }
    }
    const double total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string prefix = opt.out_prefix.empty() ? strip_extension(opt.input) : opt.out_prefix;
    const std::string s_path = prefix + ".S.csv";
    write_values_csv(s_path, result.S);
    std::string u_path, v_path;
    if (opt.save_vectors) {
        u_path = prefix + ".U.csv";
        v_path = prefix + ".V.csv";
        write_matrix_csv(u_path, result.U);
        write_matrix_csv(v_path, result.V);
    }

    const bool baseline = requested == frpca::PcaAlgorithm::BasicRpca ||
                          requested == frpca::PcaAlgorithm::BasicRpcat;
    json manifest;
    manifest["input"] = opt.input;
    manifest["algorithm"] = opt.algorithm;
    manifest["dispatched_algorithm"] = frpca::algorithm_name(dispatched);
    manifest["rows"] = A.rows();
    manifest["cols"] = A.cols();
    manifest["nnz"] = A.nonZeros();
    manifest["k"] = cfg.k;
    manifest["oversample"] = cfg.oversample;
    if (requested == frpca::PcaAlgorithm::EigSvds) {
        manifest["passes"] = nullptr;
        manifest["power"] = nullptr;
    } else if (baseline) {
        manifest["passes"] = nullptr;
        manifest["power"] = cfg.power;
    } else {
        manifest["passes"] = cfg.passes;
        manifest["power"] = nullptr;
    }
    manifest["seed"] = cfg.seed;
    manifest["deterministic"] = cfg.deterministic;
    manifest["threads"] = threads;
    manifest["timings_seconds"] = {{"sketch", stats.sketch_seconds},
                                   {"power_iterations", stats.power_seconds},
                                   {"finalization", stats.finalize_seconds},
                                   {"total", total_seconds}};
    manifest["passes_over_matrix"] = stats.passes_over_matrix;
    manifest["peak_memory_estimate_bytes"] =
        estimate_peak_bytes(dispatched, A.rows(), A.cols(), A.nonZeros(), cfg.k, cfg.sketch_width());
    manifest["memory_estimate_method"] = "analytic-allocation-model";
    manifest["outputs"] = {{"singular_values", s_path},
                           {"left_vectors", opt.save_vectors ? json(u_path) : json(nullptr)},
                           {"right_vectors", opt.save_vectors ? json(v_path) : json(nullptr)}};

    if (opt.evaluate) {
        frpca::OracleSvd<Scalar> oracle = frpca::oracle_svd(A.toDense());
        frpca::AccuracyReport report = frpca::make_accuracy_report(A, result, oracle);
        const std::string acc_path = prefix + ".accuracy.json";
        std::ofstream acc(acc_path);
        if (!acc) throw frpca::IoError("cannot open '" + acc_path + "' for writing");
        acc << frpca::to_json(report).dump(2) << "\n";
        manifest["accuracy_report"] = acc_path;
    }

    const std::string manifest_path = prefix + ".manifest.json";
    std::ofstream mf(manifest_path);
    if (!mf) throw frpca::IoError("cannot open '" + manifest_path + "' for writing");
    mf << manifest.dump(2) << "\n";

    std::cout << "wrote " << s_path << " (k=" << result.S.size() << ", passes=" << stats.passes_over_matrix
              << ")\n";
    return 0;
}

struct GenOptions {
    std::string output;
    Index rows = 0;
    Index cols = 0;
    Index nnz_per_row = 0;
    std::string spectrum = "flat";
    std::uint64_t seed = 0;
};

int cmd_gen(const GenOptions& opt) {
    frpca::GenSpec spec;
    spec.rows = opt.rows;
    spec.cols = opt.cols;
    spec.nnz_per_row = opt.nnz_per_row;
    spec.seed = opt.seed;

    if (opt.spectrum == "flat") {
        spec.spectrum = frpca::SpectrumKind::Flat;
    } else if (opt.spectrum.rfind("geometric:", 0) == 0) {
        spec.spectrum = frpca::SpectrumKind::Geometric;
        spec.ratio = std::stod(opt.spectrum.substr(10));
    } else if (opt.spectrum.rfind("file:", 0) == 0) {
        spec.spectrum = frpca::SpectrumKind::File;
        const std::string path = opt.spectrum.substr(5);
        std::ifstream in(path);
        if (!in) throw frpca::IoError("cannot open spectrum file '" + path + "'");
        double v;
        while (in >> v) spec.file_values.push_back(v);
        if (spec.file_values.empty())
            throw frpca::IoError("spectrum file '" + path + "' contains no values");
    } else {
        throw std::invalid_argument("spectrum must be flat, geometric:<ratio>, or file:<path>");
    }

    Csr A = frpca::generate_sparse<Scalar>(spec);
    frpca::write_matrix_market(opt.output, A);
    std::cout << "wrote " << opt.output << " (" << A.rows() << "x" << A.cols() << ", nnz "
              << A.nonZeros() << ", " << static_cast<double>(A.nonZeros()) / A.rows()
              << " per row)\n";
    return 0;
}

struct SparsifyOptions {
    std::string input;
    std::string output;
    double keep = 1.0;
    std::uint64_t seed = 0;
};

int cmd_sparsify(const SparsifyOptions& opt) {
    Csr A = frpca::load_matrix_market<Scalar>(opt.input);
    const double before = static_cast<double>(A.nonZeros()) / A.rows();
    Csr B = frpca::sparsify(A, opt.keep, opt.seed);
    const double after = static_cast<double>(B.nonZeros()) / B.rows();
    frpca::write_matrix_market(opt.output, B);
    std::cout << "kept " << B.nonZeros() << " of " << A.nonZeros() << " entries ("
              << before << " -> " << after << " nonzeros per row)\n";
    return 0;
}

struct BenchOptions {
    std::string input;
    std::vector<std::string> algorithms;
    std::vector<Index> q_list;
    std::vector<Index> p_list;
    Index k = 10;
    Index oversample = 5;
    Index repeats = 3;
    Index gram_limit = 20000;
    std::uint64_t seed = 0;
    std::string reference = "auto";
    std::string out;
    int threads = 0;
};

int cmd_bench(const BenchOptions& opt) {
    resolve_threads(opt.threads, false);
    if (opt.algorithms.empty()) throw std::invalid_argument("bench: --algorithms is required");
    if (opt.q_list.empty() && opt.p_list.empty())
        throw std::invalid_argument("bench: provide --q-list or --p-list");
    if (opt.repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");

    Csr A = frpca::load_matrix_market<Scalar>(opt.input);

    // One parameter grid drives everything: fast algorithms take q, baselines
    // take the matching p (floor((q - 1) / 2), so q = 2p + 2 on even grids).
    std::vector<std::pair<Index, Index>> grid;  // (q, p)
    if (!opt.q_list.empty()) {
        for (Index q : opt.q_list) grid.emplace_back(q, std::max<Index>(0, (q - 1) / 2));
    } else {
        for (Index p : opt.p_list) grid.emplace_back(2 * p + 2, p);
    }

    // Reference singular values for the error column.
    Vector ref;
    std::string ref_source = "none";
    const std::uint64_t entries = static_cast<std::uint64_t>(A.rows()) * A.cols();
    if (opt.reference == "eigsvds" ||
        (opt.reference == "auto" && A.rows() >= A.cols() && A.cols() <= opt.gram_limit)) {
        ref = frpca::eig_svds(A, opt.k, opt.gram_limit).S;
        ref_source = "eigsvds";
    } else if (opt.reference == "oracle" ||
               (opt.reference == "auto" && entries <= frpca::kDefaultOracleEntryLimit)) {
        Matrix dense = A.toDense();
        ref = frpca::oracle_svd(dense).S.head(opt.k);
        ref_source = "oracle";
    } else if (opt.reference != "none" && opt.reference != "auto") {
        throw std::invalid_argument("bench: reference must be auto, eigsvds, oracle, or none");
    }

    std::ostringstream csv;
    csv << "algorithm,parameter,value,passes,seconds_median,sv_max_rel_err,speedup_vs_first\n";

    std::vector<double> first_algo_seconds(grid.size(), 0.0);
    for (std::size_t ai = 0; ai < opt.algorithms.size(); ++ai) {
        const frpca::PcaAlgorithm alg = parse_algorithm(opt.algorithms[ai]);
        const bool baseline = alg == frpca::PcaAlgorithm::BasicRpca ||
                              alg == frpca::PcaAlgorithm::BasicRpcat;
        const bool parameter_free = alg == frpca::PcaAlgorithm::EigSvds;

        const std::size_t points = parameter_free ? 1 : grid.size();
        for (std::size_t gi = 0; gi < points; ++gi) {
            frpca::PcaConfig cfg;
            cfg.k = opt.k;
            cfg.oversample = opt.oversample;
            cfg.passes = grid[gi].first;
            cfg.power = grid[gi].second;
            cfg.seed = opt.seed;

            std::vector<double> times;
            frpca::SvdResult<Scalar> result;
            std::uint64_t passes = 0;
            for (Index rep = 0; rep < opt.repeats; ++rep) {
                const std::uint64_t before = A.passCount();
                const auto t0 = std::chrono::steady_clock::now();
                switch (alg) {
                    case frpca::PcaAlgorithm::BasicRpca: result = frpca::basic_rpca(A, cfg); break;
                    case frpca::PcaAlgorithm::BasicRpcat: result = frpca::basic_rpcat(A, cfg); break;
                    case frpca::PcaAlgorithm::Frpca: result = frpca::frpca(A, cfg); break;
                    case frpca::PcaAlgorithm::Frpcat: result = frpca::frpcat(A, cfg); break;
                    case frpca::PcaAlgorithm::EigSvds:
                        result = frpca::eig_svds(A, cfg.k, opt.gram_limit);
                        break;
                    case frpca::PcaAlgorithm::Auto: result = frpca::auto_pca(A, cfg).svd; break;
                }
                times.push_back(
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
                passes = A.passCount() - before;
            }
            std::sort(times.begin(), times.end());
            const double median = times[times.size() / 2];
            if (ai == 0) {
                if (parameter_free)
                    std::fill(first_algo_seconds.begin(), first_algo_seconds.end(), median);
                else
                    first_algo_seconds[gi] = median;
            }

            std::string err_field;
            if (ref.size() >= opt.k) {
                double max_rel = 0.0;
                for (Index i = 0; i < opt.k; ++i)
                    max_rel = std::max(max_rel, std::abs(result.S(i) - ref(i)) / ref(i));
                err_field = format_double(max_rel);
            }
            const double speedup = first_algo_seconds[gi] > 0 ? first_algo_seconds[gi] / median : 0.0;

            csv << opt.algorithms[ai] << ",";
            if (parameter_free)
                csv << ",,";
            else if (baseline)
                csv << "p," << grid[gi].second << ",";
            else
                csv << "q," << grid[gi].first << ",";
            csv << passes << "," << format_double(median) << "," << err_field << ","
                << format_double(speedup) << "\n";
        }
    }

    std::cerr << "reference: " << ref_source << "\n";
    if (opt.out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(opt.out);
        if (!out) throw frpca::IoError("cannot open '" + opt.out + "' for writing");
        out << csv.str();
        std::cout << "wrote " << opt.out << "\n";
    }
    return 0;
}

struct ModelOptions {
    Index m = 0;
    Index n = 0;
    std::int64_t nnz = -1;
    double t = -1.0;
    Index k = 0;
    Index s = 5;
    Index q = 12;
    double c_mul = 1.0, c_qr = 5.0, c_lu = 1.0, c_svd = 25.0, c_eig = 25.0;
    std::string out;
};

int cmd_model(const ModelOptions& opt) {
    if (opt.nnz < 0 && opt.t < 0)
        throw std::invalid_argument("model: provide --nnz or --t (average nonzeros per row)");
    const double t = opt.t >= 0 ? opt.t : static_cast<double>(opt.nnz) / static_cast<double>(opt.m);
    const std::uint64_t nnz =
        opt.nnz >= 0 ? static_cast<std::uint64_t>(opt.nnz)
                     : static_cast<std::uint64_t>(t * static_cast<double>(opt.m));

    frpca::CostConstants c{opt.c_mul, opt.c_qr, opt.c_lu, opt.c_svd, opt.c_eig};
    frpca::CostInputs in;
    in.m = opt.m;
    in.n = opt.n;
    in.nnz = nnz;
    in.k = opt.k;
    in.s = opt.s;
    in.passes = opt.q;
    const double l = in.sketch_width();
    if (l < 1) throw std::invalid_argument("model: k + s must be >= 1");

    const double alpha = t / l;
    const double alpha_k = opt.k > 0 ? t / static_cast<double>(opt.k) : alpha;
    const double beta = static_cast<double>(opt.n) / static_cast<double>(opt.m);
    const bool even_q = opt.q % 2 == 0;

    json out;
    out["m"] = opt.m;
    out["n"] = opt.n;
    out["nnz"] = nnz;
    out["t"] = t;
    out["k"] = opt.k;
    out["s"] = opt.s;
    out["l"] = static_cast<Index>(l);
    out["q"] = opt.q;
    out["alpha"] = alpha;
    out["alpha_k"] = alpha_k;
    out["beta"] = beta;
    out["constants"] = {{"c_mul", c.c_mul},
                        {"c_qr", c.c_qr},
                        {"c_lu", c.c_lu},
                        {"c_svd", c.c_svd},
                        {"c_eig", c.c_eig}};

    json fc;
    fc["frpca"] = frpca::flops(frpca::CostAlgorithm::Frpca, in, c);
    fc["frpcat"] = frpca::flops(frpca::CostAlgorithm::Frpcat, in, c);
    fc["eigsvd"] = frpca::flops(frpca::CostAlgorithm::EigSvd, in, c);
    if (even_q) {
        in.power = (opt.q - 2) / 2;
        fc["basic_rpca"] = frpca::flops(frpca::CostAlgorithm::BasicRpca, in, c);
        fc["basic_rpcat"] = frpca::flops(frpca::CostAlgorithm::BasicRpcat, in, c);
        out["fc_ratio_basic_over_frpcat"] =
            fc["basic_rpca"].get<double>() / fc["frpcat"].get<double>();
    } else {
        fc["basic_rpca"] = nullptr;
        fc["basic_rpcat"] = nullptr;
    }
    out["fc"] = fc;

    // The closed-form speedup ratio assumes a matrix with at least as many
    // rows as columns (beta <= 1).
    if (beta > 0.0 && beta <= 1.0 && alpha > 0.0) {
        out["sp1_full"] = frpca::speedup_sp1(alpha, beta, opt.q, c);
        out["sp1_simplified"] = frpca::speedup_sp1_simplified(alpha, beta, opt.q, c);
    } else {
        out["sp1_full"] = nullptr;
        out["sp1_simplified"] = nullptr;
    }
    if (beta > 0.0) {
        out["sp1_limit"] = frpca::sp1_limit(alpha, beta, c);
        out["sp1_limit_alpha_k"] = frpca::sp1_limit(alpha_k, beta, c);
    } else {
        out["sp1_limit"] = nullptr;
        out["sp1_limit_alpha_k"] = nullptr;
    }

    const std::string text = out.dump(2) + "\n";
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.out);
        if (!f) throw frpca::IoError("cannot open '" + opt.out + "' for writing");
        f << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized truncated PCA/SVD for large sparse matrices"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Compute a truncated PCA of a Matrix Market file");
    run->add_option("input", run_opt.input, "input .mtx file")->required();
    run->add_option("--algorithm", run_opt.algorithm,
                    "frpca|frpcat|auto|basic|basict|eigsvds (default auto)");
    run->add_option("--k", run_opt.k, "target rank")->required();
    run->add_option("--q", run_opt.q, "pass count for frpca/frpcat/auto (>= 2)");
    CLI::Option* p_opt = run->add_option("--p", run_opt.p, "power count for basic/basict (>= 0)");
    run->add_option("--oversample", run_opt.oversample, "oversampling s (default 5)");
    run->add_option("--seed", run_opt.seed, "random seed");
    run->add_flag("--deterministic", run_opt.deterministic,
                  "force single-threaded, bit-reproducible execution");
    run->add_flag("--save-vectors", run_opt.save_vectors, "also write U.csv / V.csv");
    run->add_flag("--evaluate", run_opt.evaluate,
                  "write an accuracy report vs the dense oracle (small matrices only)");
    run->add_option("--out-prefix", run_opt.out_prefix, "output path prefix (default: input stem)");
    run->add_option("--gram-limit", run_opt.gram_limit, "eigsvds Gram-dimension guard");
    run->add_option("--threads", run_opt.threads, "worker thread cap (or FRPCA_THREADS)");

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic sparse matrix");
    gen->add_option("output", gen_opt.output, "output .mtx file")->required();
    gen->add_option("--rows", gen_opt.rows, "rows")->required();
    gen->add_option("--cols", gen_opt.cols, "cols")->required();
    gen->add_option("--nnz-per-row", gen_opt.nnz_per_row, "average nonzeros per row")->required();
    gen->add_option("--spectrum", gen_opt.spectrum, "flat | geometric:<ratio> | file:<path>");
    gen->add_option("--seed", gen_opt.seed, "random seed");

    SparsifyOptions sp_opt;
    CLI::App* sp = app.add_subcommand("sparsify", "Randomly drop nonzeros from a matrix");
    sp->add_option("input", sp_opt.input, "input .mtx file")->required();
    sp->add_option("--keep", sp_opt.keep, "keep fraction in (0, 1]")->required();
    sp->add_option("--out", sp_opt.output, "output .mtx file")->required();
    sp->add_option("--seed", sp_opt.seed, "random seed");

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand("bench", "Time algorithms over a parameter sweep");
    bench->add_option("input", bench_opt.input, "input .mtx file")->required();
    bench->add_option("--algorithms", bench_opt.algorithms, "comma-separated algorithm list")
        ->required()
        ->delimiter(',');
    bench->add_option("--q-list", bench_opt.q_list, "pass counts")->delimiter(',');
    bench->add_option("--p-list", bench_opt.p_list, "power counts")->delimiter(',');
    bench->add_option("--k", bench_opt.k, "target rank")->required();
    bench->add_option("--oversample", bench_opt.oversample, "oversampling s");
    bench->add_option("--repeats", bench_opt.repeats, "timing repeats, median reported");
    bench->add_option("--seed", bench_opt.seed, "random seed");
    bench->add_option("--reference", bench_opt.reference, "auto|eigsvds|oracle|none");
    bench->add_option("--gram-limit", bench_opt.gram_limit, "eigsvds Gram-dimension guard");
    bench->add_option("--out", bench_opt.out, "CSV output path (default stdout)");
    bench->add_option("--threads", bench_opt.threads, "worker thread cap");

    ModelOptions model_opt;
    CLI::App* model = app.add_subcommand("model", "Evaluate the flop-count / speedup model");
    model->add_option("--m", model_opt.m, "rows")->required();
    model->add_option("--n", model_opt.n, "cols")->required();
    model->add_option("--nnz", model_opt.nnz, "nonzero count");
    model->add_option("--t", model_opt.t, "average nonzeros per row (alternative to --nnz)");
    model->add_option("--k", model_opt.k, "target rank")->required();
    model->add_option("--s", model_opt.s, "oversampling (default 5)");
    model->add_option("--q", model_opt.q, "pass count (default 12)");
    model->add_option("--c-mul", model_opt.c_mul, "multiply constant");
    model->add_option("--c-qr", model_opt.c_qr, "QR constant");
    model->add_option("--c-lu", model_opt.c_lu, "LU constant");
    model->add_option("--c-svd", model_opt.c_svd, "SVD constant");
    model->add_option("--c-eig", model_opt.c_eig, "eigendecomposition constant");
    model->add_option("--out", model_opt.out, "JSON output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadArgs;
    }

    try {
        if (run->parsed()) {
            run_opt.p_given = p_opt->count() > 0;
            return cmd_run(run_opt);
        }
        if (gen->parsed()) return cmd_gen(gen_opt);
        if (sp->parsed()) return cmd_sparsify(sp_opt);
        if (bench->parsed()) return cmd_bench(bench_opt);
        if (model->parsed()) return cmd_model(model_opt);
    } catch (const frpca::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const frpca::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
