// einsvd — extremal singular triplets of dense tensors under the Einstein
// product, plus compression and recognition pipelines built on them.
//
// Subcommands: svd, compress, pca-train, pca-query, bench.  Every command is
// deterministic: the same flags (including --seed) produce bit-identical
// artifacts except for the wall-clock `seconds` fields, which are the only
// values allowed to vary between runs.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 precondition/shape, 4 numerical,
// 5 capacity.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "einsvd/compress.hpp"
#include "einsvd/eten_io.hpp"
#include "einsvd/pca.hpp"
#include "einsvd/prng.hpp"
#include "einsvd/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace einsvd;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Shape parse_shape(const std::string& text) {
    std::vector<std::size_t> extents;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find('x', pos);
        const std::string part = text.substr(pos, next == std::string::npos ? next : next - pos);
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(part, &used);
            if (used != part.size() || v == 0) throw std::invalid_argument(part);
            extents.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw usage_error("--shape expects positive extents like 20x10x20x10, got '" +
                              text + "'");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (extents.size() < 2) throw usage_error("--shape needs at least two extents");
    return Shape(extents);
}

Target parse_target(const std::string& name) {
    if (name == "largest") return Target::largest;
    if (name == "smallest") return Target::smallest;
    throw usage_error("--target must be 'largest' or 'smallest'");
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    return out;
}

void write_json(const fs::path& path, const ordered_json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Flags shared by the tensor-consuming commands.
struct TensorInput {
    std::string input;   // path to an .eten file
    std::string shape;   // alternative: synthesize from extents + seed
    std::size_t split = 0;  // leading row modes; 0 = half the order
    std::uint64_t seed = 42;
};

void add_tensor_flags(CLI::App* cmd, TensorInput& in) {
    cmd->add_option("--input", in.input, "input tensor (.eten)");
    cmd->add_option("--shape", in.shape,
                    "extents of a synthetic gaussian tensor, e.g. 20x10x20x10");
    cmd->add_option("--split", in.split,
                    "number of leading row modes (default: half the order)");
    cmd->add_option("--seed", in.seed, "generator seed")->capture_default_str();
}

SplitTensor obtain_tensor(const TensorInput& in) {
    if (!in.input.empty() && !in.shape.empty())
        throw usage_error("--input and --shape are mutually exclusive");
    DenseTensor t = [&] {
        if (!in.input.empty()) return read_eten(in.input);
        if (!in.shape.empty()) return normal_tensor(parse_shape(in.shape), in.seed);
        throw usage_error("either --input or --shape is required");
    }();
    const std::size_t order = t.shape().order();
    if (order < 2)
        throw precondition_error("an operator tensor needs at least two modes");
    const std::size_t split = in.split == 0 ? order / 2 : in.split;
    if (split >= order)
        throw precondition_error("--split = " + std::to_string(split) +
                                 " leaves no column modes on an order-" +
                                 std::to_string(order) + " tensor");
    return SplitTensor(std::move(t), split);
}

struct SolveFlags {
    std::string method = "ritz";
    std::size_t m = 15;
    std::size_t k = 4;
    double epsilon = 1e-8;
    std::size_t max_restarts = 1000;
    std::string target = "largest";
    std::size_t threads = 1;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& sf, bool with_method = true) {
    if (with_method)
        cmd->add_option("--method", sf.method, "solver: exact, lb or ritz")->capture_default_str()
            ->check(CLI::IsMember({"exact", "lb", "ritz"}));
    cmd->add_option("-m", sf.m, "bidiagonalization steps per cycle")->capture_default_str();
    cmd->add_option("--eps", sf.epsilon, "convergence tolerance")->capture_default_str();
    cmd->add_option("--max-restarts", sf.max_restarts, "restart cap")->capture_default_str();
    cmd->add_option("--target", sf.target, "largest or smallest values")->capture_default_str()
        ->check(CLI::IsMember({"largest", "smallest"}));
    cmd->add_option("--threads", sf.threads, "worker threads for the applies")->capture_default_str();
}

SolverParams to_params(const SolveFlags& sf, std::uint64_t seed) {
    SolverParams p;
    p.m = sf.m;
    p.epsilon = sf.epsilon;
    p.max_restarts = sf.max_restarts;
    p.seed = seed;
    p.target = parse_target(sf.target);
    p.threads = sf.threads;
    return p;
}

ordered_json run_header(const char* command, const SplitTensor& a, const TensorInput& in,
                        const SolveFlags& sf) {
    ordered_json j;
    j["command"] = command;
    j["shape"] = a.tensor().shape().to_string();
    j["split"] = a.split().row_order;
    j["seed"] = in.seed;
    j["method"] = sf.method;
    j["m"] = sf.m;
    j["epsilon"] = sf.epsilon;
    j["max_restarts"] = sf.max_restarts;
    j["target"] = sf.target;
    j["threads"] = sf.threads;
    return j;
}

// ---------------------------------------------------------------- svd ----

struct SvdOpts {
    TensorInput in;
    SolveFlags solve;
    std::string output;
};

int cmd_svd(const SvdOpts& o) {
    const SplitTensor a = obtain_tensor(o.in);
    const auto start = std::chrono::steady_clock::now();
    const SolveSummary sum =
        top_triplets(a, o.solve.k, parse_method(o.solve.method), to_params(o.solve, o.in.seed));
    const double secs = seconds_since(start);

    const fs::path dir = o.output;
    fs::create_directories(dir);

    std::ofstream csv = open_out(dir / "values.csv");
    csv << "# einsvd-values v1\n";
    csv << "index,value,res_norm,residual_estimate,converged\n";
    for (std::size_t i = 0; i < sum.triplets.size(); ++i) {
        const SingularTriplet& t = sum.triplets[i];
        csv << (i + 1) << ',' << fmt(t.value) << ',' << fmt(res_norm(a, t)) << ','
            << fmt(t.residual_estimate) << ',' << (t.converged ? 1 : 0) << '\n';
    }

    for (std::size_t i = 0; i < sum.triplets.size(); ++i) {
        char name[48];
        std::snprintf(name, sizeof name, "triplet_%03zu", i + 1);
        write_eten(dir / (std::string(name) + "_left.eten"), sum.triplets[i].left);
        write_eten(dir / (std::string(name) + "_right.eten"), sum.triplets[i].right);
    }

    ordered_json j = run_header("svd", a, o.in, o.solve);
    j["k"] = o.solve.k;
    j["iterations"] = sum.iterations;
    j["converged"] = sum.converged;
    j["gres"] = gres_norm(a, sum.triplets);
    ordered_json values = ordered_json::array();
    for (const SingularTriplet& t : sum.triplets) values.push_back(t.value);
    j["values"] = values;
    j["seconds"] = secs;
    write_json(dir / "summary.json", j);
    return 0;
}

// ----------------------------------------------------------- compress ----

struct CompressOpts {
    TensorInput in;
    SolveFlags solve;
    std::vector<std::size_t> ks{1, 5, 10};
    bool emit_approx = false;
    std::string output;
};

int cmd_compress(const CompressOpts& o) {
    const SplitTensor a = obtain_tensor(o.in);
    const Method method = parse_method(o.solve.method);
    const SolverParams params = to_params(o.solve, o.in.seed);

    const fs::path dir = o.output;
    fs::create_directories(dir);
    std::ofstream csv = open_out(dir / "report.csv");
    csv << "# einsvd-compress v1\n";
    csv << "k,relative_error,iterations,converged,seconds\n";

    ordered_json j = run_header("compress", a, o.in, o.solve);
    ordered_json rows = ordered_json::array();
    for (std::size_t k : o.ks) {
        const auto start = std::chrono::steady_clock::now();
        const CompressionResult r = compress(a, k, method, params);
        const double secs = seconds_since(start);
        csv << k << ',' << fmt(r.relative_error) << ',' << r.iterations << ','
            << (r.converged ? 1 : 0) << ',' << fmt(secs) << '\n';
        rows.push_back({{"k", k},
                        {"relative_error", r.relative_error},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"seconds", secs}});
        if (o.emit_approx) {
            char name[48];
            std::snprintf(name, sizeof name, "approx_%03zu.eten", k);
            write_eten(dir / name, r.approximation.tensor());
        }
    }
    j["results"] = rows;
    write_json(dir / "summary.json", j);
    return 0;
}

// -------------------------------------------------------------- bench ----

struct BenchOpts {
    TensorInput in;
    SolveFlags solve;
    std::vector<std::string> methods{"exact", "lb", "ritz"};
    std::string output;
};

int cmd_bench(const BenchOpts& o) {
    if (o.in.shape.empty())
        throw usage_error("bench synthesizes its tensor: --shape and --seed are required");
    const SplitTensor a = obtain_tensor(o.in);
    const SolverParams params = to_params(o.solve, o.in.seed);

    const fs::path dir = o.output;
    fs::create_directories(dir);
    std::ofstream csv = open_out(dir / "bench.csv");
    csv << "# einsvd-bench v1\n";
    csv << "method,m,k,gres,iterations,converged,seconds\n";
    for (const std::string& name : o.methods) {
        const auto start = std::chrono::steady_clock::now();
        const SolveSummary sum = top_triplets(a, o.solve.k, parse_method(name), params);
        const double secs = seconds_since(start);
        csv << name << ',' << o.solve.m << ',' << o.solve.k << ','
            << fmt(gres_norm(a, sum.triplets)) << ',' << sum.iterations << ','
            << (sum.converged ? 1 : 0) << ',' << fmt(secs) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------- pca-train ----

struct TrainOpts {
    std::string input;
    std::string output;
    std::string summary;
    SolveFlags solve;
    std::uint64_t seed = 42;
};

int cmd_pca_train(const TrainOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    const LabeledImages train = load_image_dataset(o.input);
    const PcaModel model =
        pca_train(train, o.solve.k, parse_method(o.solve.method), to_params(o.solve, o.seed));
    fs::create_directories(fs::path(o.output).parent_path());
    save_model(o.output, model);
    const double secs = seconds_since(start);

    if (!o.summary.empty()) {
        ordered_json j;
        j["command"] = "pca-train";
        j["method"] = o.solve.method;
        j["k"] = o.solve.k;
        j["n_train"] = train.size();
        j["rows"] = model.rows;
        j["cols"] = model.cols;
        j["channels"] = model.channels;
        j["iterations"] = model.iterations;
        j["converged"] = model.converged;
        j["seconds"] = secs;
        write_json(o.summary, j);
    }
    std::printf("trained %zu samples, k=%zu, %s\n", train.size(), o.solve.k,
                model.converged ? "converged" : "not converged");
    return 0;
}

// ---------------------------------------------------------- pca-query ----

struct QueryOpts {
    std::string model;
    std::string input;
    std::string output;
    std::string summary;
};

int cmd_pca_query(const QueryOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    const PcaModel model = load_model(o.model);
    const LabeledImages tests = load_image_dataset(o.input);

    fs::create_directories(fs::path(o.output).parent_path());
    std::ofstream csv = open_out(o.output);
    csv << "# einsvd-query v1\n";
    csv << "index,truth,predicted,distance,train_index,match\n";
    std::size_t recognized = 0;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const QueryResult q = pca_query(model, tests.images[i]);
        const bool match = q.label == tests.labels[i];
        if (match) ++recognized;
        csv << (i + 1) << ',' << tests.labels[i] << ',' << q.label << ',' << fmt(q.distance)
            << ',' << q.train_index << ',' << (match ? 1 : 0) << '\n';
    }
    const double secs = seconds_since(start);

    if (!o.summary.empty()) {
        const RecognitionStats stats = identification_rate(model, tests);
        ordered_json j;
        j["command"] = "pca-query";
        j["tested"] = stats.tested;
        j["recognized"] = stats.recognized;
        j["identification_rate"] = stats.rate;
        j["seconds"] = secs;
        write_json(o.summary, j);
    }
    std::printf("recognized %zu of %zu\n", recognized, tests.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singular triplets of dense tensors under the Einstein product"};
    app.require_subcommand(1);

    SvdOpts svd_opts;
    CLI::App* svd_cmd = app.add_subcommand("svd", "compute extremal singular triplets");
    add_tensor_flags(svd_cmd, svd_opts.in);
    add_solver_flags(svd_cmd, svd_opts.solve);
    svd_cmd->add_option("-k", svd_opts.solve.k, "number of triplets")->capture_default_str();
    svd_cmd->add_option("--output", svd_opts.output, "artifact directory")->required();

    CompressOpts comp_opts;
    CLI::App* comp_cmd = app.add_subcommand("compress", "truncated reconstruction error sweep");
    add_tensor_flags(comp_cmd, comp_opts.in);
    add_solver_flags(comp_cmd, comp_opts.solve);
    comp_cmd->add_option("-k", comp_opts.ks, "ranks to test (comma separated)")
        ->delimiter(',');
    comp_cmd->add_flag("--emit-approx", comp_opts.emit_approx,
                       "also write each rank-k tensor as approx_<k>.eten");
    comp_cmd->add_option("--output", comp_opts.output, "artifact directory")->required();

    BenchOpts bench_opts;
    CLI::App* bench_cmd = app.add_subcommand("bench", "time the methods on one synthetic tensor");
    add_tensor_flags(bench_cmd, bench_opts.in);
    add_solver_flags(bench_cmd, bench_opts.solve, false);
    bench_cmd->add_option("--method", bench_opts.methods, "methods to run (comma separated)")
        ->delimiter(',')
        ->check(CLI::IsMember({"exact", "lb", "ritz"}));
    bench_cmd->add_option("-k", bench_opts.solve.k, "number of triplets")->capture_default_str();
    bench_cmd->add_option("--output", bench_opts.output, "artifact directory")->required();

    TrainOpts train_opts;
    train_opts.solve.method = "exact";
    train_opts.solve.k = 5;
    CLI::App* train_cmd = app.add_subcommand("pca-train", "train a recognition subspace model");
    train_cmd->add_option("--input", train_opts.input, "dataset root (<label>/<image>.ppm)")
        ->required();
    train_cmd->add_option("--output", train_opts.output, "model file to write (.epca)")
        ->required();
    train_cmd->add_option("--summary", train_opts.summary, "optional JSON summary path");
    add_solver_flags(train_cmd, train_opts.solve);
    train_cmd->add_option("-k", train_opts.solve.k, "subspace dimension")->capture_default_str();
    train_cmd->add_option("--seed", train_opts.seed, "solver seed")->capture_default_str();

    QueryOpts query_opts;
    CLI::App* query_cmd = app.add_subcommand("pca-query", "label test images with a model");
    query_cmd->add_option("--model", query_opts.model, "trained model (.epca)")->required();
    query_cmd->add_option("--input", query_opts.input, "dataset root of query images")
        ->required();
    query_cmd->add_option("--output", query_opts.output, "results CSV path")->required();
    query_cmd->add_option("--summary", query_opts.summary, "optional JSON summary path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (svd_cmd->parsed()) return cmd_svd(svd_opts);
        if (comp_cmd->parsed()) return cmd_compress(comp_opts);
        if (bench_cmd->parsed()) return cmd_bench(bench_opts);
        if (train_cmd->parsed()) return cmd_pca_train(train_opts);
        if (query_cmd->parsed()) return cmd_pca_query(query_opts);
        std::fprintf(stderr, "error: no subcommand selected\n");
        return 1;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const capacity_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const error& e) {
        // shape, index and precondition violations all mean the request was
        // inconsistent with the data.
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 4;
    }
}
