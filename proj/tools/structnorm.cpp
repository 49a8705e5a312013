#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "structnorm/structnorm.hpp"

namespace {

using namespace structnorm;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_input_rejected = 3;
constexpr int exit_numerical = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("STRUCTNORM_SEED")) {
        const long long v = parse_integer(env);
        if (v < 0)
            throw Error("STRUCTNORM_SEED must be non-negative");
        return static_cast<std::uint64_t>(v);
    }
    return 42;
}

void print_kv(const std::string& key, double value) {
    std::cout << key << '=' << format_real(value) << '\n';
}

struct GenArgs {
    std::string structure, out;
    long long n = 0;
    std::optional<std::uint64_t> seed;
    bool normal = false;
    long long rotations = 0;
};

int cmd_gen(const GenArgs& args) {
    const Structure tag = parse_structure(args.structure);
    if (args.n < 1)
        throw Error("--n must be at least 1");
    const HalfDimension half(args.n);
    const std::uint64_t seed = args.seed ? *args.seed : default_seed();
    ComplexMatrix a;
    if (args.normal) {
        const Index rotations = args.rotations > 0 ? args.rotations : default_fixture_rotations(half);
        a = gen_normal_structured(tag, half, seed, rotations).a;
    } else {
        a = gen_structured(tag, half, seed);
    }
    write_matrix_file(args.out, a);
    std::cout << "rows=" << a.rows() << "\ncols=" << a.cols() << "\nstructure=" << to_string(tag)
              << "\nseed=" << seed << '\n';
    print_kv("structure_residual", check_structure(a, tag));
    print_kv("frob_norm", frob_norm(a));
    return exit_ok;
}

struct SolveArgs {
    std::string in, structure, ordering = "o1", out_normal, out_z, trace;
    double tol = 1e-14;
    long long max_sweeps = 50;
    bool skip_rule = false;
    double input_tol = 1e-10;
};

int cmd_solve(const SolveArgs& args) {
    const Structure tag = parse_structure(args.structure);
    SolverConfig config;
    config.ordering = parse_ordering(args.ordering);
    config.tol = args.tol;
    config.max_sweeps = args.max_sweeps;
    config.skip_rule = args.skip_rule;
    config.trace = !args.trace.empty();
    if (!(config.tol > 0) || config.max_sweeps < 1)
        throw Error("need --tol > 0 and --max-sweeps >= 1");
    const ComplexMatrix a = read_matrix_file(args.in);

    double residual = 0;
    try {
        if (a.rows() % 2 != 0)
            throw Error("odd dimension " + std::to_string(a.rows()));
        residual = check_structure(a, tag);
    } catch (const Error& e) {
        std::cerr << "structnorm: input rejected: " << e.what() << '\n';
        return exit_input_rejected;
    }
    if (!(residual <= args.input_tol) || !all_finite(a)) {
        std::cerr << "structnorm: input is not " << to_string(tag) << " (residual " << format_real(residual)
                  << ")\n";
        return exit_input_rejected;
    }

    NearestNormalResult<double> result;
    try {
        result = solve(a, tag, config);
    } catch (const Error& e) {
        std::cerr << "structnorm: solve failed: " << e.what() << '\n';
        return exit_numerical;
    }

    write_matrix_file(args.out_normal, result.x);
    write_matrix_file(args.out_z, result.z);
    if (!args.trace.empty())
        write_trace_file(args.trace, result.trace);

    const double frob = frob_norm(a);
    std::cout << "structure=" << to_string(tag) << "\nordering=" << to_string(config.ordering)
              << "\nsweeps=" << result.sweeps << "\nconverged=" << (result.converged ? 1 : 0) << '\n';
    print_kv("frob_norm", frob);
    print_kv("distance", result.distance);
    print_kv("offdiag_norm", std::sqrt(offdiag_norm_sq(result.a_final)));
    print_kv("structure_residual", check_structure(result.x, tag));
    print_kv("normality_residual", normality_residual(result.x));
    print_kv("grad_norm", result.final_grad_norm);
    if (!result.converged)
        std::cout << "warning=not_converged\n";
    return exit_ok;
}

int cmd_verify(const std::string& in, const std::string& structure, double tol) {
    const Structure tag = parse_structure(structure);
    const ComplexMatrix a = read_matrix_file(in);
    const double residual = check_structure(a, tag);
    print_kv("residual", residual);
    const bool ok = residual <= tol && all_finite(a);
    std::cout << "ok=" << (ok ? 1 : 0) << '\n';
    return ok ? exit_ok : exit_check_failed;
}

int cmd_distance(const std::string& a_path, const std::string& b_path) {
    print_kv("distance", distance_to(read_matrix_file(a_path), read_matrix_file(b_path)));
    return exit_ok;
}

int cmd_normality(const std::string& in) {
    const ComplexMatrix a = read_matrix_file(in);
    if (a.rows() != a.cols())
        throw Error("normality: matrix is not square");
    const double res = normality_residual(a);
    const double scale = a.squaredNorm();
    print_kv("normality_residual", res);
    print_kv("relative", scale > 0 ? res / scale : 0.0);
    return exit_ok;
}

int cmd_experiment(int figure, long long n, std::optional<std::uint64_t> seed, const std::string& out_dir,
                   long long sweeps) {
    ExperimentOptions options;
    options.figure = figure;
    options.n = n;
    options.seed = seed ? *seed : default_seed();
    options.out_dir = out_dir;
    options.sweeps = sweeps;
    const auto out = run_experiment(options);
    for (const auto& line : out.summary)
        std::cout << line << '\n';
    for (const auto& f : out.files)
        std::cout << "file=" << f.string() << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nearest structured normal matrix via structure-preserving Jacobi rotations"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate a random structured matrix");
    gen->add_option("--structure", gen_args.structure, "hamiltonian|skew-hamiltonian|per-hermitian|perskew-hermitian")
        ->required();
    gen->add_option("--n", gen_args.n, "Half dimension (matrix is 2n x 2n)")->required();
    gen->add_option("--seed", gen_args.seed, "RNG seed (default STRUCTNORM_SEED or 42)");
    gen->add_flag("--normal", gen_args.normal, "Generate U D U^H, diagonalizable by the structure's rotations");
    gen->add_option("--rotations", gen_args.rotations, "Rotations in U for --normal (default 4 n^2)");
    gen->add_option("--out", gen_args.out, "Output matrix file")->required();

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Compute the nearest structured normal matrix");
    solve_cmd->add_option("--in", solve_args.in, "Input matrix file")->required();
    solve_cmd->add_option("--structure", solve_args.structure, "Structure of the input")->required();
    solve_cmd->add_option("--ordering", solve_args.ordering, "Pivot ordering o1|o2")->capture_default_str();
    solve_cmd->add_option("--tol", solve_args.tol, "Relative sweep-gain tolerance")->capture_default_str();
    solve_cmd->add_option("--max-sweeps", solve_args.max_sweeps, "Sweep limit")->capture_default_str();
    solve_cmd->add_flag("--skip-rule", solve_args.skip_rule, "Skip pivots failing the gradient condition");
    solve_cmd->add_option("--input-tol", solve_args.input_tol, "Structure tolerance for the input")
        ->capture_default_str();
    solve_cmd->add_option("--out-normal", solve_args.out_normal, "Output file for X")->required();
    solve_cmd->add_option("--out-z", solve_args.out_z, "Output file for Z")->required();
    solve_cmd->add_option("--trace", solve_args.trace, "Per-step trace CSV");

    std::string verify_in, verify_structure;
    double verify_tol = 1e-12;
    auto* verify = app.add_subcommand("verify", "Check a matrix against a structure");
    verify->add_option("--in", verify_in, "Matrix file")->required();
    verify->add_option("--structure", verify_structure, "Structure")->required();
    verify->add_option("--tol", verify_tol, "Residual tolerance")->capture_default_str();

    std::string dist_a, dist_b;
    auto* distance = app.add_subcommand("distance", "Frobenius distance between two matrices");
    distance->add_option("--a", dist_a, "First matrix file")->required();
    distance->add_option("--b", dist_b, "Second matrix file")->required();

    std::string normal_in;
    auto* normality = app.add_subcommand("normality", "Normality residual ||X X^H - X^H X||_F");
    normality->add_option("--in", normal_in, "Matrix file")->required();

    int figure = 0;
    long long exp_n = 0, exp_sweeps = 20;
    std::optional<std::uint64_t> exp_seed;
    std::string exp_dir = ".";
    auto* experiment = app.add_subcommand("experiment", "Write the CSV data of one convergence figure");
    experiment->add_option("--figure", figure, "1, 2, 3 or 4")->required()->check(CLI::Range(1, 4));
    experiment->add_option("--n", exp_n, "Half dimension (default per figure: 25, 50, 25, 25)");
    experiment->add_option("--seed", exp_seed, "RNG seed (default STRUCTNORM_SEED or 42)");
    experiment->add_option("--out-dir", exp_dir, "Output directory")->capture_default_str();
    experiment->add_option("--sweeps", exp_sweeps, "Sweeps per run")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*gen)
            return cmd_gen(gen_args);
        if (*solve_cmd)
            return cmd_solve(solve_args);
        if (*verify)
            return cmd_verify(verify_in, verify_structure, verify_tol);
        if (*distance)
            return cmd_distance(dist_a, dist_b);
        if (*normality)
            return cmd_normality(normal_in);
        if (*experiment)
            return cmd_experiment(figure, exp_n, exp_seed, exp_dir, exp_sweeps);
    } catch (const std::exception& e) {
        std::cerr << "structnorm: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
