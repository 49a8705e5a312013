#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "generators.hpp"
#include "jacobi.hpp"
#include "matrix_io.hpp"

namespace structnorm {

struct ExperimentOptions {
    int figure = 2;
    Index n = 0; // 0 selects default_experiment_n(figure)
    std::uint64_t seed = 42;
    std::filesystem::path out_dir = ".";
    Index sweeps = 20;
};

struct ExperimentOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary; // key=value lines
};

/// Half dimension used by each figure of the experiment suite.
inline Index default_experiment_n(int figure) {
    switch (figure) {
    case 1: return 25;
    case 2: return 50;
    case 3: return 25;
    case 4: return 25;
    }
    throw Error("unknown figure " + std::to_string(figure) + " (expected 1, 2, 3 or 4)");
}

/// Random rotations multiplied into the diagonalizing unitary of a normal fixture.
inline Index default_fixture_rotations(HalfDimension half) {
    return 4 * half.value() * half.value();
}

/// Sweep `count` times without a stopping test; entry 0 holds the input.
inline std::vector<SweepSummary<double>> run_sweeps(const ComplexMatrix& a, Structure tag, Ordering ordering,
                                                    Index count, JacobiTrace<double>* trace = nullptr) {
    SolverConfig config;
    config.ordering = ordering;
    auto state = initial_state(a);
    std::vector<SweepSummary<double>> history{{0, diag_norm_sq(a), offdiag_norm_sq(a)}};
    for (Index k = 0; k < count; ++k) {
        sweep_once(state, tag, config, trace);
        history.push_back({state.sweep, diag_norm_sq(state.a), offdiag_norm_sq(state.a)});
    }
    return history;
}

namespace detail {

inline void write_history(const std::filesystem::path& path, const std::vector<SweepSummary<double>>& history,
                          double frob, const std::vector<std::string>& comments = {}) {
    auto out = open_out(path);
    for (const auto& c : comments)
        out << "# " << c << '\n';
    out << "sweep,diag_norm,frob_norm,offdiag_norm\n";
    for (const auto& h : history)
        out << h.sweep << ',' << format_real(std::sqrt(h.diag_norm_sq)) << ',' << format_real(frob) << ','
            << format_real(std::sqrt(h.offdiag_norm_sq)) << '\n';
}

inline std::string kv(const std::string& key, double value) {
    return key + "=" + format_real(value);
}

inline void history_run(ExperimentOutput& out, const std::filesystem::path& dir, const std::string& stem,
                        const ComplexMatrix& a, Structure tag, Ordering ordering, Index sweeps, bool with_trace,
                        const std::vector<std::string>& comments = {}) {
    JacobiTrace<double> trace;
    const auto history = run_sweeps(a, tag, ordering, sweeps, with_trace ? &trace : nullptr);
    const double frob = frob_norm(a);
    const auto csv = dir / (stem + ".csv");
    write_history(csv, history, frob, comments);
    out.files.push_back(csv);
    if (with_trace) {
        const auto tpath = dir / (stem + "_trace.csv");
        write_trace_file(tpath, trace);
        out.files.push_back(tpath);
    }
    out.summary.push_back(stem + "." + kv("frob_norm", frob));
    out.summary.push_back(stem + "." + kv("final_diag_norm", std::sqrt(history.back().diag_norm_sq)));
    out.summary.push_back(stem + "." + kv("final_offdiag_norm", std::sqrt(history.back().offdiag_norm_sq)));
}

} // namespace detail

/// Writes the CSV data behind one figure of the experiment suite into
/// options.out_dir. Output depends only on (figure, n, seed, sweeps).
///
///   1: |entries| of a random Hamiltonian after sweeps 0..3, plus norms per sweep
///   2: ||diag||_F per sweep, generic vs diagonalizable Hamiltonian
///   3: ||diag||_F per sweep, skew-Hamiltonian without vs with real eigenvalues
///   4: the figure 2 pair under orderings o1 and o2, with per-step traces
inline ExperimentOutput run_experiment(const ExperimentOptions& options) {
    const Index n = options.n > 0 ? options.n : default_experiment_n(options.figure);
    const HalfDimension half(n);
    if (options.sweeps < 1)
        throw Error("experiment needs at least one sweep");
    std::filesystem::create_directories(options.out_dir);
    const auto& dir = options.out_dir;
    ExperimentOutput out;
    out.summary.push_back("figure=" + std::to_string(options.figure));
    out.summary.push_back("n=" + std::to_string(n));
    out.summary.push_back("seed=" + std::to_string(options.seed));

    switch (options.figure) {
    case 1: {
        const ComplexMatrix a = gen_structured(Structure::hamiltonian, half, options.seed);
        auto state = initial_state(a);
        std::vector<SweepSummary<double>> history{{0, diag_norm_sq(a), offdiag_norm_sq(a)}};
        for (Index k = 0; k <= 3; ++k) {
            if (k > 0) {
                sweep_once(state, Structure::hamiltonian, SolverConfig{});
                history.push_back({k, diag_norm_sq(state.a), offdiag_norm_sq(state.a)});
            }
            const auto grid = dir / ("figure1_sweep" + std::to_string(k) + ".csv");
            auto f = detail::open_out(grid);
            write_abs_grid(f, state.a);
            out.files.push_back(grid);
        }
        const auto norms = dir / "figure1_norms.csv";
        detail::write_history(norms, history, frob_norm(a));
        out.files.push_back(norms);
        for (const auto& h : history)
            out.summary.push_back("sweep" + std::to_string(h.sweep) + "." +
                                  detail::kv("offdiag_norm", std::sqrt(h.offdiag_norm_sq)));
        break;
    }
    case 2:
    case 4: {
        const ComplexMatrix generic = gen_structured(Structure::hamiltonian, half, options.seed);
        const auto fixture =
            gen_normal_structured(Structure::hamiltonian, half, options.seed, default_fixture_rotations(half));
        const std::string prefix = "figure" + std::to_string(options.figure) + "_";
        if (options.figure == 2) {
            detail::history_run(out, dir, prefix + "generic", generic, Structure::hamiltonian, Ordering::o1,
                                options.sweeps, false);
            detail::history_run(out, dir, prefix + "diagonalizable", fixture.a, Structure::hamiltonian, Ordering::o1,
                                options.sweeps, false);
        } else {
            for (Ordering ord : {Ordering::o1, Ordering::o2}) {
                const std::string suffix = "_" + std::string(to_string(ord));
                detail::history_run(out, dir, prefix + "generic" + suffix, generic, Structure::hamiltonian, ord,
                                    options.sweeps, true);
                detail::history_run(out, dir, prefix + "diagonalizable" + suffix, fixture.a, Structure::hamiltonian,
                                    ord, options.sweeps, true);
            }
        }
        break;
    }
    case 3: {
        const Index real_count = std::max<Index>(1, n / 5);
        const ComplexMatrix plain = gen_structured(Structure::skew_hamiltonian, half, options.seed);
        const ComplexMatrix planted = gen_skew_hamiltonian_with_real_eigenvalues(half, options.seed, real_count,
                                                                                 default_fixture_rotations(half));
        detail::history_run(out, dir, "figure3_no_real", plain, Structure::skew_hamiltonian, Ordering::o1,
                            options.sweeps, false,
                            {"random skew-Hamiltonian (standard normal blocks); real eigenvalues occur with "
                             "probability zero"});
        detail::history_run(
            out, dir, "figure3_some_real", planted, Structure::skew_hamiltonian, Ordering::o1, options.sweeps, false,
            {"skew-Hamiltonian U [[T, W], [0, T^H]] U^H: T upper triangular with the first " +
                 std::to_string(real_count) + " diagonal entries real (each a double real eigenvalue),",
             "W skew-Hermitian, U a product of " + std::to_string(default_fixture_rotations(half)) +
                 " random unitary symplectic rotations"});
        break;
    }
    default:
        throw Error("unknown figure " + std::to_string(options.figure) + " (expected 1, 2, 3 or 4)");
    }
    return out;
}

} // namespace structnorm
