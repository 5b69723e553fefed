#pragma once

#include "parsvm/dataset.hpp"
#include "parsvm/multiclass.hpp"
#include "parsvm/parallel.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace parsvm {

/// One cell of a timing sweep. Timings are medians over repeats; speedups are ratios of
/// matched medians (baseline seconds / row seconds).
struct bench_row {
    std::string dataset;
    std::size_t k_per_class = 0;
    std::size_t classes = 0;
    solver_id solver = solver_id::smo;
    bool parallel = false;
    std::size_t workers = 1;
    double seconds = 0.0;
    double converged_frac = 0.0;
    double accuracy = 0.0;
    bool skipped = false;

    /// Against the gd row that differs only in solver.
    std::optional<double> speedup_vs_gd;
    /// Against the workers = 1 row that differs only in workers.
    std::optional<double> speedup_vs_workers1;
    /// Against the parallel = off row that differs only in the parallel flag.
    std::optional<double> speedup_vs_parallel_off;
};

struct sweep_config {
    std::string dataset_name = "data";
    std::vector<std::size_t> samples_per_class;
    std::vector<solver_id> solvers{ solver_id::smo };
    std::vector<bool> parallel{ false };
    std::vector<std::size_t> workers{ 1 };
    schedule policy = schedule::dynamic_queue;
    std::size_t repeats = 3;
    std::uint64_t seed = 0;
    /// Solver settings; `solver` and `exec.parallel` are overridden per cell.
    trainer_config trainer;
};

/// Median; even-length input averages the two middle values.
[[nodiscard]] double median(std::vector<double> values);

/// Fills the speedup columns of every non-skipped row.
void compute_speedups(std::vector<bench_row> &rows);

/// Trains every (k, solver, parallel, workers) cell on subset_per_class(ds, k, seed), timing only the
/// training call. Cells whose k exceeds a class size are reported as skipped.
[[nodiscard]] std::vector<bench_row> run_sweep(const dataset &ds, const sweep_config &cfg);

/// Fixed header line of the report CSV.
[[nodiscard]] const std::string &report_header();
void write_report_csv(std::ostream &out, const std::vector<bench_row> &rows);
[[nodiscard]] std::vector<bench_row> read_report_csv(std::istream &in);

}  // namespace parsvm
