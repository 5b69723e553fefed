#include "parsvm/bench.hpp"

#include "parsvm/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

namespace parsvm {

double median(std::vector<double> values) {
    if (values.empty()) {
        throw precondition_error{ "median of an empty sample" };
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return (values[mid - 1] + values[mid]) / 2.0;
}

namespace {

bool same_except(const bench_row &a, const bench_row &b, bool solver, bool parallel, bool workers) {
    return a.dataset == b.dataset && a.k_per_class == b.k_per_class && a.classes == b.classes &&
           (solver || a.solver == b.solver) && (parallel || a.parallel == b.parallel) &&
           (workers || a.workers == b.workers);
}

template <typename Pred>
std::optional<double> ratio_to(const std::vector<bench_row> &rows, const bench_row &row, Pred is_baseline) {
    for (const auto &other : rows) {
        if (!other.skipped && is_baseline(other)) {
            return other.seconds / row.seconds;
        }
    }
    return std::nullopt;
}

}  // namespace

void compute_speedups(std::vector<bench_row> &rows) {
    for (auto &row : rows) {
        row.speedup_vs_gd.reset();
        row.speedup_vs_workers1.reset();
        row.speedup_vs_parallel_off.reset();
        if (row.skipped || !(row.seconds > 0.0)) {
            continue;
        }
        row.speedup_vs_gd = ratio_to(rows, row, [&](const bench_row &o) {
            return o.solver == solver_id::gd && same_except(o, row, true, false, false);
        });
        row.speedup_vs_workers1 = ratio_to(rows, row, [&](const bench_row &o) {
            return o.workers == 1 && same_except(o, row, false, false, true);
        });
        row.speedup_vs_parallel_off = ratio_to(rows, row, [&](const bench_row &o) {
            return !o.parallel && same_except(o, row, false, true, false);
        });
    }
}

std::vector<bench_row> run_sweep(const dataset &ds, const sweep_config &cfg) {
    if (cfg.repeats == 0) {
        throw precondition_error{ "repeats must be positive" };
    }
    std::vector<bench_row> rows;
    for (const auto k : cfg.samples_per_class) {
        std::optional<dataset> subset;
        try {
            subset = subset_per_class(ds, k, cfg.seed);
        } catch (const precondition_error &) {
            subset.reset();
        }
        for (const auto solver : cfg.solvers) {
            for (const bool parallel : cfg.parallel) {
                for (const auto workers : cfg.workers) {
                    bench_row row;
                    row.dataset = cfg.dataset_name;
                    row.k_per_class = k;
                    row.classes = ds.num_classes();
                    row.solver = solver;
                    row.parallel = parallel;
                    row.workers = workers;
                    if (!subset) {
                        row.skipped = true;
                        rows.push_back(std::move(row));
                        continue;
                    }
                    trainer_config trainer = cfg.trainer;
                    trainer.solver = solver;
                    trainer.exec.parallel = parallel;
                    const pool_config pool{ workers, cfg.policy };

                    std::vector<double> times;
                    multiclass_model model;
                    for (std::size_t r = 0; r < cfg.repeats; ++r) {
                        const auto start = std::chrono::steady_clock::now();
                        model = train_one_vs_one(*subset, trainer, pool);
                        const auto stop = std::chrono::steady_clock::now();
                        times.push_back(std::chrono::duration<double>(stop - start).count());
                    }
                    row.seconds = median(times);
                    row.converged_frac = model.converged_fraction();
                    row.accuracy = evaluate_accuracy(model, *subset);
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    compute_speedups(rows);
    return rows;
}

const std::string &report_header() {
    static const std::string header =
        "dataset,k_per_class,classes,solver,parallel,workers,seconds,converged_frac,accuracy,"
        "speedup_vs_gd,speedup_vs_workers1,speedup_vs_parallel_off,status";
    return header;
}

namespace {

std::string opt(const std::optional<double> &v) {
    return v ? detail::format_double(*v) : std::string{};
}

std::optional<double> parse_opt(std::string_view cell) {
    if (cell.empty()) {
        return std::nullopt;
    }
    auto v = detail::parse_double(cell);
    if (!v) {
        throw parse_error{ "report: bad number '" + std::string(cell) + "'" };
    }
    return v;
}

}  // namespace

void write_report_csv(std::ostream &out, const std::vector<bench_row> &rows) {
    out << report_header() << '\n';
    for (const auto &r : rows) {
        out << r.dataset << ',' << r.k_per_class << ',' << r.classes << ',' << to_string(r.solver) << ','
            << (r.parallel ? "on" : "off") << ',' << r.workers << ',';
        if (r.skipped) {
            out << ",,,,,,skipped\n";
            continue;
        }
        out << detail::format_double(r.seconds) << ',' << detail::format_double(r.converged_frac) << ','
            << detail::format_double(r.accuracy) << ',' << opt(r.speedup_vs_gd) << ',' << opt(r.speedup_vs_workers1)
            << ',' << opt(r.speedup_vs_parallel_off) << ",ok\n";
    }
}

std::vector<bench_row> read_report_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != report_header()) {
        throw parse_error{ "report: unexpected header" };
    }
    std::vector<bench_row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss{ std::string(detail::trim(line)) };
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 13) {
            throw parse_error{ "report line " + std::to_string(line_no) + ": expected 13 columns" };
        }
        try {
            bench_row r;
            r.dataset = cells[0];
            r.k_per_class = std::stoul(cells[1]);
            r.classes = std::stoul(cells[2]);
            r.solver = parse_solver_id(cells[3]);
            r.parallel = cells[4] == "on";
            r.workers = std::stoul(cells[5]);
            r.skipped = cells[12] == "skipped";
            if (!r.skipped) {
                r.seconds = parse_opt(cells[6]).value_or(0.0);
                r.converged_frac = parse_opt(cells[7]).value_or(0.0);
                r.accuracy = parse_opt(cells[8]).value_or(0.0);
                r.speedup_vs_gd = parse_opt(cells[9]);
                r.speedup_vs_workers1 = parse_opt(cells[10]);
                r.speedup_vs_parallel_off = parse_opt(cells[11]);
            }
            rows.push_back(std::move(r));
        } catch (const std::logic_error &) {
            throw parse_error{ "report line " + std::to_string(line_no) + ": malformed row" };
        }
    }
    return rows;
}

}  // namespace parsvm
