#include "cli.hpp"

#include "parsvm/bench.hpp"
#include "parsvm/dataset.hpp"
#include "parsvm/errors.hpp"
#include "parsvm/model_io.hpp"
#include "parsvm/multiclass.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace parsvm::cli {

namespace {

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct data_flags {
    std::string path;
    std::string format = "libsvm";
    int label_col = -1;
    std::string normalize = "zscore";
};

struct solver_flags {
    std::string kernel = "rbf";
    std::optional<double> gamma;
    double c = 1.0;
    double tol = 1e-3;
    std::size_t max_iter = 0;
    std::size_t check_interval = 64;
    double lr = 0.01;
    std::size_t epochs = 1000;
    std::string gd_projection = "feasible";
    std::size_t threads = 0;
    std::string schedule = "dynamic";
    std::uint64_t seed = 0;
};

void add_data_flags(CLI::App &cmd, data_flags &flags, bool required) {
    auto *data = cmd.add_option("--data", flags.path, "Input data file");
    if (required) {
        data->required();
    }
    cmd.add_option("--format", flags.format, "Input format")->check(CLI::IsMember({ "libsvm", "csv" }));
    cmd.add_option("--label-col", flags.label_col, "CSV label column (0-based, default: last)");
    cmd.add_option("--normalize", flags.normalize, "Feature scaling")->check(CLI::IsMember({ "zscore", "none" }));
}

void add_solver_flags(CLI::App &cmd, solver_flags &flags) {
    cmd.add_option("--kernel", flags.kernel, "Kernel function")->check(CLI::IsMember({ "linear", "rbf" }));
    cmd.add_option("--gamma", flags.gamma, "RBF width (default 1/d)")->check(CLI::PositiveNumber);
    cmd.add_option("--c", flags.c, "Box constraint C")->check(CLI::PositiveNumber);
    cmd.add_option("--tol", flags.tol, "SMO KKT tolerance")->check(CLI::PositiveNumber);
    cmd.add_option("--max-iter", flags.max_iter, "SMO iteration limit (0: max(10n, 10000))");
    cmd.add_option("--check-interval", flags.check_interval, "SMO iterations between convergence checks")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--lr", flags.lr, "Gradient ascent learning rate")->check(CLI::PositiveNumber);
    cmd.add_option("--epochs", flags.epochs, "Gradient ascent epochs");
    cmd.add_option("--gd-projection", flags.gd_projection, "Gradient ascent feasible set")
        ->check(CLI::IsMember({ "feasible", "box" }));
    cmd.add_option("--threads", flags.threads, "Threads per binary solve when --parallel on (0: auto)");
    cmd.add_option("--schedule", flags.schedule, "Worker pool schedule")->check(CLI::IsMember({ "static", "dynamic" }));
    cmd.add_option("--seed", flags.seed, "Seed for every random choice");
}

std::size_t csv_column_count(const std::string &path) {
    std::ifstream in{ path };
    if (!in) {
        throw error{ "cannot open " + path };
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
        }
    }
    throw parse_error{ path + ": empty file" };
}

dataset load_data(const data_flags &flags) {
    if (flags.format == "csv") {
        const std::size_t label_col =
            flags.label_col >= 0 ? static_cast<std::size_t>(flags.label_col) : csv_column_count(flags.path) - 1;
        return load_csv(flags.path, label_col);
    }
    return load_libsvm(flags.path);
}

trainer_config make_trainer(const solver_flags &flags, std::size_t d) {
    trainer_config cfg;
    kernel_spec kernel = kernel_spec::linear();
    if (flags.kernel == "rbf") {
        kernel = flags.gamma ? kernel_spec::rbf(*flags.gamma) : kernel_spec::rbf_default(d);
    }
    cfg.smo.c = flags.c;
    cfg.smo.tol = flags.tol;
    cfg.smo.max_iter = flags.max_iter;
    cfg.smo.check_interval = flags.check_interval;
    cfg.smo.kernel = kernel;
    cfg.gd.c = flags.c;
    cfg.gd.learning_rate = flags.lr;
    cfg.gd.epochs = flags.epochs;
    cfg.gd.kernel = kernel;
    cfg.gd.projection = parse_gd_projection(flags.gd_projection);
    cfg.exec.threads = flags.threads;
    return cfg;
}

bool parse_on_off(const std::string &v) {
    return v == "on";
}

// Pads sparse rows with trailing zero features up to d.
dataset widen(const dataset &ds, std::size_t d) {
    std::vector<double> features;
    features.reserve(ds.num_samples() * d);
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
        const auto row = ds.row(i);
        features.insert(features.end(), row.begin(), row.end());
        features.insert(features.end(), d - row.size(), 0.0);
    }
    return dataset{ std::move(features), d, ds.labels(), ds.class_values(), ds.is_normalized() };
}

int cmd_train(const data_flags &dflags, const solver_flags &sflags, const std::string &solver,
              const std::string &parallel, std::size_t workers, const std::string &model_out, std::ostream &out) {
    auto ds = load_data(dflags);
    std::optional<normalization_stats> stats;
    if (dflags.normalize == "zscore") {
        auto [normalized, s] = normalize_zscore(ds);
        ds = std::move(normalized);
        stats = std::move(s);
    }
    auto trainer = make_trainer(sflags, ds.num_features());
    trainer.solver = parse_solver_id(solver);
    trainer.exec.parallel = parse_on_off(parallel);
    const pool_config pool{ workers, parse_schedule(sflags.schedule) };

    const auto start = std::chrono::steady_clock::now();
    auto model = train_one_vs_one(ds, trainer, pool);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    model_file file;
    file.kernel = trainer.solver == solver_id::smo ? trainer.smo.kernel : trainer.gd.kernel;
    file.normalization = stats;
    file.class_values = ds.class_values();
    file.model = std::move(model);
    save_model(model_out, file);

    out << "pairs trained: " << file.model.models.size() << '\n'
        << "training seconds: " << std::setprecision(6) << seconds << '\n'
        << "converged fraction: " << file.model.converged_fraction() << '\n'
        << "training accuracy: " << evaluate_accuracy(file.model, ds) << '\n'
        << "model written to " << model_out << '\n';
    return exit_ok;
}

int cmd_predict(const data_flags &dflags, const std::string &model_path, std::ostream &out, std::ostream &err) {
    const auto file = load_model(model_path);
    auto ds = load_data(dflags);
    const std::size_t d = file.model.num_features;
    if (ds.num_features() != d) {
        if (dflags.format == "libsvm" && ds.num_features() < d) {
            ds = widen(ds, d);
        } else {
            throw dimension_error{ "data feature count does not match the model", d, ds.num_features() };
        }
    }
    if (file.normalization) {
        ds = apply_normalization(ds, *file.normalization);
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
        const int predicted = predict_multiclass(file.model, ds.row(i));
        const double predicted_value = file.class_values[static_cast<std::size_t>(predicted)];
        const double actual_value = ds.class_values()[static_cast<std::size_t>(ds.label(i))];
        if (predicted_value == actual_value) {
            ++correct;
        }
        out << format_number(predicted_value) << '\n';
    }
    err << "accuracy: " << static_cast<double>(correct) / static_cast<double>(ds.num_samples()) << '\n';
    return exit_ok;
}

struct bench_flags {
    std::vector<std::size_t> samples_per_class{ 200, 400, 600, 800 };
    std::vector<std::string> solvers{ "smo" };
    std::vector<std::string> parallel{ "off" };
    std::vector<std::size_t> workers{ 1 };
    std::size_t repeats = 3;
    std::size_t classes = 9;
    std::size_t features = 102;
    double separation = 5.0;
    std::string report_out;
};

int cmd_bench(const data_flags &dflags, const solver_flags &sflags, const bench_flags &bflags, std::ostream &out) {
    dataset ds;
    std::string name;
    if (!dflags.path.empty()) {
        ds = load_data(dflags);
        name = std::filesystem::path(dflags.path).stem().string();
    } else {
        const auto k_max = *std::max_element(bflags.samples_per_class.begin(), bflags.samples_per_class.end());
        ds = generate_synthetic(bflags.classes, bflags.features, k_max, bflags.separation, sflags.seed);
        name = "synthetic-m" + std::to_string(bflags.classes) + "-d" + std::to_string(bflags.features);
    }
    if (dflags.normalize == "zscore") {
        ds = normalize_zscore(ds).first;
    }

    sweep_config cfg;
    cfg.dataset_name = name;
    cfg.samples_per_class = bflags.samples_per_class;
    cfg.solvers.clear();
    for (const auto &s : bflags.solvers) {
        cfg.solvers.push_back(parse_solver_id(s));
    }
    cfg.parallel.clear();
    for (const auto &p : bflags.parallel) {
        cfg.parallel.push_back(parse_on_off(p));
    }
    cfg.workers = bflags.workers;
    cfg.policy = parse_schedule(sflags.schedule);
    cfg.repeats = bflags.repeats;
    cfg.seed = sflags.seed;
    cfg.trainer = make_trainer(sflags, ds.num_features());

    const auto rows = run_sweep(ds, cfg);
    if (!bflags.report_out.empty()) {
        std::ofstream file{ bflags.report_out };
        if (!file) {
            throw error{ "cannot write " + bflags.report_out };
        }
        write_report_csv(file, rows);
    }
    write_report_csv(out, rows);
    return exit_ok;
}

struct gen_flags {
    std::size_t classes = 9;
    std::size_t features = 102;
    std::size_t samples_per_class = 100;
    double separation = 5.0;
    std::uint64_t seed = 0;
    std::string out_path;
};

int cmd_gen(const gen_flags &flags, std::ostream &out) {
    const auto ds = generate_synthetic(flags.classes, flags.features, flags.samples_per_class, flags.separation,
                                       flags.seed);
    std::ofstream file{ flags.out_path };
    if (!file) {
        throw error{ "cannot write " + flags.out_path };
    }
    write_libsvm(file, ds);
    out << "wrote " << ds.num_samples() << " samples (" << ds.num_classes() << " classes, " << ds.num_features()
        << " features) to " << flags.out_path << '\n';
    return exit_ok;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{ "Kernel SVM training with SMO and projected gradient ascent", "parsvm" };
    app.require_subcommand(1);

    data_flags train_data;
    solver_flags train_solver;
    std::string train_solver_id = "smo";
    std::string train_parallel = "off";
    std::size_t train_workers = 1;
    std::string model_out;
    auto *train = app.add_subcommand("train", "Train a one-vs-one model and write it as JSON");
    add_data_flags(*train, train_data, true);
    add_solver_flags(*train, train_solver);
    train->add_option("--solver", train_solver_id, "Binary solver")->check(CLI::IsMember({ "smo", "gd" }));
    train->add_option("--parallel", train_parallel, "Parallel per-sample steps")->check(CLI::IsMember({ "on", "off" }));
    train->add_option("--workers", train_workers, "Worker pool size")->check(CLI::PositiveNumber);
    train->add_option("--model-out", model_out, "Output model path")->required();

    data_flags predict_data;
    std::string model_in;
    auto *predict = app.add_subcommand("predict", "Print one predicted label per input sample");
    add_data_flags(*predict, predict_data, true);
    predict->add_option("--model", model_in, "Model file written by train")->required();

    data_flags bench_data;
    solver_flags bench_solver;
    bench_flags bench;
    auto *bench_cmd = app.add_subcommand("bench", "Timing sweep over samples per class, solvers and workers");
    add_data_flags(*bench_cmd, bench_data, false);
    add_solver_flags(*bench_cmd, bench_solver);
    bench_cmd->add_option("--samples-per-class", bench.samples_per_class, "Comma-separated k values")
        ->delimiter(',');
    bench_cmd->add_option("--solver", bench.solvers, "Comma-separated solvers")
        ->delimiter(',')
        ->check(CLI::IsMember({ "smo", "gd" }));
    bench_cmd->add_option("--parallel", bench.parallel, "Comma-separated on/off")
        ->delimiter(',')
        ->check(CLI::IsMember({ "on", "off" }));
    bench_cmd->add_option("--workers", bench.workers, "Comma-separated worker counts")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--repeats", bench.repeats, "Timed repetitions per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--classes", bench.classes, "Synthetic classes when --data is absent");
    bench_cmd->add_option("--features", bench.features, "Synthetic features when --data is absent");
    bench_cmd->add_option("--separation", bench.separation, "Synthetic class-center separation");
    bench_cmd->add_option("--report-out", bench.report_out, "CSV report path");

    gen_flags gen;
    auto *gen_cmd = app.add_subcommand("gen", "Write a synthetic Gaussian-blob dataset in libsvm format");
    gen_cmd->add_option("--classes", gen.classes, "Number of classes")->check(CLI::Range(2, 1 << 20));
    gen_cmd->add_option("--features", gen.features, "Number of features")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--samples-per-class", gen.samples_per_class, "Samples per class")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--separation", gen.separation, "Minimum class-center distance")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "Random seed");
    gen_cmd->add_option("--out", gen.out_path, "Output libsvm path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp &) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return exit_usage;
    }

    try {
        if (*train) {
            return cmd_train(train_data, train_solver, train_solver_id, train_parallel, train_workers, model_out, out);
        }
        if (*predict) {
            return cmd_predict(predict_data, model_in, out, err);
        }
        if (*bench_cmd) {
            return cmd_bench(bench_data, bench_solver, bench, out);
        }
        if (*gen_cmd) {
            return cmd_gen(gen, out);
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return exit_usage;
}

}  // namespace parsvm::cli
