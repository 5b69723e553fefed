#include "fixtures.hpp"
#include "oracles.hpp"

#include "parsvm/errors.hpp"
#include "parsvm/gd_solver.hpp"
#include "parsvm/smo_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace parsvm;

namespace {

gram_matrix gram_of(const oracle::random_problem &p, const kernel_spec &k) {
    std::vector<double> flat;
    for (const auto &x : p.x) {
        flat.insert(flat.end(), x.begin(), x.end());
    }
    return compute_gram(k, matrix_view{ flat, p.x.size(), p.x.front().size() });
}

double residual(std::span<const double> a, std::span<const int> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * y[i];
    }
    return s;
}

}  // namespace

TEST_CASE("dual objective and gradient closed forms") {
    const auto ds = fixtures::two_point();
    const auto problem = fixtures::whole_problem(ds);
    const auto features = problem.gather_features();
    const auto gram = compute_gram(kernel_spec::linear(), matrix_view{ features, 2, 1 });
    const std::vector<double> zero{ 0.0, 0.0 };
    const std::vector<double> half{ 0.5, 0.5 };
    CHECK(dual_objective(zero, problem.labels(), gram) == 0.0);
    CHECK(dual_objective(half, problem.labels(), gram) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dual_gradient(zero, problem.labels(), gram) == std::vector<double>{ 1.0, 1.0 });
    // stationary along the feasible direction (1, 1); the gradient itself is parallel to y
    const auto g = dual_gradient(half, problem.labels(), gram);
    CHECK(g == std::vector<double>{ 2.0, -2.0 });
    CHECK(g[0] + g[1] == 0.0);
}

TEST_CASE("dual gradient matches central differences") {
    std::mt19937_64 rng{ 404 };
    std::uniform_real_distribution<double> unit{ 0.0, 1.0 };
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = oracle::make_random_problem(rng, 5, 2, false);
        const kernel_spec k = trial % 2 == 0 ? kernel_spec::linear() : kernel_spec::rbf(0.7);
        const oracle::kernel_params kp{ k.kind == kernel_kind::rbf, k.gamma };
        const auto gram = gram_of(p, k);
        std::vector<double> alpha(5);
        for (auto &a : alpha) {
            a = unit(rng);
        }
        const auto fd = oracle::central_difference(
            [&](const std::vector<double> &a) { return oracle::dual_objective(kp, p.x, p.y, a); }, alpha, 1e-5);
        const auto g = dual_gradient(alpha, p.y, gram);
        const executor par{ 2 };
        CHECK(dual_gradient(alpha, p.y, gram, &par) == g);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(std::abs(g[i] - fd[i]) <= 1e-6);
        }
    }
}

TEST_CASE("project_box") {
    CHECK(project_box({ -0.3, 0.5, 1.7 }, 1.0) == std::vector<double>{ 0.0, 0.5, 1.0 });
    CHECK(project_box({ 0.0, 0.25, 1.0 }, 1.0) == std::vector<double>{ 0.0, 0.25, 1.0 });
}

TEST_CASE("project_feasible") {
    std::mt19937_64 rng{ 12 };
    std::uniform_real_distribution<double> wide{ -1.0, 2.0 };
    const std::vector<int> y{ 1, -1, 1, 1, -1, -1, 1 };
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(y.size());
        for (auto &a : v) {
            a = wide(rng);
        }
        const auto p = project_feasible(v, y, 1.0);
        for (const double a : p) {
            CHECK(a >= 0.0);
            CHECK(a <= 1.0);
        }
        CHECK(std::abs(residual(p, y)) <= 1e-9);
        // idempotent up to the bisection tolerance
        const auto again = project_feasible(p, y, 1.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(again[i] == doctest::Approx(p[i]).epsilon(1e-9));
        }
        // no feasible vertex of a random sample is closer than the projection
        double dist = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            dist += (v[i] - p[i]) * (v[i] - p[i]);
        }
        std::vector<double> other(y.size(), 0.0);
        other[0] = 0.3;
        other[1] = 0.3;
        double other_dist = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            other_dist += (v[i] - other[i]) * (v[i] - other[i]);
        }
        CHECK(dist <= other_dist + 1e-9);
    }
    const std::vector<int> positive{ 1, 1 };
    CHECK(project_feasible({ 0.1, 0.2 }, positive, 1.0) == std::vector<double>{ 0.0, 0.0 });
}

TEST_CASE("train_binary_gd on the two-point problem") {
    const auto ds = fixtures::two_point();
    const auto problem = fixtures::whole_problem(ds);
    gd_config cfg;
    cfg.c = 10.0;
    cfg.kernel = kernel_spec::linear();
    cfg.learning_rate = 0.1;
    cfg.epochs = 500;
    const auto model = train_binary_gd(problem, cfg);
    CHECK(std::abs(model.alphas[0] - 0.5) <= 1e-3);
    CHECK(std::abs(model.alphas[1] - 0.5) <= 1e-3);
    CHECK(std::abs(model.bias - 2.0) <= 1e-3);
    CHECK(model.info.iterations == 500);
    CHECK(model.info.converged);
}

TEST_CASE("zero epochs leave the multipliers at zero") {
    const auto ds = fixtures::two_point();
    const auto problem = fixtures::whole_problem(ds);
    gd_config cfg;
    cfg.epochs = 0;
    cfg.kernel = kernel_spec::linear();
    const auto model = train_binary_gd(problem, cfg);
    CHECK(model.alphas == std::vector<double>{ 0.0, 0.0 });
    CHECK(model.num_support() == 0);
    CHECK_FALSE(model.info.converged);
    const std::vector<double> a{ -7.0 };
    const std::vector<double> b{ 11.0 };
    CHECK(decision_value(model, a) == model.bias);
    CHECK(decision_value(model, b) == model.bias);
}

TEST_CASE("GD iterates stay feasible") {
    std::mt19937_64 rng{ 77 };
    const auto p = oracle::make_random_problem(rng, 12, 3, false);
    const auto ds = fixtures::signed_dataset(p.x, p.y);
    const auto problem = fixtures::whole_problem(ds);
    gd_config cfg;
    cfg.kernel = kernel_spec::rbf(0.5);
    cfg.learning_rate = 0.05;
    cfg.epochs = 200;
    std::size_t seen = 0;
    (void) train_binary_gd(problem, cfg, {}, [&](std::size_t epoch, std::span<const double> alphas) {
        CHECK(epoch == ++seen);
        for (const double a : alphas) {
            REQUIRE(a >= 0.0);
            REQUIRE(a <= cfg.c);
        }
        REQUIRE(std::abs(residual(alphas, problem.labels())) <= 1e-9);
    });
    CHECK(seen == 200);

    SUBCASE("box projection keeps the box only") {
        cfg.projection = gd_projection::box;
        (void) train_binary_gd(problem, cfg, {}, [&](std::size_t, std::span<const double> alphas) {
            for (const double a : alphas) {
                REQUIRE(a >= 0.0);
                REQUIRE(a <= cfg.c);
            }
        });
    }
}

TEST_CASE("SMO is at least as good as GD on feasible GD iterates") {
    std::mt19937_64 rng{ 3141 };
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = oracle::make_random_problem(rng, 6, 2, trial % 2 == 0);
        const auto ds = fixtures::signed_dataset(p.x, p.y);
        const auto problem = fixtures::whole_problem(ds);
        const kernel_spec k = trial < 5 ? kernel_spec::linear() : kernel_spec::rbf(0.5);
        smo_config scfg;
        scfg.kernel = k;
        gd_config gcfg;
        gcfg.kernel = k;
        gcfg.learning_rate = 0.05;
        gcfg.epochs = 300;
        const auto smo = train_binary_smo(problem, scfg);
        const auto gd = train_binary_gd(problem, gcfg);
        const oracle::kernel_params kp{ k.kind == kernel_kind::rbf, k.gamma };
        REQUIRE(std::abs(residual(gd.alphas, problem.labels())) <= 1e-6);
        CHECK(oracle::dual_objective(kp, p.x, p.y, smo.alphas) >= oracle::dual_objective(kp, p.x, p.y, gd.alphas) - 1e-6);
    }
}

TEST_CASE("parallel GD is bit-identical to sequential GD") {
    std::mt19937_64 rng{ 55 };
    const auto p = oracle::make_random_problem(rng, 50, 3, false);
    const auto ds = fixtures::signed_dataset(p.x, p.y);
    const auto problem = fixtures::whole_problem(ds);
    gd_config cfg;
    cfg.kernel = kernel_spec::rbf(0.3);
    cfg.epochs = 100;
    const auto seq = train_binary_gd(problem, cfg);
    const auto par = train_binary_gd(problem, cfg, { true, 3 });
    CHECK(seq.alphas == par.alphas);
    CHECK(seq.bias == par.bias);
}

TEST_CASE("gd_config validation") {
    const auto ds = fixtures::two_point();
    const auto problem = fixtures::whole_problem(ds);
    gd_config cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS((void) train_binary_gd(problem, cfg), precondition_error);
    cfg.learning_rate = 0.1;
    cfg.gram_cap = 3;
    CHECK_THROWS_AS((void) train_binary_gd(problem, cfg), gram_cap_error);
    CHECK(parse_gd_projection("box") == gd_projection::box);
    CHECK_THROWS_AS((void) parse_gd_projection("simplex"), precondition_error);
}
