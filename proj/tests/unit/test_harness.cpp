#include "doctest.h"

#include <cmath>

#include "brlab/errors.hpp"
#include "brlab/harness.hpp"

using namespace brlab;

TEST_CASE("config parsing") {
    auto cfg = parse_config(
        "# sweep\n"
        "grid_n = 256, 512\n"
        "delta = 0.2\n"
        "p0 = 6/5   # critical\n"
        "L = 32\n"
        "seed = 99\n"
        "trials = 3\n");
    CHECK(cfg.grid_n == std::vector<int>{256, 512});
    CHECK(cfg.delta == Rational(1, 5));
    CHECK(cfg.p0 == Rational(6, 5));
    CHECK(cfg.L == 32.0);
    CHECK(cfg.seed == 99u);
    CHECK(cfg.trials == 3);
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), PreconditionError);
    CHECK_THROWS_AS(parse_config("trials = 0\n"), PreconditionError);
    CHECK_THROWS_AS(parse_config("trials 3\n"), PreconditionError);
    CHECK_THROWS_AS(parse_config("delta = x\n"), PreconditionError);
}

TEST_CASE("summary statistics") {
    auto s = summarize(256, {3.0, 1.0, std::nan(""), 2.0, 4.0}, 1);
    CHECK(s.rows == 4);
    CHECK(s.degenerate == 1);
    CHECK(s.max == 4.0);
    CHECK(s.p95 == 4.0);
    CHECK(s.median == 2.5);
    CHECK(log2_slope({256, 512, 1024}, {1.0, 2.0, 3.0}) == doctest::Approx(1.0));
    CHECK(log2_slope({256}, {1.0}) == 0.0);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("domination with a zero function is degenerate") {
    ExperimentConfig cfg;
    cfg.grid_n = {256};
    cfg.trials = 1;
    cfg.test_function = "zero";
    Report r = run_domination(cfg);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].back() == "1");
    CHECK(r.summaries[0].rows == 0);
    CHECK(r.summaries[0].degenerate == 1);
}

TEST_CASE("sub-critical delta is labeled") {
    ExperimentConfig cfg;
    cfg.grid_n = {256};
    cfg.trials = 1;
    cfg.delta = Rational(1, 100);
    CHECK(run_domination(cfg).regime == "below critical index");
    cfg.delta = Rational(1, 5);
    CHECK(run_domination(cfg).regime == "admissible");
}

TEST_CASE("domination rows are reproducible") {
    ExperimentConfig cfg;
    cfg.grid_n = {256};
    cfg.trials = 2;
    cfg.seed = 7;
    CHECK(report_csv(run_domination(cfg)) == report_csv(run_domination(cfg)));
}

TEST_CASE("local estimate sweeps") {
    ExperimentConfig cfg;
    cfg.L = 32.0;
    cfg.grid_n = {256};
    cfg.trials = 1;
    Report a = run_prop42(cfg);
    cfg.rho_offset = 0.3;
    Report b = run_prop42(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        int k = std::stoi(a.rows[i][3]);
        double ra = std::stod(a.rows[i][9]), rb = std::stod(b.rows[i][9]);
        if (k < 0) CHECK(rb < ra);
        if (k == 0) CHECK(rb == doctest::Approx(ra));
    }

    cfg.test_function = "zero";
    Report z = run_prop42(cfg);
    for (const auto& row : z.rows) {
        CHECK(row[7] == "0");
        CHECK(row.back() == "1");
    }

    cfg.test_function = "random_trig";
    cfg.rho_offset = 0.05;
    Report p = run_prop41(cfg);
    CHECK(p.extra["configurations"].get<int>() == 13);
    CHECK(p.summaries[0].degenerate == 0);

    cfg.L = 4.0;
    CHECK_THROWS_AS(run_prop41(cfg), PreconditionError);
}

TEST_CASE("constant weight preset") {
    ExperimentConfig cfg;
    cfg.grid_n = {256};
    cfg.trials = 3;
    cfg.weight_preset = "constant";
    Report r = run_weights(cfg);
    for (const auto& row : r.rows) {
        CHECK(row[9] == "1");
        CHECK(std::stod(row[10]) <= 1.0);
    }
}

TEST_CASE("vector-valued sweep carries the admissibility flag") {
    ExperimentConfig cfg;
    cfg.grid_n = {256};
    cfg.trials = 1;
    cfg.functions = 4;
    Report r = run_vector_valued(cfg);
    CHECK(r.extra["admissible"].get<bool>());
    CHECK(r.rows[0][4] == "1");
}
