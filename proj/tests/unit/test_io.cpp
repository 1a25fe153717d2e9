#include "bff/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace bff;
using Catch::Matchers::WithinAbs;

namespace {

BFFCurve small_curve() {
    const auto stat = TestStatistic::make(StatFamily::z(), 1.3, SampleSpec::one(64),
                                          TestRow::OneSampleZ);
    return build_bff(stat, 9.0, {0.1, 0.5, 0.1});
}

} // namespace

TEST_CASE("curve CSV round trip is exact", "[io]") {
    const BFFCurve c = small_curve();
    std::ostringstream os;
    io::write_curve_csv(c, os);
    std::istringstream is(os.str());
    const auto pts = io::read_curve_csv(is);
    REQUIRE(pts.size() == c.points.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        REQUIRE(pts[i].omega == c.points[i].omega);
        REQUIRE(pts[i].log_bf10 == c.points[i].log_bf10);
    }
}

TEST_CASE("curve JSON and CSV encode identical values", "[io]") {
    const BFFCurve c = small_curve();
    const auto j = io::curve_to_json(c);
    const auto jback = io::json::parse(j.dump());
    const auto jpts = io::curve_points_from_json(jback);

    std::ostringstream os;
    io::write_curve_csv(c, os);
    std::istringstream is(os.str());
    const auto cpts = io::read_curve_csv(is);

    REQUIRE(jpts.size() == cpts.size());
    for (std::size_t i = 0; i < jpts.size(); ++i) {
        REQUIRE_THAT(jpts[i].omega, WithinAbs(cpts[i].omega, 1e-12));
        REQUIRE_THAT(jpts[i].log_bf10, WithinAbs(cpts[i].log_bf10, 1e-12));
    }
    REQUIRE(jback.at("omega_min").get<double>() == c.omega_min);
    REQUIRE(jback.at("row").get<std::string>() == "one-sample-z");
}

TEST_CASE("report CSV round trip", "[io]") {
    SimConfig cfg;
    cfg.n_values = {50};
    cfg.omega_grid = {0.0, 0.2};
    cfg.replicates = 20;
    cfg.methods = {SimMethod::Ideal, SimMethod::GpriorRisk};
    const SimReport r = run_sim(cfg);
    std::ostringstream os;
    io::write_report_csv(r, os);
    std::istringstream is(os.str());
    const auto rows = io::read_report_csv(is);
    REQUIRE(rows.size() == r.cells.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].method == sim_method_name(r.cells[i].method));
        REQUIRE(rows[i].n == r.cells[i].n);
        REQUIRE(rows[i].omega == r.cells[i].omega);
        REQUIRE(rows[i].mean_woe == r.cells[i].mean_woe);
        REQUIRE(rows[i].se == r.cells[i].se);
    }
    // JSON path carries the same numbers.
    const auto j = io::report_to_json(r);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE_THAT(j["cells"][i]["mean_woe"].get<double>(),
                     WithinAbs(rows[i].mean_woe, 1e-12));
    }
}

TEST_CASE("empty report writes only the header", "[io]") {
    SimReport empty;
    std::ostringstream os;
    io::write_report_csv(empty, os);
    REQUIRE(os.str() == "method,n,omega,mean_woe,se,replicates,errors\n");
}

TEST_CASE("scatter CSV round trip", "[io]") {
    SimReport r;
    r.scatter = {{100, 0.6, -1.25, -0.75}, {100, 0.6, 3.5, 4.25}};
    std::ostringstream os;
    io::write_scatter_csv(r, os);
    std::istringstream is(os.str());
    const auto pts = io::read_scatter_csv(is);
    REQUIRE(pts.size() == 2);
    REQUIRE(pts[1].ideal == 3.5);
    REQUIRE(pts[1].bff_max == 4.25);
}

TEST_CASE("studies CSV round trip", "[io]") {
    std::ostringstream os;
    io::write_studies_csv(manylabs3_persistence(), os);
    std::istringstream is(os.str());
    const auto rows = ingest_studies(is);
    REQUIRE(rows.size() == 20);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].r_hat == manylabs3_persistence()[i].r_hat);
        REQUIRE(rows[i].n == manylabs3_persistence()[i].n);
    }
}

TEST_CASE("dep CSV round trip", "[io]") {
    const std::vector<io::DepRow> rows = {{10.0, 0.83, 0.71}, {2.0, 0.55, 0.54}};
    std::ostringstream os;
    io::write_dep_csv(rows, os);
    std::istringstream is(os.str());
    const auto back = io::read_dep_csv(is);
    REQUIRE(back.size() == 2);
    REQUIRE(back[0].dep_null_vs_a == 0.83);
    REQUIRE(back[1].index_value == 2.0);
}

TEST_CASE("malformed rows name their line", "[io]") {
    std::istringstream is("omega,log_bf10\n0.1,0.2\nbroken\n");
    try {
        io::read_curve_csv(is);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.row() == 3);
    }
}
