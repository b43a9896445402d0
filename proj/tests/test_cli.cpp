#include "surfcalc/cli/catalog.hpp"
#include "surfcalc/cli/scenario.hpp"
#include "surfcalc/cli/suites.hpp"
#include "surfcalc/geometry/invariants.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace surfcalc;
using namespace surfcalc::cli;
namespace fs = std::filesystem;

namespace {

std::string config_error_field(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.field;
    }
    return "<accepted>";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("surfcalc_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

const char* small_run = R"({
  "name": "small",
  "surface": {"name": "sphere-cap", "params": {"theta_max": 1.2}},
  "resolutions": [8, 12, 16],
  "azimuth_factor": 2,
  "time": {"start": 0.0, "end": 0.2, "probe": 0.1},
  "suites": {"geometry": true, "identities": true, "entropy": true},
  "tolerances": {"identities": {"residual": 1.0, "min_order": 0.0}}
})";

}  // namespace

TEST_CASE("config errors name the offending field", "[cli]") {
    CHECK(config_error_field(R"({"surface":{"name":"torus"},"resolutions":[8,16,32]})") == "surface.name");
    CHECK(config_error_field(R"({"surface":"flat-disk","resolutions":[8,16,16]})") == "resolutions[2]");
    CHECK(config_error_field(R"({"surface":"flat-disk","resolutions":[8,16,32],"fields":{"sigma":"nope"}})") == "fields.sigma");
    CHECK(config_error_field(R"({"surface":"flat-disk","resolutions":[8,16,32],"suites":{"geometry": tru}})") == "<syntax>");
    CHECK(config_error_field(R"({"surface":"flat-disk","resolutions":[8,16,32],"colour":"red"})") != "<accepted>");
    CHECK(config_error_field(R"({"surface":"flat-disk","resolutions":[8,16,32]})") == "<accepted>");
}

TEST_CASE("scenario JSON round-trips", "[cli][property]") {
    for (const auto& entry : fs::directory_iterator(SURFCALC_SCENARIO_DIR)) {
        INFO(entry.path().string());
        const Scenario sc = load_scenario(entry.path().string());
        const std::string canonical = to_json(sc).dump();
        CHECK(to_json(parse_scenario(canonical)).dump() == canonical);
    }
}

TEST_CASE("a scenario without suites writes nothing and succeeds", "[cli]") {
    const fs::path out = scratch("empty");
    const Scenario sc = parse_scenario(R"({"surface":"flat-disk","resolutions":[8,16,32],"suites":{}})");
    const RunSummary s = run_suite(sc, out.string());
    CHECK(s.exit_code == 0);
    CHECK(s.files.empty());
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("runs write their reports and are byte-identical across repeats and thread counts", "[cli][property]") {
    const Scenario sc = parse_scenario(small_run);
    const fs::path a = scratch("a"), b = scratch("b"), c = scratch("c");
    const RunSummary ra = run_suite(sc, a.string(), 1);
    const RunSummary rb = run_suite(sc, b.string(), 1);
    const RunSummary rc = run_suite(sc, c.string(), 3);
    REQUIRE_FALSE(ra.files.empty());
    CHECK(ra.files == rb.files);
    CHECK(ra.files == rc.files);
    CHECK(std::find(ra.files.begin(), ra.files.end(), "orders.csv") != ra.files.end());
    for (const auto& f : ra.files) {
        INFO(f);
        const std::string bytes = slurp(a / f);
        CHECK_FALSE(bytes.empty());
        CHECK(bytes == slurp(b / f));
        CHECK(bytes == slurp(c / f));
    }
    CHECK(slurp(a / "orders.csv").rfind(orders_csv_header(), 0) == 0);
    CHECK(ra.exit_code == 0);
}

TEST_CASE("failing checks set a nonzero exit code", "[cli]") {
    const Scenario sc = load_scenario(std::string(SURFCALC_SCENARIO_DIR) + "/anti_dissipative_entropy.json");
    const RunSummary s = run_suite(sc, scratch("anti").string(), 1);
    CHECK(s.exit_code == 1);
    CHECK(std::any_of(s.verdicts.begin(), s.verdicts.end(), [](const Verdict& v) { return !v.passed; }));
}

TEST_CASE("the bundled flat-disk scenario passes", "[cli]") {
    const Scenario sc = load_scenario(std::string(SURFCALC_SCENARIO_DIR) + "/flat_disk_identities.json");
    const RunSummary s = run_suite(sc, scratch("flat").string(), 2);
    for (const auto& v : s.verdicts) {
        INFO(to_string(v.suite) << ' ' << v.name << ": " << v.reason);
        CHECK(v.passed);
    }
    CHECK(s.exit_code == 0);
}

TEST_CASE("catalog listing names every surface", "[cli]") {
    std::ostringstream os;
    list_catalog(os);
    const std::string text = os.str();
    for (const char* name : {"flat-disk", "sphere-cap", "expanding-sphere-cap", "graph-surface", "newtonian", "identities"}) {
        INFO(name);
        CHECK(text.find(name) != std::string::npos);
    }
}

TEST_CASE("every catalog surface passes the geometry invariants", "[cli][property]") {
    for (const auto& e : surfaces::catalog()) {
        const FlowMapSpec spec = e.make({});
        const int n2 = spec.domain.kind() == DomainKind::DiskPolar ? 32 : 16;
        for (const CheckRow& r : check_geometry_invariants(spec, 16, n2, {0.0, 0.5})) {
            INFO(e.name << ' ' << r.name << ' ' << r.abs_residual);
            CHECK(r.abs_residual <= 1e-10);
        }
    }
}

TEST_CASE("convergence table lists each check with its orders", "[cli]") {
    std::vector<CheckRow> rows;
    for (int n : {16, 32, 64}) rows.push_back(make_row("demo", 1.0 / n, 0.0, 1.0, 1.0 + 1.0 / (n * n)));
    std::ostringstream os;
    print_orders(os, rows);
    CHECK(os.str().find("demo") != std::string::npos);
    CHECK(os.str().find("2.00") != std::string::npos);
}
