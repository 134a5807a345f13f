#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "storval_cli/commands.hpp"
#include "storval_cli/json_text.hpp"

using nlohmann::json;
using namespace storval::cli;

namespace {

std::filesystem::path scratch() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() / "storval_test_cli";
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

json base_config() {
    return json::parse(R"({
        "horizon": 24,
        "process": {"kind": "iid", "marginal": {"family": "uniform"}},
        "prices": {"p": 0.0, "m_alpha": 1.0, "m_beta": 1.0},
        "storage": {"b": 0.0, "r": 1.0},
        "mc": {"paths": 2000, "seed": 7, "tol": 1e-4}
    })");
}

std::string write_config(const json& cfg, const std::string& name) {
    const auto file = scratch() / name;
    std::ofstream(file) << cfg.dump(2);
    return file.string();
}

struct Run {
    int code;
    std::string out;
    std::string err;
    json result() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("json numbers carry 17 significant digits") {
    CHECK(to_json_text(json(0.1)) == "0.10000000000000001\n");
    CHECK(to_json_text(json{{"a", 1}, {"b", std::vector<double>{0.5, 2.0}}}) ==
          "{\n  \"a\": 1,\n  \"b\": [0.5, 2]\n}\n");
}

TEST_CASE("contract dispatches on storage capacity") {
    auto cfg = base_config();
    const auto none = run({"contract", "--config", write_config(cfg, "c0.json")});
    REQUIRE(none.code == 0);
    CHECK(none.result()["method"] == "quantile-closed-form");
    CHECK(none.result()["x_star"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));

    cfg["storage"]["b"] = 0.2;
    cfg["mc"]["tol"] = 1e-3;
    const auto some = run({"contract", "--config", write_config(cfg, "c1.json"), "--paths", "500"});
    REQUIRE(some.code == 0);
    const json r = some.result();
    CHECK(r["method"] == "golden-section-saa");
    CHECK(r["bracket_width"].get<double>() <= 1e-3);
    CHECK(r["paths"] == 500);
}

TEST_CASE("price assumption violations exit with code 2 and name the field") {
    auto cfg = base_config();
    cfg["prices"]["p"] = 1.5;
    const auto bad = run({"contract", "--config", write_config(cfg, "bad_p.json")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("prices") != std::string::npos);
    CHECK(bad.err.find("p <= m_alpha") != std::string::npos);
    CHECK(bad.out.empty());
}

TEST_CASE("config errors name the offending field") {
    auto cfg = base_config();
    cfg["mc"]["paths"] = "many";
    auto r = run({"contract", "--config", write_config(cfg, "bad_paths.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("mc.paths") != std::string::npos);

    cfg = base_config();
    cfg["process"]["marginal"] = {{"family", "beta"}, {"alpha", -1.0}, {"beta", 2.0}};
    r = run({"contract", "--config", write_config(cfg, "bad_beta.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("process.marginal") != std::string::npos);

    cfg = base_config();
    cfg["storage"]["eta_in"] = 1.5;
    r = run({"contract", "--config", write_config(cfg, "bad_eta.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("storage") != std::string::npos);

    cfg = base_config();
    cfg["process"]["marginals"] = json::array();
    r = run({"contract", "--config", write_config(cfg, "two_kinds.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("process") != std::string::npos);

    cfg = base_config();
    cfg.erase("horizon");
    r = run({"contract", "--config", write_config(cfg, "no_horizon.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("horizon") != std::string::npos);

    CHECK(run({"contract", "--config", (scratch() / "missing.json").string()}).code == 2);
    CHECK(run({"contract"}).code == 2);
    CHECK(run({"--config", write_config(base_config(), "ok.json")}).code == 2);
}

TEST_CASE("marginal value with closed form and finite-difference check") {
    const std::string file = write_config(base_config(), "mv.json");
    const auto r = run({"marginal-value", "--config", file, "--closed-form"});
    REQUIRE(r.code == 0);
    const json j = r.result();
    CHECK(j["method"] == "exact-iid");
    CHECK(j["closed_form"].get<double>() == doctest::Approx(12.0));
    CHECK(j["value"].get<double>() == doctest::Approx(12.0).epsilon(1e-10));

    const auto fd = run({"marginal-value", "--config", file, "--validate-fd", "1e-3", "--paths", "20000"});
    REQUIRE(fd.code == 0);
    const json f = fd.result();
    CHECK(f["finite_difference"]["value"].get<double>() == doctest::Approx(12.0).epsilon(0.08));
    CHECK(f["agreement_ratio"].get<double>() == doctest::Approx(1.0).epsilon(0.08));

    auto ns = base_config();
    ns["process"] = {{"kind", "nonstationary"},
                     {"marginals", json::array()}};
    for (int k = 0; k < 24; ++k) ns["process"]["marginals"].push_back({{"family", "uniform"}});
    const auto closed_ns = run({"marginal-value", "--config", write_config(ns, "ns.json"), "--closed-form"});
    CHECK(closed_ns.code == 2);
    CHECK(closed_ns.err.find("options.closed_form") != std::string::npos);
}

TEST_CASE("empirical trace config uses the plug-in estimator") {
    {
        std::ofstream csv(scratch() / "traces.csv");
        csv << "t0,t1,t2,t3\n0.9,0.1,0.8,0.2\n0.3,0.6,0.2,0.7\n0.5,0.4,0.9,0.1\n0.7,0.2,0.6,0.3\n";
    }
    auto cfg = base_config();
    cfg["horizon"] = 4;
    cfg["process"] = {{"kind", "empirical"}, {"trace_file", "traces.csv"}};
    cfg["options"] = {{"bootstrap_reps", 200}};
    const auto r = run({"marginal-value", "--config", write_config(cfg, "emp.json")});
    REQUIRE(r.code == 0);
    const json j = r.result();
    CHECK(j["method"] == "plug-in");
    CHECK(j["rows"] == 4);
    CHECK(j["std_error"].get<double>() > 0.0);

    cfg["horizon"] = 5;
    const auto wrong = run({"marginal-value", "--config", write_config(cfg, "emp_bad.json")});
    CHECK(wrong.code == 2);
    CHECK(wrong.err.find("process.trace_file") != std::string::npos);
}

TEST_CASE("simulate reconciles stage costs with profit") {
    auto cfg = base_config();
    cfg["storage"]["b"] = 0.3;
    cfg["storage"]["r"] = 0.2;
    const std::string file = write_config(cfg, "sim.json");
    const auto r = run({"simulate", "--config", file, "--contract", "0.45", "--trajectories", "5"});
    REQUIRE(r.code == 0);
    const json j = r.result();
    CHECK(j["contract_source"] == "options");
    REQUIRE(j["trajectories"].size() == 5);
    for (const auto& t : j["trajectories"]) {
        double sum = 0.0;
        for (const auto& g : t["g"]) sum += g.get<double>();
        CHECK(sum == t["imbalance_cost"].get<double>());
        CHECK(t["profit"].get<double>() ==
              t["revenue"].get<double>() - t["imbalance_cost"].get<double>());
        CHECK(t["z"].size() == 25);
    }
    CHECK(run({"simulate", "--config", file, "--contract", "0.45", "--trajectories", "5"}).out == r.out);

    cfg["storage"]["b"] = 0.0;
    const auto flat = run({"simulate", "--config", write_config(cfg, "sim0.json"), "--contract", "0.5"});
    REQUIRE(flat.code == 0);
    for (const auto& t : flat.result()["trajectories"])
        for (const auto& u : t["u"]) CHECK(u.get<double>() == 0.0);
}

TEST_CASE("supply function") {
    const std::string file = write_config(base_config(), "supply.json");
    const auto csv = (scratch() / "supply.csv").string();
    const auto r = run({"supply-function", "--config", file, "--grid", "0,0.5,1", "--csv", csv});
    REQUIRE(r.code == 0);
    const json curve = r.result()["curve"];
    REQUIRE(curve.size() == 3);
    CHECK(curve[0]["x_star"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(curve[1]["x_star"].get<double>() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(curve[2]["x_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    std::ifstream in(csv);
    std::string head;
    std::getline(in, head);
    CHECK(head == "p,x_star");

    const auto bad = run({"supply-function", "--config", file, "--grid", "0,1.5"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("options.grid[1]") != std::string::npos);

    auto degenerate = base_config();
    degenerate["prices"]["m_beta"] = 0.0;
    CHECK(run({"supply-function", "--config", write_config(degenerate, "deg.json"), "--grid", "0"})
              .code == 2);
}

TEST_CASE("size-storage with free storage fills the box") {
    auto cfg = base_config();
    cfg["horizon"] = 8;
    cfg["mc"]["paths"] = 300;
    cfg["mc"]["tol"] = 1e-3;
    cfg["options"] = {{"b_max", 0.4}, {"r_max", 0.4}, {"size_tol", 0.01}};
    const auto r = run({"size-storage", "--config", write_config(cfg, "size.json")});
    REQUIRE(r.code == 0);
    const json j = r.result();
    CHECK(j["b"].get<double>() == 0.4);
    CHECK(j["r"].get<double>() == 0.4);
    CHECK(j["net_value"].get<double>() >= j["value_without_storage"].get<double>());
}

TEST_CASE("validate passes on a well-posed configuration") {
    auto cfg = base_config();
    cfg["storage"]["b"] = 0.2;
    cfg["mc"]["paths"] = 4000;
    const auto r = run({"validate", "--config", write_config(cfg, "validate.json")});
    INFO(r.out);
    CHECK(r.code == 0);
    const json j = r.result();
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == 5);
}
