// Drives the installed CLI binary end to end: fixture generation, masking,
// planning, try-on runs, evaluation, exit codes, and the committed golden
// mask.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "ivton/io_util.hpp"
#include "ivton/png_io.hpp"
#include "ivton/rule_engine.hpp"
#include "oracles.hpp"

#ifndef IVTON_CLI_PATH
#error "IVTON_CLI_PATH must point at the built ivton binary"
#endif
#ifndef IVTON_GOLDEN_DIR
#error "IVTON_GOLDEN_DIR must point at tests/golden"
#endif

using namespace ivton;
namespace fs = std::filesystem;

namespace {

const fs::path cli = IVTON_CLI_PATH;
const fs::path golden_dir = IVTON_GOLDEN_DIR;

int run(const std::string& args) {
    const std::string cmd = cli.string() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("cli end-to-end: gen-fixtures, mask, plan, tryon, eval") {
    const fs::path dir = fresh_dir("ivton_cli");
    const fs::path ds = dir / "ds";
    REQUIRE(run("gen-fixtures --out " + ds.string() + " --seed 42 --count 8") == 0);
    REQUIRE(fs::exists(ds / "pairs" / "pair_000" / "person.png"));
    REQUIRE(fs::exists(ds / "dummy_library" / "manifest.json"));

    const fs::path pair = ds / "pairs" / "pair_000";

    SUBCASE("mask command writes the mask and report") {
        const fs::path out = dir / "mask_out";
        REQUIRE(run("mask --person " + (pair / "person.png").string() + " --garment-spec " +
                    (pair / "garment_spec.json").string() + " --out " + out.string()) == 0);
        CHECK(fs::exists(out / "mask.png"));
        json report = read_json_file(out / "report.json");
        CHECK(report["mask"]["efficiency"].get<double>() > 0.0);
        CHECK(report["rule_trace"].is_array());
    }

    SUBCASE("rolled-up sleeves keep the lower arms unmasked") {
        const fs::path out = dir / "mask_rolled";
        REQUIRE(run("mask --person " + (pair / "person.png").string() + " --garment-spec " +
                    (pair / "garment_spec.json").string() +
                    " --instruction \"sleeves rolled up\" --out " + out.string()) == 0);
        BinaryMask mask = read_mask_png(out / "mask.png");
        LabelRaster body =
            read_label_raster(pair / "person.parts.png", pair / "person.parts.json");
        BinaryMask lower_arms = region_of(body, {body_part::lower_arms});
        CHECK(area(lower_arms) > 0);
        CHECK(area(mask_intersect(mask, lower_arms)) == 0);
    }

    SUBCASE("mask command is reproducible") {
        const fs::path out1 = dir / "mask_a";
        const fs::path out2 = dir / "mask_b";
        REQUIRE(run("mask --person " + (pair / "person.png").string() + " --garment-spec " +
                    (pair / "garment_spec.json").string() + " --out " + out1.string()) == 0);
        REQUIRE(run("mask --person " + (pair / "person.png").string() + " --garment-spec " +
                    (pair / "garment_spec.json").string() + " --out " + out2.string()) == 0);
        CHECK(read_text_file(out1 / "mask.png") == read_text_file(out2 / "mask.png"));
        CHECK(read_text_file(out1 / "report.json") == read_text_file(out2 / "report.json"));
    }

    SUBCASE("missing sidecars exit with the backend code") {
        const fs::path lone = dir / "lone";
        fs::create_directories(lone);
        fs::copy_file(pair / "person.png", lone / "person.png");
        CHECK(run("mask --person " + (lone / "person.png").string() + " --garment-spec " +
                  (pair / "garment_spec.json").string() + " --out " + (dir / "x").string()) ==
              3);
    }

    SUBCASE("plan and tryon") {
        const fs::path plan_path = dir / "plan.json";
        REQUIRE(run("plan --person " + (pair / "person.png").string() + " --garment-spec " +
                    (pair / "garment_spec.json").string() + " --out " + plan_path.string()) ==
                0);
        json plan = read_json_file(plan_path);
        CHECK(plan["steps"].size() == 1);

        REQUIRE(run("tryon --person " + (pair / "person.png").string() + " --garment-spec " +
                    (pair / "garment_spec.json").string() + " --out " + (dir / "runs").string() +
                    " --run-id r1") == 0);
        CHECK(fs::exists(dir / "runs" / "r1" / "manifest.json"));
        CHECK(fs::exists(dir / "runs" / "r1" / "step_0" / "output.png"));
    }

    SUBCASE("tryon with an injected backend failure keeps partial artifacts") {
        const fs::path cfg = dir / "failing.json";
        write_json_file(cfg, json{{"vto", {{"kind", "failing"}}}});
        CHECK(run("tryon --person " + (pair / "person.png").string() + " --garment-spec " +
                  (pair / "garment_spec.json").string() + " --out " + (dir / "runs").string() +
                  " --run-id r2 --backend-config " + cfg.string()) == 3);
        json manifest = read_json_file(dir / "runs" / "r2" / "manifest.json");
        CHECK(manifest["ok"] == false);
    }

    SUBCASE("eval emits the table and succeeds on the bundled dataset") {
        const fs::path out = dir / "eval_out";
        REQUIRE(run("eval --dataset " + ds.string() + " --out " + out.string() +
                    " --jobs 2") == 0);
        json eval = read_json_file(out / "eval.json");
        CHECK(eval["records"].size() == 8);
        CHECK(eval["failures"].empty());
        for (const auto& rec : eval["records"])
            CHECK(rec["efficiency"].get<double>() > rec["bbox_efficiency"].get<double>());
        CHECK(fs::exists(out / "eval.md"));
    }

    SUBCASE("empty dataset evaluates cleanly") {
        const fs::path empty = dir / "empty_ds";
        fs::create_directories(empty);
        CHECK(run("eval --dataset " + empty.string() + " --out " +
                  (dir / "eval_empty").string()) == 0);
    }

    SUBCASE("bad arguments exit nonzero") {
        CHECK(run("mask --person missing.png --garment-spec also_missing.json --out " +
                  (dir / "y").string()) != 0);
        CHECK(run("definitely-not-a-command") != 0);
        CHECK(run("mask") == 2); // missing required flags
    }

    SUBCASE("--garment overrides the spec's image reference") {
        REQUIRE(run("tryon --person " + (pair / "person.png").string() + " --garment-spec " +
                    (pair / "garment_spec.json").string() + " --garment " +
                    (pair / "garment.png").string() + " --out " + (dir / "runs").string() +
                    " --run-id r3") == 0);
        CHECK(fs::exists(dir / "runs" / "r3" / "step_0" / "output.png"));
    }

    SUBCASE("custom synonyms load from JSON") {
        // pair_000 is the upper_body category, so its noun is "shirt"
        json spec = read_json_file(pair / "garment_spec.json");
        REQUIRE(spec["category_noun"] == "shirt");
        const fs::path syn = dir / "synonyms.json";
        write_json_file(syn, json{{"blouse", "shirt"}});
        const std::string base = "plan --person " + (pair / "person.png").string() +
                                 " --garment-spec " + (pair / "garment_spec.json").string() +
                                 " --out " + (dir / "plan_syn.json").string() +
                                 " --instruction \"blouse untucked\"";
        CHECK(run(base) == 2); // unknown noun without the table
        CHECK(run(base + " --synonyms " + syn.string()) == 0);
    }
}

TEST_CASE("cli mask matches the committed golden file bit-exactly") {
    const fs::path dir = fresh_dir("ivton_cli_golden");
    const fs::path ds = dir / "ds";
    REQUIRE(run("gen-fixtures --out " + ds.string() + " --seed 42 --count 1") == 0);
    const fs::path pair = ds / "pairs" / "pair_000";
    const fs::path out = dir / "mask_out";
    REQUIRE(run("mask --person " + (pair / "person.png").string() + " --garment-spec " +
                (pair / "garment_spec.json").string() + " --out " + out.string()) == 0);

    const fs::path golden = golden_dir / "mask_seed42_pair0.png";
    REQUIRE(fs::exists(golden));
    CHECK(read_text_file(out / "mask.png") == read_text_file(golden));

    // provenance: the golden equals the independent brute-force construction
    LabelRaster body = read_label_raster(pair / "person.parts.png", pair / "person.parts.json");
    LabelRaster cloth = read_label_raster(pair / "person.cloth.png", pair / "person.cloth.json");
    GarmentSpec spec = read_json_file(pair / "garment_spec.json").get<GarmentSpec>();
    TraceEstimate est = infer_traces(spec, StyleInstruction{}, body, cloth);
    BinaryMask oracle_mask = oracles::realize_mask(est, body, cloth);
    CHECK(read_mask_png(golden) == oracle_mask);
}
