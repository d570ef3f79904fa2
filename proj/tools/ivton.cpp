// ivton: auto-masking and multi-garment try-on orchestration CLI.
//
// Subcommands: mask | plan | tryon | eval | gen-fixtures.
// Exit codes: 0 success, 2 input/contract error, 3 backend error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivton/backend_config.hpp"
#include "ivton/backends.hpp"
#include "ivton/eval.hpp"
#include "ivton/executor.hpp"
#include "ivton/fixtures.hpp"
#include "ivton/instruction.hpp"
#include "ivton/io_util.hpp"
#include "ivton/planner.hpp"
#include "ivton/png_io.hpp"

namespace fs = std::filesystem;
using ivton::json;

namespace {

constexpr int kExitContract = 2;
constexpr int kExitBackend = 3;

struct CommonOpts {
    std::string person;
    std::vector<std::string> garment_specs;
    std::vector<std::string> garment_images; // optional per-spec image overrides
    std::string instruction;
    std::string backend_config;
    std::string rule_table_path;
    std::string lexicon_path;
    std::string synonyms_path;
    double stripe_fraction = 0.18;
    int dilate = 0;
    long long noise_threshold = 0;
    double threshold_fraction = 0.02;
};

ivton::RuleTable g_rule_table; // loaded copy when --rule-table is given

ivton::ExecutorOptions executor_options(const CommonOpts& o) {
    ivton::ExecutorOptions opts;
    opts.threshold_fraction = o.threshold_fraction;
    opts.realize.stripe_fraction = o.stripe_fraction;
    opts.realize.dilation_radius = o.dilate;
    opts.engine.noise_threshold = o.noise_threshold;
    if (!o.rule_table_path.empty()) {
        g_rule_table = ivton::read_json_file(o.rule_table_path).get<ivton::RuleTable>();
        opts.rule_table = &g_rule_table;
    }
    return opts;
}

std::vector<ivton::GarmentSpec> load_garments(const CommonOpts& o) {
    if (!o.garment_images.empty() && o.garment_images.size() != o.garment_specs.size())
        throw ivton::ContractError("--garment count must match --garment-spec count");
    std::vector<ivton::GarmentSpec> garments;
    for (std::size_t i = 0; i < o.garment_specs.size(); ++i) {
        const std::string& p = o.garment_specs[i];
        ivton::GarmentSpec g = ivton::read_json_file(p).get<ivton::GarmentSpec>();
        if (!o.garment_images.empty()) {
            g.image_ref = o.garment_images[i];
        } else {
            fs::path img(g.image_ref);
            if (!img.empty() && img.is_relative())
                g.image_ref = (fs::path(p).parent_path() / img).string();
        }
        garments.push_back(std::move(g));
    }
    return garments;
}

ivton::PlannerOptions planner_options(const CommonOpts& o, const ivton::ExecutorOptions& exec) {
    ivton::PlannerOptions popts;
    popts.executor = exec;
    if (!o.lexicon_path.empty())
        popts.lexicon = ivton::read_json_file(o.lexicon_path).get<ivton::Lexicon>();
    if (!o.synonyms_path.empty())
        popts.synonyms =
            ivton::read_json_file(o.synonyms_path).get<ivton::SynonymTable>();
    return popts;
}

void add_backend_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--backend-config", o.backend_config,
                    "Backend config JSON (defaults to offline stubs)");
    cmd->add_option("--rule-table", o.rule_table_path, "Custom parts-inclusion rule table JSON");
    cmd->add_option("--lexicon", o.lexicon_path, "Custom phrase lexicon JSON");
    cmd->add_option("--synonyms", o.synonyms_path, "Garment-noun synonym table JSON");
    cmd->add_option("--stripe-fraction", o.stripe_fraction,
                    "Open-chest stripe width as a fraction of the torso bbox width");
    cmd->add_option("--dilate", o.dilate, "Mask dilation radius in pixels (default off)");
    cmd->add_option("--noise-threshold", o.noise_threshold,
                    "Trace membership overlap threshold in pixels");
    cmd->add_option("--threshold-fraction", o.threshold_fraction,
                    "Exposure-conflict fraction that triggers the two-step strategy");
}

int run_mask(const CommonOpts& o, const std::string& out_dir) {
    ivton::ExecutorOptions opts = executor_options(o);
    ivton::Backends backends =
        ivton::make_backends_from_file(o.backend_config, fs::path(out_dir) / "work");

    ivton::SegmentationResult seg;
    try {
        seg = backends.segmentation->segment(o.person);
    } catch (const ivton::BackendError& e) {
        std::cerr << "error (stage=segmentation): " << e.what() << "\n";
        return kExitBackend;
    }

    std::vector<ivton::GarmentSpec> garments = load_garments(o);
    if (garments.size() != 1)
        throw ivton::ContractError("mask: exactly one --garment-spec required");

    ivton::PlannerOptions popts = planner_options(o, opts);
    ivton::ParsedInstruction parsed = ivton::parse_instruction(o.instruction, popts.lexicon);
    if (parsed.partial())
        throw ivton::ContractError("mask: instruction text not covered by the grammar: '" +
                                   parsed.residual + "'");
    ivton::StyleInstruction style =
        ivton::resolve_bindings(parsed, garments, popts.synonyms).at(garments[0].id);

    ivton::TraceEstimate est = ivton::infer_traces(garments[0], style, seg.body, seg.clothing,
                                                   *opts.rule_table, opts.engine);
    ivton::BinaryMask mask = ivton::realize_mask(est, seg.body, seg.clothing, opts.realize);
    ivton::ConflictReport conflict =
        ivton::needs_two_step(est, seg.body, seg.clothing, opts.threshold_fraction);

    fs::create_directories(out_dir);
    ivton::write_mask_png(fs::path(out_dir) / "mask.png", mask);
    json report{{"garment_id", garments[0].id},
                {"instruction", style},
                {"rule_trace", est.rule_trace},
                {"mask", ivton::mask_efficiency(mask)},
                {"conflict", conflict}};
    ivton::write_json_file(fs::path(out_dir) / "report.json", report);
    std::cout << "mask: " << (fs::path(out_dir) / "mask.png").string()
              << " efficiency=" << ivton::mask_efficiency(mask).efficiency << "\n";
    return 0;
}

ivton::BuildPlanResult plan_for(const CommonOpts& o, const ivton::Backends& backends,
                                const ivton::ExecutorOptions& exec_opts,
                                ivton::SegmentationResult& seg_out) {
    seg_out = backends.segmentation->segment(o.person);
    std::vector<ivton::GarmentSpec> garments = load_garments(o);
    return ivton::build_plan(garments, o.instruction, seg_out.body, seg_out.clothing, o.person,
                             backends, planner_options(o, exec_opts));
}

int run_plan(const CommonOpts& o, const std::string& out_path) {
    ivton::ExecutorOptions opts = executor_options(o);
    ivton::Backends backends = ivton::make_backends_from_file(
        o.backend_config, fs::path(out_path).parent_path() / "ivton_work");
    ivton::SegmentationResult seg;
    ivton::BuildPlanResult result = plan_for(o, backends, opts, seg);
    for (const std::string& d : result.diagnostics) std::cerr << "note: " << d << "\n";
    ivton::write_json_file(out_path, json(result.plan));
    std::cout << "plan: " << out_path << " (" << result.plan.steps.size() << " steps)\n";
    return 0;
}

int run_tryon(const CommonOpts& o, const std::string& out_dir, std::string run_id) {
    ivton::ExecutorOptions opts = executor_options(o);
    if (run_id.empty()) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        run_id = "run_" + std::to_string(
                              std::chrono::duration_cast<std::chrono::seconds>(now).count());
    }
    const fs::path run_dir = fs::path(out_dir) / run_id;
    ivton::Backends backends = ivton::make_backends_from_file(o.backend_config,
                                                              run_dir / "work");
    ivton::SegmentationResult seg;
    ivton::BuildPlanResult planned = plan_for(o, backends, opts, seg);
    for (const std::string& d : planned.diagnostics) std::cerr << "note: " << d << "\n";

    ivton::PlanRunResult run = ivton::execute_plan(planned.plan, backends, run_dir, opts);
    std::cout << "run dir: " << run_dir.string() << "\n";
    for (const ivton::StepArtifacts& a : run.steps)
        std::cout << "  step " << a.step_index << ": " << a.output_ref
                  << " efficiency=" << a.mask_report.efficiency << "\n";
    if (!run.ok) {
        std::cerr << "error (step=" << run.failed_step << "): " << run.error << "\n";
        return run.error_kind == "backend" ? kExitBackend : kExitContract;
    }
    std::cout << "final: " << run.final_image_ref << "\n";
    return 0;
}

int run_eval_cmd(const CommonOpts& o, const std::string& dataset, const std::string& out_dir,
                 int jobs) {
    ivton::ExecutorOptions opts = executor_options(o);
    ivton::Backends backends =
        ivton::make_backends_from_file(o.backend_config, fs::path(out_dir) / "work");
    ivton::EvalRunResult result =
        ivton::run_eval(dataset, backends, opts, fs::path(out_dir) / "pairs", jobs);

    fs::create_directories(out_dir);
    ivton::write_json_file(fs::path(out_dir) / "eval.json", ivton::eval_result_json(result));
    ivton::write_text_file(fs::path(out_dir) / "eval.md",
                           ivton::render_markdown(result.aggregates));
    std::cout << ivton::render_markdown(result.aggregates);
    std::cout << result.records.size() << " pairs evaluated, " << result.failures.size()
              << " failed\n";
    for (const std::string& f : result.failures) std::cerr << "failed pair: " << f << "\n";
    return result.failures.empty() ? 0 : kExitBackend;
}

int run_gen_fixtures(const std::string& out_dir, std::uint64_t seed, int count,
                     bool with_dummy_library) {
    std::vector<ivton::GeneratedPair> pairs = ivton::generate_dataset(out_dir, seed, count);
    if (with_dummy_library) ivton::write_dummy_library(fs::path(out_dir) / "dummy_library");
    std::cout << "generated " << pairs.size() << " pairs under "
              << (fs::path(out_dir) / "pairs").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Auto-masking virtual try-on pipeline"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string out;
    std::string dataset;
    std::string run_id;
    std::uint64_t seed = 1;
    int count = 12;
    int jobs = 1;
    bool with_dummy_library = true;

    CLI::App* mask = app.add_subcommand("mask", "Compute the inpainting mask for one garment");
    mask->add_option("--person", o.person, "Person image (PNG)")->required();
    mask->add_option("--garment-spec", o.garment_specs, "Garment spec JSON")->required();
    mask->add_option("--garment", o.garment_images, "Garment image (overrides the spec's ref)");
    mask->add_option("--instruction", o.instruction, "Style instruction text");
    mask->add_option("--out", out, "Output directory")->required();
    add_backend_flags(mask, o);

    CLI::App* plan = app.add_subcommand("plan", "Build the multi-garment execution plan");
    plan->add_option("--person", o.person, "Person image (PNG)")->required();
    plan->add_option("--garment-spec", o.garment_specs, "Garment spec JSON (repeatable)")
        ->required();
    plan->add_option("--garment", o.garment_images,
                     "Garment images, one per spec (override the specs' refs)");
    plan->add_option("--instruction", o.instruction, "Style instruction text");
    plan->add_option("--out", out, "Plan JSON path")->required();
    add_backend_flags(plan, o);

    CLI::App* tryon = app.add_subcommand("tryon", "Plan and execute a full try-on run");
    tryon->add_option("--person", o.person, "Person image (PNG)")->required();
    tryon->add_option("--garment-spec", o.garment_specs, "Garment spec JSON (repeatable)")
        ->required();
    tryon->add_option("--garment", o.garment_images,
                      "Garment images, one per spec (override the specs' refs)");
    tryon->add_option("--instruction", o.instruction, "Style instruction text");
    tryon->add_option("--out", out, "Parent directory for the run directory")->required();
    tryon->add_option("--run-id", run_id, "Run directory name (timestamped when omitted)");
    add_backend_flags(tryon, o);

    CLI::App* eval = app.add_subcommand("eval", "Evaluate mask efficiency over a dataset");
    eval->add_option("--dataset", dataset, "Dataset root directory")->required();
    eval->add_option("--out", out, "Report output directory")->required();
    eval->add_option("--jobs", jobs, "Parallel pair evaluations");
    add_backend_flags(eval, o);

    CLI::App* gen = app.add_subcommand("gen-fixtures", "Generate a synthetic dataset");
    gen->add_option("--out", out, "Output directory")->required();
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--count", count, "Number of pairs");
    gen->add_flag("--with-dummy-library,!--no-dummy-library", with_dummy_library,
                  "Also write the dummy-garment library");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitContract;
    }

    try {
        if (mask->parsed()) return run_mask(o, out);
        if (plan->parsed()) return run_plan(o, out);
        if (tryon->parsed()) return run_tryon(o, out, run_id);
        if (eval->parsed()) return run_eval_cmd(o, dataset, out, jobs);
        if (gen->parsed()) return run_gen_fixtures(out, seed, count, with_dummy_library);
    } catch (const ivton::BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const ivton::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitContract;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitContract;
    }
    return 0;
}
