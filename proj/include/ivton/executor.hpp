#pragma once

// Step-by-step plan execution against the backend bundle: conflict detection
// for styles that direct inpainting cannot satisfy, dummy-garment selection,
// and output->input chaining with re-segmentation between steps.

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivton/backends.hpp"
#include "ivton/errors.hpp"
#include "ivton/garment.hpp"
#include "ivton/io_util.hpp"
#include "ivton/plan.hpp"
#include "ivton/png_io.hpp"
#include "ivton/raster.hpp"
#include "ivton/rule_engine.hpp"
#include "ivton/trace_calculus.hpp"

namespace ivton {

// ---------------------------------------------------------------------------
// Conflict detection
// ---------------------------------------------------------------------------

/// Why (or why not) a step needs the two-step dummy-garment strategy:
/// existing clothing sits on body parts the style requires bare.
struct ConflictReport {
    std::set<int> exposed_parts_required;
    std::set<int> offending_segments;
    long long overlap_area = 0;
    long long threshold_area = 0;
    bool two_step = false;
};

inline void to_json(nlohmann::json& j, const ConflictReport& r) {
    nlohmann::json exposed = nlohmann::json::array();
    for (int id : r.exposed_parts_required) exposed.push_back(body_part::name(id));
    j = nlohmann::json{{"exposed_parts_required", exposed},
                       {"offending_segments", r.offending_segments},
                       {"overlap_area", r.overlap_area},
                       {"threshold_area", r.threshold_area},
                       {"two_step", r.two_step}};
}

/// Declares a step two-step when the clothing segments of the estimate cover
/// more than threshold_fraction of the to-be-exposed body region. An empty
/// exposure region can never conflict.
inline ConflictReport needs_two_step(const TraceEstimate& est, const LabelRaster& body,
                                     const LabelRaster& clothing,
                                     double threshold_fraction = 0.02) {
    if (!(threshold_fraction >= 0.0 && threshold_fraction < 1.0))
        throw ContractError("needs_two_step: threshold_fraction must be in [0,1)");
    ConflictReport report;
    report.exposed_parts_required = est.exposed_parts;
    if (est.exposed_parts.empty()) return report;

    BinaryMask exposed_region = region_of(body, est.exposed_parts);
    const long long exposed_area = area(exposed_region);
    if (exposed_area == 0) return report;

    long long counts[256] = {};
    for (std::size_t i = 0; i < clothing.labels.size(); ++i)
        if (exposed_region.bits[i]) ++counts[clothing.labels[i]];
    for (int id : est.c_hat.labels)
        if (counts[id] > 0) {
            report.offending_segments.insert(id);
            report.overlap_area += counts[id];
        }
    report.threshold_area = static_cast<long long>(threshold_fraction * exposed_area);
    report.two_step = report.overlap_area > report.threshold_area;
    return report;
}

/// Picks a dummy garment of the same classification whose trace leaves the
/// conflicting exposure uncovered. Precondition: the report demands two-step.
inline GarmentSpec select_dummy(const GarmentSpec& garment, const ConflictReport& report,
                                DummyGarmentProvider& provider) {
    if (!report.two_step)
        throw ContractError("select_dummy: report does not call for a two-step execution");
    return provider.fetch(garment.classification, report.exposed_parts_required);
}

// ---------------------------------------------------------------------------
// Step execution
// ---------------------------------------------------------------------------

struct StepArtifacts {
    int step_index = 0;
    BinaryMask mask;                        // the (final-)stage mask
    std::optional<BinaryMask> dummy_mask;   // stage-A mask, two-step only
    std::optional<std::string> intermediate_ref;
    std::string output_ref;
    MaskReport mask_report;
    std::optional<MaskReport> dummy_mask_report;
    std::vector<std::string> rule_trace;
    std::optional<ConflictReport> conflict;
};

struct ExecutorOptions {
    double threshold_fraction = 0.02;
    RealizeOptions realize;
    RuleEngineOptions engine;
    const RuleTable* rule_table = &RuleTable::builtin();
};

namespace detail {

inline nlohmann::json step_report_json(const PlanStep& step, const StepArtifacts& a) {
    nlohmann::json j{{"step_index", a.step_index},
                     {"garment_id", step.garment.id},
                     {"stage", to_string(step.stage)},
                     {"instruction", step.instruction},
                     {"rule_trace", a.rule_trace},
                     {"mask", a.mask_report},
                     {"output", "output.png"}};
    if (a.conflict) j["conflict"] = *a.conflict;
    if (a.dummy_mask_report) j["dummy_mask"] = *a.dummy_mask_report;
    if (a.intermediate_ref) j["intermediate"] = "intermediate.png";
    if (step.dummy_spec) j["dummy_garment_id"] = step.dummy_spec->id;
    return j;
}

} // namespace detail

/// Runs one plan step. Direct stage: infer, realize, one try-on call.
/// Two-step stage: dummy garment with the all-default instruction first
/// (its mask covers the full existing C-trace, conflicting regions included),
/// re-segmentation of the intermediate, then the real garment under the
/// original instruction, now conflict-free.
inline StepArtifacts execute_step(const std::string& person_image_ref, const PlanStep& step,
                                  const LabelRaster& body, const LabelRaster& clothing,
                                  const Backends& backends,
                                  const std::filesystem::path& step_dir, int step_index = 0,
                                  const ExecutorOptions& opts = {}) {
    step.validate();
    std::filesystem::create_directories(step_dir);
    StepArtifacts artifacts;
    artifacts.step_index = step_index;

    std::string current_person = person_image_ref;
    const LabelRaster* cur_body = &body;
    const LabelRaster* cur_clothing = &clothing;
    SegmentationResult reseg; // storage for the stage-B maps

    if (step.stage == StepStage::dummy_then_target) {
        TraceEstimate dummy_est =
            infer_traces(*step.dummy_spec, StyleInstruction{}, body, clothing, *opts.rule_table,
                         opts.engine);
        BinaryMask dummy_mask = realize_mask(dummy_est, body, clothing, opts.realize);
        write_mask_png(step_dir / "mask_dummy.png", dummy_mask);
        artifacts.dummy_mask_report = mask_efficiency(dummy_mask);

        const std::string intermediate =
            backends.vto->try_on(TryOnRequest{current_person, step.dummy_spec->image_ref,
                                              dummy_mask},
                                 (step_dir / "intermediate.png").string());
        artifacts.dummy_mask = std::move(dummy_mask);
        artifacts.intermediate_ref = intermediate;
        for (const std::string& id : dummy_est.rule_trace)
            artifacts.rule_trace.push_back("dummy:" + id);

        reseg = backends.segmentation->segment(intermediate);
        if (reseg.body.width != body.width || reseg.body.height != body.height)
            throw BackendError("execute_step: re-segmentation of " + intermediate +
                               " returned maps of the wrong size");
        current_person = intermediate;
        cur_body = &reseg.body;
        cur_clothing = &reseg.clothing;
    }

    TraceEstimate est = infer_traces(step.garment, step.instruction, *cur_body, *cur_clothing,
                                     *opts.rule_table, opts.engine);
    artifacts.conflict = needs_two_step(est, *cur_body, *cur_clothing, opts.threshold_fraction);
    artifacts.mask = realize_mask(est, *cur_body, *cur_clothing, opts.realize);
    artifacts.mask_report = mask_efficiency(artifacts.mask);
    for (const std::string& id : est.rule_trace) artifacts.rule_trace.push_back(id);
    write_mask_png(step_dir / "mask.png", artifacts.mask);

    artifacts.output_ref =
        backends.vto->try_on(TryOnRequest{current_person, step.garment.image_ref, artifacts.mask},
                             (step_dir / "output.png").string());
    write_json_file(step_dir / "report.json", detail::step_report_json(step, artifacts));
    return artifacts;
}

// ---------------------------------------------------------------------------
// Plan execution
// ---------------------------------------------------------------------------

/// Outcome of a whole-plan run. Open-loop: the first failing step aborts the
/// plan; artifacts of completed steps are kept for diagnosis.
struct PlanRunResult {
    bool ok = true;
    std::string final_image_ref;
    std::vector<StepArtifacts> steps;
    int failed_step = -1;
    std::string error;
    std::string error_kind; // "backend" or "contract"
};

/// Sequential fold of execute_step with output->input chaining and
/// re-segmentation before every step. Writes
/// run_dir/step_<k>/{mask.png, mask_dummy.png?, intermediate.png?,
/// output.png, report.json} and run_dir/manifest.json.
inline PlanRunResult execute_plan(const ExecutionPlan& plan, const Backends& backends,
                                  const std::filesystem::path& run_dir,
                                  const ExecutorOptions& opts = {}) {
    std::filesystem::create_directories(run_dir);
    PlanRunResult result;
    result.final_image_ref = plan.source_image_ref;

    std::string current = plan.source_image_ref;
    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
        const PlanStep& step = plan.steps[k];
        try {
            SegmentationResult seg = backends.segmentation->segment(current);
            StepArtifacts a = execute_step(current, step, seg.body, seg.clothing, backends,
                                           run_dir / ("step_" + std::to_string(k)),
                                           static_cast<int>(k), opts);
            current = a.output_ref;
            result.final_image_ref = current;
            result.steps.push_back(std::move(a));
        } catch (const BackendError& e) {
            result.ok = false;
            result.failed_step = static_cast<int>(k);
            result.error = e.what();
            result.error_kind = "backend";
            break;
        } catch (const ContractError& e) {
            result.ok = false;
            result.failed_step = static_cast<int>(k);
            result.error = e.what();
            result.error_kind = "contract";
            break;
        }
    }

    // Artifact paths are run-relative so a run directory stays relocatable
    // and byte-reproducible wherever it is rooted.
    const std::string final_rel =
        result.steps.empty()
            ? result.final_image_ref
            : "step_" + std::to_string(result.steps.back().step_index) + "/output.png";
    nlohmann::json manifest{{"source_image", plan.source_image_ref},
                            {"plan", plan},
                            {"ok", result.ok},
                            {"final_image", final_rel}};
    nlohmann::json steps = nlohmann::json::array();
    for (const StepArtifacts& a : result.steps) {
        const std::string dir = "step_" + std::to_string(a.step_index);
        nlohmann::json s{{"dir", dir},
                         {"output", dir + "/output.png"},
                         {"mask", dir + "/mask.png"},
                         {"report", dir + "/report.json"}};
        if (a.dummy_mask) s["mask_dummy"] = dir + "/mask_dummy.png";
        if (a.intermediate_ref) s["intermediate"] = dir + "/intermediate.png";
        steps.push_back(s);
    }
    manifest["steps"] = steps;
    if (!result.ok) {
        manifest["failed_step"] = result.failed_step;
        manifest["error"] = result.error;
        manifest["error_kind"] = result.error_kind;
    }
    write_json_file(run_dir / "manifest.json", manifest);
    return result;
}

} // namespace ivton
