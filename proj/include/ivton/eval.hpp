#pragma once

// Dataset-evaluation harness: scans a pairs directory, computes the
// trace-based mask and the bounding-box baseline per pair, measures
// efficiency (and SSIM where a ground-truth try-on image exists), and
// aggregates per category.

#include <algorithm>
#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include "ivton/backends.hpp"
#include "ivton/errors.hpp"
#include "ivton/executor.hpp"
#include "ivton/garment.hpp"
#include "ivton/io_util.hpp"
#include "ivton/metrics.hpp"
#include "ivton/png_io.hpp"
#include "ivton/rule_engine.hpp"

namespace ivton {

struct DatasetPair {
    std::string pair_id;
    std::filesystem::path dir;
    GarmentSpec garment; // image_ref absolutized against the pair directory
    std::string category;
    bool has_truth = false;
};

/// Finds every directory under `root` containing a person.png with a
/// garment_spec.json, sorted by pair id. The pair's category comes from the
/// spec's "eval_category" field (default "synthetic").
inline std::vector<DatasetPair> scan_dataset(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::exists(root))
        throw ContractError("dataset root does not exist: " + root.string());
    std::vector<DatasetPair> pairs;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const fs::path dir = entry.path();
        if (!fs::exists(dir / "person.png") || !fs::exists(dir / "garment_spec.json")) continue;
        DatasetPair p;
        p.pair_id = dir.filename().string();
        p.dir = dir;
        json spec_json = read_json_file(dir / "garment_spec.json");
        p.garment = spec_json.get<GarmentSpec>();
        if (fs::path(p.garment.image_ref).is_relative())
            p.garment.image_ref = (dir / p.garment.image_ref).string();
        p.category = spec_json.value("eval_category", std::string("synthetic"));
        if (!eval_category::is_known(p.category))
            throw ContractError("pair " + p.pair_id + ": unknown eval_category '" + p.category +
                                "'");
        p.has_truth = fs::exists(dir / "truth.png");
        pairs.push_back(std::move(p));
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const DatasetPair& a, const DatasetPair& b) { return a.pair_id < b.pair_id; });
    return pairs;
}

/// Bounding-box baseline masker: the filled bbox of the same trace regions,
/// with none of the trace masker's shaping.
inline BinaryMask bbox_baseline_mask(const TraceEstimate& est, const LabelRaster& body,
                                     const LabelRaster& clothing) {
    return filled_bounding_box(estimated_mask(body, clothing, est.b_hat, est.c_hat));
}

/// Evaluates one pair under the empty instruction. Artifacts (mask, baseline
/// mask, try-on output) land in `work_dir` when given.
inline EvalRecord evaluate_pair(const DatasetPair& pair, const Backends& backends,
                                const ExecutorOptions& opts = {},
                                const std::filesystem::path& work_dir = {}) {
    SegmentationResult seg = backends.segmentation->segment((pair.dir / "person.png").string());
    TraceEstimate est = infer_traces(pair.garment, StyleInstruction{}, seg.body, seg.clothing,
                                     *opts.rule_table, opts.engine);
    BinaryMask ours = realize_mask(est, seg.body, seg.clothing, opts.realize);
    BinaryMask baseline = bbox_baseline_mask(est, seg.body, seg.clothing);

    EvalRecord record;
    record.pair_id = pair.pair_id;
    record.category = pair.category;
    record.efficiency = mask_efficiency(ours).efficiency;
    record.bbox_efficiency = mask_efficiency(baseline).efficiency;

    const bool keep_artifacts = !work_dir.empty();
    const std::filesystem::path art_dir =
        keep_artifacts ? work_dir
                       : std::filesystem::temp_directory_path() / "ivton_eval_tmp" /
                             pair.pair_id;
    std::filesystem::create_directories(art_dir);
    write_mask_png(art_dir / "mask.png", ours);
    write_mask_png(art_dir / "mask_bbox.png", baseline);
    if (pair.has_truth) {
        const std::filesystem::path out_png = art_dir / "output.png";
        backends.vto->try_on(
            TryOnRequest{(pair.dir / "person.png").string(), pair.garment.image_ref, ours},
            out_png.string());
        record.ssim = ssim(read_image_rgb(out_png), read_image_rgb(pair.dir / "truth.png"));
    }
    if (!keep_artifacts) std::filesystem::remove_all(art_dir);
    return record;
}

struct EvalRunResult {
    std::vector<EvalRecord> records;
    std::map<std::string, CategoryAggregate> aggregates;
    std::vector<std::string> failures; // "pair_id: reason", excluded from records
};

/// Evaluates every pair (pairs are independent; `jobs` > 1 runs them in a
/// thread pool). Per-pair failures are recorded and excluded.
inline EvalRunResult run_eval(const std::filesystem::path& root, const Backends& backends,
                              const ExecutorOptions& opts = {},
                              const std::filesystem::path& work_dir = {}, int jobs = 1) {
    const std::vector<DatasetPair> pairs = scan_dataset(root);
    EvalRunResult result;
    std::vector<std::optional<EvalRecord>> slots(pairs.size());
    std::vector<std::string> errors(pairs.size());

    auto run_one = [&](std::size_t i) {
        try {
            slots[i] = evaluate_pair(pairs[i], backends, opts,
                                     work_dir.empty() ? std::filesystem::path{}
                                                      : work_dir / pairs[i].pair_id);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) run_one(i);
    } else {
        std::vector<std::future<void>> futures;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            futures.push_back(std::async(std::launch::async, run_one, i));
        for (auto& f : futures) f.get();
    }

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (slots[i])
            result.records.push_back(*slots[i]);
        else
            result.failures.push_back(pairs[i].pair_id + ": " + errors[i]);
    }
    result.aggregates = aggregate(result.records);
    return result;
}

inline json eval_result_json(const EvalRunResult& r) {
    json aggs = json::object();
    for (const auto& [cat, a] : r.aggregates) aggs[cat] = a;
    return json{{"records", r.records}, {"aggregate", aggs}, {"failures", r.failures}};
}

} // namespace ivton
