#pragma once

// Trace calculus over segmentation maps: which segments a region touches,
// the optimal (minimally invasive) inpainting mask, its trace-based estimate,
// and mask efficiency.

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/raster.hpp"

namespace ivton {

enum class MapKind { body_parts, clothing };

inline const char* to_string(MapKind k) {
    return k == MapKind::body_parts ? "body_parts" : "clothing";
}

/// Set of segment labels of one map kind. Never contains the background
/// label; for clothing maps the unclothed area is excluded unless explicitly
/// requested (see TraceOptions).
struct Trace {
    MapKind map_kind = MapKind::body_parts;
    std::set<int> labels;
};

struct TraceOptions {
    /// A segment joins the trace iff its overlap with the probe region
    /// exceeds this many pixels. 0 = the exact nonempty-intersection rule;
    /// raise it to tolerate noisy real-segmenter output.
    long long noise_threshold = 0;
    /// Include the unclothed area (clothing label 1) in clothing traces.
    bool include_unclothed = false;
};

/// Labels of `raster` whose region intersects `probe` in more than
/// `noise_threshold` pixels. Background never joins; for clothing maps the
/// unclothed area joins only on request.
inline Trace compute_trace(const LabelRaster& raster, const BinaryMask& probe, MapKind kind,
                           const TraceOptions& opts = {}) {
    require_dims(raster, probe, "compute_trace");
    long long counts[256] = {};
    for (std::size_t i = 0; i < raster.labels.size(); ++i)
        if (probe.bits[i]) ++counts[raster.labels[i]];
    Trace t;
    t.map_kind = kind;
    for (int id = 0; id < 256; ++id) {
        if (counts[id] <= opts.noise_threshold) continue;
        if (id == 0) continue;
        if (kind == MapKind::clothing && id == clothing_label::unclothed &&
            !opts.include_unclothed)
            continue;
        if (!raster.legend.count(id))
            throw ContractError("compute_trace: pixel label " + std::to_string(id) +
                                " not in raster legend");
        t.labels.insert(id);
    }
    return t;
}

/// The minimally invasive mask for a garment whose ideal position is `v`:
/// union of the clothing segments `v` touches (unclothed area excluded) with
/// `v` itself.
inline BinaryMask optimal_mask(const LabelRaster& clothing, const BinaryMask& v,
                               const TraceOptions& opts = {}) {
    require_dims(clothing, v, "optimal_mask");
    TraceOptions t = opts;
    t.include_unclothed = false;
    Trace trace = compute_trace(clothing, v, MapKind::clothing, t);
    return mask_union(region_of(clothing, trace.labels), v);
}

/// Union of the named clothing regions and the named body-part regions.
inline BinaryMask estimated_mask(const LabelRaster& body, const LabelRaster& clothing,
                                 const Trace& b_hat, const Trace& c_hat) {
    if (b_hat.map_kind != MapKind::body_parts)
        throw ContractError("estimated_mask: b_hat must be a body-parts trace, got " +
                            std::string(to_string(b_hat.map_kind)));
    if (c_hat.map_kind != MapKind::clothing)
        throw ContractError("estimated_mask: c_hat must be a clothing trace, got " +
                            std::string(to_string(c_hat.map_kind)));
    if (body.width != clothing.width || body.height != clothing.height)
        throw ContractError("estimated_mask: body and clothing map dimensions differ");
    if (b_hat.labels.count(0) || c_hat.labels.count(0))
        throw ContractError("estimated_mask: traces must not contain the background label");
    return mask_union(region_of(body, b_hat.labels), region_of(clothing, c_hat.labels));
}

/// Mask-to-image accounting. efficiency = 1 - mask_area / total_area,
/// computed from integer pixel counts with a single double division.
struct MaskReport {
    long long mask_area = 0;
    long long total_area = 0;
    double efficiency = 0.0;
};

inline MaskReport mask_efficiency(const BinaryMask& m) {
    const long long total = static_cast<long long>(m.width) * m.height;
    if (total <= 0)
        throw ContractError("mask_efficiency: mask has zero size");
    MaskReport r;
    r.mask_area = area(m);
    r.total_area = total;
    r.efficiency = 1.0 - static_cast<double>(r.mask_area) / static_cast<double>(r.total_area);
    return r;
}

inline void to_json(nlohmann::json& j, const MaskReport& r) {
    j = nlohmann::json{{"mask_area", r.mask_area},
                       {"total_area", r.total_area},
                       {"efficiency", r.efficiency}};
}

inline void from_json(const nlohmann::json& j, MaskReport& r) {
    j.at("mask_area").get_to(r.mask_area);
    j.at("total_area").get_to(r.total_area);
    j.at("efficiency").get_to(r.efficiency);
}

} // namespace ivton
