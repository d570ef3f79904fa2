#pragma once

// Parts-inclusion rules: map (garment classification, structured attributes,
// structured style instruction) to estimated traces, post-ops, and the body
// parts the style requires to stay bare.
//
// The table is data: an ordered list of rows, first match wins, with a
// catch-all default row guaranteeing a match. It ships built in and can be
// loaded from JSON for auditing or extension.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/garment.hpp"
#include "ivton/raster.hpp"
#include "ivton/trace_calculus.hpp"

namespace ivton {

enum class PostOp { convexify_legs, open_chest_stripe };

inline const char* to_string(PostOp p) {
    return p == PostOp::convexify_legs ? "convexify_legs" : "open_chest_stripe";
}

inline PostOp parse_post_op(const std::string& s) {
    if (s == "convexify_legs") return PostOp::convexify_legs;
    if (s == "open_chest_stripe") return PostOp::open_chest_stripe;
    throw ContractError("unknown post op '" + s + "'");
}

// ---------------------------------------------------------------------------
// Rule rows
// ---------------------------------------------------------------------------

/// Match pattern; every absent field is a wildcard, set-valued fields match
/// when the garment/instruction value is a member.
struct RuleMatch {
    std::optional<Classification> classification;
    std::optional<std::set<SleeveLength>> sleeve_length;
    std::optional<std::set<LegLength>> leg_length;
    std::optional<std::set<Closure>> closure;
    std::optional<bool> outerwear;
    std::optional<std::set<SleeveStyle>> sleeves;
    std::optional<std::set<ClosureStyle>> closure_state;
    std::optional<std::set<TuckStyle>> tuck;

    bool matches(const GarmentSpec& g, const StyleInstruction& s) const {
        if (classification && *classification != g.classification) return false;
        if (sleeve_length && !sleeve_length->count(g.sleeve_length)) return false;
        if (leg_length && !leg_length->count(g.leg_length)) return false;
        if (closure && !closure->count(g.closure)) return false;
        if (outerwear && *outerwear != g.outerwear) return false;
        if (sleeves && !sleeves->count(s.sleeves)) return false;
        if (closure_state && !closure_state->count(s.closure_state)) return false;
        if (tuck && !tuck->count(s.tuck)) return false;
        return true;
    }
};

struct RuleRow {
    std::string id;
    RuleMatch match;
    std::set<int> include_parts; // body-part labels to mask
    std::set<int> exclude_parts; // removed from include_parts after the union
    std::set<int> exposed_parts; // must remain unmasked to satisfy the style
    std::vector<PostOp> post_ops;
};

struct RuleTable {
    int version = 1;
    std::vector<RuleRow> rows;

    const RuleRow& first_match(const GarmentSpec& g, const StyleInstruction& s) const {
        for (const RuleRow& row : rows)
            if (row.match.matches(g, s)) return row;
        throw ContractError(
            "rule table: no row matches key {classification=" +
            std::string(to_string(g.classification)) +
            ", sleeve_length=" + to_string(g.sleeve_length) +
            ", leg_length=" + to_string(g.leg_length) + ", closure=" + to_string(g.closure) +
            ", outerwear=" + (g.outerwear ? "true" : "false") +
            ", sleeves=" + to_string(s.sleeves) + ", closure_state=" +
            to_string(s.closure_state) + ", tuck=" + to_string(s.tuck) + "}");
    }

    static const RuleTable& builtin();
};

// ---------------------------------------------------------------------------
// JSON (de)serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::set<int> parts_from_json(const nlohmann::json& arr) {
    std::set<int> out;
    for (const auto& n : arr) out.insert(body_part::id_of(n.get<std::string>()));
    return out;
}

inline nlohmann::json parts_to_json(const std::set<int>& parts) {
    nlohmann::json arr = nlohmann::json::array();
    for (int id : parts) arr.push_back(body_part::name(id));
    return arr;
}

template <typename E, typename Parse>
std::set<E> enum_set_from_json(const nlohmann::json& arr, Parse parse) {
    std::set<E> out;
    for (const auto& v : arr) out.insert(parse(v.template get<std::string>()));
    return out;
}

template <typename E>
nlohmann::json enum_set_to_json(const std::set<E>& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (E v : s) arr.push_back(to_string(v));
    return arr;
}

} // namespace detail

inline void to_json(nlohmann::json& j, const RuleRow& row) {
    nlohmann::json match = nlohmann::json::object();
    if (row.match.classification) match["classification"] = to_string(*row.match.classification);
    if (row.match.sleeve_length)
        match["sleeve_length"] = detail::enum_set_to_json(*row.match.sleeve_length);
    if (row.match.leg_length) match["leg_length"] = detail::enum_set_to_json(*row.match.leg_length);
    if (row.match.closure) match["closure"] = detail::enum_set_to_json(*row.match.closure);
    if (row.match.outerwear) match["outerwear"] = *row.match.outerwear;
    if (row.match.sleeves) match["sleeves"] = detail::enum_set_to_json(*row.match.sleeves);
    if (row.match.closure_state)
        match["closure_state"] = detail::enum_set_to_json(*row.match.closure_state);
    if (row.match.tuck) match["tuck"] = detail::enum_set_to_json(*row.match.tuck);
    nlohmann::json ops = nlohmann::json::array();
    for (PostOp p : row.post_ops) ops.push_back(to_string(p));
    j = nlohmann::json{{"id", row.id},
                       {"match", match},
                       {"include_parts", detail::parts_to_json(row.include_parts)},
                       {"exclude_parts", detail::parts_to_json(row.exclude_parts)},
                       {"exposed_parts", detail::parts_to_json(row.exposed_parts)},
                       {"post_ops", ops}};
}

inline void from_json(const nlohmann::json& j, RuleRow& row) {
    row.id = j.at("id").get<std::string>();
    const auto& m = j.at("match");
    if (m.contains("classification"))
        row.match.classification = parse_classification(m["classification"].get<std::string>());
    if (m.contains("sleeve_length"))
        row.match.sleeve_length =
            detail::enum_set_from_json<SleeveLength>(m["sleeve_length"], parse_sleeve_length);
    if (m.contains("leg_length"))
        row.match.leg_length =
            detail::enum_set_from_json<LegLength>(m["leg_length"], parse_leg_length);
    if (m.contains("closure"))
        row.match.closure = detail::enum_set_from_json<Closure>(m["closure"], parse_closure);
    if (m.contains("outerwear")) row.match.outerwear = m["outerwear"].get<bool>();
    if (m.contains("sleeves"))
        row.match.sleeves =
            detail::enum_set_from_json<SleeveStyle>(m["sleeves"], parse_sleeve_style);
    if (m.contains("closure_state"))
        row.match.closure_state =
            detail::enum_set_from_json<ClosureStyle>(m["closure_state"], parse_closure_style);
    if (m.contains("tuck"))
        row.match.tuck = detail::enum_set_from_json<TuckStyle>(m["tuck"], parse_tuck_style);
    row.include_parts = detail::parts_from_json(j.value("include_parts", nlohmann::json::array()));
    row.exclude_parts = detail::parts_from_json(j.value("exclude_parts", nlohmann::json::array()));
    row.exposed_parts = detail::parts_from_json(j.value("exposed_parts", nlohmann::json::array()));
    row.post_ops.clear();
    for (const auto& p : j.value("post_ops", nlohmann::json::array()))
        row.post_ops.push_back(parse_post_op(p.get<std::string>()));
}

inline void to_json(nlohmann::json& j, const RuleTable& t) {
    j = nlohmann::json{{"version", t.version}, {"rows", t.rows}};
}

inline void from_json(const nlohmann::json& j, RuleTable& t) {
    t.version = j.value("version", 1);
    t.rows = j.at("rows").get<std::vector<RuleRow>>();
}

// ---------------------------------------------------------------------------
// Built-in table
// ---------------------------------------------------------------------------

namespace detail {

inline RuleTable make_builtin_rule_table() {
    namespace bp = body_part;
    const std::set<int> upper_base{bp::upper_torso, bp::upper_arms};
    const std::set<int> upper_long{bp::upper_torso, bp::upper_arms, bp::lower_arms};
    const std::set<int> lower_base{bp::lower_torso, bp::upper_legs};
    const std::set<int> lower_long{bp::lower_torso, bp::upper_legs, bp::lower_legs};
    const std::set<SleeveLength> long_sleeves{SleeveLength::long_sleeve,
                                              SleeveLength::three_quarter};
    const std::set<LegLength> long_legs{LegLength::long_leg};
    const std::set<Closure> openable{Closure::buttons, Closure::zipper};
    const std::set<SleeveStyle> rolled_up{SleeveStyle::rolled_up};
    const std::set<ClosureStyle> open_state{ClosureStyle::open};

    auto join = [](std::set<int> a, const std::set<int>& b) {
        a.insert(b.begin(), b.end());
        return a;
    };

    RuleTable t;
    t.version = 1;
    auto add = [&t](std::string id, RuleMatch m, std::set<int> include, std::set<int> exposed,
                    std::vector<PostOp> ops) {
        RuleRow row;
        row.id = std::move(id);
        row.match = std::move(m);
        row.include_parts = std::move(include);
        row.exposed_parts = std::move(exposed);
        row.post_ops = std::move(ops);
        t.rows.push_back(std::move(row));
    };

    // Upper garments. A rolled-up instruction beats the garment's sleeve
    // length; lower arms stay bare.
    {
        RuleMatch m;
        m.classification = Classification::upper;
        m.sleeves = rolled_up;
        m.closure = openable;
        m.closure_state = open_state;
        add("upper.sleeves_up.open", m, upper_base, {bp::lower_arms},
            {PostOp::open_chest_stripe});
    }
    {
        RuleMatch m;
        m.classification = Classification::upper;
        m.sleeves = rolled_up;
        add("upper.sleeves_up", m, upper_base, {bp::lower_arms}, {});
    }
    {
        RuleMatch m;
        m.classification = Classification::upper;
        m.sleeve_length = long_sleeves;
        m.closure = openable;
        m.closure_state = open_state;
        add("upper.long_sleeve.open", m, upper_long, {}, {PostOp::open_chest_stripe});
    }
    {
        RuleMatch m;
        m.classification = Classification::upper;
        m.sleeve_length = long_sleeves;
        add("upper.long_sleeve", m, upper_long, {}, {});
    }
    {
        RuleMatch m;
        m.classification = Classification::upper;
        m.closure = openable;
        m.closure_state = open_state;
        add("upper.open", m, upper_base, {}, {PostOp::open_chest_stripe});
    }
    {
        RuleMatch m;
        m.classification = Classification::upper;
        add("upper.base", m, upper_base, {}, {});
    }

    // Lower garments. Outerwear lowers (coat-length pieces) get the convex
    // leg fill.
    {
        RuleMatch m;
        m.classification = Classification::lower;
        m.outerwear = true;
        m.leg_length = long_legs;
        m.closure = openable;
        m.closure_state = open_state;
        add("lower.outerwear.long_leg.open", m, lower_long, {},
            {PostOp::convexify_legs, PostOp::open_chest_stripe});
    }
    {
        RuleMatch m;
        m.classification = Classification::lower;
        m.outerwear = true;
        m.leg_length = long_legs;
        add("lower.outerwear.long_leg", m, lower_long, {}, {PostOp::convexify_legs});
    }
    {
        RuleMatch m;
        m.classification = Classification::lower;
        m.outerwear = true;
        m.closure = openable;
        m.closure_state = open_state;
        add("lower.outerwear.open", m, lower_base, {},
            {PostOp::convexify_legs, PostOp::open_chest_stripe});
    }
    {
        RuleMatch m;
        m.classification = Classification::lower;
        m.outerwear = true;
        add("lower.outerwear", m, lower_base, {}, {PostOp::convexify_legs});
    }
    {
        RuleMatch m;
        m.classification = Classification::lower;
        m.leg_length = long_legs;
        m.closure = openable;
        m.closure_state = open_state;
        add("lower.long_leg.open", m, lower_long, {}, {PostOp::open_chest_stripe});
    }
    {
        RuleMatch m;
        m.classification = Classification::lower;
        m.leg_length = long_legs;
        add("lower.long_leg", m, lower_long, {}, {});
    }
    {
        RuleMatch m;
        m.classification = Classification::lower;
        m.closure = openable;
        m.closure_state = open_state;
        add("lower.open", m, lower_base, {}, {PostOp::open_chest_stripe});
    }
    {
        RuleMatch m;
        m.classification = Classification::lower;
        add("lower.base", m, lower_base, {}, {});
    }

    // Overalls: union of both bases with the same sleeve/leg modifiers, legs
    // area always convexified (dresses and coats hang across the leg gap).
    struct SleeveCase {
        const char* tag;
        std::optional<std::set<SleeveStyle>> sleeves;
        std::optional<std::set<SleeveLength>> sleeve_length;
        bool long_arms;
        bool expose_arms;
    };
    struct LegCase {
        const char* tag;
        std::optional<std::set<LegLength>> leg_length;
        bool long_legs;
    };
    struct OpenCase {
        const char* tag;
        bool open;
    };
    const SleeveCase sleeve_cases[] = {
        {"sleeves_up", rolled_up, std::nullopt, false, true},
        {"long_sleeve", std::nullopt, long_sleeves, true, false},
        {"base", std::nullopt, std::nullopt, false, false},
    };
    const LegCase leg_cases[] = {
        {"long_leg", long_legs, true},
        {"base", std::nullopt, false},
    };
    const OpenCase open_cases[] = {{"open", true}, {"closed_or_default", false}};
    for (const auto& sc : sleeve_cases)
        for (const auto& lc : leg_cases)
            for (const auto& oc : open_cases) {
                RuleMatch m;
                m.classification = Classification::overall;
                m.sleeves = sc.sleeves;
                m.sleeve_length = sc.sleeve_length;
                m.leg_length = lc.leg_length;
                if (oc.open) {
                    m.closure = openable;
                    m.closure_state = open_state;
                }
                std::set<int> include = join(sc.long_arms ? upper_long : upper_base,
                                             lc.long_legs ? lower_long : lower_base);
                std::set<int> exposed = sc.expose_arms ? std::set<int>{bp::lower_arms}
                                                       : std::set<int>{};
                std::vector<PostOp> ops{PostOp::convexify_legs};
                if (oc.open) ops.push_back(PostOp::open_chest_stripe);
                std::string id = std::string("overall.") + sc.tag + "." + lc.tag;
                if (oc.open) id += ".open";
                add(id, m, std::move(include), std::move(exposed), std::move(ops));
            }

    // Catch-all default: conservative torso-and-limb-roots coverage.
    add("default", RuleMatch{},
        {bp::upper_torso, bp::lower_torso, bp::upper_arms, bp::upper_legs}, {}, {});
    return t;
}

} // namespace detail

inline const RuleTable& RuleTable::builtin() {
    static const RuleTable table = detail::make_builtin_rule_table();
    return table;
}

// ---------------------------------------------------------------------------
// Trace estimation
// ---------------------------------------------------------------------------

/// Estimated traces plus the processing the rule table mandates. Also carries
/// the ids of the rule rows that fired, for machine-readable auditing.
struct TraceEstimate {
    Trace b_hat{MapKind::body_parts, {}};
    Trace c_hat{MapKind::clothing, {}};
    std::vector<PostOp> post_ops;
    std::set<int> exposed_parts;
    std::vector<std::string> rule_trace;
};

struct RuleEngineOptions {
    long long noise_threshold = 0;
};

/// Deterministic rule-table evaluation. The clothing trace collects every
/// segment (not background, not the unclothed area, not footwear/accessory)
/// that overlaps the body regions the garment will occupy or expose.
inline TraceEstimate infer_traces(const GarmentSpec& garment, const StyleInstruction& instruction,
                                  const LabelRaster& body, const LabelRaster& clothing,
                                  const RuleTable& table = RuleTable::builtin(),
                                  const RuleEngineOptions& opts = {}) {
    garment.validate();
    if (body.width != clothing.width || body.height != clothing.height)
        throw ContractError("infer_traces: body and clothing map dimensions differ");

    const RuleRow& row = table.first_match(garment, instruction);

    TraceEstimate est;
    est.rule_trace.push_back(row.id);
    for (int id : row.include_parts)
        if (!row.exclude_parts.count(id)) est.b_hat.labels.insert(id);
    // Identity parts and background are never masked, whatever the table says.
    est.b_hat.labels.erase(body_part::background);
    for (int id : body_part::identity_parts()) est.b_hat.labels.erase(id);
    est.exposed_parts = row.exposed_parts;
    for (int id : est.exposed_parts)
        if (est.b_hat.labels.count(id))
            throw ContractError("rule row '" + row.id +
                                "': exposed_parts overlaps include_parts (" +
                                body_part::name(id) + ")");
    for (PostOp op : row.post_ops)
        if (std::find(est.post_ops.begin(), est.post_ops.end(), op) == est.post_ops.end())
            est.post_ops.push_back(op);

    // C-trace: existing clothing over the affected body regions.
    std::set<int> basis_parts = est.b_hat.labels;
    basis_parts.insert(est.exposed_parts.begin(), est.exposed_parts.end());
    BinaryMask basis = region_of(body, basis_parts);
    long long counts[256] = {};
    for (std::size_t i = 0; i < clothing.labels.size(); ++i)
        if (basis.bits[i]) ++counts[clothing.labels[i]];
    for (const auto& [id, name] : clothing.legend) {
        if (id < clothing_label::first_segment) continue;
        if (counts[id] <= opts.noise_threshold) continue;
        auto cat = clothing.categories.find(id);
        if (cat == clothing.categories.end())
            throw ContractError("infer_traces: clothing segment " + std::to_string(id) + " ('" +
                                name + "') has no category tag");
        if (cat->second == ClothingCategory::footwear ||
            cat->second == ClothingCategory::accessory)
            continue;
        est.c_hat.labels.insert(id);
    }
    return est;
}

// ---------------------------------------------------------------------------
// Mask realization
// ---------------------------------------------------------------------------

struct RealizeOptions {
    /// Stripe width as a fraction of the anchoring torso bbox width.
    double stripe_fraction = 0.18;
    /// Optional boundary dilation, applied before the exposure and identity
    /// subtractions so those guarantees survive it. 0 = off.
    int dilation_radius = 0;
};

/// Union of the estimated traces, then post-ops in order, then the exposure
/// and identity subtractions.
inline BinaryMask realize_mask(const TraceEstimate& est, const LabelRaster& body,
                               const LabelRaster& clothing, const RealizeOptions& opts = {}) {
    BinaryMask m = estimated_mask(body, clothing, est.b_hat, est.c_hat);
    for (PostOp op : est.post_ops) {
        if (op == PostOp::convexify_legs) {
            BinaryMask legs_area = region_of(
                body, {body_part::lower_torso, body_part::upper_legs, body_part::lower_legs});
            m = mask_union(m, convex_fill(mask_intersect(m, legs_area)));
        } else { // open_chest_stripe
            std::set<int> torso_parts;
            for (int id : {body_part::upper_torso, body_part::lower_torso})
                if (est.b_hat.labels.count(id)) torso_parts.insert(id);
            BinaryMask anchor = region_of(body, torso_parts);
            m = remove_center_stripe(m, anchor, opts.stripe_fraction);
        }
    }
    if (opts.dilation_radius > 0) m = dilate(m, opts.dilation_radius);
    m = mask_subtract(m, region_of(body, est.exposed_parts));
    m = mask_subtract(m, region_of(body, body_part::identity_parts()));
    return m;
}

} // namespace ivton
