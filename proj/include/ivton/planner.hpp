#pragma once

// The top-level planner: orders garments for sequential single-garment
// try-on, attaches per-garment instructions, and decides per step whether
// the two-step dummy strategy is needed.
//
// The deterministic rank table is the default planner. A VLM backend, when
// configured, is only consulted after the deterministic parse/resolve path
// gives up, and its proposals are validated, never trusted.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ivton/backends.hpp"
#include "ivton/errors.hpp"
#include "ivton/executor.hpp"
#include "ivton/garment.hpp"
#include "ivton/instruction.hpp"
#include "ivton/plan.hpp"
#include "ivton/rule_engine.hpp"

namespace ivton {

// ---------------------------------------------------------------------------
// Ordering
// ---------------------------------------------------------------------------

/// Layering rank, scaled x2 so the tucked-upper exception (1.5) stays
/// integral: overall=2, tucked upper=3, lower=4, upper=6, outerwear=8.
/// A tucked upper goes before the lower garment so the lower garment's later
/// mask overlays the hem.
inline int layer_rank(const GarmentSpec& g, const StyleInstruction& s) {
    if (g.outerwear) return 8;
    switch (g.classification) {
    case Classification::overall: return 2;
    case Classification::lower: return 4;
    case Classification::upper: return s.tuck == TuckStyle::tucked ? 3 : 6;
    }
    return 6;
}

/// Deterministic try-on order: ascending layer rank, ties in input order.
inline std::vector<std::string>
order_garments(const std::vector<GarmentSpec>& garments,
               const std::map<std::string, StyleInstruction>& bindings) {
    if (garments.empty())
        throw ContractError("order_garments: at least one garment required");
    std::vector<std::size_t> idx(garments.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        auto rank = [&](std::size_t i) {
            const GarmentSpec& g = garments[i];
            auto it = bindings.find(g.id);
            return layer_rank(g, it == bindings.end() ? StyleInstruction{} : it->second);
        };
        return rank(a) < rank(b);
    });
    std::vector<std::string> order;
    for (std::size_t i : idx) order.push_back(garments[i].id);
    return order;
}

/// Checks the layering invariant: an outerwear garment never precedes a
/// non-outerwear garment whose rule-table coverage overlaps its own.
inline bool order_satisfies_layering(const std::vector<GarmentSpec>& garments,
                                     const std::map<std::string, StyleInstruction>& bindings,
                                     const std::vector<std::string>& order,
                                     const RuleTable& table = RuleTable::builtin()) {
    auto parts_of = [&](const GarmentSpec& g) {
        auto it = bindings.find(g.id);
        StyleInstruction s = it == bindings.end() ? StyleInstruction{} : it->second;
        const RuleRow& row = table.first_match(g, s);
        std::set<int> parts;
        for (int id : row.include_parts)
            if (!row.exclude_parts.count(id)) parts.insert(id);
        parts.insert(row.exposed_parts.begin(), row.exposed_parts.end());
        return parts;
    };
    std::map<std::string, const GarmentSpec*> by_id;
    for (const GarmentSpec& g : garments) by_id[g.id] = &g;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const GarmentSpec* outer = by_id.at(order[i]);
        if (!outer->outerwear) continue;
        std::set<int> outer_parts = parts_of(*outer);
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const GarmentSpec* later = by_id.at(order[j]);
            if (later->outerwear) continue;
            for (int id : parts_of(*later))
                if (outer_parts.count(id)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Plan construction
// ---------------------------------------------------------------------------

struct PlannerOptions {
    Lexicon lexicon = Lexicon::builtin();
    SynonymTable synonyms;
    ExecutorOptions executor;
};

struct BuildPlanResult {
    ExecutionPlan plan;
    std::vector<std::string> diagnostics; // e.g. rejected VLM proposals
};

namespace detail {

inline VlmProposal validated_vlm_proposal(VlmPlanner& vlm,
                                          const std::vector<GarmentSpec>& garments,
                                          const std::string& instruction_text,
                                          const std::string& person_image_ref) {
    VlmProposal p = vlm.propose(garments, instruction_text, person_image_ref);
    std::set<std::string> ids;
    for (const GarmentSpec& g : garments) ids.insert(g.id);
    for (const auto& [id, _] : p.instructions)
        if (!ids.count(id))
            throw BackendError("vlm planner '" + vlm.name() + "' mentions unknown garment '" +
                               id + "'");
    for (const std::string& id : p.order)
        if (!ids.count(id))
            throw BackendError("vlm planner '" + vlm.name() + "' ordered unknown garment '" + id +
                               "'");
    return p;
}

} // namespace detail

/// Parse + resolve + order + per-garment conflict staging. When the
/// deterministic parse cannot bind the text (residual text or ambiguity), a
/// configured VLM backend is consulted; its ordering is kept only when it is
/// a permutation satisfying the layering invariant, otherwise the rank table
/// orders the garments under the VLM's instruction fields.
inline BuildPlanResult build_plan(const std::vector<GarmentSpec>& garments,
                                  const std::string& instruction_text, const LabelRaster& body,
                                  const LabelRaster& clothing,
                                  const std::string& source_image_ref, const Backends& backends,
                                  const PlannerOptions& opts = {}) {
    if (garments.empty())
        throw ContractError("build_plan: at least one garment required");
    for (const GarmentSpec& g : garments) g.validate();

    BuildPlanResult result;
    std::map<std::string, StyleInstruction> bindings;
    std::vector<std::string> order;

    ParsedInstruction parsed = parse_instruction(instruction_text, opts.lexicon);
    std::string deterministic_failure;
    if (parsed.partial()) {
        deterministic_failure = "instruction text not covered by the grammar: '" +
                                parsed.residual + "'";
    } else {
        try {
            bindings = resolve_bindings(parsed, garments, opts.synonyms);
        } catch (const ContractError& e) {
            deterministic_failure = e.what();
        }
    }

    if (deterministic_failure.empty()) {
        order = order_garments(garments, bindings);
    } else {
        if (!backends.vlm)
            throw ContractError("build_plan: " + deterministic_failure +
                                " (no VLM backend configured)");
        VlmProposal proposal = detail::validated_vlm_proposal(*backends.vlm, garments,
                                                              instruction_text,
                                                              source_image_ref);
        for (const GarmentSpec& g : garments) bindings[g.id]; // default-init
        for (const auto& [id, instr] : proposal.instructions) bindings[id] = instr;

        std::set<std::string> proposed(proposal.order.begin(), proposal.order.end());
        const bool is_permutation = proposal.order.size() == garments.size() &&
                                    proposed.size() == garments.size();
        if (is_permutation &&
            order_satisfies_layering(garments, bindings, proposal.order,
                                     *opts.executor.rule_table)) {
            order = proposal.order;
        } else {
            result.diagnostics.push_back("vlm ordering rejected (not a layering-valid "
                                         "permutation); using the rank table");
            order = order_garments(garments, bindings);
        }
    }

    std::map<std::string, const GarmentSpec*> by_id;
    for (const GarmentSpec& g : garments) by_id[g.id] = &g;

    result.plan.source_image_ref = source_image_ref;
    for (const std::string& id : order) {
        const GarmentSpec& g = *by_id.at(id);
        PlanStep step;
        step.garment = g;
        step.instruction = bindings[id];
        TraceEstimate est = infer_traces(g, step.instruction, body, clothing,
                                         *opts.executor.rule_table, opts.executor.engine);
        ConflictReport report =
            needs_two_step(est, body, clothing, opts.executor.threshold_fraction);
        if (report.two_step) {
            if (!backends.dummy)
                throw BackendError("build_plan: step '" + id +
                                   "' needs the two-step strategy but no dummy-garment "
                                   "provider is configured");
            step.stage = StepStage::dummy_then_target;
            step.dummy_spec = select_dummy(g, report, *backends.dummy);
        }
        step.validate();
        result.plan.steps.push_back(std::move(step));
    }
    return result;
}

} // namespace ivton
