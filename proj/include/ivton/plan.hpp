#pragma once

// Ordered try-on plan: one step per garment, each carrying its summarized
// style instruction and, where direct inpainting cannot satisfy the style,
// the dummy garment for the two-step strategy.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/garment.hpp"

namespace ivton {

enum class StepStage { direct, dummy_then_target };

inline const char* to_string(StepStage s) {
    return s == StepStage::direct ? "direct" : "dummy_then_target";
}

inline StepStage parse_step_stage(const std::string& s) {
    if (s == "direct") return StepStage::direct;
    if (s == "dummy_then_target") return StepStage::dummy_then_target;
    throw ContractError("unknown step stage '" + s + "'");
}

struct PlanStep {
    GarmentSpec garment;
    StyleInstruction instruction;
    StepStage stage = StepStage::direct;
    std::optional<GarmentSpec> dummy_spec; // present iff stage == dummy_then_target

    void validate() const {
        if ((stage == StepStage::dummy_then_target) != dummy_spec.has_value())
            throw ContractError("plan step '" + garment.id +
                                "': dummy_spec must be present exactly for dummy_then_target");
    }
};

struct ExecutionPlan {
    std::vector<PlanStep> steps;
    std::string source_image_ref;
};

inline void to_json(nlohmann::json& j, const PlanStep& s) {
    j = nlohmann::json{{"garment", s.garment},
                       {"instruction", s.instruction},
                       {"stage", to_string(s.stage)}};
    if (s.dummy_spec) j["dummy"] = *s.dummy_spec;
}

inline void from_json(const nlohmann::json& j, PlanStep& s) {
    j.at("garment").get_to(s.garment);
    j.at("instruction").get_to(s.instruction);
    s.stage = parse_step_stage(j.at("stage").get<std::string>());
    if (j.contains("dummy")) s.dummy_spec = j["dummy"].get<GarmentSpec>();
    s.validate();
}

inline void to_json(nlohmann::json& j, const ExecutionPlan& p) {
    j = nlohmann::json{{"source_image", p.source_image_ref}, {"steps", p.steps}};
}

inline void from_json(const nlohmann::json& j, ExecutionPlan& p) {
    j.at("source_image").get_to(p.source_image_ref);
    p.steps = j.at("steps").get<std::vector<PlanStep>>();
}

} // namespace ivton
