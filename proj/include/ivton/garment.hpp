#pragma once

// Structured garment descriptors and style state. These are the inputs the
// rule table keys on; they arrive from upstream (spec files, a backend, or
// by hand), never from pixels.

#include <string>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/raster.hpp"

namespace ivton {

enum class Classification { upper, lower, overall };
enum class SleeveLength { sleeveless, short_sleeve, three_quarter, long_sleeve, not_applicable };
enum class LegLength { short_leg, long_leg, not_applicable };
enum class Closure { none, buttons, zipper };

inline const char* to_string(Classification c) {
    switch (c) {
    case Classification::upper: return "upper";
    case Classification::lower: return "lower";
    case Classification::overall: return "overall";
    }
    return "?";
}

inline Classification parse_classification(const std::string& s) {
    if (s == "upper") return Classification::upper;
    if (s == "lower") return Classification::lower;
    if (s == "overall") return Classification::overall;
    throw ContractError("unknown classification '" + s + "' (expected upper|lower|overall)");
}

inline const char* to_string(SleeveLength s) {
    switch (s) {
    case SleeveLength::sleeveless: return "sleeveless";
    case SleeveLength::short_sleeve: return "short";
    case SleeveLength::three_quarter: return "three_quarter";
    case SleeveLength::long_sleeve: return "long";
    case SleeveLength::not_applicable: return "not_applicable";
    }
    return "?";
}

inline SleeveLength parse_sleeve_length(const std::string& s) {
    if (s == "sleeveless") return SleeveLength::sleeveless;
    if (s == "short") return SleeveLength::short_sleeve;
    if (s == "three_quarter") return SleeveLength::three_quarter;
    if (s == "long") return SleeveLength::long_sleeve;
    if (s == "not_applicable") return SleeveLength::not_applicable;
    throw ContractError("unknown sleeve_length '" + s + "'");
}

inline const char* to_string(LegLength l) {
    switch (l) {
    case LegLength::short_leg: return "short";
    case LegLength::long_leg: return "long";
    case LegLength::not_applicable: return "not_applicable";
    }
    return "?";
}

inline LegLength parse_leg_length(const std::string& s) {
    if (s == "short") return LegLength::short_leg;
    if (s == "long") return LegLength::long_leg;
    if (s == "not_applicable") return LegLength::not_applicable;
    throw ContractError("unknown leg_length '" + s + "'");
}

inline const char* to_string(Closure c) {
    switch (c) {
    case Closure::none: return "none";
    case Closure::buttons: return "buttons";
    case Closure::zipper: return "zipper";
    }
    return "?";
}

inline Closure parse_closure(const std::string& s) {
    if (s == "none") return Closure::none;
    if (s == "buttons") return Closure::buttons;
    if (s == "zipper") return Closure::zipper;
    throw ContractError("unknown closure '" + s + "'");
}

// ---------------------------------------------------------------------------
// GarmentSpec
// ---------------------------------------------------------------------------

struct GarmentSpec {
    std::string id;
    Classification classification = Classification::upper;
    SleeveLength sleeve_length = SleeveLength::not_applicable;
    LegLength leg_length = LegLength::not_applicable;
    Closure closure = Closure::none;
    bool outerwear = false;
    std::string category_noun; // e.g. "shirt", "jacket", "pants", "dress"
    std::string image_ref;     // opaque reference to the garment image asset

    /// sleeve_length is not_applicable iff the garment is a lower;
    /// leg_length is not_applicable iff the garment is an upper.
    void validate() const {
        const bool sleeve_na = sleeve_length == SleeveLength::not_applicable;
        const bool leg_na = leg_length == LegLength::not_applicable;
        if (sleeve_na != (classification == Classification::lower))
            throw ContractError("garment '" + id +
                                "': sleeve_length must be not_applicable exactly for lower "
                                "garments");
        if (leg_na != (classification == Classification::upper))
            throw ContractError("garment '" + id +
                                "': leg_length must be not_applicable exactly for upper "
                                "garments");
    }

    /// Clothing-map category this garment produces when worn.
    ClothingCategory clothing_category() const {
        if (outerwear) return ClothingCategory::outerwear;
        switch (classification) {
        case Classification::upper: return ClothingCategory::upper_garment;
        case Classification::lower: return ClothingCategory::lower_garment;
        case Classification::overall: return ClothingCategory::overall_garment;
        }
        return ClothingCategory::upper_garment;
    }
};

inline void to_json(nlohmann::json& j, const GarmentSpec& g) {
    j = nlohmann::json{{"id", g.id},
                       {"classification", to_string(g.classification)},
                       {"sleeve_length", to_string(g.sleeve_length)},
                       {"leg_length", to_string(g.leg_length)},
                       {"closure", to_string(g.closure)},
                       {"outerwear", g.outerwear},
                       {"category_noun", g.category_noun},
                       {"image_ref", g.image_ref}};
}

inline void from_json(const nlohmann::json& j, GarmentSpec& g) {
    g.id = j.at("id").get<std::string>();
    g.classification = parse_classification(j.at("classification").get<std::string>());
    g.sleeve_length = j.contains("sleeve_length")
                          ? parse_sleeve_length(j["sleeve_length"].get<std::string>())
                          : SleeveLength::not_applicable;
    g.leg_length = j.contains("leg_length")
                       ? parse_leg_length(j["leg_length"].get<std::string>())
                       : LegLength::not_applicable;
    g.closure = j.contains("closure") ? parse_closure(j["closure"].get<std::string>())
                                      : Closure::none;
    g.outerwear = j.value("outerwear", false);
    g.category_noun = j.value("category_noun", std::string());
    g.image_ref = j.value("image_ref", std::string());
    g.validate();
}

// ---------------------------------------------------------------------------
// StyleInstruction
// ---------------------------------------------------------------------------

enum class SleeveStyle { unspecified, rolled_up, rolled_down };
enum class ClosureStyle { unspecified, open, closed };
enum class TuckStyle { unspecified, tucked, untucked };

inline const char* to_string(SleeveStyle s) {
    switch (s) {
    case SleeveStyle::unspecified: return "default";
    case SleeveStyle::rolled_up: return "rolled_up";
    case SleeveStyle::rolled_down: return "rolled_down";
    }
    return "?";
}

inline SleeveStyle parse_sleeve_style(const std::string& s) {
    if (s == "default") return SleeveStyle::unspecified;
    if (s == "rolled_up") return SleeveStyle::rolled_up;
    if (s == "rolled_down") return SleeveStyle::rolled_down;
    throw ContractError("unknown sleeves style '" + s + "'");
}

inline const char* to_string(ClosureStyle s) {
    switch (s) {
    case ClosureStyle::unspecified: return "default";
    case ClosureStyle::open: return "open";
    case ClosureStyle::closed: return "closed";
    }
    return "?";
}

inline ClosureStyle parse_closure_style(const std::string& s) {
    if (s == "default") return ClosureStyle::unspecified;
    if (s == "open") return ClosureStyle::open;
    if (s == "closed") return ClosureStyle::closed;
    throw ContractError("unknown closure_state style '" + s + "'");
}

inline const char* to_string(TuckStyle s) {
    switch (s) {
    case TuckStyle::unspecified: return "default";
    case TuckStyle::tucked: return "tucked";
    case TuckStyle::untucked: return "untucked";
    }
    return "?";
}

inline TuckStyle parse_tuck_style(const std::string& s) {
    if (s == "default") return TuckStyle::unspecified;
    if (s == "tucked") return TuckStyle::tucked;
    if (s == "untucked") return TuckStyle::untucked;
    throw ContractError("unknown tuck style '" + s + "'");
}

/// Structured style state for one garment. The all-default instance is the
/// empty instruction.
struct StyleInstruction {
    SleeveStyle sleeves = SleeveStyle::unspecified;
    ClosureStyle closure_state = ClosureStyle::unspecified;
    TuckStyle tuck = TuckStyle::unspecified;

    bool is_default() const {
        return sleeves == SleeveStyle::unspecified &&
               closure_state == ClosureStyle::unspecified && tuck == TuckStyle::unspecified;
    }

    friend bool operator==(const StyleInstruction& a, const StyleInstruction& b) {
        return a.sleeves == b.sleeves && a.closure_state == b.closure_state && a.tuck == b.tuck;
    }
};

inline void to_json(nlohmann::json& j, const StyleInstruction& s) {
    j = nlohmann::json{{"sleeves", to_string(s.sleeves)},
                       {"closure_state", to_string(s.closure_state)},
                       {"tuck", to_string(s.tuck)}};
}

inline void from_json(const nlohmann::json& j, StyleInstruction& s) {
    s.sleeves = j.contains("sleeves") ? parse_sleeve_style(j["sleeves"].get<std::string>())
                                      : SleeveStyle::unspecified;
    s.closure_state = j.contains("closure_state")
                          ? parse_closure_style(j["closure_state"].get<std::string>())
                          : ClosureStyle::unspecified;
    s.tuck = j.contains("tuck") ? parse_tuck_style(j["tuck"].get<std::string>())
                                : TuckStyle::unspecified;
}

} // namespace ivton
