#pragma once

// Label rasters and binary masks with exact set-algebraic and geometric
// operations. Everything here is a value type; all operations are pure.
//
// Conventions: row-major storage, top-left origin, y grows downward.
// A pixel (x, y) is identified with the integer lattice point (x, y) for
// all geometric tests (the "pixel center").

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ivton/errors.hpp"

namespace ivton {

// ---------------------------------------------------------------------------
// BinaryMask
// ---------------------------------------------------------------------------

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // 0 or 1, size = width*height

    BinaryMask() = default;
    BinaryMask(int w, int h, bool value = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, value ? 1 : 0) {
        if (w <= 0 || h <= 0)
            throw ContractError("BinaryMask: dimensions must be positive");
    }

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t size() const { return bits.size(); }

    friend bool operator==(const BinaryMask& a, const BinaryMask& b) {
        return a.width == b.width && a.height == b.height && a.bits == b.bits;
    }
};

inline bool dims_match(const BinaryMask& a, const BinaryMask& b) {
    return a.width == b.width && a.height == b.height;
}

inline void require_dims(const BinaryMask& a, const BinaryMask& b, const char* op) {
    if (!dims_match(a, b))
        throw ContractError(std::string(op) + ": dimension mismatch (" +
                            std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                            std::to_string(b.width) + "x" + std::to_string(b.height) + ")");
}

// ---------------------------------------------------------------------------
// LabelRaster
// ---------------------------------------------------------------------------

/// Clothing-segment categories carried by clothing-map legends (ids >= 2).
enum class ClothingCategory {
    upper_garment,
    lower_garment,
    overall_garment,
    outerwear,
    footwear,
    accessory,
};

inline const char* to_string(ClothingCategory c) {
    switch (c) {
    case ClothingCategory::upper_garment: return "upper_garment";
    case ClothingCategory::lower_garment: return "lower_garment";
    case ClothingCategory::overall_garment: return "overall_garment";
    case ClothingCategory::outerwear: return "outerwear";
    case ClothingCategory::footwear: return "footwear";
    case ClothingCategory::accessory: return "accessory";
    }
    return "?";
}

inline ClothingCategory parse_clothing_category(const std::string& s) {
    if (s == "upper_garment") return ClothingCategory::upper_garment;
    if (s == "lower_garment") return ClothingCategory::lower_garment;
    if (s == "overall_garment") return ClothingCategory::overall_garment;
    if (s == "outerwear") return ClothingCategory::outerwear;
    if (s == "footwear") return ClothingCategory::footwear;
    if (s == "accessory") return ClothingCategory::accessory;
    throw ContractError("unknown clothing category '" + s + "'");
}

/// Integer label image plus a legend. Label 0 is always "background"
/// (everything outside the figure). Clothing maps additionally carry a
/// category tag per segment id >= 2; body-part maps leave `categories` empty.
struct LabelRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> labels; // row-major, size = width*height
    std::map<int, std::string> legend;
    std::map<int, ClothingCategory> categories;

    int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }

    /// Checks the type invariants; throws ContractError on violation.
    void validate() const {
        if (width <= 0 || height <= 0)
            throw ContractError("LabelRaster: dimensions must be positive");
        if (labels.size() != static_cast<std::size_t>(width) * height)
            throw ContractError("LabelRaster: label buffer size does not match dimensions");
        auto bg = legend.find(0);
        if (bg == legend.end() || bg->second != "background")
            throw ContractError("LabelRaster: legend must map label 0 to \"background\"");
        bool seen[256] = {};
        for (std::uint8_t l : labels) seen[l] = true;
        for (int id = 0; id < 256; ++id)
            if (seen[id] && !legend.count(id))
                throw ContractError("LabelRaster: pixel label " + std::to_string(id) +
                                    " missing from legend");
    }
};

inline void require_dims(const LabelRaster& r, const BinaryMask& m, const char* op) {
    if (r.width != m.width || r.height != m.height)
        throw ContractError(std::string(op) + ": dimension mismatch (" +
                            std::to_string(r.width) + "x" + std::to_string(r.height) + " vs " +
                            std::to_string(m.width) + "x" + std::to_string(m.height) + ")");
}

// ---------------------------------------------------------------------------
// Taxonomies
// ---------------------------------------------------------------------------

/// Fixed label ids for the body-parts map. Left/right limbs share one label.
namespace body_part {
inline constexpr int background = 0;
inline constexpr int face = 1;
inline constexpr int upper_torso = 2;
inline constexpr int lower_torso = 3;
inline constexpr int upper_arms = 4;
inline constexpr int lower_arms = 5;
inline constexpr int hands = 6;
inline constexpr int upper_legs = 7;
inline constexpr int lower_legs = 8;
inline constexpr int feet = 9;
inline constexpr int count = 10;

inline const char* name(int id) {
    switch (id) {
    case background: return "background";
    case face: return "face";
    case upper_torso: return "upper_torso";
    case lower_torso: return "lower_torso";
    case upper_arms: return "upper_arms";
    case lower_arms: return "lower_arms";
    case hands: return "hands";
    case upper_legs: return "upper_legs";
    case lower_legs: return "lower_legs";
    case feet: return "feet";
    }
    return nullptr;
}

inline int id_of(const std::string& n) {
    for (int id = 0; id < count; ++id)
        if (n == name(id)) return id;
    throw ContractError("unknown body part name '" + n + "'");
}

inline std::map<int, std::string> legend() {
    std::map<int, std::string> m;
    for (int id = 0; id < count; ++id) m[id] = name(id);
    return m;
}

/// Parts that are never masked, whatever the garment or instruction.
inline const std::set<int>& identity_parts() {
    static const std::set<int> parts{face, hands, feet};
    return parts;
}
} // namespace body_part

/// Clothing-map label conventions: 0 = background, 1 = the unclothed area,
/// ids >= 2 are distinct clothing segments.
namespace clothing_label {
inline constexpr int background = 0;
inline constexpr int unclothed = 1;
inline constexpr int first_segment = 2;
inline const char* unclothed_name = "unclothed";
} // namespace clothing_label

// ---------------------------------------------------------------------------
// Set algebra
// ---------------------------------------------------------------------------

/// Union of the regions of the given label ids. Every id must exist in the
/// raster legend (zero pixel coverage is fine; an unknown id signals a
/// taxonomy mismatch and is an error).
inline BinaryMask region_of(const LabelRaster& raster, const std::set<int>& label_set) {
    bool wanted[256] = {};
    for (int id : label_set) {
        if (id < 0 || id > 255 || !raster.legend.count(id))
            throw ContractError("region_of: label " + std::to_string(id) +
                                " not in raster legend");
        wanted[id] = true;
    }
    BinaryMask out(raster.width, raster.height);
    for (std::size_t i = 0; i < raster.labels.size(); ++i)
        out.bits[i] = wanted[raster.labels[i]] ? 1 : 0;
    return out;
}

inline BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
    require_dims(a, b, "mask_union");
    BinaryMask out(a.width, a.height);
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        out.bits[i] = (a.bits[i] | b.bits[i]) ? 1 : 0;
    return out;
}

inline BinaryMask mask_intersect(const BinaryMask& a, const BinaryMask& b) {
    require_dims(a, b, "mask_intersect");
    BinaryMask out(a.width, a.height);
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        out.bits[i] = (a.bits[i] & b.bits[i]) ? 1 : 0;
    return out;
}

inline BinaryMask mask_subtract(const BinaryMask& a, const BinaryMask& b) {
    require_dims(a, b, "mask_subtract");
    BinaryMask out(a.width, a.height);
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        out.bits[i] = (a.bits[i] && !b.bits[i]) ? 1 : 0;
    return out;
}

inline long long area(const BinaryMask& m) {
    long long n = 0;
    for (std::uint8_t b : m.bits) n += b ? 1 : 0;
    return n;
}

inline bool is_subset(const BinaryMask& a, const BinaryMask& b) {
    require_dims(a, b, "is_subset");
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        if (a.bits[i] && !b.bits[i]) return false;
    return true;
}

/// True iff the non-background labels of `raster` exactly tile `figure`.
/// Disjointness is structural for single-label rasters, so the check reduces
/// to exact coverage.
inline bool verify_partition(const LabelRaster& raster, const BinaryMask& figure) {
    require_dims(raster, figure, "verify_partition");
    for (std::size_t i = 0; i < raster.labels.size(); ++i)
        if ((raster.labels[i] != 0) != (figure.bits[i] != 0)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Inclusive bounding box of the true pixels; `empty` when there are none.
struct Box {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
    bool empty = true;
    int width() const { return empty ? 0 : x1 - x0 + 1; }
    int height() const { return empty ? 0 : y1 - y0 + 1; }
};

inline Box bounds(const BinaryMask& m) {
    Box b;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) {
                if (b.empty) {
                    b = Box{x, y, x, y, false};
                } else {
                    b.x0 = std::min(b.x0, x);
                    b.y0 = std::min(b.y0, y);
                    b.x1 = std::max(b.x1, x);
                    b.y1 = std::max(b.y1, y);
                }
            }
    return b;
}

/// Axis-aligned rectangle mask over the bounding box of `m`.
inline BinaryMask filled_bounding_box(const BinaryMask& m) {
    BinaryMask out(m.width, m.height);
    Box b = bounds(m);
    if (b.empty) return out;
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x)
            out.set(x, y, true);
    return out;
}

namespace detail {

struct Pt {
    int x, y;
};

inline long long cross(const Pt& o, const Pt& a, const Pt& b) {
    return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

/// Andrew's monotone chain; returns hull vertices with no collinear interior
/// points. For collinear input the result degenerates to the two endpoints
/// (or a single point).
inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const Pt& a, const Pt& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Pt> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) { // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) { // upper
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1); // last point equals first
    if (hull.size() == 1 && n > 1) {
        // All input points collinear: keep the two extremes.
        hull = {pts.front(), pts.back()};
    }
    return hull;
}

inline bool on_segment(const Pt& a, const Pt& b, const Pt& p) {
    if (cross(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

} // namespace detail

/// Filled 2-D convex hull of the true pixels: a pixel is set iff its center
/// (the lattice point) lies inside or on the hull polygon. Superset of the
/// input; idempotent; empty input yields an empty mask.
inline BinaryMask convex_fill(const BinaryMask& m) {
    std::vector<detail::Pt> pts;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) pts.push_back({x, y});
    BinaryMask out(m.width, m.height);
    if (pts.empty()) return out;

    std::vector<detail::Pt> hull = detail::convex_hull(pts);
    if (hull.size() == 1) {
        out.set(hull[0].x, hull[0].y, true);
        return out;
    }
    if (hull.size() == 2) {
        Box b{std::min(hull[0].x, hull[1].x), std::min(hull[0].y, hull[1].y),
              std::max(hull[0].x, hull[1].x), std::max(hull[0].y, hull[1].y), false};
        for (int y = b.y0; y <= b.y1; ++y)
            for (int x = b.x0; x <= b.x1; ++x)
                if (detail::on_segment(hull[0], hull[1], {x, y})) out.set(x, y, true);
        return out;
    }

    // Ensure counter-clockwise edge order so "inside" means cross >= 0 on
    // every edge.
    long long area2 = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const detail::Pt& a = hull[i];
        const detail::Pt& b = hull[(i + 1) % hull.size()];
        area2 += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
    }
    if (area2 < 0) std::reverse(hull.begin(), hull.end());

    Box bb;
    for (const auto& p : hull) {
        if (bb.empty) {
            bb = Box{p.x, p.y, p.x, p.y, false};
        } else {
            bb.x0 = std::min(bb.x0, p.x);
            bb.y0 = std::min(bb.y0, p.y);
            bb.x1 = std::max(bb.x1, p.x);
            bb.y1 = std::max(bb.y1, p.y);
        }
    }
    for (int y = bb.y0; y <= bb.y1; ++y)
        for (int x = bb.x0; x <= bb.x1; ++x) {
            bool inside = true;
            for (std::size_t i = 0; i < hull.size() && inside; ++i) {
                const detail::Pt& a = hull[i];
                const detail::Pt& b = hull[(i + 1) % hull.size()];
                if (detail::cross(a, b, {x, y}) < 0) inside = false;
            }
            if (inside) out.set(x, y, true);
        }
    return out;
}

/// Clears from `m` a vertical stripe centered on the horizontal midpoint of
/// `anchor`'s bounding box. Stripe width = round(width_fraction * bbox width),
/// at least 1 px; the stripe spans the anchor's vertical bbox extent only.
inline BinaryMask remove_center_stripe(const BinaryMask& m, const BinaryMask& anchor,
                                       double width_fraction) {
    require_dims(m, anchor, "remove_center_stripe");
    if (!(width_fraction > 0.0 && width_fraction < 1.0))
        throw ContractError("remove_center_stripe: width_fraction must be in (0,1)");
    Box b = bounds(anchor);
    if (b.empty)
        throw ContractError("remove_center_stripe: anchor region is empty");
    const int bw = b.width();
    int w = static_cast<int>(std::llround(width_fraction * bw));
    w = std::max(1, std::min(w, bw));
    const int left = b.x0 + (bw - w) / 2;
    BinaryMask out = m;
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = left; x < left + w; ++x)
            out.set(x, y, false);
    return out;
}

/// Chebyshev (square window) dilation by `radius` pixels; radius <= 0 is the
/// identity. Separable two-pass implementation.
inline BinaryMask dilate(const BinaryMask& m, int radius) {
    if (radius <= 0) return m;
    BinaryMask horiz(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool v = false;
            for (int dx = -radius; dx <= radius && !v; ++dx) {
                int xx = x + dx;
                if (xx >= 0 && xx < m.width && m.at(xx, y)) v = true;
            }
            horiz.set(x, y, v);
        }
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool v = false;
            for (int dy = -radius; dy <= radius && !v; ++dy) {
                int yy = y + dy;
                if (yy >= 0 && yy < m.height && horiz.at(x, yy)) v = true;
            }
            out.set(x, y, v);
        }
    return out;
}

} // namespace ivton
