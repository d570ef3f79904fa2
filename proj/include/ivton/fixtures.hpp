#pragma once

// Procedural synthetic fixtures: stick-figure persons assembled from
// axis-aligned part rectangles, matching clothing maps, rendered person and
// garment images, ground-truth try-on renders, and the dummy-garment
// library. Everything is seeded and byte-reproducible.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/garment.hpp"
#include "ivton/image.hpp"
#include "ivton/io_util.hpp"
#include "ivton/png_io.hpp"
#include "ivton/raster.hpp"

namespace ivton {

/// Seeded RNG with modulo-bounded draws; identical output on every platform
/// (the standard distributions are implementation-defined, mt19937_64 is not).
class FixtureRng {
public:
    explicit FixtureRng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform-ish integer in [lo, hi], inclusive.
    int range(int lo, int hi) {
        if (hi < lo) throw ContractError("FixtureRng::range: empty interval");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(eng_() % span);
    }

    /// Saturated fabric color, never the white garment background.
    Rgb color() {
        return Rgb{static_cast<std::uint8_t>(range(20, 225)),
                   static_cast<std::uint8_t>(range(20, 225)),
                   static_cast<std::uint8_t>(range(20, 225))};
    }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Figure geometry
// ---------------------------------------------------------------------------

struct Rect {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
    bool valid() const { return x1 >= x0 && y1 >= y0; }
};

/// Pairs of limb rectangles share one label (side-agnostic taxonomy).
struct FigureGeometry {
    int width = 0, height = 0;
    Rect face, torso_u, torso_l;
    std::array<Rect, 2> arm_u, arm_l, hand, leg_u, leg_l, foot;
};

/// Samples a figure that always fits a 96x128 canvas (or larger) with arms
/// beside the torso and legs strictly narrower than the torso span, so
/// bounding boxes always overshoot the true part regions.
inline FigureGeometry make_figure(FixtureRng& rng, int width = 96, int height = 128) {
    if (width < 80 || height < 120)
        throw ContractError("make_figure: canvas must be at least 80x120");
    FigureGeometry g;
    g.width = width;
    g.height = height;
    const int cx = width / 2 + rng.range(-3, 3);

    const int fw = rng.range(5, 7);
    const int face_y0 = rng.range(6, 9);
    const int fh = rng.range(12, 15);
    g.face = {cx - fw, face_y0, cx + fw, face_y0 + fh - 1};

    const int tw = rng.range(12, 15);
    const int ut_y0 = g.face.y1 + 1 + rng.range(1, 2);
    const int uth = rng.range(24, 28);
    g.torso_u = {cx - tw, ut_y0, cx + tw, ut_y0 + uth - 1};
    const int lth = rng.range(10, 13);
    g.torso_l = {cx - tw, g.torso_u.y1 + 1, cx + tw, g.torso_u.y1 + lth};

    const int ag = rng.range(1, 2);
    const int aw = rng.range(5, 7);
    const int ua_y0 = g.torso_u.y0 + rng.range(0, 2);
    const int uah = rng.range(14, 17);
    const int lah = rng.range(12, 15);
    const int hh = rng.range(4, 6);
    const int lx1 = cx - tw - ag - 1, rx0 = cx + tw + ag + 1;
    g.arm_u = {Rect{lx1 - aw + 1, ua_y0, lx1, ua_y0 + uah - 1},
               Rect{rx0, ua_y0, rx0 + aw - 1, ua_y0 + uah - 1}};
    g.arm_l = {Rect{lx1 - aw + 1, g.arm_u[0].y1 + 1, lx1, g.arm_u[0].y1 + lah},
               Rect{rx0, g.arm_u[1].y1 + 1, rx0 + aw - 1, g.arm_u[1].y1 + lah}};
    g.hand = {Rect{lx1 - aw + 1, g.arm_l[0].y1 + 1, lx1, g.arm_l[0].y1 + hh},
              Rect{rx0, g.arm_l[1].y1 + 1, rx0 + aw - 1, g.arm_l[1].y1 + hh}};

    const int lw = rng.range(6, 7);
    const int lg = rng.range(2, std::min(4, tw - 2 - lw));
    const int ul_y0 = g.torso_l.y1 + 1;
    const int ulh = rng.range(20, 24);
    const int llh = rng.range(16, 20);
    const int fth = rng.range(4, 6);
    const int fext = rng.range(1, 2);
    g.leg_u = {Rect{cx - lg - lw, ul_y0, cx - lg - 1, ul_y0 + ulh - 1},
               Rect{cx + lg + 1, ul_y0, cx + lg + lw, ul_y0 + ulh - 1}};
    g.leg_l = {Rect{cx - lg - lw, g.leg_u[0].y1 + 1, cx - lg - 1, g.leg_u[0].y1 + llh},
               Rect{cx + lg + 1, g.leg_u[1].y1 + 1, cx + lg + lw, g.leg_u[1].y1 + llh}};
    g.foot = {Rect{cx - lg - lw - fext, g.leg_l[0].y1 + 1, cx - lg - 1, g.leg_l[0].y1 + fth},
              Rect{cx + lg + 1, g.leg_l[1].y1 + 1, cx + lg + lw + fext, g.leg_l[1].y1 + fth}};
    if (g.foot[0].y1 >= height - 2)
        throw ContractError("make_figure: sampled figure exceeds the canvas");
    return g;
}

namespace detail {

inline void paint(LabelRaster& r, const Rect& rect, int label) {
    for (int y = rect.y0; y <= rect.y1; ++y)
        for (int x = rect.x0; x <= rect.x1; ++x) {
            std::uint8_t& cell = r.labels[static_cast<std::size_t>(y) * r.width + x];
            if (cell != 0)
                throw ContractError("fixture generator: overlapping part rectangles");
            cell = static_cast<std::uint8_t>(label);
        }
}

} // namespace detail

/// Body-parts raster for a figure: each part rectangle painted with its
/// taxonomy label; the legend covers the full taxonomy.
inline LabelRaster body_raster_of(const FigureGeometry& g) {
    LabelRaster r;
    r.width = g.width;
    r.height = g.height;
    r.labels.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    r.legend = body_part::legend();
    detail::paint(r, g.face, body_part::face);
    detail::paint(r, g.torso_u, body_part::upper_torso);
    detail::paint(r, g.torso_l, body_part::lower_torso);
    for (const Rect& rc : g.arm_u) detail::paint(r, rc, body_part::upper_arms);
    for (const Rect& rc : g.arm_l) detail::paint(r, rc, body_part::lower_arms);
    for (const Rect& rc : g.hand) detail::paint(r, rc, body_part::hands);
    for (const Rect& rc : g.leg_u) detail::paint(r, rc, body_part::upper_legs);
    for (const Rect& rc : g.leg_l) detail::paint(r, rc, body_part::lower_legs);
    for (const Rect& rc : g.foot) detail::paint(r, rc, body_part::feet);
    r.validate();
    return r;
}

// ---------------------------------------------------------------------------
// Outfits
// ---------------------------------------------------------------------------

/// One worn clothing piece: the part rectangles it covers.
struct OutfitPiece {
    std::string name;
    ClothingCategory category;
    std::vector<Rect> rects;
};

inline OutfitPiece upper_piece(const FigureGeometry& g, SleeveLength sleeve,
                               const std::string& name = "shirt",
                               ClothingCategory cat = ClothingCategory::upper_garment) {
    OutfitPiece p{name, cat, {g.torso_u}};
    if (sleeve != SleeveLength::sleeveless) {
        p.rects.push_back(g.arm_u[0]);
        p.rects.push_back(g.arm_u[1]);
    }
    if (sleeve == SleeveLength::long_sleeve || sleeve == SleeveLength::three_quarter) {
        p.rects.push_back(g.arm_l[0]);
        p.rects.push_back(g.arm_l[1]);
    }
    return p;
}

inline OutfitPiece lower_piece(const FigureGeometry& g, LegLength leg,
                               const std::string& name = "pants",
                               ClothingCategory cat = ClothingCategory::lower_garment) {
    OutfitPiece p{name, cat, {g.torso_l, g.leg_u[0], g.leg_u[1]}};
    if (leg == LegLength::long_leg) {
        p.rects.push_back(g.leg_l[0]);
        p.rects.push_back(g.leg_l[1]);
    }
    return p;
}

inline OutfitPiece dress_piece(const FigureGeometry& g, SleeveLength sleeve, LegLength leg,
                               const std::string& name = "dress") {
    OutfitPiece p{name, ClothingCategory::overall_garment,
                  {g.torso_u, g.torso_l, g.leg_u[0], g.leg_u[1]}};
    if (sleeve != SleeveLength::sleeveless) {
        p.rects.push_back(g.arm_u[0]);
        p.rects.push_back(g.arm_u[1]);
    }
    if (sleeve == SleeveLength::long_sleeve || sleeve == SleeveLength::three_quarter) {
        p.rects.push_back(g.arm_l[0]);
        p.rects.push_back(g.arm_l[1]);
    }
    if (leg == LegLength::long_leg) {
        p.rects.push_back(g.leg_l[0]);
        p.rects.push_back(g.leg_l[1]);
    }
    return p;
}

/// Clothing raster: segments get labels 2, 3, ... in piece order; the rest of
/// the figure is the unclothed area.
inline LabelRaster clothing_raster_of(const FigureGeometry& g, const LabelRaster& body,
                                      const std::vector<OutfitPiece>& pieces) {
    LabelRaster r;
    r.width = g.width;
    r.height = g.height;
    r.labels.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    for (std::size_t i = 0; i < body.labels.size(); ++i)
        if (body.labels[i] != 0) r.labels[i] = clothing_label::unclothed;
    r.legend[clothing_label::background] = "background";
    r.legend[clothing_label::unclothed] = clothing_label::unclothed_name;
    int next = clothing_label::first_segment;
    for (const OutfitPiece& p : pieces) {
        for (const Rect& rc : p.rects)
            for (int y = rc.y0; y <= rc.y1; ++y)
                for (int x = rc.x0; x <= rc.x1; ++x)
                    r.labels[static_cast<std::size_t>(y) * r.width + x] =
                        static_cast<std::uint8_t>(next);
        r.legend[next] = p.name;
        r.categories[next] = p.category;
        ++next;
    }
    r.validate();
    return r;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

struct PersonPalette {
    Rgb background{210, 214, 218};
    Rgb skin{205, 170, 144};
    std::map<int, Rgb> segment_colors; // clothing label -> fabric color
};

inline Image render_person(const LabelRaster& body, const LabelRaster& clothing,
                           const PersonPalette& palette) {
    Image img(body.width, body.height, palette.background);
    for (int y = 0; y < body.height; ++y)
        for (int x = 0; x < body.width; ++x) {
            const int cl = clothing.at(x, y);
            if (cl >= clothing_label::first_segment) {
                img.set(x, y, palette.segment_colors.at(cl));
            } else if (body.at(x, y) != 0) {
                img.set(x, y, palette.skin);
            }
        }
    return img;
}

/// Solid-color garment silhouette on a white background (the paste-through
/// stub treats white as garment background).
inline Image render_garment_image(const GarmentSpec& spec, Rgb color, int width = 64,
                                  int height = 80) {
    Image img(width, height, Rgb{255, 255, 255});
    auto fill = [&img](int x0, int y0, int x1, int y1, Rgb c) {
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                img.set(x, y, c);
    };
    auto px = [](double f, int extent) { return static_cast<int>(f * (extent - 1)); };

    const bool sleeves = spec.sleeve_length != SleeveLength::sleeveless &&
                         spec.sleeve_length != SleeveLength::not_applicable;
    const bool long_sleeves = spec.sleeve_length == SleeveLength::long_sleeve ||
                              spec.sleeve_length == SleeveLength::three_quarter;
    switch (spec.classification) {
    case Classification::upper:
        fill(px(0.30, width), px(0.10, height), px(0.70, width), px(0.62, height), color);
        if (sleeves) {
            const int sy1 = px(long_sleeves ? 0.58 : 0.30, height);
            fill(px(0.10, width), px(0.12, height), px(0.28, width), sy1, color);
            fill(px(0.72, width), px(0.12, height), px(0.90, width), sy1, color);
        }
        break;
    case Classification::lower: {
        fill(px(0.28, width), px(0.06, height), px(0.72, width), px(0.22, height), color);
        const int ly1 = px(spec.leg_length == LegLength::long_leg ? 0.92 : 0.50, height);
        fill(px(0.28, width), px(0.22, height), px(0.47, width), ly1, color);
        fill(px(0.53, width), px(0.22, height), px(0.72, width), ly1, color);
        break;
    }
    case Classification::overall: {
        fill(px(0.32, width), px(0.08, height), px(0.68, width), px(0.40, height), color);
        const int skirt_y0 = px(0.40, height);
        const int skirt_y1 = px(spec.leg_length == LegLength::long_leg ? 0.94 : 0.72, height);
        for (int y = skirt_y0; y <= skirt_y1; ++y) {
            const double t = static_cast<double>(y - skirt_y0) /
                             std::max(1, skirt_y1 - skirt_y0);
            const double half = 0.18 + 0.16 * t; // flare
            fill(px(0.5 - half, width), y, px(0.5 + half, width), y, color);
        }
        if (sleeves) {
            const int sy1 = px(long_sleeves ? 0.55 : 0.25, height);
            fill(px(0.12, width), px(0.10, height), px(0.30, width), sy1, color);
            fill(px(0.70, width), px(0.10, height), px(0.88, width), sy1, color);
        }
        break;
    }
    }
    return img;
}

// ---------------------------------------------------------------------------
// Person fixtures
// ---------------------------------------------------------------------------

enum class OutfitKind {
    tee_and_pants,        // short-sleeve top, long pants
    longsleeve_and_pants, // long-sleeve top, long pants
    tee_and_shorts,
    dress,
};

struct PersonFixture {
    FigureGeometry geometry;
    LabelRaster body;
    LabelRaster clothing;
    BinaryMask figure;
    Image image;
    PersonPalette palette;
};

inline std::vector<OutfitPiece> outfit_pieces(const FigureGeometry& g, OutfitKind kind) {
    switch (kind) {
    case OutfitKind::tee_and_pants:
        return {upper_piece(g, SleeveLength::short_sleeve),
                lower_piece(g, LegLength::long_leg)};
    case OutfitKind::longsleeve_and_pants:
        return {upper_piece(g, SleeveLength::long_sleeve),
                lower_piece(g, LegLength::long_leg)};
    case OutfitKind::tee_and_shorts:
        return {upper_piece(g, SleeveLength::short_sleeve),
                lower_piece(g, LegLength::short_leg)};
    case OutfitKind::dress:
        return {dress_piece(g, SleeveLength::short_sleeve, LegLength::short_leg)};
    }
    throw ContractError("outfit_pieces: unknown outfit kind");
}

inline PersonFixture make_person_fixture(FixtureRng& rng, OutfitKind kind, int width = 96,
                                         int height = 128) {
    PersonFixture f;
    f.geometry = make_figure(rng, width, height);
    f.body = body_raster_of(f.geometry);
    f.clothing = clothing_raster_of(f.geometry, f.body, outfit_pieces(f.geometry, kind));
    f.figure = BinaryMask(width, height);
    for (std::size_t i = 0; i < f.body.labels.size(); ++i)
        f.figure.bits[i] = f.body.labels[i] != 0 ? 1 : 0;
    for (const auto& [id, name] : f.clothing.legend)
        if (id >= clothing_label::first_segment)
            f.palette.segment_colors[id] = rng.color();
    f.image = render_person(f.body, f.clothing, f.palette);
    return f;
}

/// Writes person.png plus the four segmentation sidecars.
inline void write_person_fixture(const std::filesystem::path& person_png,
                                 const PersonFixture& f) {
    write_image_rgb(person_png, f.image);
    write_label_raster(parts_png_path(person_png), parts_json_path(person_png), f.body);
    write_label_raster(cloth_png_path(person_png), cloth_json_path(person_png), f.clothing);
}

// ---------------------------------------------------------------------------
// Dataset generation
// ---------------------------------------------------------------------------

/// Target-garment sampling per evaluation category.
inline GarmentSpec make_target_spec(FixtureRng& rng, const std::string& category,
                                    const std::string& id) {
    GarmentSpec g;
    g.id = id;
    if (category == "upper_body") {
        g.classification = Classification::upper;
        g.sleeve_length = rng.range(0, 1) ? SleeveLength::long_sleeve
                                          : SleeveLength::short_sleeve;
        g.closure = rng.range(0, 1) ? Closure::buttons : Closure::none;
        g.category_noun = "shirt";
    } else if (category == "lower_body") {
        g.classification = Classification::lower;
        g.sleeve_length = SleeveLength::not_applicable;
        g.leg_length = rng.range(0, 1) ? LegLength::long_leg : LegLength::short_leg;
        g.category_noun = "pants";
    } else if (category == "dresses") {
        g.classification = Classification::overall;
        g.sleeve_length = rng.range(0, 1) ? SleeveLength::short_sleeve
                                          : SleeveLength::sleeveless;
        g.leg_length = rng.range(0, 1) ? LegLength::long_leg : LegLength::short_leg;
        g.category_noun = "dress";
    } else { // synthetic: an openable outerwear jacket
        g.classification = Classification::upper;
        g.sleeve_length = SleeveLength::long_sleeve;
        g.closure = rng.range(0, 1) ? Closure::buttons : Closure::zipper;
        g.outerwear = true;
        g.category_noun = "jacket";
    }
    g.validate();
    return g;
}

/// What the figure looks like wearing the target garment: the displaced
/// outfit pieces are replaced by the target's coverage.
inline std::vector<OutfitPiece> worn_with_target(const FigureGeometry& g,
                                                 const std::vector<OutfitPiece>& existing,
                                                 const GarmentSpec& target) {
    std::vector<OutfitPiece> pieces;
    if (target.classification == Classification::overall) {
        pieces.push_back(dress_piece(g, target.sleeve_length, target.leg_length,
                                     target.category_noun));
        return pieces;
    }
    const ClothingCategory displaced = target.classification == Classification::upper
                                           ? ClothingCategory::upper_garment
                                           : ClothingCategory::lower_garment;
    for (const OutfitPiece& p : existing) {
        const bool same_slot =
            p.category == displaced ||
            p.category == ClothingCategory::overall_garment; // a dress vacates both slots
        if (!same_slot) pieces.push_back(p);
    }
    if (target.classification == Classification::upper)
        pieces.push_back(upper_piece(g, target.sleeve_length, target.category_noun,
                                     target.clothing_category()));
    else
        pieces.push_back(lower_piece(g, target.leg_length, target.category_noun,
                                     target.clothing_category()));
    return pieces;
}

struct GeneratedPair {
    std::filesystem::path dir;
    std::string pair_id;
    std::string category;
};

/// Writes pairs/pair_<k>/{person.png + sidecars, garment.png,
/// garment_spec.json, truth.png}. Categories cycle through upper_body,
/// lower_body, dresses, synthetic. Deterministic in (seed, count).
inline std::vector<GeneratedPair> generate_dataset(const std::filesystem::path& out_dir,
                                                   std::uint64_t seed, int count) {
    static const char* categories[] = {"upper_body", "lower_body", "dresses", "synthetic"};
    std::filesystem::create_directories(out_dir / "pairs");
    std::vector<GeneratedPair> pairs;
    for (int k = 0; k < count; ++k) {
        FixtureRng rng(seed * 1000003ULL + static_cast<std::uint64_t>(k));
        const std::string category = categories[k % 4];
        char name[32];
        std::snprintf(name, sizeof(name), "pair_%03d", k);
        const std::filesystem::path dir = out_dir / "pairs" / name;
        std::filesystem::create_directories(dir);

        const OutfitKind outfits[] = {OutfitKind::tee_and_pants,
                                      OutfitKind::longsleeve_and_pants,
                                      OutfitKind::tee_and_shorts, OutfitKind::dress};
        const OutfitKind kind = outfits[rng.range(0, 3)];
        PersonFixture person = make_person_fixture(rng, kind);
        write_person_fixture(dir / "person.png", person);

        GarmentSpec target = make_target_spec(rng, category, std::string(name) + "_garment");
        target.image_ref = "garment.png";
        const Rgb garment_color = rng.color();
        write_image_rgb(dir / "garment.png", render_garment_image(target, garment_color));
        json spec_json = target;
        spec_json["eval_category"] = category;
        write_json_file(dir / "garment_spec.json", spec_json);

        // Ground-truth render: same figure, same palette for what stays,
        // target coverage in the garment color.
        std::vector<OutfitPiece> worn =
            worn_with_target(person.geometry, outfit_pieces(person.geometry, kind), target);
        LabelRaster truth_clothing = clothing_raster_of(person.geometry, person.body, worn);
        PersonPalette truth_palette = person.palette;
        truth_palette.segment_colors.clear();
        for (const auto& [id, piece_name] : truth_clothing.legend) {
            if (id < clothing_label::first_segment) continue;
            if (piece_name == target.category_noun) {
                truth_palette.segment_colors[id] = garment_color;
            } else {
                // Kept pieces reuse their original color, found by name.
                Rgb c = person.palette.skin;
                for (const auto& [oid, oname] : person.clothing.legend)
                    if (oname == piece_name && person.palette.segment_colors.count(oid))
                        c = person.palette.segment_colors.at(oid);
                truth_palette.segment_colors[id] = c;
            }
        }
        write_image_rgb(dir / "truth.png",
                        render_person(person.body, truth_clothing, truth_palette));

        pairs.push_back(GeneratedPair{dir, name, category});
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Dummy-garment library
// ---------------------------------------------------------------------------

/// Renders the built-in dummy library (tank top + shorts) into `dir` and
/// returns the manifest path.
inline std::filesystem::path write_dummy_library(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json entries = json::array();

    GarmentSpec tank;
    tank.id = "dummy_tank_top";
    tank.classification = Classification::upper;
    tank.sleeve_length = SleeveLength::sleeveless;
    tank.leg_length = LegLength::not_applicable;
    tank.closure = Closure::none;
    tank.category_noun = "tank top";
    tank.image_ref = "dummy_tank_top.png";
    write_image_rgb(dir / "dummy_tank_top.png",
                    render_garment_image(tank, Rgb{88, 92, 98}));
    write_json_file(dir / "dummy_tank_top.spec.json", json(tank));
    entries.push_back(tank);

    GarmentSpec shorts;
    shorts.id = "dummy_shorts";
    shorts.classification = Classification::lower;
    shorts.sleeve_length = SleeveLength::not_applicable;
    shorts.leg_length = LegLength::short_leg;
    shorts.closure = Closure::none;
    shorts.category_noun = "shorts";
    shorts.image_ref = "dummy_shorts.png";
    write_image_rgb(dir / "dummy_shorts.png",
                    render_garment_image(shorts, Rgb{70, 84, 110}));
    write_json_file(dir / "dummy_shorts.spec.json", json(shorts));
    entries.push_back(shorts);

    const std::filesystem::path manifest = dir / "manifest.json";
    write_json_file(manifest, json{{"entries", entries}});
    return manifest;
}

} // namespace ivton
