#pragma once

// Contracts for the four external model roles (segmentation, try-on, VLM
// planning, dummy-garment provisioning) plus the deterministic file-backed
// stubs used for offline runs and testing. Remote clients live in
// backends_remote.hpp; both sides are validated against the same invariants.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/garment.hpp"
#include "ivton/image.hpp"
#include "ivton/io_util.hpp"
#include "ivton/png_io.hpp"
#include "ivton/raster.hpp"
#include "ivton/rule_engine.hpp"

namespace ivton {

// ---------------------------------------------------------------------------
// Contract types
// ---------------------------------------------------------------------------

/// Body-parts map, clothing map, and the figure they both partition.
struct SegmentationResult {
    LabelRaster body;
    LabelRaster clothing;
    BinaryMask figure;
};

inline void validate_segmentation(const SegmentationResult& r, const std::string& provider) {
    try {
        r.body.validate();
        r.clothing.validate();
        if (r.body.width != r.clothing.width || r.body.height != r.clothing.height ||
            r.body.width != r.figure.width || r.body.height != r.figure.height)
            throw ContractError("maps and figure must share dimensions");
        if (!verify_partition(r.body, r.figure))
            throw ContractError("body map does not partition the figure");
        if (!verify_partition(r.clothing, r.figure))
            throw ContractError("clothing map does not partition the figure");
        if (!r.clothing.legend.count(clothing_label::unclothed))
            throw ContractError("clothing legend lacks the unclothed label (1)");
        for (const auto& [id, name] : r.clothing.legend)
            if (id >= clothing_label::first_segment && !r.clothing.categories.count(id))
                throw ContractError("clothing segment " + std::to_string(id) + " ('" + name +
                                    "') has no category tag");
    } catch (const ContractError& e) {
        throw BackendError("segmentation provider '" + provider +
                           "' returned an invalid result: " + e.what());
    }
}

/// One try-on invocation: person, target garment, and the inpainting mask.
struct TryOnRequest {
    std::string person_image_ref;
    std::string garment_image_ref;
    BinaryMask mask;
};

/// Ordering and per-garment instruction fields proposed by a VLM planner.
struct VlmProposal {
    std::vector<std::string> order; // garment ids
    std::map<std::string, StyleInstruction> instructions;
};

// ---------------------------------------------------------------------------
// Interfaces
// ---------------------------------------------------------------------------

class SegmentationProvider {
public:
    virtual ~SegmentationProvider() = default;
    virtual std::string name() const = 0;
    virtual SegmentationResult segment(const std::string& image_ref) = 0;
};

class VtoBackend {
public:
    virtual ~VtoBackend() = default;
    virtual std::string name() const = 0;
    /// Generates the try-on image for `req` at `output_ref` (PNG) and returns
    /// that ref. Output dimensions match the person image.
    virtual std::string try_on(const TryOnRequest& req, const std::string& output_ref) = 0;
};

class VlmPlanner {
public:
    virtual ~VlmPlanner() = default;
    virtual std::string name() const = 0;
    virtual VlmProposal propose(const std::vector<GarmentSpec>& garments,
                                const std::string& instruction_text,
                                const std::string& person_image_ref) = 0;
};

class DummyGarmentProvider {
public:
    virtual ~DummyGarmentProvider() = default;
    virtual std::string name() const = 0;
    /// Returns a garment of `classification` whose rule-table trace leaves
    /// every label in `required_exposure` uncovered; the returned spec's
    /// image_ref points at a usable garment image.
    virtual GarmentSpec fetch(Classification classification,
                              const std::set<int>& required_exposure) = 0;
};

/// The pluggable backend bundle. `vlm` may be null (deterministic-only mode).
struct Backends {
    std::shared_ptr<SegmentationProvider> segmentation;
    std::shared_ptr<VtoBackend> vto;
    std::shared_ptr<VlmPlanner> vlm;
    std::shared_ptr<DummyGarmentProvider> dummy;
};

// ---------------------------------------------------------------------------
// Sidecar segmentation stub
// ---------------------------------------------------------------------------

/// Reads <image>.parts.png/.json and <image>.cloth.png/.json next to the
/// image. A pure function of its file inputs.
class SidecarSegmentation final : public SegmentationProvider {
public:
    std::string name() const override { return "sidecar"; }

    SegmentationResult segment(const std::string& image_ref) override {
        namespace fs = std::filesystem;
        const fs::path img(image_ref);
        for (const fs::path& p : {parts_png_path(img), parts_json_path(img),
                                  cloth_png_path(img), cloth_json_path(img)})
            if (!fs::exists(p))
                throw BackendError("segmentation provider 'sidecar': missing sidecar " +
                                   p.string());
        SegmentationResult r;
        try {
            r.body = read_label_raster(parts_png_path(img), parts_json_path(img));
            r.clothing = read_label_raster(cloth_png_path(img), cloth_json_path(img));
        } catch (const ContractError& e) {
            throw BackendError(std::string("segmentation provider 'sidecar': ") + e.what());
        }
        r.figure = BinaryMask(r.body.width, r.body.height);
        for (std::size_t i = 0; i < r.body.labels.size(); ++i)
            r.figure.bits[i] = r.body.labels[i] != 0 ? 1 : 0;
        validate_segmentation(r, name());
        return r;
    }
};

// ---------------------------------------------------------------------------
// Paste-through try-on stub
// ---------------------------------------------------------------------------

/// Deterministic test oracle backend: copies person pixels outside the mask
/// and fills the mask with the garment image resampled (nearest-neighbor) to
/// the mask's bounding box, clipped to the mask.
///
/// When the person image has segmentation sidecars, the stub also writes
/// updated sidecars next to its output so a sidecar segmentation provider can
/// re-segment the generated image: pasted garment-fabric pixels (anything not
/// matching the garment image's background color) become a fresh clothing
/// segment, pasted background pixels strip the covered area back to skin, and
/// body labels for newly covered pixels are filled from the nearest labeled
/// pixel in the same row. Requires the garment spec sidecar
/// (<garment>.spec.json or garment_spec.json beside the garment image) to
/// name the new segment.
class PasteThroughVto final : public VtoBackend {
public:
    explicit PasteThroughVto(Rgb garment_background = {255, 255, 255},
                             bool update_sidecars = true)
        : garment_background_(garment_background), update_sidecars_(update_sidecars) {}

    std::string name() const override { return "paste_through"; }

    std::string try_on(const TryOnRequest& req, const std::string& output_ref) override {
        Image person, garment;
        try {
            person = read_image_rgb(req.person_image_ref);
            garment = read_image_rgb(req.garment_image_ref);
        } catch (const ContractError& e) {
            throw BackendError(std::string("vto backend 'paste_through': ") + e.what());
        }
        if (req.mask.width != person.width || req.mask.height != person.height)
            throw BackendError("vto backend 'paste_through': mask dimensions (" +
                               std::to_string(req.mask.width) + "x" +
                               std::to_string(req.mask.height) +
                               ") do not match person image (" + std::to_string(person.width) +
                               "x" + std::to_string(person.height) + ")");

        const Box bb = bounds(req.mask);
        Image out = person;
        for (int y = 0; y < person.height; ++y)
            for (int x = 0; x < person.width; ++x)
                if (req.mask.at(x, y))
                    out.set(x, y, sample_garment(garment, bb, x, y));
        write_image_rgb(output_ref, out);

        if (update_sidecars_) maybe_update_sidecars(req, out, output_ref);
        return output_ref;
    }

private:
    Rgb sample_garment(const Image& garment, const Box& bb, int x, int y) const {
        // Nearest-neighbor resample of the whole garment image onto the mask
        // bounding box.
        const int gx = static_cast<int>((static_cast<long long>(x - bb.x0) * garment.width) /
                                        bb.width());
        const int gy = static_cast<int>((static_cast<long long>(y - bb.y0) * garment.height) /
                                        bb.height());
        return garment.at(std::min(gx, garment.width - 1), std::min(gy, garment.height - 1));
    }

    void maybe_update_sidecars(const TryOnRequest& req, const Image& out,
                               const std::string& output_ref) {
        namespace fs = std::filesystem;
        const fs::path person(req.person_image_ref);
        if (!fs::exists(parts_png_path(person)) || !fs::exists(cloth_png_path(person)))
            return; // no sidecars to carry forward

        GarmentSpec spec = load_garment_spec_sidecar(req.garment_image_ref);
        LabelRaster body = read_label_raster(parts_png_path(person), parts_json_path(person));
        LabelRaster cloth = read_label_raster(cloth_png_path(person), cloth_json_path(person));
        if (body.width != req.mask.width || body.height != req.mask.height)
            throw BackendError("vto backend 'paste_through': person sidecars do not match the "
                               "person image dimensions");

        int new_id = clothing_label::first_segment;
        for (const auto& [id, _] : cloth.legend) new_id = std::max(new_id, id + 1);
        if (new_id > 255)
            throw BackendError("vto backend 'paste_through': clothing label space exhausted");

        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x) {
                if (!req.mask.at(x, y)) continue;
                const std::size_t i = static_cast<std::size_t>(y) * out.width + x;
                const bool fabric = !(out.at(x, y) == garment_background_);
                if (fabric) {
                    cloth.labels[i] = static_cast<std::uint8_t>(new_id);
                    if (body.labels[i] == 0)
                        body.labels[i] = static_cast<std::uint8_t>(nearest_row_label(body, x, y));
                } else if (body.labels[i] != 0) {
                    cloth.labels[i] = clothing_label::unclothed; // stripped back to skin
                } else {
                    cloth.labels[i] = clothing_label::background;
                }
            }

        cloth.legend[new_id] = spec.category_noun.empty() ? "garment" : spec.category_noun;
        cloth.categories[new_id] = spec.clothing_category();
        prune_empty_segments(cloth);

        const fs::path outp(output_ref);
        write_label_raster(parts_png_path(outp), parts_json_path(outp), body);
        write_label_raster(cloth_png_path(outp), cloth_json_path(outp), cloth);
    }

    GarmentSpec load_garment_spec_sidecar(const std::string& garment_image_ref) const {
        namespace fs = std::filesystem;
        const fs::path img(garment_image_ref);
        fs::path spec_path = garment_spec_sidecar_path(img);
        if (!fs::exists(spec_path)) spec_path = img.parent_path() / "garment_spec.json";
        if (!fs::exists(spec_path))
            throw BackendError("vto backend 'paste_through': cannot update sidecars, no garment "
                               "spec beside " +
                               garment_image_ref);
        try {
            return read_json_file(spec_path).get<GarmentSpec>();
        } catch (const ContractError& e) {
            throw BackendError(std::string("vto backend 'paste_through': ") + e.what());
        }
    }

    static int nearest_row_label(const LabelRaster& body, int x, int y) {
        for (int d = 1; d < body.width; ++d) {
            const int xl = x - d, xr = x + d;
            if (xl >= 0 && body.at(xl, y) != 0) return body.at(xl, y);
            if (xr < body.width && body.at(xr, y) != 0) return body.at(xr, y);
        }
        for (int d = 1; d < body.height; ++d) { // empty row: walk the column
            const int yu = y - d, yd = y + d;
            if (yu >= 0 && body.at(x, yu) != 0) return body.at(x, yu);
            if (yd < body.height && body.at(x, yd) != 0) return body.at(x, yd);
        }
        return body_part::upper_torso;
    }

    static void prune_empty_segments(LabelRaster& cloth) {
        bool seen[256] = {};
        for (std::uint8_t l : cloth.labels) seen[l] = true;
        for (auto it = cloth.legend.begin(); it != cloth.legend.end();) {
            const int id = it->first;
            if (id >= clothing_label::first_segment && !seen[id]) {
                cloth.categories.erase(id);
                it = cloth.legend.erase(it);
            } else {
                ++it;
            }
        }
        // Background and the unclothed label stay in the legend regardless.
        cloth.legend[clothing_label::background] = "background";
        cloth.legend[clothing_label::unclothed] = clothing_label::unclothed_name;
    }

    Rgb garment_background_;
    bool update_sidecars_;
};

/// Always-failing try-on backend for error-path drills.
class FailingVto final : public VtoBackend {
public:
    std::string name() const override { return "failing"; }
    std::string try_on(const TryOnRequest&, const std::string&) override {
        throw BackendError("vto backend 'failing': injected failure");
    }
};

// ---------------------------------------------------------------------------
// Dummy-garment library
// ---------------------------------------------------------------------------

/// Manifest-backed dummy-garment library. Entries are tried in manifest
/// order; the first one of the right classification whose rule-table trace
/// avoids the required exposure wins. An optional generator backend is
/// consulted when the library has no candidate.
class LibraryDummyProvider final : public DummyGarmentProvider {
public:
    LibraryDummyProvider(std::vector<GarmentSpec> entries,
                         const RuleTable& table = RuleTable::builtin(),
                         std::shared_ptr<DummyGarmentProvider> generator = nullptr)
        : entries_(std::move(entries)), table_(&table), generator_(std::move(generator)) {}

    /// Loads {"entries": [GarmentSpec...]} with image refs relative to the
    /// manifest location.
    static LibraryDummyProvider from_manifest(const std::filesystem::path& manifest_path,
                                              const RuleTable& table = RuleTable::builtin(),
                                              std::shared_ptr<DummyGarmentProvider> generator =
                                                  nullptr) {
        json j = read_json_file(manifest_path);
        std::vector<GarmentSpec> entries;
        for (const auto& e : j.at("entries")) {
            GarmentSpec g = e.get<GarmentSpec>();
            std::filesystem::path img(g.image_ref);
            if (img.is_relative()) g.image_ref = (manifest_path.parent_path() / img).string();
            entries.push_back(std::move(g));
        }
        return LibraryDummyProvider(std::move(entries), table, std::move(generator));
    }

    std::string name() const override { return "library"; }

    GarmentSpec fetch(Classification classification,
                      const std::set<int>& required_exposure) override {
        for (const GarmentSpec& g : entries_) {
            if (g.classification != classification) continue;
            const RuleRow& row = table_->first_match(g, StyleInstruction{});
            bool covers_exposed = false;
            for (int id : required_exposure)
                if (row.include_parts.count(id) && !row.exclude_parts.count(id))
                    covers_exposed = true;
            if (!covers_exposed) return g;
        }
        if (generator_) return generator_->fetch(classification, required_exposure);
        std::string parts;
        for (int id : required_exposure) {
            if (!parts.empty()) parts += ", ";
            parts += body_part::name(id);
        }
        throw BackendError("dummy provider 'library': no " +
                           std::string(to_string(classification)) +
                           " dummy avoids {" + parts + "} and no generator is configured");
    }

private:
    std::vector<GarmentSpec> entries_;
    const RuleTable* table_;
    std::shared_ptr<DummyGarmentProvider> generator_;
};

} // namespace ivton
