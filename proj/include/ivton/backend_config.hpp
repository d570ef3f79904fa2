#pragma once

// Backend bundle assembly from a single JSON config file. Each of the four
// roles picks a kind; omitted roles get the offline defaults (sidecar
// segmentation, paste-through try-on, no VLM, built-in dummy library).
//
// {
//   "segmentation": {"kind": "sidecar"} | {"kind": "remote", "endpoint": ...},
//   "vto":          {"kind": "paste_through"} | {"kind": "failing"}
//                   | {"kind": "remote", ...},
//   "vlm":          {"kind": "none"} | {"kind": "remote", ...},
//   "dummy":        {"kind": "builtin"}
//                   | {"kind": "library", "manifest": "path"}
//                   | {"kind": "remote", ...}
// }
//
// Remote entries: {"endpoint", "timeout_ms"?, "model_id"?, "auth_token_env"?};
// tokens are looked up in the environment by name only, never stored.

#include <filesystem>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "ivton/backends.hpp"
#include "ivton/backends_remote.hpp"
#include "ivton/errors.hpp"
#include "ivton/fixtures.hpp"
#include "ivton/io_util.hpp"

namespace ivton {

/// Builds the bundle. `work_dir` hosts materialized assets (the built-in
/// dummy library, generated dummy images).
inline Backends make_backends(const json& config, const std::filesystem::path& work_dir) {
    Backends b;

    const json seg = config.value("segmentation", json{{"kind", "sidecar"}});
    const std::string seg_kind = seg.value("kind", "sidecar");
    if (seg_kind == "sidecar") {
        b.segmentation = std::make_shared<SidecarSegmentation>();
    } else if (seg_kind == "remote") {
        b.segmentation = std::make_shared<RemoteSegmentation>(seg.get<RemoteEndpoint>());
    } else {
        throw ContractError("backend config: unknown segmentation kind '" + seg_kind + "'");
    }

    const json vto = config.value("vto", json{{"kind", "paste_through"}});
    const std::string vto_kind = vto.value("kind", "paste_through");
    if (vto_kind == "paste_through") {
        Rgb bg{255, 255, 255};
        if (vto.contains("garment_background")) {
            const auto& arr = vto["garment_background"];
            bg = Rgb{arr.at(0).get<std::uint8_t>(), arr.at(1).get<std::uint8_t>(),
                     arr.at(2).get<std::uint8_t>()};
        }
        b.vto = std::make_shared<PasteThroughVto>(bg, vto.value("update_sidecars", true));
    } else if (vto_kind == "failing") {
        b.vto = std::make_shared<FailingVto>();
    } else if (vto_kind == "remote") {
        b.vto = std::make_shared<RemoteVto>(vto.get<RemoteEndpoint>());
    } else {
        throw ContractError("backend config: unknown vto kind '" + vto_kind + "'");
    }

    const json vlm = config.value("vlm", json{{"kind", "none"}});
    const std::string vlm_kind = vlm.value("kind", "none");
    if (vlm_kind == "none") {
        b.vlm = nullptr;
    } else if (vlm_kind == "remote") {
        b.vlm = std::make_shared<RemoteVlm>(vlm.get<RemoteEndpoint>());
    } else {
        throw ContractError("backend config: unknown vlm kind '" + vlm_kind + "'");
    }

    const json dummy = config.value("dummy", json{{"kind", "builtin"}});
    const std::string dummy_kind = dummy.value("kind", "builtin");
    std::shared_ptr<DummyGarmentProvider> generator;
    if (dummy.contains("generator"))
        generator = std::make_shared<RemoteDummyGenerator>(
            dummy["generator"].get<RemoteEndpoint>(), work_dir / "dummy_generated");
    if (dummy_kind == "builtin") {
        const std::filesystem::path manifest = write_dummy_library(work_dir / "dummy_library");
        b.dummy = std::make_shared<LibraryDummyProvider>(
            LibraryDummyProvider::from_manifest(manifest, RuleTable::builtin(), generator));
    } else if (dummy_kind == "library") {
        b.dummy = std::make_shared<LibraryDummyProvider>(LibraryDummyProvider::from_manifest(
            dummy.at("manifest").get<std::string>(), RuleTable::builtin(), generator));
    } else if (dummy_kind == "remote") {
        b.dummy = std::make_shared<RemoteDummyGenerator>(dummy.get<RemoteEndpoint>(),
                                                         work_dir / "dummy_generated");
    } else {
        throw ContractError("backend config: unknown dummy kind '" + dummy_kind + "'");
    }
    return b;
}

inline Backends make_backends_from_file(const std::filesystem::path& config_path,
                                        const std::filesystem::path& work_dir) {
    return make_backends(config_path.empty() ? json::object() : read_json_file(config_path),
                         work_dir);
}

} // namespace ivton
