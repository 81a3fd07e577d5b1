#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "roadsight/errors.hpp"

namespace roadsight {

struct ManifestEntry {
    std::string path;  // relative to root
    int label = 0;     // 0 = no pothole, 1 = pothole
};

struct Manifest {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;

    std::filesystem::path resolve(std::size_t i) const { return root / entries[i].path; }
};

/// Load from `root`. A `manifest.csv` (header `path,label`) takes precedence;
/// otherwise the directory convention `positive/` + `negative/` is used.
/// Entries are sorted by path. Missing files, duplicate paths, unknown labels
/// and undecodable images raise a DataError listing every offender.
Manifest load_manifest(const std::filesystem::path& root);

/// Stratified split: per label, a seeded shuffle sends the first
/// ceil(test_frac * n_label) entries to test. Each side keeps manifest order.
std::pair<Manifest, Manifest> split(const Manifest& m, double test_frac, std::uint64_t seed);

}  // namespace roadsight
