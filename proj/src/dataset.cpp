#include "roadsight/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "roadsight/image_io.hpp"
#include "roadsight/rng.hpp"

namespace roadsight {

namespace {

bool supported_image(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

void trim(std::string& s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && s[i] == ' ') ++i;
    s.erase(0, i);
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        throw DataError(root.string() + ": dataset root is not a directory");

    Manifest m;
    m.root = root;
    std::vector<std::string> problems;

    const std::filesystem::path csv = root / "manifest.csv";
    if (std::filesystem::exists(csv)) {
        std::ifstream in(csv);
        if (!in) throw DataError(csv.string() + ": cannot open");
        std::string line;
        if (!std::getline(in, line)) throw DataError(csv.string() + ": empty manifest");
        trim(line);
        if (line != "path,label")
            throw DataError(csv.string() + ": first line must be the header 'path,label'");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            trim(line);
            if (line.empty()) continue;
            const std::size_t comma = line.rfind(',');
            if (comma == std::string::npos) {
                problems.push_back(csv.string() + ":" + std::to_string(lineno) + ": missing comma");
                continue;
            }
            ManifestEntry e;
            e.path = line.substr(0, comma);
            const std::string label = line.substr(comma + 1);
            if (label == "0")
                e.label = 0;
            else if (label == "1")
                e.label = 1;
            else {
                problems.push_back(csv.string() + ":" + std::to_string(lineno) +
                                   ": unknown label '" + label + "'");
                continue;
            }
            m.entries.push_back(std::move(e));
        }
    } else {
        bool any_dir = false;
        for (const auto& [dir, label] : {std::pair<const char*, int>{"negative", 0}, {"positive", 1}}) {
            const std::filesystem::path d = root / dir;
            if (!std::filesystem::is_directory(d)) continue;
            any_dir = true;
            for (const auto& de : std::filesystem::directory_iterator(d)) {
                if (!de.is_regular_file() || !supported_image(de.path())) continue;
                m.entries.push_back(
                    {(std::filesystem::path(dir) / de.path().filename()).generic_string(), label});
            }
        }
        if (!any_dir)
            throw DataError(root.string() +
                            ": no manifest.csv and no positive/ or negative/ directories");
    }

    std::sort(m.entries.begin(), m.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });

    std::set<std::string> seen;
    for (const ManifestEntry& e : m.entries) {
        if (!seen.insert(e.path).second) {
            problems.push_back(e.path + ": duplicate manifest entry");
            continue;
        }
        const std::filesystem::path full = root / e.path;
        if (!std::filesystem::exists(full)) {
            problems.push_back(e.path + ": file does not exist");
            continue;
        }
        if (!supported_image(full)) {
            problems.push_back(e.path + ": unsupported image type");
            continue;
        }
        try {
            (void)read_image(full);
        } catch (const Error& err) {
            problems.push_back(e.path + ": " + err.what());
        }
    }

    if (!problems.empty())
        throw DataError("manifest load failed (" + std::to_string(problems.size()) + " problems): " +
                            problems.front(),
                        problems);
    return m;
}

std::pair<Manifest, Manifest> split(const Manifest& m, double test_frac, std::uint64_t seed) {
    if (!(test_frac > 0.0 && test_frac < 1.0))
        throw InvalidConfig("split: test_frac must be in (0, 1)");

    std::vector<std::size_t> test_idx;
    for (int label = 0; label <= 1; ++label) {
        std::vector<std::size_t> of_label;
        for (std::size_t i = 0; i < m.entries.size(); ++i)
            if (m.entries[i].label == label) of_label.push_back(i);
        if (of_label.empty()) continue;

        std::mt19937_64 rng = make_rng(seed, static_cast<std::uint64_t>(label));
        rng_shuffle(rng, of_label);
        const std::size_t n_test =
            static_cast<std::size_t>(std::ceil(test_frac * static_cast<double>(of_label.size())));
        if (n_test >= of_label.size())
            throw InvalidConfig("split: label " + std::to_string(label) +
                                " would have an empty train side");
        test_idx.insert(test_idx.end(), of_label.begin(), of_label.begin() + n_test);
    }
    std::sort(test_idx.begin(), test_idx.end());

    Manifest train, test;
    train.root = test.root = m.root;
    std::size_t t = 0;
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        if (t < test_idx.size() && test_idx[t] == i) {
            test.entries.push_back(m.entries[i]);
            ++t;
        } else {
            train.entries.push_back(m.entries[i]);
        }
    }
    if (train.entries.empty() || test.entries.empty())
        throw InvalidConfig("split: a side is empty");
    return {train, test};
}

}  // namespace roadsight
