#include "nudc/io/manifest.hpp"

#include <algorithm>
#include <tuple>

namespace nudc::io {

DatasetManifest split_manifest(std::vector<PairRecord> records, std::size_t train_count) {
    if (train_count > records.size())
        throw config_error("split_manifest: train_count " + std::to_string(train_count) +
                           " exceeds record count " + std::to_string(records.size()));
    std::sort(records.begin(), records.end(), [](const PairRecord& a, const PairRecord& b) {
        return std::tie(a.input_path, a.target_path, a.tag) <
               std::tie(b.input_path, b.target_path, b.tag);
    });
    DatasetManifest out;
    out.train.assign(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(train_count));
    out.test.assign(records.begin() + static_cast<std::ptrdiff_t>(train_count), records.end());
    return out;
}

} // namespace nudc::io
