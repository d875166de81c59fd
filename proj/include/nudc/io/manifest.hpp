#ifndef NUDC_IO_MANIFEST_HPP
#define NUDC_IO_MANIFEST_HPP

#include <string>
#include <vector>

#include "nudc/errors.hpp"

namespace nudc::io {

struct PairRecord {
    std::string input_path;  // the degraded image fed to the model
    std::string target_path; // the ground-truth image
    std::string tag;         // dataset label (defocus distance / z)
};

/// Positional train/test split over a stable ordering.
struct DatasetManifest {
    std::vector<PairRecord> train;
    std::vector<PairRecord> test;
};

/// Sorts records lexicographically by (input, target, tag) and assigns the
/// first train_count to the training split, the rest to the test split.
/// The split depends only on the record set, never on the incoming order.
DatasetManifest split_manifest(std::vector<PairRecord> records, std::size_t train_count);

} // namespace nudc::io

#endif // NUDC_IO_MANIFEST_HPP
