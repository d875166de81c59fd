#ifndef NUDC_SIM_DATASET_HPP
#define NUDC_SIM_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nudc/sim/phantom.hpp"
#include "nudc/sim/psf.hpp"

namespace nudc::sim {

struct ManifestRecord {
    std::string sharp_path;   // relative to the manifest's directory
    std::string blurred_path;
    double z = 0.0;
    std::uint64_t seed = 0;   // per-pair noise seed
};

/// Index of a generated synthetic set. Regenerating from the recorded
/// seeds reproduces every file bit-for-bit.
struct SyntheticManifest {
    double sigma_per_um = 0.15;
    double min_sigma = 0.05;
    int radius = -1;
    double noise_sigma = 0.0;
    std::uint64_t master_seed = 0;
    int count = 0;
    std::vector<ManifestRecord> records;
};

/// Generates `count` phantoms, blurs each at every z in z_list, writes
/// sharp/blurred img16 pairs plus the manifest (written last, so a
/// present manifest implies a complete set). Returns the manifest.
SyntheticManifest gen_dataset(const PhantomSpec& phantom, const std::vector<double>& z_list,
                              const PSFSpec& psf, double noise_sigma, int count,
                              const std::filesystem::path& out_dir, std::uint64_t seed);

/// Tab-separated text: one header line of key=value globals, then one
/// record per line (sharp_path, blurred_path, z, seed).
void write_manifest(const SyntheticManifest& m, const std::filesystem::path& path);
SyntheticManifest read_manifest(const std::filesystem::path& path);

} // namespace nudc::sim

#endif // NUDC_SIM_DATASET_HPP
