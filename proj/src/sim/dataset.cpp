#include "nudc/sim/dataset.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nudc/io/img16.hpp"
#include "nudc/rng.hpp"
#include "nudc/sim/defocus.hpp"

namespace nudc::sim {

namespace {

std::string format_name(const char* stem, int k, int zi) {
    char buf[64];
    if (zi < 0)
        std::snprintf(buf, sizeof(buf), "%s_%04d.im16", stem, k);
    else
        std::snprintf(buf, sizeof(buf), "%s_%04d_z%02d.im16", stem, k, zi);
    return buf;
}

} // namespace

SyntheticManifest gen_dataset(const PhantomSpec& phantom, const std::vector<double>& z_list,
                              const PSFSpec& psf, double noise_sigma, int count,
                              const std::filesystem::path& out_dir, std::uint64_t seed) {
    if (count < 1) throw config_error("gen_dataset: count must be >= 1");
    if (z_list.empty()) throw config_error("gen_dataset: z_list must be non-empty");
    phantom.validate();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw io_error("gen_dataset: cannot create output directory '" + out_dir.string() + "'");

    SyntheticManifest m;
    m.sigma_per_um = psf.sigma_per_um;
    m.min_sigma = psf.min_sigma;
    m.radius = psf.radius;
    m.noise_sigma = noise_sigma;
    m.master_seed = seed;
    m.count = count;

    for (int k = 0; k < count; ++k) {
        const std::uint64_t phantom_seed = mix_seed(seed, 1, static_cast<std::uint64_t>(k));
        Tensor4f sharp = phantom_image(phantom, phantom_seed);
        const std::string sharp_name = format_name("sharp", k, -1);
        io::write_img16(sharp, out_dir / sharp_name);

        for (std::size_t zi = 0; zi < z_list.size(); ++zi) {
            PSFSpec spec = psf;
            spec.z = z_list[zi];
            Kernel2d kernel = gaussian_psf(spec);
            const std::uint64_t pair_seed =
                mix_seed(seed, 2, (static_cast<std::uint64_t>(k) << 16) | zi);
            Tensor4f blurred = apply_defocus(sharp, kernel, noise_sigma, pair_seed);
            const std::string blur_name = format_name("blur", k, static_cast<int>(zi));
            io::write_img16(blurred, out_dir / blur_name);
            m.records.push_back({sharp_name, blur_name, z_list[zi], pair_seed});
        }
    }

    write_manifest(m, out_dir / "manifest.tsv");
    return m;
}

void write_manifest(const SyntheticManifest& m, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw io_error("write_manifest: cannot open '" + path.string() + "' for writing");
    char head[256];
    std::snprintf(head, sizeof(head),
                  "sigma_per_um=%.17g\tmin_sigma=%.17g\tradius=%d\tnoise_sigma=%.17g\t"
                  "master_seed=%" PRIu64 "\tcount=%d\n",
                  m.sigma_per_um, m.min_sigma, m.radius, m.noise_sigma, m.master_seed, m.count);
    f << head;
    for (const auto& r : m.records) {
        char line[512];
        std::snprintf(line, sizeof(line), "%s\t%s\t%.17g\t%" PRIu64 "\n", r.sharp_path.c_str(),
                      r.blurred_path.c_str(), r.z, r.seed);
        f << line;
    }
    if (!f) throw io_error("write_manifest: write failed for '" + path.string() + "'");
}

SyntheticManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw io_error("read_manifest: cannot open '" + path.string() + "'");
    SyntheticManifest m;
    std::string line;
    if (!std::getline(f, line))
        throw format_error("read_manifest: empty manifest '" + path.string() + "'");

    std::istringstream head(line);
    std::string kv;
    while (std::getline(head, kv, '\t')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw format_error("read_manifest: malformed header field '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        try {
            if (key == "sigma_per_um") m.sigma_per_um = std::stod(val);
            else if (key == "min_sigma") m.min_sigma = std::stod(val);
            else if (key == "radius") m.radius = std::stoi(val);
            else if (key == "noise_sigma") m.noise_sigma = std::stod(val);
            else if (key == "master_seed") m.master_seed = std::stoull(val);
            else if (key == "count") m.count = std::stoi(val);
            else throw format_error("read_manifest: unknown header key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw format_error("read_manifest: bad value for header key '" + key + "'");
        }
    }

    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        ManifestRecord r;
        std::string z_str, seed_str;
        if (!std::getline(row, r.sharp_path, '\t') || !std::getline(row, r.blurred_path, '\t') ||
            !std::getline(row, z_str, '\t') || !std::getline(row, seed_str))
            throw format_error("read_manifest: malformed record '" + line + "'");
        try {
            r.z = std::stod(z_str);
            r.seed = std::stoull(seed_str);
        } catch (const std::invalid_argument&) {
            throw format_error("read_manifest: bad numeric field in '" + line + "'");
        }
        m.records.push_back(std::move(r));
    }
    return m;
}

} // namespace nudc::sim
