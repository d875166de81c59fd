#include "nudc/io/img16.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nudc/io/binary.hpp"

namespace nudc::io {

namespace {
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 20; // magic + version + width + height + channels
constexpr std::size_t kMaxSamples = 1u << 30;
} // namespace

void store_img16(const Img16& img, const std::filesystem::path& path) {
    if (img.samples.size() != img.expected_samples())
        throw contract_error("store_img16: sample count does not match dims");
    std::vector<std::uint8_t> buf;
    buf.reserve(kHeaderBytes + img.samples.size() * 2);
    buf.insert(buf.end(), {'I', 'M', '1', '6'});
    put_u32le(buf, kVersion);
    put_u32le(buf, img.width);
    put_u32le(buf, img.height);
    put_u32le(buf, img.channels);
    for (std::uint16_t s : img.samples) put_u16le(buf, s);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("store_img16: cannot open '" + path.string() + "' for writing");
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!f) throw io_error("store_img16: write failed for '" + path.string() + "'");
}

Img16 load_img16(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("load_img16: cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    if (buf.size() < 4 || buf[0] != 'I' || buf[1] != 'M' || buf[2] != '1' || buf[3] != '6')
        throw format_error("load_img16: bad magic at byte offset 0 in '" + path.string() + "'");
    if (buf.size() < kHeaderBytes)
        throw format_error("load_img16: truncated header at byte offset " +
                           std::to_string(buf.size()) + " in '" + path.string() + "'");
    const std::uint32_t version = get_u32le(&buf[4]);
    if (version != kVersion)
        throw format_error("load_img16: unsupported version " + std::to_string(version) +
                           " at byte offset 4");
    Img16 img;
    img.width = get_u32le(&buf[8]);
    img.height = get_u32le(&buf[12]);
    img.channels = get_u32le(&buf[16]);
    const std::uint64_t count =
        static_cast<std::uint64_t>(img.width) * img.height * img.channels;
    if (count > kMaxSamples)
        throw format_error("load_img16: dim overflow at byte offset 8 (" +
                           std::to_string(count) + " samples declared)");
    const std::size_t need = kHeaderBytes + static_cast<std::size_t>(count) * 2;
    if (buf.size() < need)
        throw format_error("load_img16: truncated payload at byte offset " +
                           std::to_string(buf.size()) + " (expected " + std::to_string(need) +
                           " bytes)");
    img.samples.resize(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        img.samples[i] = get_u16le(&buf[kHeaderBytes + 2 * i]);
    return img;
}

Img16 quantize_u16(const Tensor4f& x) {
    if (x.n != 1) throw contract_error("quantize_u16: expected a single-item tensor");
    Img16 img;
    img.width = static_cast<std::uint32_t>(x.w);
    img.height = static_cast<std::uint32_t>(x.h);
    img.channels = static_cast<std::uint32_t>(x.c);
    img.samples.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = std::clamp(static_cast<double>(x.data[i]), 0.0, 1.0);
        img.samples[i] = static_cast<std::uint16_t>(std::floor(v * 65535.0 + 0.5));
    }
    return img;
}

Tensor4f normalize_u16(const Img16& img) {
    if (img.samples.size() != img.expected_samples())
        throw contract_error("normalize_u16: sample count does not match dims");
    Tensor4f out(1, static_cast<int>(img.channels), static_cast<int>(img.height),
                 static_cast<int>(img.width));
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        out.data[i] = static_cast<float>(img.samples[i] / 65535.0);
    return out;
}

void write_img16(const Tensor4f& x, const std::filesystem::path& path) {
    store_img16(quantize_u16(x), path);
}

Tensor4f read_img16(const std::filesystem::path& path) {
    return normalize_u16(load_img16(path));
}

} // namespace nudc::io
