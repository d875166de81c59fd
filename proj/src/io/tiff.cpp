#include "nudc/io/tiff.hpp"

#include <fstream>
#include <map>
#include <string>

namespace nudc::io {

namespace {

// ---------------------------------------------------------------------
// low-level file access

struct Reader {
    const std::vector<std::uint8_t>& buf;
    bool big_endian = false;

    std::uint8_t u8(std::size_t off) const {
        check(off, 1);
        return buf[off];
    }
    std::uint16_t u16(std::size_t off) const {
        check(off, 2);
        return big_endian ? static_cast<std::uint16_t>((buf[off] << 8) | buf[off + 1])
                          : static_cast<std::uint16_t>(buf[off] | (buf[off + 1] << 8));
    }
    std::uint32_t u32(std::size_t off) const {
        check(off, 4);
        if (big_endian)
            return (static_cast<std::uint32_t>(buf[off]) << 24) |
                   (static_cast<std::uint32_t>(buf[off + 1]) << 16) |
                   (static_cast<std::uint32_t>(buf[off + 2]) << 8) | buf[off + 3];
        return static_cast<std::uint32_t>(buf[off]) |
               (static_cast<std::uint32_t>(buf[off + 1]) << 8) |
               (static_cast<std::uint32_t>(buf[off + 2]) << 16) |
               (static_cast<std::uint32_t>(buf[off + 3]) << 24);
    }
    void check(std::size_t off, std::size_t len) const {
        if (off + len > buf.size())
            throw format_error("import_tiff: truncated file at byte offset " +
                               std::to_string(off));
    }
};

constexpr std::uint16_t kTagWidth = 256;
constexpr std::uint16_t kTagHeight = 257;
constexpr std::uint16_t kTagBits = 258;
constexpr std::uint16_t kTagCompression = 259;
constexpr std::uint16_t kTagPhotometric = 262;
constexpr std::uint16_t kTagStripOffsets = 273;
constexpr std::uint16_t kTagSamplesPerPixel = 277;
constexpr std::uint16_t kTagRowsPerStrip = 278;
constexpr std::uint16_t kTagStripByteCounts = 279;
constexpr std::uint16_t kTagPlanarConfig = 284;
constexpr std::uint16_t kTagPredictor = 317;
constexpr std::uint16_t kTagTileWidth = 322;
constexpr std::uint16_t kTagTileLength = 323;
constexpr std::uint16_t kTagSampleFormat = 339;

struct IfdEntry {
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::size_t value_off = 0; // where the value bytes live
};

using Ifd = std::map<std::uint16_t, IfdEntry>;

std::size_t type_size(std::uint16_t type) {
    switch (type) {
        case 1: return 1; // BYTE
        case 3: return 2; // SHORT
        case 4: return 4; // LONG
        default: return 0;
    }
}

Ifd parse_ifd(const Reader& r, std::size_t off, std::size_t* next_ifd) {
    Ifd ifd;
    const std::uint16_t count = r.u16(off);
    for (std::uint16_t i = 0; i < count; ++i) {
        const std::size_t e = off + 2 + static_cast<std::size_t>(i) * 12;
        IfdEntry entry;
        const std::uint16_t tag = r.u16(e);
        entry.type = r.u16(e + 2);
        entry.count = r.u32(e + 4);
        const std::size_t sz = type_size(entry.type);
        if (sz != 0 && sz * entry.count <= 4)
            entry.value_off = e + 8;
        else
            entry.value_off = r.u32(e + 8);
        ifd[tag] = entry;
    }
    *next_ifd = r.u32(off + 2 + static_cast<std::size_t>(count) * 12);
    return ifd;
}

std::vector<std::uint32_t> tag_values(const Reader& r, const Ifd& ifd, std::uint16_t tag) {
    auto it = ifd.find(tag);
    if (it == ifd.end()) return {};
    const IfdEntry& e = it->second;
    const std::size_t sz = type_size(e.type);
    if (sz == 0)
        throw format_error("import_tiff: tag " + std::to_string(tag) +
                           " has unsupported field type " + std::to_string(e.type));
    std::vector<std::uint32_t> out(e.count);
    for (std::uint32_t i = 0; i < e.count; ++i) {
        const std::size_t off = e.value_off + i * sz;
        out[i] = sz == 1 ? r.u8(off) : sz == 2 ? r.u16(off) : r.u32(off);
    }
    return out;
}

std::uint32_t tag_scalar(const Reader& r, const Ifd& ifd, std::uint16_t tag,
                         std::uint32_t fallback) {
    auto v = tag_values(r, ifd, tag);
    return v.empty() ? fallback : v[0];
}

// ---------------------------------------------------------------------
// one page (IFD) -> planar u16 samples

struct Page {
    std::uint32_t width = 0, height = 0, spp = 0;
    std::vector<std::uint16_t> samples; // channel-planar
};

Page decode_page(const Reader& r, const Ifd& ifd) {
    if (ifd.count(kTagTileWidth) || ifd.count(kTagTileLength))
        throw format_error("import_tiff: tiled organization unsupported (tag 322/323)");

    Page page;
    page.width = tag_scalar(r, ifd, kTagWidth, 0);
    page.height = tag_scalar(r, ifd, kTagHeight, 0);
    if (page.width == 0 || page.height == 0)
        throw format_error("import_tiff: missing image dimensions (tag 256/257)");
    page.spp = tag_scalar(r, ifd, kTagSamplesPerPixel, 1);
    if (page.spp != 1 && page.spp != 2)
        throw format_error("import_tiff: unsupported samples per pixel " +
                           std::to_string(page.spp) + " (tag 277)");

    for (std::uint32_t bits : tag_values(r, ifd, kTagBits))
        if (bits != 16)
            throw format_error("import_tiff: unsupported bit depth " + std::to_string(bits) +
                               " (tag 258)");
    if (!ifd.count(kTagBits))
        throw format_error("import_tiff: missing bits per sample (tag 258)");

    const std::uint32_t photometric = tag_scalar(r, ifd, kTagPhotometric, 1);
    if (photometric != 1)
        throw format_error("import_tiff: unsupported photometric interpretation " +
                           std::to_string(photometric) + " (tag 262)");
    const std::uint32_t compression = tag_scalar(r, ifd, kTagCompression, 1);
    if (compression != 1 && compression != 5)
        throw format_error("import_tiff: unsupported compression " +
                           std::to_string(compression) + " (tag 259)");
    for (std::uint32_t fmt : tag_values(r, ifd, kTagSampleFormat))
        if (fmt != 1)
            throw format_error("import_tiff: unsupported sample format " + std::to_string(fmt) +
                               " (tag 339)");
    const std::uint32_t planar = tag_scalar(r, ifd, kTagPlanarConfig, 1);
    if (planar != 1 && planar != 2)
        throw format_error("import_tiff: unsupported planar configuration " +
                           std::to_string(planar) + " (tag 284)");
    const std::uint32_t predictor = tag_scalar(r, ifd, kTagPredictor, 1);
    if (predictor != 1 && predictor != 2)
        throw format_error("import_tiff: unsupported predictor " + std::to_string(predictor) +
                           " (tag 317)");

    const std::uint32_t rows_per_strip =
        tag_scalar(r, ifd, kTagRowsPerStrip, page.height);
    auto offsets = tag_values(r, ifd, kTagStripOffsets);
    auto counts = tag_values(r, ifd, kTagStripByteCounts);
    if (offsets.empty() || offsets.size() != counts.size())
        throw format_error("import_tiff: inconsistent strip tables (tag 273/279)");

    const std::size_t strips_per_plane =
        (page.height + rows_per_strip - 1) / rows_per_strip;
    const std::size_t planes = planar == 2 ? page.spp : 1;
    if (offsets.size() != strips_per_plane * planes)
        throw format_error("import_tiff: expected " + std::to_string(strips_per_plane * planes) +
                           " strips, found " + std::to_string(offsets.size()));
    const std::size_t row_samples =
        static_cast<std::size_t>(page.width) * (planar == 1 ? page.spp : 1);

    // decode strips into interleaved-or-planar rows
    std::vector<std::uint16_t> raw(static_cast<std::size_t>(page.width) * page.height * page.spp);
    std::size_t strip_idx = 0;
    for (std::size_t plane = 0; plane < planes; ++plane) {
        for (std::size_t s = 0; s < strips_per_plane; ++s, ++strip_idx) {
            const std::size_t row0 = s * rows_per_strip;
            const std::size_t rows = std::min<std::size_t>(rows_per_strip, page.height - row0);
            const std::size_t want_bytes = rows * row_samples * 2;
            r.check(offsets[strip_idx], counts[strip_idx]);
            const std::uint8_t* src = r.buf.data() + offsets[strip_idx];

            std::vector<std::uint8_t> strip_bytes;
            if (compression == 5) {
                strip_bytes = lzw_decode(src, counts[strip_idx], want_bytes);
            } else {
                if (counts[strip_idx] < want_bytes)
                    throw format_error("import_tiff: strip " + std::to_string(strip_idx) +
                                       " holds " + std::to_string(counts[strip_idx]) +
                                       " bytes, expected " + std::to_string(want_bytes));
                strip_bytes.assign(src, src + want_bytes);
            }

            // bytes -> host u16 with the file's byte order
            std::vector<std::uint16_t> strip_samples(rows * row_samples);
            for (std::size_t i = 0; i < strip_samples.size(); ++i)
                strip_samples[i] = r.big_endian
                                       ? static_cast<std::uint16_t>((strip_bytes[2 * i] << 8) |
                                                                    strip_bytes[2 * i + 1])
                                       : static_cast<std::uint16_t>(strip_bytes[2 * i] |
                                                                    (strip_bytes[2 * i + 1] << 8));

            if (predictor == 2) {
                const std::size_t stride = planar == 1 ? page.spp : 1;
                for (std::size_t row = 0; row < rows; ++row) {
                    std::uint16_t* p = strip_samples.data() + row * row_samples;
                    for (std::size_t i = stride; i < row_samples; ++i)
                        p[i] = static_cast<std::uint16_t>(p[i] + p[i - stride]);
                }
            }

            std::size_t dst = plane * static_cast<std::size_t>(page.width) * page.height *
                                  (planar == 2 ? 1 : 0) +
                              row0 * row_samples;
            std::copy(strip_samples.begin(), strip_samples.end(), raw.begin() + dst);
        }
    }

    // to channel-planar
    page.samples.resize(raw.size());
    if (planar == 2 || page.spp == 1) {
        page.samples = std::move(raw);
    } else {
        const std::size_t pixels = static_cast<std::size_t>(page.width) * page.height;
        for (std::size_t px = 0; px < pixels; ++px)
            for (std::uint32_t ch = 0; ch < page.spp; ++ch)
                page.samples[ch * pixels + px] = raw[px * page.spp + ch];
    }
    return page;
}

} // namespace

std::vector<std::uint8_t> lzw_decode(const std::uint8_t* src, std::size_t n,
                                     std::size_t expected_out) {
    constexpr int kClear = 256;
    constexpr int kEoi = 257;
    constexpr int kFirst = 258;
    constexpr int kTableSize = 4096;

    std::vector<int> prefix(kTableSize, -1);
    std::vector<std::uint8_t> suffix(kTableSize, 0);
    std::vector<std::uint8_t> out;
    out.reserve(expected_out);

    std::size_t byte_pos = 0;
    std::uint32_t bit_buf = 0;
    int bit_cnt = 0;
    int width = 9;
    int next_code = kFirst;
    int old_code = -1;

    auto get_code = [&]() -> int {
        while (bit_cnt < width) {
            if (byte_pos >= n) return -1;
            bit_buf = (bit_buf << 8) | src[byte_pos++];
            bit_cnt += 8;
        }
        bit_cnt -= width;
        return static_cast<int>((bit_buf >> bit_cnt) & ((1u << width) - 1));
    };

    auto emit = [&](int code) -> std::uint8_t {
        // expand the chain; returns the first byte of the string
        std::uint8_t stack[kTableSize];
        int top = 0;
        while (code >= kFirst) {
            stack[top++] = suffix[static_cast<std::size_t>(code)];
            code = prefix[static_cast<std::size_t>(code)];
        }
        stack[top++] = static_cast<std::uint8_t>(code);
        const std::uint8_t first = stack[top - 1];
        while (top > 0) {
            if (out.size() >= expected_out)
                throw format_error("lzw_decode: output exceeds expected " +
                                   std::to_string(expected_out) + " bytes");
            out.push_back(stack[--top]);
        }
        return first;
    };

    int code;
    while ((code = get_code()) != kEoi) {
        if (code < 0) break; // stream ended without EOI; length check below
        if (code == kClear) {
            width = 9;
            next_code = kFirst;
            code = get_code();
            if (code == kEoi || code < 0) break;
            if (code >= kClear)
                throw format_error("lzw_decode: bad code after clear");
            emit(code);
            old_code = code;
            continue;
        }
        if (old_code < 0) throw format_error("lzw_decode: stream does not start with clear code");
        if (code > next_code || code == kClear + 1)
            throw format_error("lzw_decode: code " + std::to_string(code) +
                               " beyond table size " + std::to_string(next_code));
        std::uint8_t first;
        if (code < next_code) {
            first = emit(code);
        } else {
            // code == next_code: the KwKwK case
            std::uint8_t old_first = emit(old_code);
            if (out.size() >= expected_out)
                throw format_error("lzw_decode: output exceeds expected size");
            out.push_back(old_first);
            first = old_first;
        }
        if (next_code < kTableSize) {
            prefix[static_cast<std::size_t>(next_code)] = old_code;
            suffix[static_cast<std::size_t>(next_code)] = first;
            ++next_code;
            // early change, decoder side: the table lags the encoder by
            // one entry, so widen at 510/1022/2046 where the encoder
            // widens at 511/1023/2047
            if (next_code == (1 << width) - 2 && width < 12) ++width;
        }
        old_code = code;
    }

    if (out.size() != expected_out)
        throw format_error("lzw_decode: decoded " + std::to_string(out.size()) +
                           " bytes, expected " + std::to_string(expected_out));
    return out;
}

Img16 import_tiff(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("import_tiff: cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    if (buf.size() < 8) throw format_error("import_tiff: file too short for a TIFF header");

    Reader r{buf, false};
    if (buf[0] == 'I' && buf[1] == 'I')
        r.big_endian = false;
    else if (buf[0] == 'M' && buf[1] == 'M')
        r.big_endian = true;
    else
        throw format_error("import_tiff: bad byte-order mark at offset 0");
    const std::uint16_t magic = r.u16(2);
    if (magic == 43) throw format_error("import_tiff: BigTIFF unsupported");
    if (magic != 42) throw format_error("import_tiff: bad magic " + std::to_string(magic));

    std::size_t next_ifd = 0;
    Ifd ifd = parse_ifd(r, r.u32(4), &next_ifd);
    Page first = decode_page(r, ifd);

    Img16 img;
    img.width = first.width;
    img.height = first.height;
    img.channels = first.spp;
    img.samples = std::move(first.samples);

    // single-channel pages come in pairs for two-color data: read the
    // second page as channel 2
    if (first.spp == 1 && next_ifd != 0) {
        std::size_t after = 0;
        Ifd ifd2 = parse_ifd(r, next_ifd, &after);
        Page second = decode_page(r, ifd2);
        if (second.width != img.width || second.height != img.height || second.spp != 1)
            throw format_error("import_tiff: second page dims do not match the first");
        img.channels = 2;
        img.samples.insert(img.samples.end(), second.samples.begin(), second.samples.end());
    }
    return img;
}

} // namespace nudc::io
