#include "nudc/harness/checkpoint.hpp"

#include <fstream>

#include "nudc/io/binary.hpp"

namespace nudc::harness {

namespace {

constexpr std::uint32_t kVersion = 1;

void put_tensor_payload(std::vector<std::uint8_t>& buf, const Tensor4f& t) {
    for (float v : t.data) io::put_f32le(buf, v);
}

struct Cursor {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size())
            throw format_error("load_checkpoint: truncated at byte offset " +
                               std::to_string(pos));
    }
    std::uint32_t u32() {
        need(4);
        auto v = io::get_u32le(&buf[pos]);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        auto v = io::get_u64le(&buf[pos]);
        pos += 8;
        return v;
    }
    std::uint8_t u8() {
        need(1);
        return buf[pos++];
    }
    double f64() {
        need(8);
        auto v = io::get_f64le(&buf[pos]);
        pos += 8;
        return v;
    }
    std::string str(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(&buf[pos]), n);
        pos += n;
        return s;
    }
    void read_floats(Tensor4f& t) {
        need(t.size() * 4);
        for (std::size_t i = 0; i < t.size(); ++i) {
            t.data[i] = io::get_f32le(&buf[pos]);
            pos += 4;
        }
    }
};

} // namespace

void save_checkpoint(model::NestedModel<float>& m, const nn::AdamState<float>* adam,
                     const RunConfig& cfg, int epoch,
                     const std::map<std::string, std::string>& meta,
                     const std::filesystem::path& path) {
    auto params = m.params();
    if (adam && adam->slots.size() != params.size())
        throw contract_error("save_checkpoint: optimizer state does not match the model");

    std::vector<std::uint8_t> buf;
    buf.insert(buf.end(), {'N', 'U', 'D', 'C'});
    io::put_u32le(buf, kVersion);

    const std::string config_text = serialize_run_config(cfg, meta);
    io::put_u32le(buf, static_cast<std::uint32_t>(config_text.size()));
    buf.insert(buf.end(), config_text.begin(), config_text.end());

    io::put_u32le(buf, static_cast<std::uint32_t>(epoch));
    buf.push_back(adam ? 1 : 0);

    io::put_u32le(buf, static_cast<std::uint32_t>(params.size()));
    for (const auto* p : params) {
        io::put_u32le(buf, static_cast<std::uint32_t>(p->id.size()));
        buf.insert(buf.end(), p->id.begin(), p->id.end());
        io::put_u32le(buf, 4); // rank
        io::put_u32le(buf, static_cast<std::uint32_t>(p->value.n));
        io::put_u32le(buf, static_cast<std::uint32_t>(p->value.c));
        io::put_u32le(buf, static_cast<std::uint32_t>(p->value.h));
        io::put_u32le(buf, static_cast<std::uint32_t>(p->value.w));
        put_tensor_payload(buf, p->value);
    }

    if (adam) {
        io::put_f64le(buf, adam->hyper.lr);
        io::put_f64le(buf, adam->hyper.beta1);
        io::put_f64le(buf, adam->hyper.beta2);
        io::put_f64le(buf, adam->hyper.eps);
        io::put_u64le(buf, static_cast<std::uint64_t>(adam->t));
        for (const auto& slot : adam->slots) {
            put_tensor_payload(buf, slot.m);
            put_tensor_payload(buf, slot.v);
        }
    }

    io::put_u64le(buf, io::fnv1a64(buf.data(), buf.size()));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("save_checkpoint: cannot open '" + path.string() + "' for writing");
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!f) throw io_error("save_checkpoint: write failed for '" + path.string() + "'");
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("load_checkpoint: cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());

    if (buf.size() < 12 || buf[0] != 'N' || buf[1] != 'U' || buf[2] != 'D' || buf[3] != 'C')
        throw format_error("load_checkpoint: bad magic in '" + path.string() + "'");
    const std::uint64_t want = io::get_u64le(&buf[buf.size() - 8]);
    const std::uint64_t got = io::fnv1a64(buf.data(), buf.size() - 8);
    if (want != got)
        throw format_error("load_checkpoint: checksum mismatch, '" + path.string() +
                           "' is corrupt");

    Cursor cur{buf, 4};
    const std::uint32_t version = cur.u32();
    if (version != kVersion)
        throw format_error("load_checkpoint: unsupported version " + std::to_string(version) +
                           " (expected " + std::to_string(kVersion) + ")");

    LoadedCheckpoint out;
    const std::uint32_t config_len = cur.u32();
    out.config = parse_run_config_text(cur.str(config_len), &out.meta);
    out.epoch = static_cast<int>(cur.u32());
    const bool has_adam = cur.u8() != 0;

    out.model = model::NestedModel<float>::build(out.config.model, out.config.seed);
    auto params = out.model.params();

    const std::uint32_t n_tensors = cur.u32();
    struct FileTensor {
        std::string name;
        Tensor4f value;
    };
    std::vector<FileTensor> file_tensors;
    file_tensors.reserve(n_tensors);
    for (std::uint32_t i = 0; i < n_tensors; ++i) {
        FileTensor ft;
        const std::uint32_t name_len = cur.u32();
        ft.name = cur.str(name_len);
        const std::uint32_t rank = cur.u32();
        if (rank != 4)
            throw format_error("load_checkpoint: tensor '" + ft.name + "' has rank " +
                               std::to_string(rank));
        const int n = static_cast<int>(cur.u32());
        const int c = static_cast<int>(cur.u32());
        const int h = static_cast<int>(cur.u32());
        const int w = static_cast<int>(cur.u32());
        ft.value = Tensor4f(n, c, h, w);
        cur.read_floats(ft.value);
        file_tensors.push_back(std::move(ft));
    }

    // match model parameters against the file, naming the first mismatch
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i >= file_tensors.size())
            throw contract_error("load_checkpoint: parameter '" + params[i]->id +
                                 "' missing from '" + path.string() + "'");
        auto& ft = file_tensors[i];
        if (ft.name != params[i]->id)
            throw contract_error("load_checkpoint: parameter mismatch, model expects '" +
                                 params[i]->id + "', file has '" + ft.name + "'");
        if (!ft.value.same_shape(params[i]->value))
            throw contract_error("load_checkpoint: shape mismatch for '" + ft.name + "': file " +
                                 ft.value.shape_str() + ", model " +
                                 params[i]->value.shape_str());
        params[i]->value = std::move(ft.value);
    }
    if (file_tensors.size() > params.size())
        throw contract_error("load_checkpoint: unexpected extra parameter '" +
                             file_tensors[params.size()].name + "' in '" + path.string() + "'");

    if (has_adam) {
        nn::AdamState<float> adam;
        adam.hyper.lr = cur.f64();
        adam.hyper.beta1 = cur.f64();
        adam.hyper.beta2 = cur.f64();
        adam.hyper.eps = cur.f64();
        adam.t = static_cast<long long>(cur.u64());
        adam.slots.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            adam.slots[i].m = Tensor4f::zeros_like(params[i]->value);
            adam.slots[i].v = Tensor4f::zeros_like(params[i]->value);
            cur.read_floats(adam.slots[i].m);
            cur.read_floats(adam.slots[i].v);
        }
        out.adam = std::move(adam);
    }
    return out;
}

} // namespace nudc::harness
