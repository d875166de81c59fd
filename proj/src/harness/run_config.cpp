#include "nudc/harness/run_config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nudc::harness {

void RunConfig::validate() const {
    model.validate();
    if (batch_size < 1) throw config_error("RunConfig: batch_size must be >= 1");
    if (epochs < 1) throw config_error("RunConfig: epochs must be >= 1");
    if (train_count < 0) throw config_error("RunConfig: train_count must be >= 0");
    if (lr < 0 || eps <= 0) throw config_error("RunConfig: bad optimizer hyperparameters");
    if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1)
        throw config_error("RunConfig: beta1/beta2 must lie in [0, 1)");
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config: bad boolean '" + v + "' for key '" + key + "'");
}

void apply(RunConfig& cfg, const std::string& section, const std::string& key,
           const std::string& value, std::map<std::string, std::string>* meta) {
    try {
        if (section == "model") {
            if (key == "levels") cfg.model.levels = std::stoi(value);
            else if (key == "depth") cfg.model.unet_depth = std::stoi(value);
            else if (key == "base_channels") cfg.model.base_channels = std::stoi(value);
            else if (key == "in_channels") cfg.model.in_channels = std::stoi(value);
            else if (key == "out_channels") cfg.model.out_channels = std::stoi(value);
            else if (key == "fusion") cfg.model.fusion = model::fusion_mode_from_string(value);
            else if (key == "loss") cfg.model.loss = model::loss_kind_from_string(value);
            else throw config_error("config: unknown key '" + key + "' in [model]");
        } else if (section == "train") {
            if (key == "lr") cfg.lr = std::stod(value);
            else if (key == "beta1") cfg.beta1 = std::stod(value);
            else if (key == "beta2") cfg.beta2 = std::stod(value);
            else if (key == "eps") cfg.eps = std::stod(value);
            else if (key == "batch_size") cfg.batch_size = std::stoi(value);
            else if (key == "epochs") cfg.epochs = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "train_count") cfg.train_count = std::stoi(value);
            else if (key == "deterministic") cfg.deterministic = parse_bool(value, key);
            else throw config_error("config: unknown key '" + key + "' in [train]");
        } else if (section == "data") {
            if (key == "manifest") cfg.manifest_path = value;
            else if (key == "out_dir") cfg.out_dir = value;
            else throw config_error("config: unknown key '" + key + "' in [data]");
        } else if (section == "meta") {
            if (meta) (*meta)[key] = value;
        } else {
            throw config_error("config: unknown section [" + section + "]");
        }
    } catch (const std::invalid_argument&) {
        throw config_error("config: bad value '" + value + "' for key '" + key + "'");
    } catch (const std::out_of_range&) {
        throw config_error("config: value '" + value + "' out of range for key '" + key + "'");
    }
}

} // namespace

RunConfig parse_run_config_text(const std::string& text,
                                std::map<std::string, std::string>* meta) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section header at line " +
                                   std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key=value at line " + std::to_string(line_no));
        apply(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), meta);
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw io_error("load_run_config: cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_run_config_text(buf.str());
}

std::string serialize_run_config(const RunConfig& cfg,
                                 const std::map<std::string, std::string>& meta) {
    char buf[1024];
    std::snprintf(buf, sizeof(buf),
                  "[model]\n"
                  "levels = %d\n"
                  "depth = %d\n"
                  "base_channels = %d\n"
                  "in_channels = %d\n"
                  "out_channels = %d\n"
                  "fusion = %s\n"
                  "loss = %s\n"
                  "[train]\n"
                  "lr = %.17g\n"
                  "beta1 = %.17g\n"
                  "beta2 = %.17g\n"
                  "eps = %.17g\n"
                  "batch_size = %d\n"
                  "epochs = %d\n"
                  "seed = %" PRIu64 "\n"
                  "train_count = %d\n"
                  "deterministic = %s\n",
                  cfg.model.levels, cfg.model.unet_depth, cfg.model.base_channels,
                  cfg.model.in_channels, cfg.model.out_channels,
                  model::to_string(cfg.model.fusion).c_str(),
                  model::to_string(cfg.model.loss).c_str(), cfg.lr, cfg.beta1, cfg.beta2, cfg.eps,
                  cfg.batch_size, cfg.epochs, cfg.seed, cfg.train_count,
                  cfg.deterministic ? "true" : "false");
    // data paths are run placement, not run identity: leaving them out
    // keeps checkpoints relocatable and byte-identical across out dirs
    std::string out = buf;
    if (!meta.empty()) {
        out += "[meta]\n";
        for (const auto& [k, v] : meta) out += k + " = " + v + "\n";
    }
    return out;
}

} // namespace nudc::harness
