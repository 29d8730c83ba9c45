#include "hsadet/detect.hpp"

#include "hsadet/errors.hpp"

namespace hsadet {

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Louvain: return "louvain";
    case Algorithm::Infomap: return "infomap";
    case Algorithm::BlockModel: return "sbm";
    case Algorithm::Slpa: return "slpa";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
    if (name == "louvain") return Algorithm::Louvain;
    if (name == "infomap") return Algorithm::Infomap;
    if (name == "sbm" || name == "blockmodel" || name == "block_model") {
        return Algorithm::BlockModel;
    }
    if (name == "slpa") return Algorithm::Slpa;
    return std::nullopt;
}

Partition detect(const Hpdn& g, const DetectConfig& config) {
    switch (config.algorithm) {
    case Algorithm::Louvain: return louvain(g, config);
    case Algorithm::Infomap: return infomap(g, config);
    case Algorithm::BlockModel: return block_model(g, config);
    case Algorithm::Slpa: return slpa(g, config);
    }
    throw InvalidConfigError("unknown detection algorithm");
}

} // namespace hsadet
