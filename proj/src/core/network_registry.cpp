#include "dfbench/core/network_registry.hpp"

#include <array>

#include "dfbench/error.hpp"

namespace dfbench {

namespace {

const std::array<NetworkSpec, 14>& table() {
    static const std::array<NetworkSpec, 14> networks = {{
        {"AlexNet", 227, 227, 3, "fc8", 25, 61.0},
        {"Inception-ResNet-v2", 299, 299, 3, "predictions", 824, 23.2},
        {"DenseNet-201", 224, 224, 3, "fc1000", 708, 20.0},
        {"ResNet-18", 224, 224, 3, "fc1000", 71, 11.7},
        {"ResNet-50", 224, 224, 3, "fc1000", 177, 25.6},
        {"ResNet-101", 224, 224, 3, "fc1000", 347, 44.6},
        {"VGG-16", 224, 224, 3, "fc8", 41, 138.0},
        {"VGG-19", 224, 224, 3, "fc8", 47, 144.0},
        {"MobileNet-v2", 224, 224, 3, "Logits", 154, 3.5},
        {"ShuffleNet", 224, 224, 3, "node_202", 172, 1.4},
        {"GoogLeNet", 224, 224, 3, "loss3-classifier", 144, 7.0},
        {"Xception", 299, 299, 3, "predictions", 170, 22.9},
        {"NASNet-Mobile", 224, 224, 3, "predictions", 913, 5.3},
        {"NASNet-Large", 331, 331, 3, "predictions", 1243, 88.9},
    }};
    return networks;
}

}  // namespace

std::span<const NetworkSpec> network_registry() {
    return table();
}

const NetworkSpec& find_network(std::string_view name) {
    for (const auto& net : table()) {
        if (net.name == name) {
            return net;
        }
    }
    throw UsageError("unknown network '" + std::string(name) + "'");
}

}  // namespace dfbench
