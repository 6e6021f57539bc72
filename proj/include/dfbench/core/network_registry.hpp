#pragma once

#include <span>
#include <string>
#include <string_view>

namespace dfbench {

/// A pretrained ImageNet network used as a deep-feature extractor.
struct NetworkSpec {
    std::string name;
    int input_height;
    int input_width;
    int input_channels;
    std::string fc_layer_name;
    int n_layers;
    double n_params_millions;
    int feature_dim = 1000;
};

/// The 14 extractor networks of the benchmark grid, in canonical order.
std::span<const NetworkSpec> network_registry();

/// Exact-name lookup; throws UsageError for unknown names.
const NetworkSpec& find_network(std::string_view name);

}  // namespace dfbench
