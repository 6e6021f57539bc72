#include "dfbench/core/feature_matrix.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

#include "dfbench/error.hpp"

namespace dfbench {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'F', 'B', '1'};

void check_sample_id(const std::string& id, std::size_t row) {
    if (id.empty()) {
        throw DataError("empty sample id at row " + std::to_string(row + 1));
    }
    if (id.find_first_of(",\r\n") != std::string::npos) {
        throw DataError("sample id '" + id + "' at row " + std::to_string(row + 1) +
                        " contains a separator character");
    }
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
}

std::uint32_t get_u32(const std::string& in, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LoadError("cannot open feature file " + path.string());
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

FeatureMatrix parse_binary(const std::string& bytes, const std::string& name) {
    constexpr std::size_t header = 12;
    if (bytes.size() < header) {
        throw LoadError(name + ": truncated header");
    }
    const std::size_t n = get_u32(bytes, 4);
    const std::size_t d = get_u32(bytes, 8);
    if (n == 0 || d == 0) {
        throw LoadError(name + ": degenerate dimensions " + std::to_string(n) + "x" + std::to_string(d));
    }
    const std::size_t payload = n * d * 4;
    if (bytes.size() < header + payload + 4) {
        throw LoadError(name + ": file too short for " + std::to_string(n) + "x" + std::to_string(d) +
                        " payload");
    }
    std::vector<float> values(n * d);
    for (std::size_t i = 0; i < n * d; ++i) {
        const float v = std::bit_cast<float>(get_u32(bytes, header + 4 * i));
        if (!std::isfinite(v)) {
            throw LoadError(name + ": non-finite value at row " + std::to_string(i / d + 1) + ", column " +
                                std::to_string(i % d + 1),
                            i / d + 1, i % d + 1);
        }
        values[i] = v;
    }
    const std::size_t trailer_at = header + payload;
    const std::size_t trailer_len = get_u32(bytes, trailer_at);
    if (bytes.size() != trailer_at + 4 + trailer_len) {
        throw LoadError(name + ": sample-id trailer length mismatch");
    }
    std::vector<std::string> ids;
    ids.reserve(n);
    std::size_t pos = trailer_at + 4;
    const std::size_t end = bytes.size();
    while (pos < end) {
        const std::size_t nl = bytes.find('\n', pos);
        if (nl == std::string::npos || nl >= end) {
            throw LoadError(name + ": unterminated sample id in trailer");
        }
        ids.emplace_back(bytes, pos, nl - pos);
        pos = nl + 1;
    }
    if (ids.size() != n) {
        throw LoadError(name + ": " + std::to_string(ids.size()) + " sample ids for " + std::to_string(n) +
                        " rows");
    }
    return FeatureMatrix(n, d, std::move(values), std::move(ids));
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

FeatureMatrix parse_csv(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw LoadError(name + ": empty CSV");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_commas(line);
    if (header.size() < 2 || header[0] != "sample_id") {
        throw LoadError(name + ": malformed header, expected sample_id,f0,...");
    }
    const std::size_t d = header.size() - 1;
    for (std::size_t c = 0; c < d; ++c) {
        if (header[c + 1] != "f" + std::to_string(c)) {
            throw LoadError(name + ": malformed header at column " + std::to_string(c + 1), 0, c + 1);
        }
    }
    std::vector<float> values;
    std::vector<std::string> ids;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const auto fields = split_commas(line);
        if (fields.size() != d + 1) {
            throw LoadError(name + ": row " + std::to_string(row) + " has " + std::to_string(fields.size() - 1) +
                                " values, expected " + std::to_string(d),
                            row, 0);
        }
        ids.emplace_back(fields[0]);
        for (std::size_t c = 0; c < d; ++c) {
            const auto f = fields[c + 1];
            float v = 0.0f;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size()) {
                throw LoadError(name + ": unparsable value at row " + std::to_string(row) + ", column " +
                                    std::to_string(c + 1),
                                row, c + 1);
            }
            if (!std::isfinite(v)) {
                throw LoadError(name + ": non-finite value at row " + std::to_string(row) + ", column " +
                                    std::to_string(c + 1),
                                row, c + 1);
            }
            values.push_back(v);
        }
    }
    if (row == 0) {
        throw LoadError(name + ": no data rows");
    }
    return FeatureMatrix(row, d, std::move(values), std::move(ids));
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t n_samples, std::size_t n_features, std::vector<float> values,
                             std::vector<std::string> sample_ids)
    : n_samples_(n_samples),
      n_features_(n_features),
      values_(std::move(values)),
      sample_ids_(std::move(sample_ids)) {
    if (n_samples_ == 0 || n_features_ == 0) {
        throw DataError("degenerate feature matrix " + std::to_string(n_samples_) + "x" +
                        std::to_string(n_features_) + " rejected");
    }
    if (values_.size() != n_samples_ * n_features_) {
        throw DataError("feature matrix holds " + std::to_string(values_.size()) + " values, expected " +
                        std::to_string(n_samples_ * n_features_));
    }
    if (sample_ids_.size() != n_samples_) {
        throw DataError("feature matrix has " + std::to_string(sample_ids_.size()) + " sample ids for " +
                        std::to_string(n_samples_) + " rows");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("non-finite value at row " + std::to_string(i / n_features_ + 1) + ", column " +
                            std::to_string(i % n_features_ + 1));
        }
    }
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < sample_ids_.size(); ++i) {
        check_sample_id(sample_ids_[i], i);
        const auto [it, inserted] = seen.emplace(sample_ids_[i], i);
        if (!inserted) {
            throw DataError("duplicate sample id '" + sample_ids_[i] + "' at rows " +
                            std::to_string(it->second + 1) + " and " + std::to_string(i + 1));
        }
    }
}

Eigen::MatrixXd FeatureMatrix::to_eigen() const {
    Eigen::MatrixXd out(n_samples_, n_features_);
    for (std::size_t i = 0; i < n_samples_; ++i) {
        for (std::size_t j = 0; j < n_features_; ++j) {
            out(i, j) = values_[i * n_features_ + j];
        }
    }
    return out;
}

FeatureMatrix make_feature_matrix(const Eigen::MatrixXd& values, std::vector<std::string> sample_ids) {
    const auto n = static_cast<std::size_t>(values.rows());
    const auto d = static_cast<std::size_t>(values.cols());
    std::vector<float> flat(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            flat[i * d + j] = static_cast<float>(values(i, j));
        }
    }
    return FeatureMatrix(n, d, std::move(flat), std::move(sample_ids));
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const std::string name = path.string();
    if (bytes.size() >= 4 && std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        return parse_binary(bytes, name);
    }
    return parse_csv(bytes, name);
}

void write_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
    write_feature_matrix(m, path, path.extension() == ".csv" ? FeatureFileFormat::csv : FeatureFileFormat::binary);
}

void write_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path, FeatureFileFormat format) {
    if (m.n_samples() == 0 || m.n_features() == 0) {
        throw DataError("degenerate feature matrix rejected");
    }
    std::string out;
    if (format == FeatureFileFormat::binary) {
        out.reserve(16 + 4 * m.values().size());
        out.append(kMagic.begin(), kMagic.end());
        put_u32(out, static_cast<std::uint32_t>(m.n_samples()));
        put_u32(out, static_cast<std::uint32_t>(m.n_features()));
        for (const float v : m.values()) {
            put_u32(out, std::bit_cast<std::uint32_t>(v));
        }
        std::string trailer;
        for (const auto& id : m.sample_ids()) {
            trailer += id;
            trailer += '\n';
        }
        put_u32(out, static_cast<std::uint32_t>(trailer.size()));
        out += trailer;
    } else {
        out = "sample_id";
        for (std::size_t c = 0; c < m.n_features(); ++c) {
            out += ",f" + std::to_string(c);
        }
        out += '\n';
        std::array<char, 32> buf{};
        for (std::size_t r = 0; r < m.n_samples(); ++r) {
            out += m.sample_ids()[r];
            for (const float v : m.row(r)) {
                const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
                out += ',';
                out.append(buf.data(), ptr);
            }
            out += '\n';
        }
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error(ExitCode::data_validation, "cannot open " + path.string() + " for writing");
    }
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) {
        throw Error(ExitCode::data_validation, "write failed for " + path.string());
    }
}

}  // namespace dfbench
