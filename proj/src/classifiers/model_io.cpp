#include "dfbench/classifiers/model_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>

#include "dfbench/error.hpp"

namespace dfbench {

namespace {

enum class ModelKind : std::uint8_t { lda = 0, ensemble = 1, svm = 2 };

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void matrix(const Eigen::MatrixXd& m) {
        u32(static_cast<std::uint32_t>(m.rows()));
        u32(static_cast<std::uint32_t>(m.cols()));
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
    }
    void vector(const Eigen::VectorXd& v) {
        u32(static_cast<std::uint32_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
    }
    void row_vector(const Eigen::RowVectorXd& v) { vector(v.transpose()); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& in) : in_(in) {}
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(in_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    Eigen::MatrixXd matrix() {
        const std::uint32_t r = u32();
        const std::uint32_t c = u32();
        need(static_cast<std::size_t>(r) * c * 8);
        Eigen::MatrixXd m(r, c);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = f64();
        return m;
    }
    Eigen::VectorXd vector() {
        const std::uint32_t n = u32();
        need(static_cast<std::size_t>(n) * 8);
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f64();
        return v;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > in_.size()) throw DataError("model blob truncated");
    }
    const std::string& in_;
    std::size_t pos_ = 0;
};

void write_lda(Writer& w, const LdaModel& m) {
    w.f64(m.gamma);
    w.matrix(m.means);
    w.matrix(m.sigma_pinv);
    w.vector(m.log_priors);
    w.matrix(m.coefficients);
    w.vector(m.offsets);
}

LdaModel read_lda(Reader& r) {
    LdaModel m;
    m.gamma = r.f64();
    m.means = r.matrix();
    m.sigma_pinv = r.matrix();
    m.log_priors = r.vector();
    m.coefficients = r.matrix();
    m.offsets = r.vector();
    return m;
}

void write_spec(Writer& w, const SvmSpec& s) {
    w.u8(s.kernel == KernelType::quadratic ? 0 : 1);
    w.f64(s.kernel_scale);
    w.f64(s.box_constraint);
    w.f64(s.tolerance);
    w.u64(s.max_iterations);
}

SvmSpec read_spec(Reader& r) {
    SvmSpec s;
    s.kernel = r.u8() == 0 ? KernelType::quadratic : KernelType::gaussian;
    s.kernel_scale = r.f64();
    s.box_constraint = r.f64();
    s.tolerance = r.f64();
    s.max_iterations = r.u64();
    return s;
}

}  // namespace

std::string serialize_model(const TrainedClassifier& model) {
    Writer w;
    w.u8('D');
    w.u8('F');
    w.u8('M');
    w.u8('1');
    w.u32(kModelFormatVersion);
    if (const auto* lda = std::get_if<LdaModel>(&model)) {
        w.u8(static_cast<std::uint8_t>(ModelKind::lda));
        write_lda(w, *lda);
    } else if (const auto* ens = std::get_if<SubspaceEnsembleModel>(&model)) {
        w.u8(static_cast<std::uint8_t>(ModelKind::ensemble));
        w.u32(static_cast<std::uint32_t>(ens->n_features));
        w.u32(static_cast<std::uint32_t>(ens->n_classes));
        w.u32(static_cast<std::uint32_t>(ens->members.size()));
        for (const auto& member : ens->members) {
            w.u32(static_cast<std::uint32_t>(member.features.size()));
            for (const auto f : member.features) w.u32(static_cast<std::uint32_t>(f));
            write_lda(w, member.model);
        }
    } else {
        const auto& svm = std::get<SvmClassifier>(model);
        w.u8(static_cast<std::uint8_t>(ModelKind::svm));
        w.row_vector(svm.standardizer.mean);
        w.row_vector(svm.standardizer.scale);
        w.u32(static_cast<std::uint32_t>(svm.ovo.n_classes));
        w.u32(static_cast<std::uint32_t>(svm.ovo.machines.size()));
        for (const auto& m : svm.ovo.machines) {
            w.u32(static_cast<std::uint32_t>(m.positive_class));
            w.u32(static_cast<std::uint32_t>(m.negative_class));
            write_spec(w, m.svm.spec);
            w.matrix(m.svm.support_vectors);
            w.vector(m.svm.alphas);
            w.vector(m.svm.sv_labels);
            w.f64(m.svm.bias);
            w.u64(m.svm.iterations);
            w.f64(m.svm.kkt_gap);
        }
    }
    return w.take();
}

TrainedClassifier deserialize_model(const std::string& bytes) {
    if (bytes.size() < 9 || bytes.compare(0, 4, "DFM1") != 0) {
        throw DataError("not a dfbench model blob (bad magic)");
    }
    Reader r(bytes);
    for (int i = 0; i < 4; ++i) r.u8();
    const std::uint32_t version = r.u32();
    if (version != kModelFormatVersion) {
        throw DataError("unsupported model format version " + std::to_string(version));
    }
    const auto kind = static_cast<ModelKind>(r.u8());
    TrainedClassifier out;
    switch (kind) {
        case ModelKind::lda:
            out = read_lda(r);
            break;
        case ModelKind::ensemble: {
            SubspaceEnsembleModel ens;
            ens.n_features = r.u32();
            ens.n_classes = static_cast<int>(r.u32());
            const std::uint32_t n_members = r.u32();
            for (std::uint32_t m = 0; m < n_members; ++m) {
                SubspaceMember member;
                const std::uint32_t d = r.u32();
                for (std::uint32_t j = 0; j < d; ++j) member.features.push_back(r.u32());
                member.model = read_lda(r);
                ens.members.push_back(std::move(member));
            }
            out = std::move(ens);
            break;
        }
        case ModelKind::svm: {
            SvmClassifier svm;
            svm.standardizer.mean = r.vector().transpose();
            svm.standardizer.scale = r.vector().transpose();
            svm.ovo.n_classes = static_cast<int>(r.u32());
            const std::uint32_t n_machines = r.u32();
            for (std::uint32_t i = 0; i < n_machines; ++i) {
                OvoMachine m;
                m.positive_class = static_cast<int>(r.u32());
                m.negative_class = static_cast<int>(r.u32());
                m.svm.spec = read_spec(r);
                m.svm.support_vectors = r.matrix();
                m.svm.alphas = r.vector();
                m.svm.sv_labels = r.vector();
                m.svm.bias = r.f64();
                m.svm.iterations = r.u64();
                m.svm.kkt_gap = r.f64();
                svm.ovo.machines.push_back(std::move(m));
            }
            out = std::move(svm);
            break;
        }
        default:
            throw DataError("unknown model kind in blob");
    }
    if (!r.done()) {
        throw DataError("trailing bytes after model blob");
    }
    return out;
}

void save_model(const TrainedClassifier& model, const std::filesystem::path& path) {
    const std::string bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

TrainedClassifier load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace dfbench
