#include "gridsel/model_io.hpp"

#include <bit>
#include <cstring>

#include "gridsel/text.hpp"

namespace gridsel::ml {

static_assert(std::endian::native == std::endian::little, "model files are written in host byte order");

namespace {

class Writer {
public:
    void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
    void u32(std::uint32_t v) { bytes(&v, sizeof v); }
    void f64(double v) { bytes(&v, sizeof v); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& s) : s_(s) {}

    void bytes(void* p, std::size_t n) {
        if (pos_ + n > s_.size()) throw ModelFormatError("model file truncated");
        std::memcpy(p, s_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        bytes(&v, sizeof v);
        return v;
    }
    double f64() {
        double v = 0;
        bytes(&v, sizeof v);
        return v;
    }
    bool done() const { return pos_ == s_.size(); }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode_model(const ModelFile& model) {
    const auto& net = model.network;
    if (model.standardizer.mean.size() != net.input_dim() || model.standardizer.scale.size() != net.input_dim()) {
        throw std::invalid_argument("encode_model: standardizer width does not match the network");
    }
    Writer w;
    w.bytes(kModelMagic, sizeof kModelMagic);
    w.u32(kModelFormatVersion);
    w.u32(static_cast<std::uint32_t>(model.loss));
    w.u32(static_cast<std::uint32_t>(net.layer_dims.size()));
    for (int d : net.layer_dims) w.u32(static_cast<std::uint32_t>(d));
    const VectorXd flat = net.flat_parameters();
    for (Eigen::Index i = 0; i < flat.size(); ++i) w.f64(flat(i));
    w.u32(static_cast<std::uint32_t>(model.standardizer.mean.size()));
    for (Eigen::Index i = 0; i < model.standardizer.mean.size(); ++i) w.f64(model.standardizer.mean(i));
    for (Eigen::Index i = 0; i < model.standardizer.scale.size(); ++i) w.f64(model.standardizer.scale(i));
    return w.take();
}

ModelFile decode_model(const std::string& bytes) {
    Reader r(bytes);
    char magic[sizeof kModelMagic];
    r.bytes(magic, sizeof magic);
    if (std::memcmp(magic, kModelMagic, sizeof magic) != 0) throw ModelFormatError("not a model file (bad magic)");
    const auto version = r.u32();
    if (version != kModelFormatVersion) throw ModelFormatError("unsupported model format version " + std::to_string(version));
    const auto loss = r.u32();
    if (loss > static_cast<std::uint32_t>(LossKind::Hinge)) throw ModelFormatError("unknown loss kind");

    const auto layers = r.u32();
    if (layers < 2 || layers > 64) throw ModelFormatError("implausible layer count");
    std::vector<int> dims;
    for (std::uint32_t i = 0; i < layers; ++i) {
        const auto d = r.u32();
        if (d == 0 || d > (1u << 24)) throw ModelFormatError("implausible layer width");
        dims.push_back(static_cast<int>(d));
    }

    ModelFile m;
    m.loss = static_cast<LossKind>(loss);
    m.network = Mlp(dims);
    VectorXd flat(m.network.parameter_count());
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = r.f64();
    m.network.set_flat_parameters(flat);

    const auto width = r.u32();
    if (static_cast<int>(width) != dims.front()) throw ModelFormatError("standardizer width does not match the network");
    m.standardizer.mean.resize(width);
    m.standardizer.scale.resize(width);
    for (std::uint32_t i = 0; i < width; ++i) m.standardizer.mean(i) = r.f64();
    for (std::uint32_t i = 0; i < width; ++i) m.standardizer.scale(i) = r.f64();
    if (!r.done()) throw ModelFormatError("trailing bytes after model");
    return m;
}

void save_model(const std::string& path, const ModelFile& model) {
    text::write_file(path, encode_model(model));
}

ModelFile load_model(const std::string& path) {
    return decode_model(text::read_file(path));
}

ModelFile svm_model_file(const LinearSvm& svm, const Standardizer& standardizer) {
    ModelFile m;
    m.loss = LossKind::Hinge;
    m.network = Mlp({static_cast<int>(svm.weights.size()), 1});
    m.network.weights[0] = svm.weights.transpose();
    m.network.biases[0](0) = svm.bias;
    m.standardizer = standardizer;
    return m;
}

LinearSvm svm_from_model_file(const ModelFile& model) {
    if (model.loss != LossKind::Hinge || model.network.layer_count() != 1 || model.network.output_dim() != 1) {
        throw ModelFormatError("model file does not hold a linear SVM");
    }
    LinearSvm svm;
    svm.weights = model.network.weights[0].row(0).transpose();
    svm.bias = model.network.biases[0](0);
    return svm;
}

}  // namespace gridsel::ml
