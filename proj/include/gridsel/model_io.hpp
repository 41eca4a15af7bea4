#pragma once

#include <stdexcept>
#include <string>

#include "gridsel/svm.hpp"
#include "gridsel/train.hpp"

namespace gridsel::ml {

// Binary layout, all integers u32 and all reals f64, little-endian:
//   magic "GRIDSELM" (8 bytes), version, loss kind, layer count L,
//   L layer widths, then per layer the weight matrix row-major followed by
//   its bias vector, then the feature count F, F means, F scales.
// A linear SVM is stored as a [n, 1] network with LossKind::Hinge.

inline constexpr char kModelMagic[8] = {'G', 'R', 'I', 'D', 'S', 'E', 'L', 'M'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelFile {
    LossKind loss = LossKind::CrossEntropy;
    Mlp network;
    Standardizer standardizer;
};

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string encode_model(const ModelFile& model);
ModelFile decode_model(const std::string& bytes);

void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

ModelFile svm_model_file(const LinearSvm& svm, const Standardizer& standardizer);
LinearSvm svm_from_model_file(const ModelFile& model);

}  // namespace gridsel::ml
