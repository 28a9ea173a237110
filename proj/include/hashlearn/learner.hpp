#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hashlearn/sparse_vector.hpp"

namespace hashlearn {

enum class LossKind : uint8_t { hinge, logistic };

const char* loss_name(LossKind loss);
LossKind loss_from_name(const std::string& name);

struct LabeledExample {
    SparseRealVector features;
    int label = 1; // -1 or +1
};

struct LinearModel {
    std::vector<double> weights;
    double C = 1.0;
    LossKind loss = LossKind::hinge;
    uint64_t seed = 0;

    uint64_t dim() const { return weights.size(); }
};

struct TrainOptions {
    uint32_t epochs = 50;
    uint64_t seed = 0;
};

/// Primal objective (1/2) w'w + C * sum of per-example losses, where the
/// loss is max(1 - y w'x, 0) or log(1 + exp(-y w'x)).
double objective(const LinearModel& model, const std::vector<LabeledExample>& data);

/// Epoch-based stochastic subgradient descent on the equivalent
/// lambda-regularized form (lambda = 1 / (C n)), step 1/(lambda t), with a
/// per-epoch deterministic shuffle and a norm-ball projection safeguard.
/// Returns the best epoch-end iterate, so the reported objective is
/// non-increasing in the epoch budget and never exceeds the w = 0 value.
LinearModel train(const std::vector<LabeledExample>& data, uint64_t dim, double C, LossKind loss,
                  const TrainOptions& opts);

double decision_value(const LinearModel& model, const SparseRealVector& features);

/// sign(w'x); an exact zero resolves to +1.
int predict(const LinearModel& model, const SparseRealVector& features);

double evaluate_accuracy(const LinearModel& model, const std::vector<LabeledExample>& data);

/// Penalty grid 10^-3 .. 10^2, finer inside [0.1, 10].
std::vector<double> default_c_grid();

/// Text model format; round-trips losslessly.
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

} // namespace hashlearn
