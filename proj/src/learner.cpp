#include "hashlearn/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hashlearn/errors.hpp"
#include "hashlearn/rng.hpp"

namespace hashlearn {

const char* loss_name(LossKind loss) { return loss == LossKind::hinge ? "hinge" : "logistic"; }

LossKind loss_from_name(const std::string& name) {
    if (name == "hinge") return LossKind::hinge;
    if (name == "logistic") return LossKind::logistic;
    throw std::invalid_argument("unknown loss kind: " + name);
}

namespace {

double point_loss(LossKind loss, double margin) {
    if (loss == LossKind::hinge) return std::max(1.0 - margin, 0.0);
    // log(1 + exp(-margin)) without overflow at large |margin|
    if (margin >= 0.0) return std::log1p(std::exp(-margin));
    return -margin + std::log1p(std::exp(margin));
}

/// Coefficient on y*x in the subgradient step: 1{margin < 1} for hinge,
/// sigma(-margin) for logistic.
double step_weight(LossKind loss, double margin) {
    if (loss == LossKind::hinge) return margin < 1.0 ? 1.0 : 0.0;
    if (margin >= 0.0) {
        const double e = std::exp(-margin);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(margin));
}

void check_data(const std::vector<LabeledExample>& data, uint64_t dim) {
    if (data.empty()) throw std::invalid_argument("train: empty dataset");
    bool saw_pos = false;
    bool saw_neg = false;
    for (size_t i = 0; i < data.size(); ++i) {
        const LabeledExample& ex = data[i];
        if (ex.label != 1 && ex.label != -1) {
            throw std::invalid_argument("train: example " + std::to_string(i) + " has label " +
                                        std::to_string(ex.label) + ", want -1 or +1");
        }
        (ex.label == 1 ? saw_pos : saw_neg) = true;
        if (!ex.features.entries.empty() && ex.features.entries.back().first >= dim) {
            throw std::invalid_argument("train: example " + std::to_string(i) +
                                        " has a feature index >= dim");
        }
    }
    if (!saw_pos || !saw_neg) {
        throw std::invalid_argument("train: dataset is single-class (degenerate)");
    }
}

} // namespace

double decision_value(const LinearModel& model, const SparseRealVector& features) {
    if (features.universe_size != model.weights.size()) {
        throw std::invalid_argument("decision_value: feature dim " +
                                    std::to_string(features.universe_size) + " != model dim " +
                                    std::to_string(model.weights.size()));
    }
    double dot = 0.0;
    for (const auto& [idx, val] : features.entries) dot += model.weights[idx] * val;
    return dot;
}

int predict(const LinearModel& model, const SparseRealVector& features) {
    return decision_value(model, features) < 0.0 ? -1 : 1;
}

double objective(const LinearModel& model, const std::vector<LabeledExample>& data) {
    double reg = 0.0;
    for (double w : model.weights) reg += w * w;
    double losses = 0.0;
    for (const LabeledExample& ex : data) {
        losses += point_loss(model.loss, ex.label * decision_value(model, ex.features));
    }
    return 0.5 * reg + model.C * losses;
}

double evaluate_accuracy(const LinearModel& model, const std::vector<LabeledExample>& data) {
    if (data.empty()) throw std::invalid_argument("evaluate_accuracy: empty dataset");
    size_t correct = 0;
    for (const LabeledExample& ex : data) {
        if (predict(model, ex.features) == ex.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

LinearModel train(const std::vector<LabeledExample>& data, uint64_t dim, double C, LossKind loss,
                  const TrainOptions& opts) {
    if (!(C > 0.0) || !std::isfinite(C)) {
        throw std::invalid_argument("train: C must be positive and finite");
    }
    if (opts.epochs == 0) throw std::invalid_argument("train: epochs must be >= 1");
    check_data(data, dim);

    const size_t n = data.size();
    const double lambda = 1.0 / (C * static_cast<double>(n));
    const double loss_at_zero = loss == LossKind::hinge ? 1.0 : std::numbers::ln2;
    // F(w*) <= F(0) = C n loss0 confines the optimum to this ball.
    const double radius2 = 2.0 * loss_at_zero / lambda;

    LinearModel best;
    best.weights.assign(dim, 0.0);
    best.C = C;
    best.loss = loss;
    best.seed = opts.seed;
    double best_obj = objective(best, data);

    // Iterate kept as w = scale * v so the shrink step is O(1); norm2
    // tracks ||w||^2 for the projection test.
    std::vector<double> v(dim, 0.0);
    double scale = 1.0;
    double norm2 = 0.0;

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    SeqRng shuffle_rng(SplitRng(opts.seed).split(0x747261696eULL)); // "train"

    LinearModel current = best;
    uint64_t t = 0;
    for (uint32_t epoch = 0; epoch < opts.epochs; ++epoch) {
        // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is not
        // pinned by the standard, and runs must agree across platforms.
        for (size_t i = n - 1; i > 0; --i) {
            std::swap(order[i], order[shuffle_rng.next_below(i + 1)]);
        }

        for (size_t pos = 0; pos < n; ++pos) {
            ++t;
            const LabeledExample& ex = data[order[pos]];
            const double eta = 1.0 / (lambda * static_cast<double>(t));

            double vdotx = 0.0;
            double x2 = 0.0;
            for (const auto& [idx, val] : ex.features.entries) {
                vdotx += v[idx] * val;
                x2 += val * val;
            }
            const double margin = ex.label * scale * vdotx;
            const double coef = step_weight(loss, margin);

            // w <- (1 - 1/t) w + eta * coef * y * x. At t = 1 the shrink
            // factor is exactly 0, so restart the representation instead of
            // dividing by a zero scale.
            const double shrink = 1.0 - 1.0 / static_cast<double>(t);
            if (shrink == 0.0) {
                std::fill(v.begin(), v.end(), 0.0);
                scale = 1.0;
                norm2 = 0.0;
                vdotx = 0.0;
            } else {
                scale *= shrink;
                norm2 *= shrink * shrink;
            }
            if (coef != 0.0) {
                const double step = eta * coef * ex.label;
                for (const auto& [idx, val] : ex.features.entries) {
                    v[idx] += (step / scale) * val;
                }
                norm2 += 2.0 * step * scale * vdotx + step * step * x2;
            }
            if (norm2 > radius2) {
                const double shrink_to_ball = std::sqrt(radius2 / norm2);
                scale *= shrink_to_ball;
                norm2 = radius2;
            }
            if (scale < 1e-12 && scale != 0.0) {
                for (double& vi : v) vi *= scale;
                scale = 1.0;
            }
        }

        for (size_t i = 0; i < dim; ++i) current.weights[i] = scale * v[i];
        const double obj = objective(current, data);
        if (obj < best_obj) {
            best_obj = obj;
            best.weights = current.weights;
        }
    }
    return best;
}

std::vector<double> default_c_grid() {
    return {1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0};
}

void save_model(const LinearModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open model file for writing: " + path);
    out << "hashlearn-model v1\n";
    out << "dim " << model.weights.size() << "\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "C " << model.C << "\n";
    out << "loss " << loss_name(model.loss) << "\n";
    out << "seed " << model.seed << "\n";
    for (double w : model.weights) out << w << "\n";
    if (!out) throw io_error("failed writing model file: " + path);
}

LinearModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open model file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "hashlearn-model v1") {
        throw io_error("not a hashlearn model file: " + path);
    }
    LinearModel model;
    uint64_t dim = 0;
    for (const char* key : {"dim", "C", "loss", "seed"}) {
        if (!std::getline(in, line)) throw io_error("truncated model header: " + path);
        std::istringstream fields(line);
        std::string name;
        fields >> name;
        if (name != key) throw io_error("model header: expected '" + std::string(key) + "', got '" + name + "'");
        if (name == "dim") fields >> dim;
        else if (name == "C") fields >> model.C;
        else if (name == "seed") fields >> model.seed;
        else {
            std::string value;
            fields >> value;
            model.loss = loss_from_name(value);
        }
        if (!fields) throw io_error("model header: bad value on '" + std::string(key) + "' line");
    }
    model.weights.reserve(dim);
    for (uint64_t i = 0; i < dim; ++i) {
        double w = 0.0;
        if (!(in >> w)) throw io_error("model file ends after " + std::to_string(i) + " of " +
                                       std::to_string(dim) + " weights: " + path);
        model.weights.push_back(w);
    }
    return model;
}

} // namespace hashlearn
