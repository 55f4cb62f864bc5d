#include "blockband/forecaster/optimizer.hpp"

#include "blockband/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace blockband::forecaster {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kRho = 0.9;
constexpr double kEpsilon = 1e-7;
constexpr double kAdagradInitial = 0.1;

class Sgd final : public Optimizer {
public:
    explicit Sgd(double lr) : lr_(lr) {}
    void step(Vector& params, const Vector& g) override { params.noalias() -= lr_ * g; }

private:
    double lr_;
};

class Adam final : public Optimizer {
public:
    Adam(double lr, Index size) : lr_(lr), m_(Vector::Zero(size)), v_(Vector::Zero(size)) {}
    void step(Vector& params, const Vector& g) override {
        ++t_;
        m_ = kBeta1 * m_ + (1.0 - kBeta1) * g;
        v_ = kBeta2 * v_ + (1.0 - kBeta2) * g.cwiseProduct(g);
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
        for (Index k = 0; k < params.size(); ++k) {
            params[k] -= lr_ * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + kEpsilon);
        }
    }

private:
    double lr_;
    Vector m_;
    Vector v_;
    long t_ = 0;
};

class RmsProp final : public Optimizer {
public:
    RmsProp(double lr, Index size) : lr_(lr), v_(Vector::Zero(size)) {}
    void step(Vector& params, const Vector& g) override {
        v_ = kRho * v_ + (1.0 - kRho) * g.cwiseProduct(g);
        for (Index k = 0; k < params.size(); ++k) {
            params[k] -= lr_ * g[k] / (std::sqrt(v_[k]) + kEpsilon);
        }
    }

private:
    double lr_;
    Vector v_;
};

class Adagrad final : public Optimizer {
public:
    Adagrad(double lr, Index size) : lr_(lr), acc_(Vector::Constant(size, kAdagradInitial)) {}
    void step(Vector& params, const Vector& g) override {
        acc_ += g.cwiseProduct(g);
        for (Index k = 0; k < params.size(); ++k) {
            params[k] -= lr_ * g[k] / (std::sqrt(acc_[k]) + kEpsilon);
        }
    }

private:
    double lr_;
    Vector acc_;
};

class Adamax final : public Optimizer {
public:
    Adamax(double lr, Index size) : lr_(lr), m_(Vector::Zero(size)), u_(Vector::Zero(size)) {}
    void step(Vector& params, const Vector& g) override {
        ++t_;
        m_ = kBeta1 * m_ + (1.0 - kBeta1) * g;
        u_ = (kBeta2 * u_).cwiseMax(g.cwiseAbs());
        const double step = lr_ / (1.0 - std::pow(kBeta1, static_cast<double>(t_)));
        for (Index k = 0; k < params.size(); ++k) {
            params[k] -= step * m_[k] / (u_[k] + kEpsilon);
        }
    }

private:
    double lr_;
    Vector m_;
    Vector u_;
    long t_ = 0;
};

}  // namespace

std::string_view optimizer_name(OptimizerKind kind) noexcept {
    switch (kind) {
        case OptimizerKind::Adam: return "adam";
        case OptimizerKind::RMSprop: return "rmsprop";
        case OptimizerKind::SGD: return "sgd";
        case OptimizerKind::Adagrad: return "adagrad";
        case OptimizerKind::Adamax: return "adamax";
    }
    return "unknown";
}

OptimizerKind parse_optimizer(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "adam") return OptimizerKind::Adam;
    if (lower == "rmsprop") return OptimizerKind::RMSprop;
    if (lower == "sgd") return OptimizerKind::SGD;
    if (lower == "adagrad") return OptimizerKind::Adagrad;
    if (lower == "adamax") return OptimizerKind::Adamax;
    throw Error(ErrorCode::BadConfig, "unknown optimizer '" + std::string(text) + "'");
}

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double learning_rate, Index size) {
    switch (kind) {
        case OptimizerKind::Adam: return std::make_unique<Adam>(learning_rate, size);
        case OptimizerKind::RMSprop: return std::make_unique<RmsProp>(learning_rate, size);
        case OptimizerKind::SGD: return std::make_unique<Sgd>(learning_rate);
        case OptimizerKind::Adagrad: return std::make_unique<Adagrad>(learning_rate, size);
        case OptimizerKind::Adamax: return std::make_unique<Adamax>(learning_rate, size);
    }
    throw Error(ErrorCode::BadConfig, "unknown optimizer");
}

}  // namespace blockband::forecaster
