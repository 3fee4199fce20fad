#pragma once

namespace svmlab {

/// Parameters of P(positive | f) = 1 / (1 + exp(A f + B)).
struct SigmoidParams {
    double A = 0.0;
    double B = 0.0;

    friend bool operator==(const SigmoidParams&, const SigmoidParams&) = default;
};

} // namespace svmlab
