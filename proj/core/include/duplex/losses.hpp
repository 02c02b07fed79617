#pragma once

#include <optional>
#include <vector>

namespace duplex {

/// Log-probabilities the (out-of-scope) model assigned to the reference
/// stream at one step: every semantic token of x_t plus the joint state
/// heads.
struct StepLogProbs {
    std::vector<double> text_token_logprobs;  // one per reference semantic token
    double vad_logprob = 0.0;
    std::optional<double> turn_logprob;  // present where the reference has a turn
};

struct LossInput {
    std::vector<StepLogProbs> steps;  // T >= 1
    double alpha = 0.5;               // in [0, 1]
};

struct LossValues {
    double text = 0.0;
    double state = 0.0;
    double total = 0.0;
};

/// text  = -(1/T) sum_t sum_i log P(x_{t,i})
/// state = -(1/T) sum_t [log P(s_vad_t) + log P(s_turn_t)]
/// total = alpha * text + (1 - alpha) * state
LossValues compute_losses(const LossInput& input);

}  // namespace duplex
