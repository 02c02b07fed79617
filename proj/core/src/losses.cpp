#include "duplex/losses.hpp"

#include "duplex/errors.hpp"

namespace duplex {

namespace {

void check_logprob(double lp) {
    if (lp > 0.0) throw ConfigError("log-probability above 0");
}

}  // namespace

LossValues compute_losses(const LossInput& input) {
    if (input.steps.empty()) throw ConfigError("loss input needs at least one step");
    if (input.alpha < 0.0 || input.alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");

    double text_sum = 0.0;
    double state_sum = 0.0;
    for (const StepLogProbs& s : input.steps) {
        for (double lp : s.text_token_logprobs) {
            check_logprob(lp);
            text_sum += lp;
        }
        check_logprob(s.vad_logprob);
        double joint = s.vad_logprob;
        if (s.turn_logprob) {
            check_logprob(*s.turn_logprob);
            joint += *s.turn_logprob;
        }
        state_sum += joint;
    }

    double t = static_cast<double>(input.steps.size());
    LossValues v;
    v.text = -text_sum / t;
    v.state = -state_sum / t;
    v.total = input.alpha * v.text + (1.0 - input.alpha) * v.state;
    return v;
}

}  // namespace duplex
