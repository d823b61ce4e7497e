#pragma once

#include <stdexcept>
#include <string>

namespace beamtrack {

// Invalid model/experiment parameters or malformed configuration input.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A Bayes update was asked to condition on an observation whose predicted
// probability is zero. The simulator never produces such observations when
// beliefs and channel share one model; callers decide the fallback.
class impossible_observation : public std::runtime_error {
  public:
    explicit impossible_observation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace beamtrack
