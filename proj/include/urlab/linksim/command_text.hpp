#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "urlab/ursim/types.hpp"

namespace urlab::linksim {

class CommandParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Renders a command as one URScript-style line, numbers at 9 significant
/// digits, durations in seconds:
///   speedj([v0,...,v5],a=<accel>,t=<validity>)\n
///   servoj([q0,...,q5],t=<validity>,lookahead_time=<s>,gain=<g>)\n
///   stopj()\n
std::string format_command(const ursim::ActuationCommand& cmd);

/// Inverse of format_command. Fields the line does not carry (servoj and
/// stopj acceleration) take `default_accel`.
ursim::ActuationCommand parse_command(std::string_view line, double default_accel = 1.4);

}  // namespace urlab::linksim
