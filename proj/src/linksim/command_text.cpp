#include "urlab/linksim/command_text.hpp"

#include <charconv>
#include <cstdio>
#include <string>

namespace urlab::linksim {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string vec(const ursim::Vec6& v) {
  std::string s = "[";
  for (int j = 0; j < 6; ++j) {
    if (j) s += ',';
    s += num(v[j]);
  }
  return s + "]";
}

double seconds(timebase::Duration d) { return std::chrono::duration<double>(d).count(); }

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void expect(std::string_view token) {
    if (s_.substr(pos_, token.size()) != token) {
      throw CommandParseError("expected '" + std::string(token) + "' at offset " + std::to_string(pos_));
    }
    pos_ += token.size();
  }

  bool consume(std::string_view token) {
    if (s_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  double number() {
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const auto [end, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc{}) throw CommandParseError("expected a number at offset " + std::to_string(pos_));
    pos_ += static_cast<std::size_t>(end - first);
    return v;
  }

  ursim::Vec6 vector() {
    ursim::Vec6 v;
    expect("[");
    for (int j = 0; j < 6; ++j) {
      if (j) expect(",");
      v[j] = number();
    }
    expect("]");
    return v;
  }

  void finish() {
    consume("\n");
    if (pos_ != s_.size()) throw CommandParseError("trailing characters after command");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_command(const ursim::ActuationCommand& cmd) {
  switch (cmd.kind) {
    case ursim::CommandKind::SpeedJ:
      return "speedj(" + vec(cmd.values) + ",a=" + num(cmd.accel_limit) + ",t=" + num(seconds(cmd.validity)) + ")\n";
    case ursim::CommandKind::ServoJ:
      return "servoj(" + vec(cmd.values) + ",t=" + num(seconds(cmd.validity)) +
             ",lookahead_time=" + num(seconds(cmd.lookahead)) + ",gain=" + num(cmd.gain) + ")\n";
    case ursim::CommandKind::Stop:
      return "stopj()\n";
  }
  return {};
}

ursim::ActuationCommand parse_command(std::string_view line, double default_accel) {
  Cursor c(line);
  ursim::ActuationCommand cmd;
  if (c.consume("speedj(")) {
    const ursim::Vec6 v = c.vector();
    c.expect(",a=");
    const double a = c.number();
    c.expect(",t=");
    const double t = c.number();
    c.expect(")");
    cmd = ursim::ActuationCommand::speedj(v, a, timebase::from_seconds(t));
  } else if (c.consume("servoj(")) {
    const ursim::Vec6 q = c.vector();
    c.expect(",t=");
    const double t = c.number();
    c.expect(",lookahead_time=");
    const double look = c.number();
    c.expect(",gain=");
    const double gain = c.number();
    c.expect(")");
    cmd = ursim::ActuationCommand::servoj(q, timebase::from_seconds(t), timebase::from_seconds(look), gain,
                                          default_accel);
  } else if (c.consume("stopj()")) {
    cmd = ursim::ActuationCommand::stop(default_accel);
  } else {
    throw CommandParseError("unknown command: " + std::string(line.substr(0, 16)));
  }
  c.finish();
  return cmd;
}

}  // namespace urlab::linksim
