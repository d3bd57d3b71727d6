#include "urlab/xlab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

namespace urlab::xlab {
namespace {

using reacher::ActionSpace;
using reacher::Variant;

double to_ms(Duration d) { return timebase::to_ms(d); }
Duration from_ms(double ms) { return timebase::from_seconds(ms * 1e-3); }

/// One TOML table being read; remembers which keys were consumed so that
/// leftovers can be reported as unknown.
class Section {
 public:
  Section(const toml::table* table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

  std::string path(std::string_view key) const {
    return prefix_.empty() ? std::string(key) : prefix_ + "." + std::string(key);
  }

  const toml::node* find(std::string_view key) {
    seen_.insert(std::string(key));
    return table_ ? table_->get(key) : nullptr;
  }

  bool has(std::string_view key) const { return table_ && table_->contains(key); }

  void real(std::string_view key, double& out) {
    if (const auto* n = find(key)) {
      if (!n->is_number()) throw ConfigError(path(key), "expected a number");
      out = n->value<double>().value();
      if (!std::isfinite(out)) throw ConfigError(path(key), "must be finite");
    }
  }

  void integer(std::string_view key, std::int64_t& out) {
    if (const auto* n = find(key)) {
      if (!n->is_integer()) throw ConfigError(path(key), "expected an integer");
      out = n->as_integer()->get();
    }
  }

  void integer(std::string_view key, int& out) {
    std::int64_t v = out;
    integer(key, v);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ConfigError(path(key), "integer out of range");
    }
    out = static_cast<int>(v);
  }

  void boolean(std::string_view key, bool& out) {
    if (const auto* n = find(key)) {
      if (!n->is_boolean()) throw ConfigError(path(key), "expected true or false");
      out = n->as_boolean()->get();
    }
  }

  void text(std::string_view key, std::string& out) {
    if (const auto* n = find(key)) {
      if (!n->is_string()) throw ConfigError(path(key), "expected a string");
      out = n->as_string()->get();
    }
  }

  void millis(std::string_view key, Duration& out) {
    double v = to_ms(out);
    real(key, v);
    out = from_ms(v);
  }

  void seconds(std::string_view key, Duration& out) {
    double v = to_ms(out) * 1e-3;
    real(key, v);
    out = timebase::from_seconds(v);
  }

  /// Reads an array of numbers; `expected` < 0 accepts any length.
  bool vector(std::string_view key, Eigen::VectorXd& out, Eigen::Index expected) {
    const auto* n = find(key);
    if (!n) return false;
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError(path(key), "expected an array of numbers");
    if (expected >= 0 && static_cast<Eigen::Index>(arr->size()) != expected) {
      throw ConfigError(path(key), "expected " + std::to_string(expected) + " entries");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr->size()));
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* e = arr->get(i);
      if (!e->is_number()) throw ConfigError(path(key), "entry " + std::to_string(i) + " is not a number");
      v[static_cast<Eigen::Index>(i)] = e->value<double>().value();
    }
    out = v;
    return true;
  }

  bool vec6(std::string_view key, ursim::Vec6& out) {
    Eigen::VectorXd v;
    if (!vector(key, v, 6)) return false;
    out = v;
    return true;
  }

  Section sub(std::string_view key) {
    const auto* n = find(key);
    if (n && !n->is_table()) throw ConfigError(path(key), "expected a table");
    return Section(n ? n->as_table() : nullptr, path(key));
  }

  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      if (!seen_.count(std::string(k.str()))) throw ConfigError(path(k.str()), "unknown key");
    }
  }

 private:
  const toml::table* table_;
  std::string prefix_;
  std::set<std::string> seen_;
};

template <typename E>
E choose(const std::string& key, const std::string& value, std::initializer_list<std::pair<const char*, E>> options) {
  std::string allowed;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(key, "unknown value '" + value + "' (expected one of " + allowed + ")");
}

std::string variant_name(Variant v) { return v == Variant::TwoJoint ? "2-joint" : "6-joint"; }

toml::array to_array(const Eigen::VectorXd& v) {
  toml::array a;
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void apply_kinematics(Section s, ExperimentConfig& c) {
  auto& chain = c.task.chain;
  Eigen::VectorXd links;
  if (s.vector("link_lengths", links, 2)) {
    chain.l1 = links[0];
    chain.l2 = links[1];
  }
  Eigen::VectorXd col;
  if (s.vector("dh_a", col, 6)) for (int i = 0; i < 6; ++i) chain.dh[i].a = col[i];
  if (s.vector("dh_d", col, 6)) for (int i = 0; i < 6; ++i) chain.dh[i].d = col[i];
  if (s.vector("dh_alpha", col, 6)) for (int i = 0; i < 6; ++i) chain.dh[i].alpha = col[i];
  if (s.vector("dh_theta_offset", col, 6)) for (int i = 0; i < 6; ++i) chain.dh[i].theta_offset = col[i];
  if (s.vector("actuated_joints", col, -1)) {
    chain.actuated.clear();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (col[i] != std::floor(col[i])) throw ConfigError(s.path("actuated_joints"), "expected joint indices");
      chain.actuated.push_back(static_cast<int>(col[i]));
    }
  }
  s.finish();
  try {
    chain.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.path("actuated_joints"), e.what());
  }
}

void apply_bounds(Section s, ExperimentConfig& c) {
  auto& task = c.task;
  auto& b = task.bounds;
  const Eigen::Index w = task.chain.workspace_dim();
  const bool box_lo = s.vector("box_lo", b.box_lo, w);
  const bool box_hi = s.vector("box_hi", b.box_hi, w);
  const bool start = s.vec6("q_start", task.q_start);
  const bool box_given = box_lo || box_hi;
  if (!start && box_given && task.chain.variant == Variant::TwoJoint) {
    const Eigen::VectorXd center = b.center();
    try {
      const auto [qa, qb] = reacher::planar_ik(center[0], center[1], task.chain.l1, task.chain.l2);
      task.q_start.setZero();
      task.q_start[task.chain.actuated[0]] = qa;
      task.q_start[task.chain.actuated[1]] = qb;
    } catch (const std::domain_error&) {
      throw ConfigError(s.path("box_lo"), "box center is out of reach");
    }
  }
  if (!s.vec6("q_min", b.q_min) && (start || box_given)) {
    for (int j : task.chain.actuated) b.q_min[j] = task.q_start[j] - std::numbers::pi / 2;
  }
  if (!s.vec6("q_max", b.q_max) && (start || box_given)) {
    for (int j : task.chain.actuated) b.q_max[j] = task.q_start[j] + std::numbers::pi / 2;
  }
  s.real("v_task", b.v_task);
  s.real("a_task", b.a_task);
  s.real("margin", b.margin);
  s.finish();
}

ExperimentConfig from_table(const toml::table& root) {
  ExperimentConfig c;
  Section top(&root, "");
  std::string text;

  text = "2-joint";
  top.text("variant", text);
  const Variant variant = choose<Variant>("variant", text, {{"2-joint", Variant::TwoJoint}, {"6-joint", Variant::SixJoint}});
  c.task = variant == Variant::TwoJoint ? reacher::ReacherTask::two_joint() : reacher::ReacherTask::six_joint();

  top.text("name", c.name);
  text = reacher::to_string(c.action_space);
  top.text("action_space", text);
  c.action_space = choose<ActionSpace>("action_space", text,
                                       {{"velocity", ActionSpace::Velocity},
                                        {"smoothed-position", ActionSpace::SmoothedPosition}});
  top.millis("action_cycle_ms", c.action_cycle);
  top.seconds("episode_length_s", c.episode_length);
  top.integer("batch_episodes", c.batch_episodes);
  text = to_string(c.medium);
  top.text("medium", text);
  c.medium = choose<MediumKind>("medium", text,
                                {{"wired", MediumKind::Wired}, {"wireless", MediumKind::Wireless},
                                 {"ideal", MediumKind::Ideal}});
  top.millis("action_delay_ms", c.action_delay);
  top.millis("actuation_delay_ms", c.actuation_delay);
  text = c.clock == timebase::ClockMode::Virtual ? "virtual" : "realtime";
  top.text("clock", text);
  c.clock = choose<timebase::ClockMode>("clock", text,
                                        {{"virtual", timebase::ClockMode::Virtual},
                                         {"realtime", timebase::ClockMode::RealTime}});
  std::int64_t seed = 0;
  top.integer("seed", seed);
  if (seed < 0) throw ConfigError("seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  top.integer("total_steps", c.total_steps);
  text = to_string(c.agent);
  top.text("agent", text);
  c.agent = choose<AgentKind>("agent", text, {{"trpo", AgentKind::Trpo}, {"random", AgentKind::Random}});
  top.text("output_dir", c.output_dir);

  apply_kinematics(top.sub("kinematics"), c);
  apply_bounds(top.sub("bounds"), c);

  {
    Section s = top.sub("trpo");
    s.real("gamma", c.trpo.gamma);
    s.real("delta", c.trpo.delta);
    s.integer("cg_iters", c.trpo.cg_iters);
    s.real("cg_damping", c.trpo.cg_damping);
    s.real("backtrack_ratio", c.trpo.backtrack_ratio);
    s.integer("max_backtracks", c.trpo.max_backtracks);
    s.integer("critic_epochs", c.trpo.critic_epochs);
    s.real("critic_lr", c.trpo.critic_lr);
    s.integer("critic_minibatch", c.trpo.critic_minibatch);
    s.finish();
  }
  {
    Section s = top.sub("controller");
    s.integer("accel_lag", c.controller.accel_lag);
    s.integer("current_lag", c.controller.current_lag);
    s.real("inertia_scale", c.controller.inertia_scale);
    s.real("current_gain", c.controller.current_gain);
    s.real("friction_gain", c.controller.friction_gain);
    s.real("current_noise", c.controller.current_noise);
    s.real("default_accel", c.controller.default_accel);
    s.boolean("preempt_on_async_arrival", c.controller.preempt_on_async_arrival);
    s.finish();
  }
  {
    Section s = top.sub("wired");
    s.millis("mean_ms", c.wired.mean);
    s.millis("sigma_ms", c.wired.sigma);
    s.millis("lo_ms", c.wired.lo);
    s.millis("hi_ms", c.wired.hi);
    s.millis("band_ms", c.wired.latency_band);
    s.finish();
  }
  {
    Section s = top.sub("wireless");
    s.millis("median_ms", c.wireless.median);
    s.real("log_sigma", c.wireless.log_sigma);
    s.millis("cap_ms", c.wireless.cap);
    s.finish();
  }
  {
    Section s = top.sub("safety");
    s.millis("reaction_ms", c.safety.reaction);
    s.real("joint_margin", c.safety.joint_margin);
    s.finish();
  }
  {
    Section s = top.sub("reset");
    s.real("gain", c.reset.gain);
    s.real("tolerance", c.reset.tolerance);
    s.seconds("timeout_s", c.reset.timeout);
    s.seconds("give_up_s", c.reset.give_up);
    s.finish();
  }
  {
    Section s = top.sub("logging");
    s.boolean("ticks", c.logging.ticks);
    s.boolean("arrivals", c.logging.arrivals);
    s.boolean("events", c.logging.events);
    s.finish();
  }
  top.finish();
  c.validate();
  return c;
}

toml::table to_table(const ExperimentConfig& c) {
  toml::table t;
  t.insert("name", c.name);
  t.insert("variant", variant_name(c.task.chain.variant));
  t.insert("action_space", reacher::to_string(c.action_space));
  t.insert("action_cycle_ms", to_ms(c.action_cycle));
  t.insert("episode_length_s", to_ms(c.episode_length) * 1e-3);
  t.insert("batch_episodes", static_cast<std::int64_t>(c.batch_episodes));
  t.insert("medium", to_string(c.medium));
  t.insert("action_delay_ms", to_ms(c.action_delay));
  t.insert("actuation_delay_ms", to_ms(c.actuation_delay));
  t.insert("clock", c.clock == timebase::ClockMode::Virtual ? "virtual" : "realtime");
  t.insert("seed", static_cast<std::int64_t>(c.seed));
  t.insert("total_steps", c.total_steps);
  t.insert("agent", to_string(c.agent));
  t.insert("output_dir", c.output_dir);

  const auto& chain = c.task.chain;
  Eigen::VectorXd a(6), d(6), alpha(6), off(6), act(chain.n_actuated());
  for (int i = 0; i < 6; ++i) {
    a[i] = chain.dh[i].a;
    d[i] = chain.dh[i].d;
    alpha[i] = chain.dh[i].alpha;
    off[i] = chain.dh[i].theta_offset;
  }
  toml::array joints;
  for (int j : chain.actuated) joints.push_back(static_cast<std::int64_t>(j));
  t.insert("kinematics", toml::table{{"link_lengths", toml::array{chain.l1, chain.l2}},
                                     {"dh_a", to_array(a)},
                                     {"dh_d", to_array(d)},
                                     {"dh_alpha", to_array(alpha)},
                                     {"dh_theta_offset", to_array(off)},
                                     {"actuated_joints", joints}});
  const auto& b = c.task.bounds;
  t.insert("bounds", toml::table{{"box_lo", to_array(b.box_lo)},
                                 {"box_hi", to_array(b.box_hi)},
                                 {"q_start", to_array(c.task.q_start)},
                                 {"q_min", to_array(b.q_min)},
                                 {"q_max", to_array(b.q_max)},
                                 {"v_task", b.v_task},
                                 {"a_task", b.a_task},
                                 {"margin", b.margin}});
  t.insert("trpo", toml::table{{"gamma", c.trpo.gamma},
                               {"delta", c.trpo.delta},
                               {"cg_iters", c.trpo.cg_iters},
                               {"cg_damping", c.trpo.cg_damping},
                               {"backtrack_ratio", c.trpo.backtrack_ratio},
                               {"max_backtracks", c.trpo.max_backtracks},
                               {"critic_epochs", c.trpo.critic_epochs},
                               {"critic_lr", c.trpo.critic_lr},
                               {"critic_minibatch", c.trpo.critic_minibatch}});
  t.insert("controller", toml::table{{"accel_lag", c.controller.accel_lag},
                                     {"current_lag", c.controller.current_lag},
                                     {"inertia_scale", c.controller.inertia_scale},
                                     {"current_gain", c.controller.current_gain},
                                     {"friction_gain", c.controller.friction_gain},
                                     {"current_noise", c.controller.current_noise},
                                     {"default_accel", c.controller.default_accel},
                                     {"preempt_on_async_arrival", c.controller.preempt_on_async_arrival}});
  t.insert("wired", toml::table{{"mean_ms", to_ms(c.wired.mean)},
                                {"sigma_ms", to_ms(c.wired.sigma)},
                                {"lo_ms", to_ms(c.wired.lo)},
                                {"hi_ms", to_ms(c.wired.hi)},
                                {"band_ms", to_ms(c.wired.latency_band)}});
  t.insert("wireless", toml::table{{"median_ms", to_ms(c.wireless.median)},
                                   {"log_sigma", c.wireless.log_sigma},
                                   {"cap_ms", to_ms(c.wireless.cap)}});
  t.insert("safety", toml::table{{"reaction_ms", to_ms(c.safety.reaction)}, {"joint_margin", c.safety.joint_margin}});
  t.insert("reset", toml::table{{"gain", c.reset.gain},
                                {"tolerance", c.reset.tolerance},
                                {"timeout_s", to_ms(c.reset.timeout) * 1e-3},
                                {"give_up_s", to_ms(c.reset.give_up) * 1e-3}});
  t.insert("logging", toml::table{{"ticks", c.logging.ticks},
                                  {"arrivals", c.logging.arrivals},
                                  {"events", c.logging.events}});
  return t;
}

nlohmann::ordered_json node_to_json(const toml::node& n) {
  if (const auto* t = n.as_table()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = node_to_json(v);
    return j;
  }
  if (const auto* a = n.as_array()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& v : *a) j.push_back(node_to_json(v));
    return j;
  }
  if (n.is_integer()) return n.as_integer()->get();
  if (n.is_floating_point()) return n.as_floating_point()->get();
  if (n.is_boolean()) return n.as_boolean()->get();
  if (n.is_string()) return n.as_string()->get();
  throw ConfigError("<json>", "unsupported TOML value type");
}

void json_into(const nlohmann::json& j, toml::table& out, const std::string& prefix);

toml::array json_array(const nlohmann::json& j, const std::string& key) {
  toml::array a;
  for (const auto& e : j) {
    if (e.is_number_integer()) a.push_back(e.get<std::int64_t>());
    else if (e.is_number()) a.push_back(e.get<double>());
    else if (e.is_boolean()) a.push_back(e.get<bool>());
    else if (e.is_string()) a.push_back(e.get<std::string>());
    else throw ConfigError(key, "unsupported array entry");
  }
  return a;
}

void json_into(const nlohmann::json& j, toml::table& out, const std::string& prefix) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      toml::table sub;
      json_into(v, sub, key);
      out.insert(k, std::move(sub));
    } else if (v.is_array()) {
      out.insert(k, json_array(v, key));
    } else if (v.is_number_integer()) {
      out.insert(k, v.get<std::int64_t>());
    } else if (v.is_number()) {
      out.insert(k, v.get<double>());
    } else if (v.is_boolean()) {
      out.insert(k, v.get<bool>());
    } else if (v.is_string()) {
      out.insert(k, v.get<std::string>());
    } else {
      throw ConfigError(key, "unsupported JSON value");
    }
  }
}

}  // namespace

std::string to_string(MediumKind m) {
  switch (m) {
    case MediumKind::Wired: return "wired";
    case MediumKind::Wireless: return "wireless";
    case MediumKind::Ideal: return "ideal";
  }
  return "unknown";
}

std::string to_string(AgentKind a) { return a == AgentKind::Trpo ? "trpo" : "random"; }

void ExperimentConfig::validate() const {
  const auto wrap = [](const char* key, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  };
  if (action_cycle <= Duration::zero()) throw ConfigError("action_cycle_ms", "must be positive");
  if (episode_length <= Duration::zero()) throw ConfigError("episode_length_s", "must be positive");
  if (action_cycle % controller.tick != Duration::zero()) {
    throw ConfigError("action_cycle_ms", "must be a multiple of the 8 ms actuation cycle");
  }
  if (episode_length % action_cycle != Duration::zero()) {
    throw ConfigError("episode_length_s", "must be a whole number of action cycles");
  }
  if (batch_episodes <= 0) throw ConfigError("batch_episodes", "must be positive");
  if (action_delay < Duration::zero()) throw ConfigError("action_delay_ms", "must be non-negative");
  if (actuation_delay < Duration::zero()) throw ConfigError("actuation_delay_ms", "must be non-negative");
  if (total_steps < 0) throw ConfigError("total_steps", "must be non-negative");
  wrap("bounds", [&] { task.validate(); });
  wrap("trpo", [&] { trpo.validate(); });
  wrap("controller", [&] { controller.validate(); });
  wrap("wired", [&] { linksim::validate(wired); });
  wrap("wireless", [&] { linksim::validate(wireless); });
  if (safety.reaction < Duration::zero() || safety.joint_margin < 0.0) {
    throw ConfigError("safety", "reaction_ms and joint_margin must be non-negative");
  }
  if (!(reset.gain > 0.0) || !(reset.tolerance > 0.0) || reset.timeout <= Duration::zero()) {
    throw ConfigError("reset", "gain, tolerance and timeout_s must be positive");
  }
  if (reset.give_up < reset.timeout) throw ConfigError("reset.give_up_s", "must not be shorter than timeout_s");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return dump_config(a) == dump_config(b); }

ExperimentConfig parse_config(const std::string& toml_text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(source, msg.str());
  }
  return from_table(root);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << to_table(cfg) << "\n";
  return out.str();
}

std::string config_to_json(const ExperimentConfig& cfg) { return node_to_json(to_table(cfg)).dump(2); }

ExperimentConfig config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("<json>", e.what());
  }
  if (!j.is_object()) throw ConfigError("<json>", "expected an object");
  toml::table t;
  json_into(j, t, "");
  return from_table(t);
}

}  // namespace urlab::xlab
