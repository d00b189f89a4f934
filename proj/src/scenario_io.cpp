#include "dcsim/scenario_io.hpp"

#include <fstream>

namespace dcsim {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
  return obj.at(key);
}

std::uint64_t unsigned_field(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number_unsigned()) throw ValidationError(where + ": '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

MaybeEvent optional_event(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const auto id = unsigned_field(obj, key, where);
  if (id > std::numeric_limits<EventId>::max()) throw ValidationError(where + ": event id out of range");
  return static_cast<EventId>(id);
}

json event_json(MaybeEvent e) { return e ? json(*e) : json(nullptr); }

OracleVariant variant_from(const json& v) {
  if (v.is_string()) return parse_variant(v.get<std::string>());
  const std::string where = "oracle_variant";
  OracleVariant out;
  out.architecture = parse_architecture(string_field(v, "architecture", where));
  if (v.contains("conditional")) {
    if (!v.at("conditional").is_boolean()) throw ValidationError(where + ": 'conditional' must be a boolean");
    out.conditional = v.at("conditional").get<bool>();
  }
  return out;
}

EventSpec event_from(const json& e, EventId id, const std::string& where) {
  EventSpec spec;
  spec.id = id;
  if (e.contains("name")) {
    if (!e.at("name").is_string()) throw ValidationError(where + ": 'name' must be a string");
    spec.name = e.at("name").get<std::string>();
  }
  const auto kind = string_field(e, "kind", where);
  if (kind == "message") {
    spec.kind = MessageEvent{};
  } else if (kind == "absolute_timer") {
    spec.kind = AbsoluteTimer{unsigned_field(e, "deadline", where)};
  } else if (kind == "relative_timer") {
    spec.kind = RelativeTimer{unsigned_field(e, "delta", where)};
  } else if (kind == "conditional") {
    const auto text = string_field(e, "expr", where);
    try {
      spec.kind = ConditionalEvent{expr::parse(text), OracleBinding{string_field(e, "oracle", where)}};
    } catch (const expr::ParseError& err) {
      throw ValidationError(where + ": " + err.what());
    }
  } else {
    throw ValidationError(where + ": unknown event kind '" + kind + "'");
  }
  return spec;
}

json event_to(const EventSpec& e) {
  json out = std::visit(overloaded{
                            [](const MessageEvent&) { return json{{"kind", "message"}}; },
                            [](const AbsoluteTimer& t) { return json{{"kind", "absolute_timer"}, {"deadline", t.deadline}}; },
                            [](const RelativeTimer& t) { return json{{"kind", "relative_timer"}, {"delta", t.delta}}; },
                            [](const ConditionalEvent& c) {
                              return json{{"kind", "conditional"},
                                          {"expr", expr::render(c.condition)},
                                          {"oracle", c.binding.oracle}};
                            },
                        },
                        e.kind);
  if (!e.name.empty()) out["name"] = e.name;
  return out;
}

TimelineEntry entry_from(const json& a, const std::string& where) {
  TimelineEntry entry;
  entry.step = unsigned_field(a, "step", where);
  const auto kind = string_field(a, "action", where);
  const auto choice = [&] { return static_cast<std::size_t>(unsigned_field(a, "choice", where)); };
  if (kind == "oracle_update") {
    entry.action = action::OracleUpdate{string_field(a, "oracle", where), unsigned_field(a, "value", where)};
  } else if (kind == "activate") {
    entry.action = action::Activate{choice(), optional_event(a, "preferred", where)};
  } else if (kind == "trigger") {
    entry.action = action::Trigger{choice(), optional_event(a, "preferred", where),
                                   optional_event(a, "message_event", where)};
  } else if (kind == "message") {
    const auto e = optional_event(a, "event", where);
    if (!e) throw ValidationError(where + ": message needs an event");
    entry.action = action::Message{choice(), *e};
  } else {
    throw ValidationError(where + ": unknown action '" + kind + "'");
  }
  return entry;
}

json entry_to(const TimelineEntry& entry) {
  json out = std::visit(
      overloaded{
          [](const action::OracleUpdate& a) {
            return json{{"action", "oracle_update"}, {"oracle", a.oracle}, {"value", a.value}};
          },
          [](const action::Activate& a) {
            return json{{"action", "activate"}, {"choice", a.choice}, {"preferred", event_json(a.preferred)}};
          },
          [](const action::Trigger& a) {
            return json{{"action", "trigger"},
                        {"choice", a.choice},
                        {"preferred", event_json(a.preferred)},
                        {"message_event", event_json(a.message_event)}};
          },
          [](const action::Message& a) { return json{{"action", "message"}, {"choice", a.choice}, {"event", a.event}}; },
      },
      entry.action);
  out["step"] = entry.step;
  return out;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
  Scenario s;
  if (doc.contains("id")) {
    if (!doc.at("id").is_string()) throw ValidationError("'id' must be a string");
    s.id = doc.at("id").get<std::string>();
  }
  s.variant = variant_from(field(doc, "oracle_variant", "scenario"));
  s.semantics = doc.contains("semantics") ? parse_semantics(string_field(doc, "semantics", "scenario"))
                                          : default_semantics(s.variant.architecture);
  if (doc.contains("seed")) s.seed = unsigned_field(doc, "seed", "scenario");

  if (doc.contains("oracles")) {
    const auto& oracles = doc.at("oracles");
    if (!oracles.is_array()) throw ValidationError("'oracles' must be an array");
    for (std::size_t i = 0; i < oracles.size(); ++i) {
      const auto& o = oracles[i];
      const std::string where = "oracles[" + std::to_string(i) + "]";
      if (o.is_string()) {
        s.oracles.push_back({o.get<std::string>(), 0});
      } else {
        s.oracles.push_back({string_field(o, "name", where),
                             o.contains("initial") ? unsigned_field(o, "initial", where) : 0});
      }
    }
  }

  const auto& choices = field(doc, "choices", "scenario");
  if (!choices.is_array()) throw ValidationError("'choices' must be an array");
  for (std::size_t ci = 0; ci < choices.size(); ++ci) {
    const std::string where = "choices[" + std::to_string(ci) + "]";
    const auto& events = field(choices[ci], "events", where);
    if (!events.is_array()) throw ValidationError(where + ": 'events' must be an array");
    ChoiceDecl decl;
    for (std::size_t ei = 0; ei < events.size(); ++ei) {
      decl.events.push_back(
          event_from(events[ei], static_cast<EventId>(ei), where + ".events[" + std::to_string(ei) + "]"));
    }
    s.choices.push_back(std::move(decl));
  }

  if (doc.contains("timeline")) {
    const auto& timeline = doc.at("timeline");
    if (!timeline.is_array()) throw ValidationError("'timeline' must be an array");
    for (std::size_t i = 0; i < timeline.size(); ++i) {
      s.timeline.push_back(entry_from(timeline[i], "timeline[" + std::to_string(i) + "]"));
    }
  }
  validate(s);
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["id"] = s.id;
  doc["oracle_variant"] = {{"architecture", to_string(s.variant.architecture)},
                           {"conditional", s.variant.conditional}};
  doc["semantics"] = to_string(s.semantics);
  doc["seed"] = s.seed;
  doc["oracles"] = json::array();
  for (const auto& o : s.oracles) doc["oracles"].push_back({{"name", o.name}, {"initial", o.initial}});
  doc["choices"] = json::array();
  for (const auto& c : s.choices) {
    json events = json::array();
    for (const auto& e : c.events) events.push_back(event_to(e));
    doc["choices"].push_back({{"events", events}});
  }
  doc["timeline"] = json::array();
  for (const auto& entry : s.timeline) doc["timeline"].push_back(entry_to(entry));
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ValidationError(path.string() + ": " + err.what());
  }
  if (doc.is_object() && !doc.contains("id")) doc["id"] = path.stem().string();
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << scenario_to_json(s).dump(2) << '\n';
}

}  // namespace dcsim
