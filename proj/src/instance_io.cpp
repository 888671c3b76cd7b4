#include "udiscsp/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace udiscsp {

using nlohmann::json;

namespace {

template <class T>
T field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw FormatError(std::string("missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("malformed field '") + name + "'");
  }
}

}  // namespace

std::string toJson(const Instance& instance) {
  json doc;
  doc["n"] = instance.n;
  doc["d"] = instance.d;
  doc["availability"] = instance.availability;
  doc["costs"] = instance.costs;
  doc["rewards"] = instance.rewards;
  // One row per line keeps files diffable without a full pretty-print.
  std::ostringstream out;
  out << "{\n  \"n\": " << instance.n << ",\n  \"d\": " << instance.d << ",\n";
  auto matrix = [&](const char* name, const json& m) {
    out << "  \"" << name << "\": [";
    for (std::size_t i = 0; i < m.size(); ++i)
      out << (i ? ",\n    " : "\n    ") << m[i].dump();
    out << (m.empty() ? "]" : "\n  ]");
  };
  matrix("availability", doc["availability"]);
  out << ",\n";
  matrix("costs", doc["costs"]);
  out << ",\n  \"rewards\": " << doc["rewards"].dump() << "\n}\n";
  return out.str();
}

Instance instanceFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("top level must be an object");
  Instance x;
  x.n = field<int>(doc, "n");
  x.d = field<int>(doc, "d");
  x.availability = field<std::vector<std::vector<bool>>>(doc, "availability");
  x.costs = field<std::vector<std::vector<Cost>>>(doc, "costs");
  x.rewards = field<std::vector<Cost>>(doc, "rewards");
  if (auto v = validate(x); !v.empty())
    throw FormatError("field '" + v.front().field + "': " + v.front().message);
  return x;
}

Instance loadInstance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return instanceFromJson(buf.str());
}

void saveInstance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << toJson(instance);
}

}  // namespace udiscsp
