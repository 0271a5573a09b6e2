#include "json_config.hpp"

#include <charconv>
#include <istream>

#include <json.hpp>

namespace feedbalance::cli {

namespace {

using nlohmann::json;

json ScalarFromString(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  double value = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec == std::errc() && ptr == end && !s.empty()) {
    long long integral = 0;
    const auto [iptr, iec] = std::from_chars(s.data(), end, integral);
    if (iec == std::errc() && iptr == end) return integral;
    return value;
  }
  return s;
}

std::string InputFromJson(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

json AppToJson(const CLI::App* app, bool default_also) {
  json out = json::object();
  for (const CLI::Option* opt : app->get_options({})) {
    if (!opt->get_configurable()) continue;
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    std::vector<std::string> values = opt->results();
    if (values.empty() && default_also) {
      if (!opt->get_default_str().empty()) {
        values.push_back(opt->get_default_str());
      } else if (opt->get_expected_min() == 0) {
        values.push_back("false");
      }
    }
    if (values.empty()) continue;
    if (opt->get_expected_min() == 0 && opt->count() > 0) {
      out[name] = true;
    } else if (values.size() == 1) {
      out[name] = ScalarFromString(values.front());
    } else {
      json arr = json::array();
      for (const std::string& v : values) arr.push_back(ScalarFromString(v));
      out[name] = std::move(arr);
    }
  }
  for (const CLI::App* sub : app->get_subcommands()) {
    out[sub->get_name()] = AppToJson(sub, default_also);
  }
  return out;
}

void Flatten(const json& node, std::vector<std::string>& parents,
             std::vector<CLI::ConfigItem>& items) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (it->is_object()) {
      parents.push_back(it.key());
      Flatten(*it, parents, items);
      parents.pop_back();
      continue;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = it.key();
    if (it->is_array()) {
      for (const json& v : *it) item.inputs.push_back(InputFromJson(v));
    } else {
      item.inputs.push_back(InputFromJson(*it));
    }
    items.push_back(std::move(item));
  }
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also,
                                  bool /*write_description*/,
                                  std::string /*prefix*/) const {
  return AppToJson(app, default_also).dump(2);
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(
    std::istream& input) const {
  json root;
  try {
    root = json::parse(input);
  } catch (const json::parse_error& e) {
    throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
  }
  if (!root.is_object()) {
    throw CLI::ConversionError("JSON config must be an object");
  }
  std::vector<CLI::ConfigItem> items;
  std::vector<std::string> parents;
  Flatten(root, parents, items);
  return items;
}

}  // namespace feedbalance::cli
