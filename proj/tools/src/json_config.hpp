#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace feedbalance::cli {

/// CLI11 config reader/writer for JSON files. Top-level keys are option long
/// names; a nested object named after a subcommand holds that subcommand's
/// options. Arrays become repeated inputs.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also,
                        bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace feedbalance::cli
