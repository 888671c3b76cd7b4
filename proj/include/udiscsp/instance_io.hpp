#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "udiscsp/instance.hpp"

namespace udiscsp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document fields: n, d, availability (n x d booleans), costs (n x d
// integers), rewards (n integers). Parsing rejects anything that fails
// validate(), naming the offending field.
std::string toJson(const Instance& instance);
Instance instanceFromJson(const std::string& text);

Instance loadInstance(const std::filesystem::path& path);
void saveInstance(const Instance& instance, const std::filesystem::path& path);

}  // namespace udiscsp
