#pragma once

#include <map>
#include <optional>
#include <string>

#include "mpak/manifold/model.hpp"

namespace mpak::manifold {

enum class Status { Holds, Fails, Inconclusive };

std::string to_string(Status s);

/// Three-valued classification with its certificate.
struct Verdict {
  Status status = Status::Inconclusive;
  std::optional<RadialFunction> witness;
  std::map<std::string, double> diagnostics;
  std::string note;
};

}  // namespace mpak::manifold
