#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mpak/cli/specs.hpp"
#include "mpak/core/grid.hpp"
#include "mpak/manifold/verdict.hpp"

namespace mpak::cli {

/// Serialises with every floating-point number printed as %.17g (non-finite values
/// become the strings "inf", "-inf", "nan"). Object key order is preserved.
std::string dump(const Json& j, int indent = 2);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Header `r,u`, one node per line, values as %.17g.
std::string to_csv(const GridFunction& u);

Json to_json(const manifold::Verdict& v);

}  // namespace mpak::cli
