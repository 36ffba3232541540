#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpak/jets/subequation.hpp"
#include "mpak/manifold/model.hpp"

namespace mpak::cli {

using Json = nlohmann::ordered_json;

/// Splits on `sep` outside parentheses, so expressions such as pow(r,2) survive.
std::vector<std::string> split_top_level(std::string_view s, char sep);

/// Comma-separated list of reals ("1,2.5,inf").
std::vector<double> parse_list(std::string_view s);
double parse_real(std::string_view s);

/// euclidean:m=M | hyperbolic:m=M[,c=C] | custom:m=M,g=<expr>[,rmax=R]
manifold::ModelManifold parse_manifold(std::string_view spec);

/// Catalog name with optional parameters: "name[:key=value,...]". Keys k, j (integers),
/// q, lo, hi (reals), f, xi (expressions in r), a (expression in t).
struct SubeqSpec {
  std::string name;
  jets::SubeqParams params;
};

SubeqSpec parse_subeq(std::string_view spec);
jets::Subequation build(const SubeqSpec& spec, int m);

/// {name, m, params{...}} with only the parameters that were set or differ from defaults.
Json subeq_record(const jets::Subequation& F);

/// Rows separated by ';', entries by ','. Must be square.
Eigen::MatrixXd parse_matrix(std::string_view s);

}  // namespace mpak::cli
