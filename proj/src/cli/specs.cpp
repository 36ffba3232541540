#include "mpak/cli/specs.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "mpak/core/error.hpp"
#include "mpak/expr/expr.hpp"
#include "mpak/jets/catalog.hpp"

namespace mpak::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

using KeyValues = std::map<std::string, std::string>;

KeyValues key_values(std::string_view body, const std::string& what) {
  KeyValues kv;
  if (trim(body).empty()) return kv;
  for (const auto& item : split_top_level(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError(what + ": expected key=value, got '" + item + "'");
    const std::string key = trim(std::string_view(item).substr(0, eq));
    if (!kv.emplace(key, trim(std::string_view(item).substr(eq + 1))).second)
      throw ParameterError(what + ": duplicate key '" + key + "'");
  }
  return kv;
}

int parse_int(std::string_view s, const std::string& key) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParameterError(key + ": expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::string take(KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) return {};
  std::string v = it->second;
  kv.erase(it);
  return v;
}

void reject_rest(const KeyValues& kv, const std::string& what) {
  if (!kv.empty()) throw ParameterError(what + ": unknown key '" + kv.begin()->first + "'");
}

}  // namespace

std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

double parse_real(std::string_view s) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") return manifold::kInf;
  if (t == "-inf") return -manifold::kInf;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    throw ParameterError("expected a number, got '" + t + "'");
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  for (const auto& item : split_top_level(s, ',')) out.push_back(parse_real(item));
  return out;
}

manifold::ModelManifold parse_manifold(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind = trim(spec.substr(0, colon));
  KeyValues kv = key_values(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1),
                            "manifold");
  const std::string m_str = take(kv, "m");
  if (m_str.empty()) throw ParameterError("manifold: missing m");
  const int m = parse_int(m_str, "m");
  if (kind == "euclidean") {
    reject_rest(kv, "manifold");
    return manifold::ModelManifold::euclidean(m);
  }
  if (kind == "hyperbolic") {
    const std::string c = take(kv, "c");
    reject_rest(kv, "manifold");
    return manifold::ModelManifold::hyperbolic(m, c.empty() ? 1.0 : parse_real(c));
  }
  if (kind == "custom") {
    const std::string g = take(kv, "g");
    if (g.empty()) throw ParameterError("manifold: custom needs g=<expr>");
    const std::string rmax = take(kv, "rmax");
    reject_rest(kv, "manifold");
    return manifold::ModelManifold(m, expr::parse(g), rmax.empty() ? manifold::kInf : parse_real(rmax));
  }
  throw ParameterError("manifold: unknown kind '" + kind + "'");
}

SubeqSpec parse_subeq(std::string_view spec) {
  SubeqSpec out;
  const auto colon = spec.find(':');
  out.name = trim(spec.substr(0, colon));
  if (out.name.empty()) throw ParameterError("subequation: missing name");
  KeyValues kv = key_values(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1),
                            "subequation");
  auto& p = out.params;
  if (auto v = take(kv, "k"); !v.empty()) p.k = parse_int(v, "k");
  if (auto v = take(kv, "j"); !v.empty()) p.j = parse_int(v, "j");
  if (auto v = take(kv, "q"); !v.empty()) p.q = parse_real(v);
  if (auto v = take(kv, "lo"); !v.empty()) p.lo = parse_real(v);
  if (auto v = take(kv, "hi"); !v.empty()) p.hi = parse_real(v);
  if (auto v = take(kv, "f"); !v.empty()) p.f = expr::parse(v, "r");
  if (auto v = take(kv, "xi"); !v.empty()) p.xi = expr::parse(v, "r");
  if (auto v = take(kv, "a"); !v.empty()) p.a = expr::parse(v, "t");
  reject_rest(kv, "subequation");
  return out;
}

jets::Subequation build(const SubeqSpec& spec, int m) { return jets::make_subeq(spec.name, spec.params, m); }

Json subeq_record(const jets::Subequation& F) {
  const auto& p = F.params();
  const jets::SubeqParams d;
  Json params = Json::object();
  if (p.k != d.k) params["k"] = p.k;
  if (p.j != d.j) params["j"] = p.j;
  if (p.q != d.q) params["q"] = p.q;
  if (p.lo != d.lo) params["lo"] = p.lo;
  if (p.hi != d.hi) params["hi"] = p.hi;
  if (p.f) params["f"] = p.f->str();
  if (p.xi) params["xi"] = p.xi->str();
  if (p.a) params["a"] = p.a->str();
  return Json{{"name", F.name()}, {"m", F.dim()}, {"params", params}};
}

Eigen::MatrixXd parse_matrix(std::string_view s) {
  const auto rows = split_top_level(s, ';');
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = parse_list(rows[static_cast<std::size_t>(i)]);
    if (static_cast<Eigen::Index>(row.size()) != n) throw ParameterError("matrix: expected a square matrix");
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = row[static_cast<std::size_t>(j)];
  }
  return A;
}

}  // namespace mpak::cli
