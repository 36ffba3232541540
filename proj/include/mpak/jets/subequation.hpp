#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "mpak/expr/expr.hpp"
#include "mpak/jets/jet.hpp"

namespace mpak::jets {

inline constexpr double kBoundaryEps = 1e-9;

/// Parameter record shared by the catalog. Scalar profiles are expressions:
/// f and xi in the variable `r` (the jet value), a in `t` (the gradient norm).
struct SubeqParams {
  std::optional<expr::Expr> f;
  std::optional<expr::Expr> xi;
  std::optional<expr::Expr> a;
  double q = 2.0;
  double lo = 1.0;
  double hi = 1.0;
  int k = 1;
  int j = 1;
};

/// Named defining function over jets; membership is value >= -boundary_eps.
/// Immutable and cheap to copy.
class Subequation {
 public:
  using DefiningFn = std::function<double(const Jet&)>;

  /// `dual_params` is the parameter record of the closed-form dual (defaults to `params`).
  Subequation(std::string name, int m, DefiningFn fn, SubeqParams params = {},
              std::string known_dual = {}, std::optional<SubeqParams> dual_params = {});

  const std::string& name() const;
  int dim() const;
  const SubeqParams& params() const;
  /// Catalog name of the closed-form dual, empty if none is known.
  const std::string& known_dual() const;
  const SubeqParams& dual_params() const;

  /// Signed defining value; throws DomainError on dimension mismatch.
  double operator()(const Jet& J) const;
  /// Same without the dimension check (hot loops on validated jets).
  double eval_unchecked(const Jet& J) const;
  bool contains(const Jet& J, double boundary_eps = kBoundaryEps) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// J -> -F(-J). Named after the closed-form dual (with its parameters) when one is known,
/// so make_subeq(dual(F).name(), dual(F).params(), m) rebuilds the closed form.
Subequation dual(const Subequation& F);
Subequation intersection(const Subequation& F, const Subequation& G);
Subequation union_of(const Subequation& F, const Subequation& G);
/// F cap {value <= g(radius)}.
Subequation obstacle_of(const Subequation& F, std::function<double(double)> g,
                        std::string g_label = "g");

double eval(const Subequation& F, const Jet& J);

}  // namespace mpak::jets
