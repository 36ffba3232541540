#include "mpak/jets/subequation.hpp"

#include <algorithm>
#include <string>

#include "mpak/core/error.hpp"

namespace mpak::jets {

struct Subequation::Impl {
  std::string name;
  int m;
  DefiningFn fn;
  SubeqParams params;
  std::string known_dual;
  SubeqParams dual_params;
};

Subequation::Subequation(std::string name, int m, DefiningFn fn, SubeqParams params,
                         std::string known_dual, std::optional<SubeqParams> dual_params) {
  if (m < 2) throw ParameterError("subequation dimension must be at least 2");
  if (!fn) throw ParameterError("subequation '" + name + "' has no defining function");
  SubeqParams dp = dual_params ? *dual_params : params;
  impl_ = std::make_shared<const Impl>(Impl{std::move(name), m, std::move(fn), std::move(params),
                                            std::move(known_dual), std::move(dp)});
}

const std::string& Subequation::name() const { return impl_->name; }
int Subequation::dim() const { return impl_->m; }
const SubeqParams& Subequation::params() const { return impl_->params; }
const std::string& Subequation::known_dual() const { return impl_->known_dual; }
const SubeqParams& Subequation::dual_params() const { return impl_->dual_params; }

double Subequation::operator()(const Jet& J) const {
  if (J.dim() != impl_->m)
    throw DomainError("jet of dimension " + std::to_string(J.dim()) + " evaluated on '" +
                      impl_->name + "' of dimension " + std::to_string(impl_->m));
  J.validate();
  return impl_->fn(J);
}

double Subequation::eval_unchecked(const Jet& J) const { return impl_->fn(J); }

bool Subequation::contains(const Jet& J, double boundary_eps) const {
  return (*this)(J) >= -boundary_eps;
}

double eval(const Subequation& F, const Jet& J) { return F(J); }

Subequation dual(const Subequation& F) {
  auto fn = [F](const Jet& J) { return -F.eval_unchecked(J.negated()); };
  if (F.known_dual().empty())
    return Subequation("dual(" + F.name() + ")", F.dim(), fn, F.params(), F.name());
  return Subequation(F.known_dual(), F.dim(), fn, F.dual_params(), F.name(), F.params());
}

namespace {
void require_same_dim(const Subequation& F, const Subequation& G) {
  if (F.dim() != G.dim())
    throw DomainError("cannot combine '" + F.name() + "' (m=" + std::to_string(F.dim()) +
                      ") with '" + G.name() + "' (m=" + std::to_string(G.dim()) + ")");
}
}  // namespace

Subequation intersection(const Subequation& F, const Subequation& G) {
  require_same_dim(F, G);
  auto fn = [F, G](const Jet& J) { return std::min(F.eval_unchecked(J), G.eval_unchecked(J)); };
  return Subequation("intersection(" + F.name() + "," + G.name() + ")", F.dim(), fn, F.params());
}

Subequation union_of(const Subequation& F, const Subequation& G) {
  require_same_dim(F, G);
  auto fn = [F, G](const Jet& J) { return std::max(F.eval_unchecked(J), G.eval_unchecked(J)); };
  return Subequation("union(" + F.name() + "," + G.name() + ")", F.dim(), fn, F.params());
}

Subequation obstacle_of(const Subequation& F, std::function<double(double)> g,
                        std::string g_label) {
  auto fn = [F, g = std::move(g)](const Jet& J) {
    return std::min(F.eval_unchecked(J), g(J.radius) - J.value);
  };
  return Subequation("obstacle_of(" + F.name() + "," + g_label + ")", F.dim(), fn, F.params());
}

}  // namespace mpak::jets
