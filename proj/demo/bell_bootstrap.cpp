// Bootstraps the Z0Z1 and X0X1 estimators of a Bell state and prints their
// standard errors, 95% percentile intervals and 5% tail risk.

#include "shadowboot/shadowboot.hpp"

#include <cstdio>
#include <vector>

int main() {
  using namespace shadowboot;

  Circuit bell{2, {Gate::single(GateKind::H, 0), Gate::cnot(0, 1)}, {}};
  const StateVector state = run_circuit(bell);
  const std::vector<PauliObservable> observables = {PauliObservable::parse("Z0Z1"),
                                                    PauliObservable::parse("X0X1")};

  const ShadowSet shadow = sample_shadow(state, 1000, /*seed=*/1);
  const EstimateMatrix em = estimate_matrix(shadow, observables);
  const ReplicateSet rs = bootstrap_replicates(em, {1000, 10, /*seed=*/2});

  for (std::size_t j = 0; j < observables.size(); ++j) {
    const auto mom = rs.mom_replicates.column(j);
    const auto [lo, hi] = percentile_interval(mom, 0.95);
    std::printf("%s exact=% .4f mom=% .4f se=%.4f ci95=[% .4f, % .4f] EVaR5=% .4f ES5=% .4f\n",
                observables[j].label().c_str(), exact_expectation(state, observables[j]),
                rs.point_mom[j], bootstrap_se(mom), lo, hi, empirical_quantile(mom, 0.05),
                empirical_es(mom, 0.05));
  }
  return 0;
}
