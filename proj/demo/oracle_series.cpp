// Activated area, average slip and seismic moment over ten years for one
// parameter vector.
#include <cstdio>

#include "surmodel/oracle/fault_model.hpp"

int main() {
  using namespace surmodel;
  const oracle::FaultModel model{oracle::OracleConfig{}};
  const ParameterVector p{9.2e4, 27.1, 0.45};
  const auto series = model.run_series(p);
  std::printf("step  A_a [m2]      delta_S [m]   M0 [N m]      open patches\n");
  for (std::size_t i = 0; i < series.states.size(); ++i) {
    const auto& s = series.states[i];
    std::printf("%4zu  %-12.5g  %-12.5g  %-12.5g  %d\n", i + 1, s.a_a, s.delta_s, model.seismic_moment(s),
                series.open_patches[i]);
  }
  std::printf("F_o = %d\n", series.opened ? 1 : 0);
}
