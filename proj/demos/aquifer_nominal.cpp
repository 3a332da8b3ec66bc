// Nominal run of the layered aquifer cross-section.

#include <cstdio>

#include "pcgsa/aquifer/model.hpp"

int main(int argc, char** argv) {
  using namespace pcgsa::aquifer;
  const Section section = argc > 1 ? load_section(argv[1]) : default_section();
  const CrossSectionModel model(section);
  const Evaluation e = model.run(model.nominal_parameters());

  std::printf("grid %zu x %zu, %zu target-zone cells\n", model.grid().nx(), model.grid().nz(),
              model.target_cells().size());
  std::printf("mean life expectancy over the target zone: %.0f years\n", e.response_years);
  for (const auto& [group, fraction] : e.budget.group_fraction)
    std::printf("outflow through %-10s %5.1f %%\n", group.c_str(), 100.0 * fraction);
  std::printf("mass balance error %.1e\n", e.budget.balance_error());
}
