#ifndef SOSTREE_SCAN_HPP
#define SOSTREE_SCAN_HPP

// Phase-diagram scan: fixed-point count and stability over a parameter grid.

#include <vector>

#include "sostree/grid.hpp"
#include "sostree/phase.hpp"

namespace sostree {

struct PhaseScanCell {
    double theta, theta1;
    std::vector<double> roots;
    std::vector<double> fprimes;
    bool transition;
};

// Row-major (theta outer); identical output for any worker count.
inline std::vector<PhaseScanCell> scan_phase_grid(const GridSpec& grid, int workers = 0) {
    grid.validate();
    std::vector<PhaseScanCell> cells(static_cast<std::size_t>(grid.cell_count()));
    detail::parallel_rows(grid.theta_n, workers, [&](int i) {
        const double theta = grid.theta_at(i);
        for (int j = 0; j < grid.theta1_n; ++j) {
            const double theta1 = grid.theta1_at(j);
            const PhaseDiagnosis d = diagnose_phase(ThetaParams(theta, theta1));
            PhaseScanCell& cell = cells[static_cast<std::size_t>(i) * grid.theta1_n + j];
            cell.theta = theta;
            cell.theta1 = theta1;
            cell.transition = d.transition;
            for (const auto& fp : d.fixed_points) {
                cell.roots.push_back(fp.u);
                cell.fprimes.push_back(fp.derivative);
            }
        }
    });
    return cells;
}

} // namespace sostree

#endif
