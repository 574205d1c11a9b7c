// Generate a nonconvex QP over the simplex and compare the solver variants.

#include "ncfista/ncfista.hpp"

#include <cstdio>
#include <tuple>

using namespace ncfista;

int main() {
  const ProblemInstance qp = problems::gen_qp_vector(/*seed=*/1, /*l=*/10, /*n=*/100, /*M_bar=*/1e5, /*m_bar=*/1e2);
  std::printf("%s  M_bar=%g m_bar=%g\n", qp.label.c_str(), *qp.curvature.M_bar, *qp.curvature.m_bar);

  NcFistaConfig nc = NcFistaConfig::from_curvature(*qp.curvature.M_bar, *qp.curvature.m_bar);
  nc.stopping = StoppingRule::relative(1e-7);
  const SolverResult r_nc = run_nc_fista(qp, nc);
  std::printf("%-6s %-9s iters=%6lld resolvents=%6lld phi=%.10g\n", "NC", to_string(r_nc.status),
              static_cast<long long>(r_nc.counters.outer_iterations),
              static_cast<long long>(r_nc.counters.resolvent_evals), r_nc.objective);

  for (const auto& [name, restart, bb] : {std::tuple{"AD", false, false}, std::tuple{"RA", true, false},
                                          std::tuple{"AD-BB", false, true}, std::tuple{"RA-BB", true, true}}) {
    AdapConfig ad;  // (M0, m0, theta) = (1, 1, 1.25)
    ad.stopping = StoppingRule::relative(1e-7);
    ad.restart = restart;
    ad.bb = bb;
    const SolverResult r = run_adap(qp, ad);
    std::printf("%-6s %-9s iters=%6lld resolvents=%6lld phi=%.10g\n", name, to_string(r.status),
                static_cast<long long>(r.counters.outer_iterations),
                static_cast<long long>(r.counters.resolvent_evals), r.objective);
  }
}
