#include <cmath>

#include "fraclap/solvers.hpp"

namespace fraclap {

PsReport ps_diagnostics(const Trace& trace, const std::optional<ChainParams>& chain) {
  PsReport rep;
  if (trace.empty()) return rep;
  for (const auto& tp : trace) rep.max_norm = std::max(rep.max_norm, tp.norm);
  rep.final_residual = trace.back().residual;
  rep.residual_ratio = trace.front().residual > 0.0 ? trace.back().residual / trace.front().residual : 0.0;

  // a drifting sequence: over the second half the norms rise, the steps do
  // not contract (a convergent iteration has shrinking steps) and the norm
  // grows by half
  const std::size_t mid = trace.size() / 2;
  if (trace.size() >= 4) {
    bool rising = true;
    for (std::size_t i = mid + 1; i < trace.size(); ++i) {
      if (!(trace[i].norm > trace[i - 1].norm)) {
        rising = false;
        break;
      }
    }
    const double first_step = trace[mid + 1].norm - trace[mid].norm;
    const double last_step = trace.back().norm - trace[trace.size() - 2].norm;
    rep.bounded = !(rising && last_step >= 0.5 * first_step && trace.back().norm >= 1.5 * trace[mid].norm);
  }

  if (chain) {
    rep.chain_checked = true;
    const auto& c = *chain;
    const double lead = 0.5 - 1.0 / c.q;
    const double conc = (c.lambda / c.p - c.lambda / c.q) * std::pow(c.beta0, c.p);
    for (const auto& tp : trace) {
      const double lhs = lead * tp.norm * tp.norm;
      const double rhs = tp.energy + tp.residual * tp.norm + conc * std::pow(tp.norm, c.p);
      if (lhs > rhs + 1e-10 * std::max(1.0, std::abs(rhs))) ++rep.chain_violations;
    }
    rep.chain_holds = rep.chain_violations == 0;
  }
  return rep;
}

}  // namespace fraclap
