#pragma once

#include <vector>

namespace dpfl {

// Renyi orders used for accounting and (epsilon, delta) conversion.
struct RdpOrderGrid {
  std::vector<double> orders;  // sorted ascending, all > 1

  // Integers 2..64 plus {1.25, 1.5, 1.75, 128, 256}.
  static RdpOrderGrid default_grid();
};

// One round of the subsampled Gaussian mechanism at Renyi order alpha:
//   (1/(alpha-1)) * ln E_{z~N(0,sigma^2)}[ (1-q + q*mu1(z)/mu0(z))^alpha ]
// with mu0 = N(0,sigma^2) and mu1 = N(1,sigma^2) densities, so the
// parenthesis is the density ratio of the q-mixture against mu0.
//
// Integer orders use the exact binomial expansion of the moment; real orders
// use composite Gauss-Legendre quadrature in the log domain over an interval
// wide enough to cover every mixture component (the moment's mass sits near
// z = alpha for large alpha). Both paths agree to ~1e-12 where both apply.
double rdp_one_round(double q, double sigma, double alpha);

// The two computation paths, exposed for cross-validation.
double rdp_one_round_binomial(double q, double sigma, long alpha);
double rdp_one_round_quadrature(double q, double sigma, double alpha);

// Per-round RDP cost over a grid of orders plus the elapsed round count.
// Composition over rounds is additive, so the accumulated cost at order
// alpha is rounds_elapsed * per_round_rdp[alpha].
struct PrivacyLedger {
  RdpOrderGrid grid;
  std::vector<double> per_round_rdp;
  long rounds_elapsed = 0;
  double q = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
};

PrivacyLedger make_ledger(double q, double sigma, double delta,
                          RdpOrderGrid grid = RdpOrderGrid::default_grid());

PrivacyLedger accumulate(PrivacyLedger ledger, long rounds);

struct DpBudget {
  double epsilon = 0.0;
  double best_order = 0.0;
};

// Converts the accumulated RDP curve to (epsilon, delta)-DP:
//   eps(alpha) = rdp_T(alpha)
//              + ((alpha-1)*log(1-1/alpha) - log(alpha) - log(delta))/(alpha-1)
// minimized over the grid.
DpBudget rdp_to_dp(const PrivacyLedger& ledger, double delta);

}  // namespace dpfl
