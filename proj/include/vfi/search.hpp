#pragma once

#include <string>
#include <vector>

#include "vfi/checks.hpp"

namespace vfi {

// Lower-bound estimation of the optimal dimensional constants: maximize the
// homogeneous quotient over finite-dimensional trial spaces of fields that
// satisfy the boundary condition exactly by construction, via a generalized
// symmetric eigenproblem on the numerator/denominator Gram matrices.

enum class QuotientKind { Gaffney, Korn };
const char* kind_name(QuotientKind k);
QuotientKind parse_kind(const std::string& s);

enum class TrialConstruction { StreamFunction, GradientPotential, InteriorBump, KnownSpecial };

struct TrialSpace {
  Domain dom;
  Bc bc = Bc::Tangent;
  int degree = 0;
  std::vector<VectorField> basis;
  std::vector<TrialConstruction> construction;  // per basis element
};

// Supported domains: ball (any n <= 6), annulus, ellipse. degree <= 10.
TrialSpace build_trial_space(const Domain& dom, Bc bc, int degree);

struct GramPair {
  int m = 0;                   // basis size
  std::vector<double> A;       // numerator form, row-major m*m
  std::vector<double> M;       // denominator form
};

GramPair assemble_grams(const TrialSpace& space, const QuadratureRule& rule,
                        QuotientKind kind);

struct RayleighResult {
  double lambda = 0;
  std::vector<double> coefficients;
  double residual = 0;  // ||A v - lambda M v|| / ||M v||
  int retained = 0;     // basis rank kept by the spectral filter
};

// Largest lambda with A v = lambda M v; M is rank-filtered at 1e-10
// (relative) and whitened before the standard symmetric solve.
RayleighResult max_generalized_rayleigh(const GramPair& grams);

struct LadderEntry {
  int degree = 0;
  int basis_size = 0;
  int retained = 0;
  double lambda = 0;
  double residual = 0;
};

std::vector<LadderEntry> estimate_constant(const Domain& dom, Bc bc,
                                           QuotientKind kind,
                                           const std::vector<int>& degrees,
                                           int order);

// Parameter sweeps over domain families with a fixed field.
struct SweepRow {
  double param = 0;
  bool ok = false;
  std::string error;
  double rho = 0;
  Norms norms;
  double q_gaffney = 0;
  double q_korn = 0;
  double closed_form = 0;  // populated for the torus harmonic field
  bool has_closed_form = false;
};

struct SweepTable {
  std::string family;
  std::string field;
  Bc bc = Bc::Tangent;
  std::string param_name;
  std::vector<SweepRow> rows;
};

// family: "torus" (param = aspect ratio, r=1) or "annulus" (param = r1/r0,
// r0=1). Rows for invalid parameters are marked failed and the sweep
// continues.
SweepTable sweep(const std::string& family, const std::vector<double>& grid,
                 const std::string& field, Bc bc, int order, int threads = 0);

std::string sweep_csv(const SweepTable& t);
std::string ladder_csv(const std::vector<LadderEntry>& entries, double cap);

}  // namespace vfi
