#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fractions.hpp"

namespace ltb {

enum class BoundTarget {
  AE_Esseen_AEX_upper,
  AE_Rozovskii_AEX_upper,
  C_E_lower,
  C_R_lower,
  A_E_lower,
  A_R_lower,
  C_E_g1_lower,
  C_R_g1_lower,
  ABE_g0_Esseen,
  ABE_g0_Rozovskii,
  LowAEX,
  CondUpAEX_g0,
  CondUpAEX_g1,
  AEX_g0_Esseen,
  AEX_g0_Rozovskii,
};

enum class BoundKind { Upper, Lower };

const char* bound_target_name(BoundTarget target) noexcept;
const char* bound_kind_name(BoundKind kind) noexcept;

/// Parameters of a bound. Unlike fraction evaluation, gamma may be +inf here.
struct BoundParams {
  double epsilon;
  double gamma;

  void validate() const;
};

struct ConstantBound {
  BoundTarget target;
  BoundKind kind;
  BoundParams params;
  double value;
  std::optional<double> witness_p;
  std::string formula;
};

struct Optimizer1D {
  int grid_points = 10000;
  int refine_iters = 80;
  double clamp_delta = 1e-9;

  void validate() const;
};

struct PExtremum {
  double p;
  double value;
};

/// Grid scan of f on (1/2 + delta, 1 - delta) followed by golden-section
/// refinement around the best grid cell.
PExtremum sup_over_p(const std::function<double(double)>& f, const Optimizer1D& opt = {});

ConstantBound aex_upper_esseen(const BoundParams& params);
/// +inf when epsilon is infinite (the bound grows linearly in epsilon).
ConstantBound aex_upper_rozovskii(const BoundParams& params);

enum class KFunction { E0, R0, EStar, RStar, E1, R1 };
const char* k_function_name(KFunction which) noexcept;

/// Delta_1(p) divided by the n = 1 two-point fraction for the matching weight
/// (E0/R0: g0, EStar/RStar: g*, E1/R1: g1); p in (1/2, 1).
double k_function(KFunction which, double p, const BoundParams& params);

std::vector<ConstantBound> exact_constant_lower_bounds(const BoundParams& params,
                                                       const Optimizer1D& opt = {});

/// sup_p (p+1) / (3 sqrt(2 pi) max{q, gamma q^2 + p^2, gamma (p-q)}).
ConstantBound abe_lower_esseen(double gamma, const Optimizer1D& opt = {});
ConstantBound abe_lower_rozovskii(const BoundParams& params);

struct AlphaStar {
  double alpha;
  double value;  // sqrt(alpha) exp(-alpha) I0(alpha)
};
AlphaStar alpha_star();

std::vector<ConstantBound> asymptotic_lower_bounds(const BoundParams& params);

/// Root of abe_lower_esseen(gamma) = 1/(2 sqrt(2 pi)) on (1, 100).
double gamma0();

struct TwoSidedBound {
  ConstantBound lower;
  ConstantBound upper;
};
struct AexTwoSided {
  TwoSidedBound esseen;
  TwoSidedBound rozovskii;
};
AexTwoSided aex_two_sided(const BoundParams& params);

/// (epsilon, gamma) coordinates of the tabulated upper bounds; gamma_star and
/// infinity appear as their numeric values.
std::vector<BoundParams> aex_esseen_table_cells();
std::vector<BoundParams> aex_rozovskii_table_cells();
std::vector<double> abe_table_gammas();

enum class ReferenceTable { EsseenA, RozovskiiA };

/// Upper bounds for A_E / A_R quoted from prior work (not computed here).
struct ReferenceCell {
  double epsilon;       // +inf for an infinite entry
  double gamma;         // +inf for an infinite entry
  double value;         // +inf for the divergent row
  bool epsilon_zero_plus;
  bool gamma_is_star;
  bool gamma_any;
};

const std::vector<ReferenceCell>& reference_table(ReferenceTable which);
std::optional<double> reference_lookup(ReferenceTable which, double epsilon, double gamma);

}  // namespace ltb
