#pragma once

#include <array>
#include <map>

#include "abelint/abelian.hpp"
#include "abelint/poly.hpp"

namespace abelint {

// polynomial-in-h coefficients over the nine generators (GenIndex order)
using GeneratorCombo = std::array<Poly, 9>;

double eval_combo(const GeneratorCombo& combo, const GeneratorVector& gv, double h);

// Rewrites any monomial integral I_ij as a polynomial-in-h combination of the nine
// generators using the moment recurrences of the family. Whole total-degree levels
// are resolved together: within one level the recurrences couple neighbouring
// monomials through a bidiagonal system whose pivots are nonzero iff b^2 != 4ac.
class ReductionTable {
  public:
    explicit ReductionTable(const HamiltonianParams& p);
    const GeneratorCombo& get(int i, int j);

  private:
    void build_level(int n);
    GeneratorCombo& slot(int i, int j) { return memo_[{i, j}]; }
    HamiltonianParams p_;
    int built_;
    std::map<std::pair<int, int>, GeneratorCombo> memo_;
};

struct ReductionResult {
    int i = 0, j = 0;
    GeneratorCombo coef;
    std::array<int, 9> degree{};  // attained degree per generator (-1 for zero)
};

// pre: a c (b^2 - 4ac) != 0
ReductionResult reduce_monomial(const HamiltonianParams& p, int i, int j);

// Melnikov decomposition I(h) = sum over generators of coef_k(h) I_k(h)
struct MelnikovDecomposition {
    GeneratorCombo coef;
    int degree = 0;  // perturbation degree it was built from
};
MelnikovDecomposition decompose_melnikov(const HamiltonianParams& p, const PerturbationPoly& pert);

inline int floor_div(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

// degree ceilings of the coefficient polynomials for a degree-n perturbation
// (GenIndex order: f1, f2, f3, f4, f5, g1, g2, l1, l2)
std::array<int, 9> coefficient_degree_bounds(int n);

}  // namespace abelint
