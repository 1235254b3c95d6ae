#pragma once

// Lattices, simplicial cones and Hecke operators on symbol groups.
//
// A lattice is stored by the rows of an integer matrix in Hermite normal form
// together with a common denominator: the basis vectors are rows / denominator
// in the coordinates of the standard lattice Z^n. Cones carry their generators
// the same way. T_{l,r} sums over overlattices L' with L'/L = (Z/l)^r (vector
// version), T*_{l,r} over sublattices with L/L' = (Z/l)^r (co-vector version);
// in both cases the standard octant is subdivided into cones basic for L'.

#include <cstdint>
#include <span>
#include <vector>

#include "birsym/algebra.hpp"
#include "birsym/exactla.hpp"
#include "birsym/relations.hpp"
#include "birsym/sparse.hpp"

namespace birsym {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;

struct Lattice {
  IntMatrix basis;  // rows, in Hermite normal form
  std::int64_t denominator = 1;

  int rank() const { return static_cast<int>(basis.size()); }
  friend bool operator==(const Lattice&, const Lattice&) = default;
};

Lattice standard_lattice(int n);
// Normalizes arbitrary generating rows (numerators) of a full-rank lattice.
Lattice make_lattice(const IntMatrix& generators, std::int64_t denominator);
// Index of `sub` in `super`, i.e. covolume(sub) / covolume(super).
std::int64_t lattice_index(const Lattice& super, const Lattice& sub);

std::vector<Lattice> enumerate_overlattices(int n, int ell, int r);
std::vector<Lattice> enumerate_sublattices(int n, int ell, int r);
std::int64_t gaussian_binomial(int n, int r, int q);

struct SimplicialCone {
  IntMatrix generators;  // rows, numerators over `denominator`
  std::int64_t denominator = 1;
};

SimplicialCone standard_octant(int n);
// Multiplicity of the cone with respect to the lattice, after replacing each
// generator by the primitive lattice vector on its ray.
std::int64_t multiplicity(const SimplicialCone& cone, const Lattice& lattice);
std::vector<SimplicialCone> subdivide_to_basic(const SimplicialCone& cone, const Lattice& lattice);

// Vector version: chi = sum_i e_i (x) a_i on the standard basis, rewritten in
// the basis of a cone basic for `lattice` (which must contain Z^n).
std::vector<Code> symbol_of_cone(const AbelianGroup& group, const SimplicialCone& cone,
                                 const Lattice& lattice, std::span<const Code> chi);
// Co-vector version: chi*(e_i) = a_i evaluated on the cone's generators,
// which must be integral.
std::vector<Code> covector_symbol_of_cone(const AbelianGroup& group, const SimplicialCone& cone,
                                          const Lattice& lattice, std::span<const Code> chi);

struct HeckeOptions {
  bool allow_full_rank = false;  // permit r = n
};

// The operator on the symbols of `index`: row i of `images` is the image of
// symbol i (so the operator's matrix in column convention is its transpose).
struct HeckeMatrix {
  int ell = 0;
  int r = 0;
  Flavor flavor = Flavor::M;
  SparseMatrix images;
  // Integer maps a -> T a, one per basic cone over all lattices.
  std::vector<IntMatrix> cone_maps;
};

// Flavor M and Mminus use overlattices, Mstar uses sublattices.
HeckeMatrix hecke_matrix(const SymbolIndex& index, int ell, int r, const HeckeOptions& options = {});

// Terms of the Hecke image of one tuple, before canonicalization.
std::vector<std::vector<Code>> hecke_terms(const AbelianGroup& group, const HeckeMatrix& hecke,
                                           std::span<const Code> tuple);

// The operator on the quotient F_p^cols / rowspan(relations), in the basis of
// free columns. Throws when some relation row is not mapped into the span.
DenseModMatrix induced_on_quotient(const HeckeMatrix& hecke, const SparseMatrix& relations,
                                   const ModpEchelon& echelon);
DenseModMatrix induced_on_quotient(const HeckeMatrix& hecke, const SparseMatrix& relations,
                                   std::uint32_t p);

}  // namespace birsym
