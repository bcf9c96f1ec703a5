#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xoslab/item_set.hpp"
#include "xoslab/partition.hpp"
#include "xoslab/rational.hpp"
#include "xoslab/rng.hpp"

namespace xoslab {

/// A pair (s1, s2) of m/2-sets with Part profile (5,3,3,5)·m/16.
struct Basis {
  ItemSet s1;
  ItemSet s2;

  Basis reversed() const { return {s2, s1}; }
  std::vector<ItemSet> sets() const { return {s1, s2}; }
  std::size_t universe() const { return s1.universe(); }
  friend bool operator==(const Basis&, const Basis&) = default;
};

/// Every profile the construction is built from, scaled to m.
///
/// pair_profile is |Part(S‖A¹‖A²)| for a clause pair and opt_profile is
/// |Part(S‖T‖A¹⋆‖A²⋆)| for a special pair; both are evaluated on the built-in
/// m = 16 reference configuration and then scaled.
struct ConstantVectors {
  std::size_t m = 0;
  Profile basis;         // 4 cells
  Profile cmp;           // 16 cells, S‖T
  Profile reg;           // 4 cells
  Profile regpair;       // 4 cells
  Profile spec1;         // 16 cells
  Profile spec2;         // 16 cells
  Profile specpair;      // 16 cells
  Profile pair_profile;  // 16 cells, S‖A¹‖A²
  Profile opt_profile;   // 64 cells, S‖T‖A¹‖A²
};

/// Throws std::invalid_argument unless m is a positive multiple of 16.
ConstantVectors constant_vectors(std::size_t m);

/// The hand-checked m = 16 configuration: S compatible with T, (a1, a2)
/// special with respect to (S, T).
struct ReferenceConfiguration {
  Basis S;
  Basis T;
  ItemSet a1;
  ItemSet a2;
};
const ReferenceConfiguration& reference_configuration();

// Predicates. All compare exact Part profiles.
bool validate_profile(std::span<const ItemSet> sets, const Profile& expected);
bool is_basis(const Basis& b);
bool is_compatible(const Basis& S, const Basis& T);
/// a is a clause with respect to S: |Part_S ∩ a| = reg.
bool is_clause(const ItemSet& a, const Basis& S);
bool is_clause_pair(const ItemSet& a1, const ItemSet& a2, const Basis& S);
bool is_special_pair(const ItemSet& a1, const ItemSet& a2, const Basis& S, const Basis& T);

/// Uniform basis (ξ_single).
Basis sample_basis(std::size_t m, RngStream& rng);
/// Uniform basis T compatible with S.
Basis sample_compatible(const Basis& S, RngStream& rng);
/// Uniform clause pair with respect to S (μ(S)).
std::pair<ItemSet, ItemSet> sample_clause_pair(const Basis& S, RngStream& rng);
/// Uniform special pair with respect to (S, T) (μ⋆(S, T)).
std::pair<ItemSet, ItemSet> sample_special_pair(const Basis& S, const Basis& T, RngStream& rng);

/// Uniform T with |Part(S‖T‖a1‖a2)| = opt_profile, given a clause pair
/// (a1, a2) with respect to S.
Basis sample_opt_completion(const Basis& S, const ItemSet& a1, const ItemSet& a2, RngStream& rng);

/// Per-cell class counts used by the samplers, rows indexed by the base Part
/// cell and columns by the membership pattern of the new sets (first new set
/// most significant). Derived from the constant vectors and cross-checked
/// against the reference configuration on first use; a mismatch throws
/// std::logic_error.
struct ClassCountTables {
  std::vector<Profile> basis;        // 1 row
  std::vector<Profile> compatible;   // rows: S cells; cols: (t1,t2)
  std::vector<Profile> clause_pair;  // rows: S cells; cols: (a1,a2)
  std::vector<Profile> special;      // rows: S‖T cells; cols: (a1,a2)
  std::vector<Profile> opt_completion;  // rows: S‖A¹‖A² cells; cols: (t1,t2)
};
ClassCountTables class_count_tables(std::size_t m);

enum class Variant { Nu, NuPrime };
std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

/// One draw Υ = (S, T, i⋆, A¹, A², B¹, B², θ, rA, rB).
/// i_star is 0-based here; serialized forms use 1-based indices.
struct Instance {
  std::size_t m = 0;
  std::size_t n = 0;
  Variant variant = Variant::Nu;
  std::uint64_t seed = 0;
  Basis S;
  Basis T;
  std::size_t i_star = 0;
  std::vector<ItemSet> A1, A2, B1, B2;
  int theta = 1;
  std::vector<int> rA, rB;

  const ItemSet& A(int j, std::size_t i) const { return j == 1 ? A1[i] : A2[i]; }
  const ItemSet& B(int j, std::size_t i) const { return j == 1 ? B1[i] : B2[i]; }
  friend bool operator==(const Instance&, const Instance&) = default;
};

Instance sample_instance(std::size_t m, std::size_t n, Variant variant, RngStream& rng);

/// Checks every structural invariant of an instance. Returns a description
/// of the first violation, or nullopt when the instance is well formed.
std::optional<std::string> check_instance(const Instance& inst);

/// Exact E|A ∩ B| for the clause marginals of a compatible pair (S, T).
/// A^1 ~ PC(Part_S, reg), A^2 ~ PC(Part_{S^rev}, reg), B^1 ~ PC(Part_T, reg),
/// B^2 ~ PC(Part_{T^rev}, reg); the special clauses A^j⋆ follow spec_j on
/// Part(S‖T) and B^j⋆ is the complement of A^j⋆.
struct CrossDeltas {
  /// regular[2(j-1) + (j'-1)] = E|A^j ∩ B^j'|.
  std::array<Rational, 4> regular;
  /// special_a[j-1] = E|A^j⋆ ∩ B^{3-j}|.
  std::array<Rational, 2> special_a;
  /// special_b[j-1] = E|A^{3-j} ∩ B^j⋆|.
  std::array<Rational, 2> special_b;
};
CrossDeltas exact_cross_deltas(const Basis& S, const Basis& T);

/// The closed-form intersection fractions (each a multiple of m) for blocks
/// of relative sizes u and v.
struct GeneralizedDeltas {
  Rational single;   // one copy, regular clauses
  Rational cross;    // two copies, regular vs regular
  Rational special;  // two copies, special vs regular
};
GeneralizedDeltas generalized_deltas(const Rational& u, const Rational& v);

/// v/u maximizing min(cross, special), located by a grid scan followed by
/// bisection on cross − special. Accurate to about 1e-12.
double optimal_block_ratio();

}  // namespace xoslab
