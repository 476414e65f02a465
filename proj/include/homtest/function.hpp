#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "homtest/group.hpp"
#include "homtest/rational.hpp"
#include "homtest/rng.hpp"

namespace homtest {

inline constexpr std::uint64_t kDenseCap = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

class FunctionTable;
struct DistanceResult;

// A homomorphism given either by a dense table (canonical domain order) or, for
// vector-space domains, by the images of the unit vectors.
class Homomorphism {
 public:
  // Verifies h(a+b) = h(a) + h(b) on all pairs when |G|^2 <= 2^26, else on 1000 random pairs.
  static Homomorphism from_table(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> values);
  // Domain must be F_p^n. Images must have order dividing p and commute pairwise.
  static Homomorphism from_basis_images(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> images);

  GroupElement operator()(const GroupElement& x) const;
  const GroupPtr& domain() const { return domain_; }
  const GroupPtr& codomain() const { return codomain_; }
  bool is_dense() const { return !table_.empty(); }
  const std::vector<GroupElement>& table() const { return table_; }
  const std::vector<GroupElement>& basis_images() const { return images_; }

  FunctionTable to_function() const;

 private:
  friend std::vector<Homomorphism> enumerate_homomorphisms(const GroupPtr&, const GroupPtr&, std::uint64_t);
  friend std::optional<DistanceResult> distance_to_hom_by_transform(const FunctionTable&);

  Homomorphism() = default;
  static Homomorphism trusted_table(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> values);
  GroupPtr domain_;
  GroupPtr codomain_;
  std::vector<GroupElement> table_;
  std::vector<GroupElement> images_;
  // F_2^n -> F_2^r with n, r <= 64: bit j of h(x) is parity(x & masks_[j]).
  std::vector<std::uint64_t> masks_;
};

// f: G -> H, dense or implicit (homomorphism plus keyed pseudorandom noise).
class FunctionTable {
 public:
  static FunctionTable dense(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> values);
  // Noise rate in [0, 1]; the domain must be a vector space.
  static FunctionTable implicit(Homomorphism base, std::uint64_t key, double rate);

  GroupElement eval(const GroupElement& x) const;
  const GroupPtr& domain() const { return domain_; }
  const GroupPtr& codomain() const { return codomain_; }
  bool is_dense() const { return !values_.empty(); }
  const std::vector<GroupElement>& values() const;  // dense only
  const GroupElement& value_at(std::uint64_t index) const { return values_[index]; }

  const std::optional<Rational>& certified_distance() const { return certified_; }
  void set_certified_distance(Rational r) { certified_ = r; }
  double noise_rate() const { return rate_; }
  const std::optional<Homomorphism>& base() const { return base_; }

  // Binary form: magic, version, domain spec, codomain spec, |G|, then codomain
  // encodings in canonical domain order. Dense only.
  void write_binary(std::ostream& out) const;
  static FunctionTable read_binary(std::istream& in);
  // Debug JSON for |G| <= 256.
  std::string to_json() const;

 private:
  FunctionTable() = default;
  GroupPtr domain_;
  GroupPtr codomain_;
  std::vector<GroupElement> values_;
  std::optional<Homomorphism> base_;
  std::uint64_t key_ = 0;
  double rate_ = 0.0;
  std::uint64_t codomain_order_ = 0;
  std::optional<Rational> certified_;
};

// Exhaustive check of the homomorphism law for a dense table.
bool is_homomorphism(const FunctionTable& f);

// HOM(G, H) via a greedy generating sequence and Cayley-graph extension.
std::vector<Homomorphism> enumerate_homomorphisms(const GroupPtr& g, const GroupPtr& h,
                                                  std::uint64_t cap = kEnumerationCap);

Rational distance(const FunctionTable& f, const FunctionTable& g);

struct DistanceResult {
  Rational distance;
  Homomorphism nearest;
};

// Exact. F_2^n domains with an abelian codomain whose 2-torsion has at most two
// elements use a Walsh-Hadamard transform; everything else enumerates HOM(G, H).
DistanceResult distance_to_hom(const FunctionTable& f);
DistanceResult distance_to_hom_by_enumeration(const FunctionTable& f);
std::optional<DistanceResult> distance_to_hom_by_transform(const FunctionTable& f);

// Monte-Carlo disagreement rate between f and a homomorphism.
double estimate_disagreement(const FunctionTable& f, const Homomorphism& h, std::uint64_t samples, Rng& rng);

enum class InstanceKind { RandomHom, ShiftedHom, RandomFunction, PlantedFar, ImplicitPlanted };

struct InstanceSpec {
  InstanceKind kind = InstanceKind::RandomHom;
  Rational epsilon{0};
  std::optional<GroupElement> shift;  // ShiftedHom; random non-identity when unset
  std::uint64_t key = 0;              // ImplicitPlanted
};

std::string instance_kind_name(InstanceKind kind);
InstanceKind parse_instance_kind(std::string_view name);

Homomorphism random_homomorphism(const GroupPtr& g, const GroupPtr& h, Rng& rng);
FunctionTable gen_instance(const InstanceSpec& spec, const GroupPtr& g, const GroupPtr& h, Rng& rng);

}  // namespace homtest
