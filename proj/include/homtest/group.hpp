#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "homtest/rng.hpp"

namespace homtest {

// Fixed-size canonical encoding. Bytes beyond the group's footprint stay zero, so two
// elements are equal iff their bytes are equal.
struct GroupElement {
  static constexpr std::size_t kBytes = 32;
  alignas(8) std::array<std::uint8_t, kBytes> bytes{};

  std::uint64_t word(std::size_t i) const {
    std::uint64_t w;
    std::memcpy(&w, bytes.data() + 8 * i, 8);
    return w;
  }
  void set_word(std::size_t i, std::uint64_t w) { std::memcpy(bytes.data() + 8 * i, &w, 8); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& e) const {
    const std::uint64_t h = e.word(0) ^ (e.word(1) * 0x9E3779B97F4A7C15ULL) ^ (e.word(2) * 0xC2B2AE3D27D4EB4FULL) ^
                            (e.word(3) * 0x165667B19E3779F9ULL);
    return static_cast<std::size_t>(mix64(h));
  }
};

enum class GroupKind { Cyclic, VectorSpace, Symmetric, Dihedral, Product };

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// A finite group. Elements carry no reference to their group; every operation takes the
// group explicitly. Non-abelian "+" reads left to right: a + b applies a, then b.
class Group {
 public:
  static GroupPtr cyclic(std::uint64_t n);
  static GroupPtr vector_space(std::uint32_t p, std::uint32_t n);
  static GroupPtr symmetric(std::uint32_t n);
  static GroupPtr dihedral(std::uint32_t n);
  static GroupPtr product(std::vector<GroupPtr> factors);
  // "Z6", "F2^16", "F3", "S5", "D4", "Z3xS3".
  static GroupPtr parse(std::string_view text);

  std::string to_string() const;
  GroupKind kind() const { return kind_; }
  bool abelian() const { return abelian_; }
  bool order_fits() const { return order_ <= UINT64_MAX; }
  // Throws ResourceError when |G| >= 2^64.
  std::uint64_t order() const;
  double log2_order() const { return log2_order_; }
  std::size_t byte_size() const { return bytes_; }

  // Kind parameters.
  std::uint64_t modulus() const { return n_; }            // cyclic n, symmetric/dihedral degree
  std::uint32_t prime() const { return p_; }              // vector space
  std::uint32_t dimension() const { return dim_; }        // vector space
  const std::vector<GroupPtr>& factors() const { return factors_; }
  bool is_vector_space() const { return kind_ == GroupKind::VectorSpace; }
  bool is_f2_word() const { return kind_ == GroupKind::VectorSpace && p_ == 2 && dim_ <= 64; }

  GroupElement identity() const;
  GroupElement op(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement sample(Rng& rng) const;
  // Integer multiple a + a + ... + a (k times); k = 0 gives the identity.
  GroupElement multiple(const GroupElement& a, std::uint64_t k) const;
  // Like op, but first validates both encodings.
  GroupElement checked_op(const GroupElement& a, const GroupElement& b) const;

  // Canonical order: cyclic residue; vector space sum d_i p^i; symmetric Lehmer rank;
  // dihedral reflection*n + rotation; product mixed radix, first factor most significant.
  std::uint64_t index_of(const GroupElement& a) const;
  GroupElement element_at(std::uint64_t index) const;

  bool contains(const GroupElement& a) const;
  void validate(const GroupElement& a) const;  // DomainError when !contains(a)

  std::string format(const GroupElement& a) const;
  GroupElement parse_element(std::string_view text) const;

  // Vector spaces only.
  std::uint32_t digit(const GroupElement& a, std::uint32_t i) const;
  void set_digit(GroupElement& a, std::uint32_t i, std::uint32_t v) const;
  GroupElement scale(std::uint32_t c, const GroupElement& a) const;
  GroupElement unit_vector(std::uint32_t i) const;

  // Raw byte-level forms used by product groups; dst may alias a or b.
  void op_raw(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const;
  void inverse_raw(std::uint8_t* dst, const std::uint8_t* a) const;
  void identity_raw(std::uint8_t* dst) const;

 private:
  Group() = default;
  void sample_raw(std::uint8_t* dst, Rng& rng) const;
  std::uint64_t index_raw(const std::uint8_t* a) const;
  void element_at_raw(std::uint8_t* dst, std::uint64_t index) const;
  bool contains_raw(const std::uint8_t* a) const;
  void format_raw(std::string& out, const std::uint8_t* a) const;
  std::size_t parse_raw(std::uint8_t* dst, std::string_view text) const;

  GroupKind kind_ = GroupKind::Cyclic;
  bool abelian_ = true;
  unsigned __int128 order_ = 1;
  double log2_order_ = 0.0;
  std::size_t bytes_ = 0;
  std::uint64_t n_ = 0;
  std::uint32_t p_ = 0;
  std::uint32_t dim_ = 0;
  std::uint32_t width_ = 0;  // residue / rotation byte width
  std::vector<GroupPtr> factors_;
  std::vector<std::size_t> offsets_;
};

enum class Sign : std::uint8_t { Plus, Minus };

struct Coefficient {
  std::uint32_t value = 1;
};

using Multiplier = std::variant<Sign, Coefficient>;

struct Term {
  Multiplier mult;
  GroupElement element;
};

struct SignedTuple {
  std::vector<Term> entries;
  std::size_t size() const { return entries.size(); }
};

enum class Direction { Increasing, Decreasing };

GroupElement signed_apply(const Group& g, Sign s, const GroupElement& a);
GroupElement coefficient_apply(const Group& g, Coefficient c, const GroupElement& a);
GroupElement apply_multiplier(const Group& g, const Multiplier& m, const GroupElement& a);
GroupElement signed_sum(const Group& g, const SignedTuple& t, Direction dir = Direction::Increasing);

std::string format_multiplier(const Multiplier& m);

// Index-based multiplication table for small groups.
class CayleyTable {
 public:
  static constexpr std::uint64_t kMaxOrder = 2048;
  explicit CayleyTable(GroupPtr g);

  const Group& group() const { return *g_; }
  const GroupPtr& group_ptr() const { return g_; }
  std::uint32_t size() const { return n_; }
  std::uint32_t op(std::uint32_t a, std::uint32_t b) const { return table_[std::size_t{a} * n_ + b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inv_[a]; }
  std::uint32_t identity() const { return id_; }
  const GroupElement& element(std::uint32_t i) const { return elems_[i]; }

 private:
  GroupPtr g_;
  std::uint32_t n_ = 0;
  std::uint32_t id_ = 0;
  std::vector<GroupElement> elems_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inv_;
};

}  // namespace homtest
