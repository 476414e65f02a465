#include "homtest/group.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "homtest/errors.hpp"
#include "homtest/kernels.hpp"

namespace homtest {

namespace {

using u128 = unsigned __int128;

// Fixed-size copies per width so the compiler emits plain loads and stores.
inline std::uint64_t load_uint(const std::uint8_t* p, std::uint32_t width) {
  switch (width) {
    case 1:
      return p[0];
    case 2: {
      std::uint16_t v;
      std::memcpy(&v, p, 2);
      return v;
    }
    case 4: {
      std::uint32_t v;
      std::memcpy(&v, p, 4);
      return v;
    }
    default: {
      std::uint64_t v;
      std::memcpy(&v, p, 8);
      return v;
    }
  }
}

inline void store_uint(std::uint8_t* p, std::uint32_t width, std::uint64_t v) {
  switch (width) {
    case 1:
      p[0] = static_cast<std::uint8_t>(v);
      return;
    case 2: {
      const auto w = static_cast<std::uint16_t>(v);
      std::memcpy(p, &w, 2);
      return;
    }
    case 4: {
      const auto w = static_cast<std::uint32_t>(v);
      std::memcpy(p, &w, 4);
      return;
    }
    default:
      std::memcpy(p, &v, 8);
  }
}

std::uint32_t width_for(std::uint64_t max_value) {
  if (max_value <= 0xFF) return 1;
  if (max_value <= 0xFFFF) return 2;
  if (max_value <= 0xFFFFFFFFULL) return 4;
  return 8;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

void check_bytes(std::size_t bytes, const std::string& what) {
  if (bytes > GroupElement::kBytes) {
    throw DomainError("group " + what + " does not fit the 32-byte element encoding");
  }
}

std::uint64_t parse_u64(std::string_view s, std::string_view context) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("bad number '" + std::string(s) + "' in '" + std::string(context) + "'");
  }
  return v;
}

// Reads a run of decimal digits at the start of text.
std::size_t read_number(std::string_view text, std::uint64_t& out) {
  std::size_t i = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  if (i == 0) throw DomainError("expected a number in element text '" + std::string(text) + "'");
  out = parse_u64(text.substr(0, i), text);
  return i;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw DomainError(std::string("expected '") + c + "' in element text '" + std::string(text) + "'");
  }
}

}  // namespace

GroupPtr Group::cyclic(std::uint64_t n) {
  if (n == 0) throw DomainError("cyclic group of order 0");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::Cyclic;
  g->n_ = n;
  g->order_ = n;
  g->log2_order_ = std::log2(static_cast<double>(n));
  g->width_ = width_for(n - 1);
  g->bytes_ = g->width_;
  return g;
}

GroupPtr Group::vector_space(std::uint32_t p, std::uint32_t n) {
  if (!is_prime(p) || p > 251) throw DomainError("vector space needs a prime p <= 251, got " + std::to_string(p));
  if (n == 0) throw DomainError("vector space of dimension 0");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::VectorSpace;
  g->p_ = p;
  g->dim_ = n;
  g->bytes_ = p == 2 ? (n + 7) / 8 : n;
  check_bytes(g->bytes_, "F" + std::to_string(p) + "^" + std::to_string(n));
  u128 order = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (order > (~u128{0}) / p) throw DomainError("vector space order exceeds 128 bits");
    order *= p;
  }
  g->order_ = order;
  g->log2_order_ = n * std::log2(static_cast<double>(p));
  return g;
}

GroupPtr Group::symmetric(std::uint32_t n) {
  if (n == 0 || n > 20) throw DomainError("symmetric group degree must be in [1, 20]");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::Symmetric;
  g->n_ = n;
  g->bytes_ = n;
  g->abelian_ = n <= 2;
  u128 order = 1;
  for (std::uint32_t i = 2; i <= n; ++i) order *= i;
  g->order_ = order;
  g->log2_order_ = std::log2(static_cast<double>(order));
  return g;
}

GroupPtr Group::dihedral(std::uint32_t n) {
  if (n == 0) throw DomainError("dihedral group needs n >= 1");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::Dihedral;
  g->n_ = n;
  g->width_ = width_for(n - 1);
  g->bytes_ = g->width_ + 1;
  g->abelian_ = n <= 2;
  g->order_ = u128{2} * n;
  g->log2_order_ = 1.0 + std::log2(static_cast<double>(n));
  return g;
}

GroupPtr Group::product(std::vector<GroupPtr> factors) {
  std::vector<GroupPtr> flat;
  for (auto& f : factors) {
    if (!f) throw DomainError("null factor in direct product");
    if (f->kind_ == GroupKind::Product) {
      flat.insert(flat.end(), f->factors_.begin(), f->factors_.end());
    } else {
      flat.push_back(f);
    }
  }
  if (flat.size() < 2) throw DomainError("direct product needs at least two factors");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = GroupKind::Product;
  std::size_t off = 0;
  u128 order = 1;
  for (auto& f : flat) {
    g->offsets_.push_back(off);
    off += f->bytes_;
    if (f->order_ != 0 && order > (~u128{0}) / f->order_) throw DomainError("product order exceeds 128 bits");
    order *= f->order_;
    g->abelian_ = g->abelian_ && f->abelian_;
    g->log2_order_ += f->log2_order_;
  }
  g->bytes_ = off;
  g->order_ = order;
  g->factors_ = std::move(flat);
  check_bytes(g->bytes_, g->to_string());
  return g;
}

GroupPtr Group::parse(std::string_view text) {
  std::vector<GroupPtr> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('x', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(start, end - start);
    if (tok.size() < 2) throw DomainError("bad group spec '" + std::string(text) + "'");
    std::string_view rest = tok.substr(1);
    switch (tok[0]) {
      case 'Z':
        parts.push_back(cyclic(parse_u64(rest, text)));
        break;
      case 'S':
        parts.push_back(symmetric(static_cast<std::uint32_t>(parse_u64(rest, text))));
        break;
      case 'D':
        parts.push_back(dihedral(static_cast<std::uint32_t>(parse_u64(rest, text))));
        break;
      case 'F': {
        auto caret = rest.find('^');
        std::uint64_t p = parse_u64(rest.substr(0, caret), text);
        std::uint64_t n = caret == std::string_view::npos ? 1 : parse_u64(rest.substr(caret + 1), text);
        if (p > 251 || n > 256) throw DomainError("bad group spec '" + std::string(text) + "'");
        parts.push_back(vector_space(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(n)));
        break;
      }
      default:
        throw DomainError("bad group spec '" + std::string(text) + "'");
    }
    start = end + 1;
  }
  if (parts.size() == 1) return parts.front();
  return product(std::move(parts));
}

std::string Group::to_string() const {
  switch (kind_) {
    case GroupKind::Cyclic:
      return "Z" + std::to_string(n_);
    case GroupKind::VectorSpace:
      return "F" + std::to_string(p_) + (dim_ == 1 ? "" : "^" + std::to_string(dim_));
    case GroupKind::Symmetric:
      return "S" + std::to_string(n_);
    case GroupKind::Dihedral:
      return "D" + std::to_string(n_);
    case GroupKind::Product: {
      std::string s;
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += 'x';
        s += factors_[i]->to_string();
      }
      return s;
    }
  }
  return {};
}

std::uint64_t Group::order() const {
  if (!order_fits()) throw ResourceError("order of " + to_string() + " does not fit in 64 bits");
  return static_cast<std::uint64_t>(order_);
}

void Group::identity_raw(std::uint8_t* dst) const {
  switch (kind_) {
    case GroupKind::Symmetric:
      for (std::uint32_t i = 0; i < n_; ++i) dst[i] = static_cast<std::uint8_t>(i);
      return;
    case GroupKind::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) factors_[i]->identity_raw(dst + offsets_[i]);
      return;
    default:
      std::memset(dst, 0, bytes_);
  }
}

GroupElement Group::identity() const {
  GroupElement e;
  identity_raw(e.bytes.data());
  return e;
}

void Group::op_raw(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const {
  switch (kind_) {
    case GroupKind::Cyclic: {
      std::uint64_t x = load_uint(a, width_);
      std::uint64_t y = load_uint(b, width_);
      std::uint64_t s = x + y;
      if (s < x || s >= n_) s -= n_;
      store_uint(dst, width_, s);
      return;
    }
    case GroupKind::VectorSpace:
      if (p_ == 2) {
        for (std::size_t i = 0; i < bytes_; ++i) dst[i] = a[i] ^ b[i];
      } else {
        kernels::active().add_mod(dst, a, b, dim_, static_cast<std::uint8_t>(p_));
      }
      return;
    case GroupKind::Symmetric: {
      std::uint8_t tmp[GroupElement::kBytes];
      for (std::uint32_t i = 0; i < n_; ++i) tmp[i] = b[a[i]];
      std::memcpy(dst, tmp, n_);
      return;
    }
    case GroupKind::Dihedral: {
      std::uint64_t ra = load_uint(a, width_);
      std::uint64_t rb = load_uint(b, width_);
      std::uint8_t sa = a[width_];
      std::uint8_t sb = b[width_];
      std::uint64_t r = sb ? (rb + n_ - ra) % n_ : (rb + ra) % n_;
      store_uint(dst, width_, r);
      dst[width_] = sa ^ sb;
      return;
    }
    case GroupKind::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        factors_[i]->op_raw(dst + offsets_[i], a + offsets_[i], b + offsets_[i]);
      }
      return;
  }
}

GroupElement Group::op(const GroupElement& a, const GroupElement& b) const {
  GroupElement r;
  if (kind_ == GroupKind::VectorSpace) {
    if (p_ == 2 && dim_ <= 64) {
      r.set_word(0, a.word(0) ^ b.word(0));
    } else if (p_ != 2) {
      // Padding bytes are zero in both operands and stay zero, so one full block suffices.
      kernels::active().add_mod(r.bytes.data(), a.bytes.data(), b.bytes.data(), GroupElement::kBytes,
                                static_cast<std::uint8_t>(p_));
    } else {
      op_raw(r.bytes.data(), a.bytes.data(), b.bytes.data());
    }
    return r;
  }
  op_raw(r.bytes.data(), a.bytes.data(), b.bytes.data());
  return r;
}

GroupElement Group::checked_op(const GroupElement& a, const GroupElement& b) const {
  validate(a);
  validate(b);
  return op(a, b);
}

void Group::inverse_raw(std::uint8_t* dst, const std::uint8_t* a) const {
  switch (kind_) {
    case GroupKind::Cyclic: {
      std::uint64_t x = load_uint(a, width_);
      store_uint(dst, width_, x == 0 ? 0 : n_ - x);
      return;
    }
    case GroupKind::VectorSpace:
      if (p_ == 2) {
        std::memmove(dst, a, bytes_);
      } else {
        std::uint8_t zero[GroupElement::kBytes] = {};
        kernels::active().sub_mod(dst, zero, a, dim_, static_cast<std::uint8_t>(p_));
      }
      return;
    case GroupKind::Symmetric: {
      std::uint8_t tmp[GroupElement::kBytes];
      for (std::uint32_t i = 0; i < n_; ++i) tmp[a[i]] = static_cast<std::uint8_t>(i);
      std::memcpy(dst, tmp, n_);
      return;
    }
    case GroupKind::Dihedral: {
      std::uint64_t r = load_uint(a, width_);
      std::uint8_t s = a[width_];
      store_uint(dst, width_, s ? r : (n_ - r) % n_);
      dst[width_] = s;
      return;
    }
    case GroupKind::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) factors_[i]->inverse_raw(dst + offsets_[i], a + offsets_[i]);
      return;
  }
}

GroupElement Group::inverse(const GroupElement& a) const {
  GroupElement r;
  inverse_raw(r.bytes.data(), a.bytes.data());
  return r;
}

GroupElement Group::multiple(const GroupElement& a, std::uint64_t k) const {
  GroupElement result = identity();
  GroupElement base = a;
  while (k > 0) {
    if (k & 1) result = op(result, base);
    k >>= 1;
    if (k) base = op(base, base);
  }
  return result;
}

void Group::sample_raw(std::uint8_t* dst, Rng& rng) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      store_uint(dst, width_, rng.below(n_));
      return;
    case GroupKind::VectorSpace:
      if (p_ == 2) {
        for (std::size_t off = 0; off < bytes_; off += 8) {
          std::uint64_t w = rng();
          std::size_t take = std::min<std::size_t>(8, bytes_ - off);
          std::memcpy(dst + off, &w, take);
        }
        if (dim_ % 8 != 0) dst[bytes_ - 1] &= static_cast<std::uint8_t>((1u << (dim_ % 8)) - 1);
      } else {
        for (std::uint32_t i = 0; i < dim_; ++i) dst[i] = static_cast<std::uint8_t>(rng.below(p_));
      }
      return;
    case GroupKind::Symmetric:
      for (std::uint32_t i = 0; i < n_; ++i) dst[i] = static_cast<std::uint8_t>(i);
      for (std::uint32_t i = static_cast<std::uint32_t>(n_); i-- > 1;) {
        std::swap(dst[i], dst[rng.below(i + 1)]);
      }
      return;
    case GroupKind::Dihedral:
      store_uint(dst, width_, rng.below(n_));
      dst[width_] = static_cast<std::uint8_t>(rng.below(2));
      return;
    case GroupKind::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) factors_[i]->sample_raw(dst + offsets_[i], rng);
      return;
  }
}

GroupElement Group::sample(Rng& rng) const {
  GroupElement r;
  if (kind_ == GroupKind::VectorSpace && p_ == 2 && dim_ <= 64) {
    std::uint64_t w = rng();
    if (dim_ < 64) w &= (std::uint64_t{1} << dim_) - 1;
    r.set_word(0, w);
    return r;
  }
  sample_raw(r.bytes.data(), rng);
  return r;
}

std::uint64_t Group::index_raw(const std::uint8_t* a) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      return load_uint(a, width_);
    case GroupKind::VectorSpace: {
      if (p_ == 2) {
        if (dim_ > 64) throw ResourceError("index of " + to_string() + " does not fit in 64 bits");
        return load_uint(a, static_cast<std::uint32_t>(bytes_));
      }
      if (!order_fits()) throw ResourceError("index of " + to_string() + " does not fit in 64 bits");
      std::uint64_t idx = 0;
      for (std::uint32_t i = dim_; i-- > 0;) idx = idx * p_ + a[i];
      return idx;
    }
    case GroupKind::Symmetric: {
      std::uint64_t idx = 0;
      for (std::uint32_t i = 0; i < n_; ++i) {
        std::uint64_t smaller = 0;
        for (std::uint32_t j = i + 1; j < n_; ++j) smaller += a[j] < a[i];
        idx = idx * (n_ - i) + smaller;
      }
      return idx;
    }
    case GroupKind::Dihedral:
      return a[width_] * n_ + load_uint(a, width_);
    case GroupKind::Product: {
      if (!order_fits()) throw ResourceError("index of " + to_string() + " does not fit in 64 bits");
      std::uint64_t idx = 0;
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        idx = idx * factors_[i]->order() + factors_[i]->index_raw(a + offsets_[i]);
      }
      return idx;
    }
  }
  return 0;
}

std::uint64_t Group::index_of(const GroupElement& a) const {
  if (kind_ == GroupKind::VectorSpace && p_ == 2 && dim_ <= 64) return a.word(0);
  return index_raw(a.bytes.data());
}

void Group::element_at_raw(std::uint8_t* dst, std::uint64_t index) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      store_uint(dst, width_, index);
      return;
    case GroupKind::VectorSpace:
      if (p_ == 2) {
        store_uint(dst, static_cast<std::uint32_t>(bytes_), index);
      } else {
        for (std::uint32_t i = 0; i < dim_; ++i) {
          dst[i] = static_cast<std::uint8_t>(index % p_);
          index /= p_;
        }
      }
      return;
    case GroupKind::Symmetric: {
      // Unrank the Lehmer code: digit i is in base (n - i).
      std::uint32_t n = static_cast<std::uint32_t>(n_);
      std::uint64_t code[20];
      for (std::uint32_t i = n; i-- > 0;) {
        std::uint64_t base = n - i;
        code[i] = index % base;
        index /= base;
      }
      std::vector<std::uint8_t> pool(n);
      std::iota(pool.begin(), pool.end(), std::uint8_t{0});
      for (std::uint32_t i = 0; i < n; ++i) {
        dst[i] = pool[code[i]];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(code[i]));
      }
      return;
    }
    case GroupKind::Dihedral:
      store_uint(dst, width_, index % n_);
      dst[width_] = static_cast<std::uint8_t>(index / n_);
      return;
    case GroupKind::Product:
      for (std::size_t i = factors_.size(); i-- > 0;) {
        std::uint64_t ord = factors_[i]->order();
        factors_[i]->element_at_raw(dst + offsets_[i], index % ord);
        index /= ord;
      }
      return;
  }
}

GroupElement Group::element_at(std::uint64_t index) const {
  if (order_fits() && index >= order_) {
    throw DomainError("index " + std::to_string(index) + " out of range for " + to_string());
  }
  GroupElement r;
  element_at_raw(r.bytes.data(), index);
  return r;
}

bool Group::contains_raw(const std::uint8_t* a) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      return load_uint(a, width_) < n_;
    case GroupKind::VectorSpace:
      if (p_ == 2) {
        return dim_ % 8 == 0 || (a[bytes_ - 1] >> (dim_ % 8)) == 0;
      }
      for (std::uint32_t i = 0; i < dim_; ++i) {
        if (a[i] >= p_) return false;
      }
      return true;
    case GroupKind::Symmetric: {
      std::uint32_t seen = 0;
      for (std::uint32_t i = 0; i < n_; ++i) {
        if (a[i] >= n_ || (seen >> a[i]) & 1u) return false;
        seen |= 1u << a[i];
      }
      return true;
    }
    case GroupKind::Dihedral:
      return load_uint(a, width_) < n_ && a[width_] <= 1;
    case GroupKind::Product:
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (!factors_[i]->contains_raw(a + offsets_[i])) return false;
      }
      return true;
  }
  return false;
}

bool Group::contains(const GroupElement& a) const {
  for (std::size_t i = bytes_; i < GroupElement::kBytes; ++i) {
    if (a.bytes[i] != 0) return false;
  }
  return contains_raw(a.bytes.data());
}

void Group::validate(const GroupElement& a) const {
  if (!contains(a)) throw DomainError("element is not a valid encoding for " + to_string());
}

void Group::format_raw(std::string& out, const std::uint8_t* a) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      out += std::to_string(load_uint(a, width_));
      return;
    case GroupKind::VectorSpace:
      out += '(';
      for (std::uint32_t i = 0; i < dim_; ++i) {
        if (i) out += ',';
        out += std::to_string(p_ == 2 ? (a[i / 8] >> (i % 8)) & 1u : a[i]);
      }
      out += ')';
      return;
    case GroupKind::Symmetric:
      out += '[';
      for (std::uint32_t i = 0; i < n_; ++i) {
        if (i) out += ',';
        out += std::to_string(a[i]);
      }
      out += ']';
      return;
    case GroupKind::Dihedral:
      out += 'r' + std::to_string(load_uint(a, width_)) + 's' + std::to_string(a[width_]);
      return;
    case GroupKind::Product:
      out += '{';
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) out += ';';
        factors_[i]->format_raw(out, a + offsets_[i]);
      }
      out += '}';
      return;
  }
}

std::string Group::format(const GroupElement& a) const {
  std::string out;
  format_raw(out, a.bytes.data());
  return out;
}

std::size_t Group::parse_raw(std::uint8_t* dst, std::string_view text) const {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  switch (kind_) {
    case GroupKind::Cyclic:
      pos = read_number(text, v);
      store_uint(dst, width_, v);
      return pos;
    case GroupKind::VectorSpace:
    case GroupKind::Symmetric: {
      const bool vec = kind_ == GroupKind::VectorSpace;
      const std::uint32_t len = vec ? dim_ : static_cast<std::uint32_t>(n_);
      expect(text, pos++, vec ? '(' : '[');
      for (std::uint32_t i = 0; i < len; ++i) {
        if (i) expect(text, pos++, ',');
        pos += read_number(text.substr(pos), v);
        if (v > 255) throw DomainError("digit out of range in '" + std::string(text) + "'");
        if (vec && p_ == 2) {
          if (v > 1) throw DomainError("digit out of range in '" + std::string(text) + "'");
          dst[i / 8] |= static_cast<std::uint8_t>(v << (i % 8));
        } else {
          dst[i] = static_cast<std::uint8_t>(v);
        }
      }
      expect(text, pos++, vec ? ')' : ']');
      return pos;
    }
    case GroupKind::Dihedral:
      expect(text, pos++, 'r');
      pos += read_number(text.substr(pos), v);
      store_uint(dst, width_, v);
      expect(text, pos++, 's');
      pos += read_number(text.substr(pos), v);
      dst[width_] = static_cast<std::uint8_t>(v);
      return pos;
    case GroupKind::Product:
      expect(text, pos++, '{');
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) expect(text, pos++, ';');
        pos += factors_[i]->parse_raw(dst + offsets_[i], text.substr(pos));
      }
      expect(text, pos++, '}');
      return pos;
  }
  return pos;
}

GroupElement Group::parse_element(std::string_view text) const {
  GroupElement r;
  std::size_t used = parse_raw(r.bytes.data(), text);
  if (used != text.size()) throw DomainError("trailing characters in element text '" + std::string(text) + "'");
  validate(r);
  return r;
}

std::uint32_t Group::digit(const GroupElement& a, std::uint32_t i) const {
  if (kind_ != GroupKind::VectorSpace || i >= dim_) throw DomainError("digit access outside a vector space");
  return p_ == 2 ? (a.bytes[i / 8] >> (i % 8)) & 1u : a.bytes[i];
}

void Group::set_digit(GroupElement& a, std::uint32_t i, std::uint32_t v) const {
  if (kind_ != GroupKind::VectorSpace || i >= dim_) throw DomainError("digit access outside a vector space");
  v %= p_;
  if (p_ == 2) {
    a.bytes[i / 8] = static_cast<std::uint8_t>((a.bytes[i / 8] & ~(1u << (i % 8))) | (v << (i % 8)));
  } else {
    a.bytes[i] = static_cast<std::uint8_t>(v);
  }
}

GroupElement Group::scale(std::uint32_t c, const GroupElement& a) const {
  if (kind_ != GroupKind::VectorSpace) throw DomainError("scalar action needs a vector space, got " + to_string());
  c %= p_;
  if (p_ == 2) return c ? a : GroupElement{};
  GroupElement r;
  kernels::active().scale_mod(r.bytes.data(), a.bytes.data(), static_cast<std::uint8_t>(c), dim_,
                              static_cast<std::uint8_t>(p_));
  return r;
}

GroupElement Group::unit_vector(std::uint32_t i) const {
  GroupElement e;
  set_digit(e, i, 1);
  return e;
}

GroupElement signed_apply(const Group& g, Sign s, const GroupElement& a) {
  return s == Sign::Plus ? a : g.inverse(a);
}

GroupElement coefficient_apply(const Group& g, Coefficient c, const GroupElement& a) {
  if (!g.is_vector_space()) throw DomainError("coefficient action needs a vector space, got " + g.to_string());
  if (c.value < 1 || c.value >= g.prime()) {
    throw DomainError("coefficient " + std::to_string(c.value) + " outside [1, p-1]");
  }
  return g.scale(c.value, a);
}

GroupElement apply_multiplier(const Group& g, const Multiplier& m, const GroupElement& a) {
  if (const Sign* s = std::get_if<Sign>(&m)) return signed_apply(g, *s, a);
  return coefficient_apply(g, std::get<Coefficient>(m), a);
}

GroupElement signed_sum(const Group& g, const SignedTuple& t, Direction dir) {
  GroupElement acc = g.identity();
  const std::size_t k = t.entries.size();
  for (std::size_t step = 0; step < k; ++step) {
    const Term& term = t.entries[dir == Direction::Increasing ? step : k - 1 - step];
    acc = g.op(acc, apply_multiplier(g, term.mult, term.element));
  }
  return acc;
}

std::string format_multiplier(const Multiplier& m) {
  if (const Sign* s = std::get_if<Sign>(&m)) return *s == Sign::Plus ? "+" : "-";
  return std::to_string(std::get<Coefficient>(m).value);
}

CayleyTable::CayleyTable(GroupPtr g) : g_(std::move(g)) {
  if (!g_->order_fits() || g_->order() > kMaxOrder) {
    throw ResourceError("Cayley table limited to order " + std::to_string(kMaxOrder) + ", got " + g_->to_string());
  }
  n_ = static_cast<std::uint32_t>(g_->order());
  elems_.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i) elems_.push_back(g_->element_at(i));
  table_.resize(std::size_t{n_} * n_);
  inv_.resize(n_);
  for (std::uint32_t a = 0; a < n_; ++a) {
    for (std::uint32_t b = 0; b < n_; ++b) {
      table_[std::size_t{a} * n_ + b] = static_cast<std::uint32_t>(g_->index_of(g_->op(elems_[a], elems_[b])));
    }
    inv_[a] = static_cast<std::uint32_t>(g_->index_of(g_->inverse(elems_[a])));
  }
  id_ = static_cast<std::uint32_t>(g_->index_of(g_->identity()));
}

}  // namespace homtest
