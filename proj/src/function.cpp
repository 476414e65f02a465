#include "homtest/function.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>

#include "homtest/errors.hpp"
#include "homtest/kernels.hpp"
#include "homtest/subgroup.hpp"
#include "json.hpp"

namespace homtest {

namespace {

constexpr char kMagic[4] = {'H', 'O', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t dense_order(const Group& g) {
  if (!g.order_fits() || g.order() > kDenseCap) {
    throw ResourceError("dense representation of " + g.to_string() + " exceeds cap 2^20");
  }
  return g.order();
}

// Every element of h with order dividing p (small codomains only).
std::vector<GroupElement> torsion(const Group& h, std::uint32_t p) {
  if (!h.order_fits() || h.order() > kDenseCap) {
    throw ResourceError("torsion subgroup of " + h.to_string() + " is too large to list");
  }
  std::vector<GroupElement> out;
  const GroupElement e = h.identity();
  for (std::uint64_t i = 0; i < h.order(); ++i) {
    GroupElement x = h.element_at(i);
    if (h.multiple(x, p) == e) out.push_back(x);
  }
  return out;
}

GroupElement random_non_identity(const Group& h, Rng& rng) {
  if (h.order() < 2) throw DomainError("codomain " + h.to_string() + " has no non-identity element");
  return h.element_at(1 + rng.below(h.order() - 1));
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DomainError("truncated function table");
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  auto n = get<std::uint32_t>(in);
  if (n > 4096) throw DomainError("corrupt group spec length");
  std::string s(n, '\0');
  if (!in.read(s.data(), n)) throw DomainError("truncated function table");
  return s;
}

}  // namespace

Homomorphism Homomorphism::trusted_table(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> values) {
  Homomorphism h;
  h.domain_ = std::move(domain);
  h.codomain_ = std::move(codomain);
  h.table_ = std::move(values);
  return h;
}

Homomorphism Homomorphism::from_table(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> values) {
  const std::uint64_t n = dense_order(*domain);
  if (values.size() != n) throw DomainError("homomorphism table has the wrong length");
  FunctionTable f = FunctionTable::dense(domain, codomain, values);
  if (!is_homomorphism(f)) throw DomainError("table is not a homomorphism");
  return trusted_table(std::move(domain), std::move(codomain), std::move(values));
}

Homomorphism Homomorphism::from_basis_images(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> images) {
  if (!domain->is_vector_space()) throw DomainError("basis images need a vector-space domain");
  if (images.size() != domain->dimension()) throw DomainError("need one image per unit vector");
  const Group& h = *codomain;
  const GroupElement e = h.identity();
  for (std::size_t i = 0; i < images.size(); ++i) {
    h.validate(images[i]);
    if (!(h.multiple(images[i], domain->prime()) == e)) {
      throw DomainError("basis image has order not dividing p");
    }
    if (!h.abelian()) {
      for (std::size_t j = 0; j < i; ++j) {
        if (!(h.op(images[i], images[j]) == h.op(images[j], images[i]))) {
          throw DomainError("basis images do not commute");
        }
      }
    }
  }
  Homomorphism hom;
  hom.domain_ = std::move(domain);
  hom.codomain_ = std::move(codomain);
  hom.images_ = std::move(images);
  if (hom.domain_->is_f2_word() && h.is_f2_word()) {
    hom.masks_.assign(h.dimension(), 0);
    for (std::size_t i = 0; i < hom.images_.size(); ++i) {
      std::uint64_t img = hom.images_[i].word(0);
      for (std::uint32_t j = 0; j < h.dimension(); ++j) {
        if ((img >> j) & 1u) hom.masks_[j] |= std::uint64_t{1} << i;
      }
    }
  }
  Rng rng(0x5EEDu);
  for (int trial = 0; trial < 1000; ++trial) {
    GroupElement a = hom.domain_->sample(rng);
    GroupElement b = hom.domain_->sample(rng);
    if (!(hom(hom.domain_->op(a, b)) == h.op(hom(a), hom(b)))) {
      throw DomainError("basis-image map failed the homomorphism spot check");
    }
  }
  return hom;
}

GroupElement Homomorphism::operator()(const GroupElement& x) const {
  if (!table_.empty()) return table_[domain_->index_of(x)];
  const Group& g = *domain_;
  const Group& h = *codomain_;
  if (!masks_.empty()) {
    const std::uint64_t w = x.word(0);
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < masks_.size(); ++j) {
      out |= static_cast<std::uint64_t>(std::popcount(w & masks_[j]) & 1) << j;
    }
    GroupElement r;
    r.set_word(0, out);
    return r;
  }
  GroupElement acc = h.identity();
  if (g.is_f2_word()) {
    for (std::uint64_t w = x.word(0); w != 0; w &= w - 1) {
      acc = h.op(acc, images_[std::countr_zero(w)]);
    }
    return acc;
  }
  for (std::uint32_t i = 0; i < g.dimension(); ++i) {
    std::uint32_t d = g.digit(x, i);
    if (d != 0) acc = h.op(acc, d == 1 ? images_[i] : h.multiple(images_[i], d));
  }
  return acc;
}

FunctionTable Homomorphism::to_function() const {
  const std::uint64_t n = dense_order(*domain_);
  if (!table_.empty()) return FunctionTable::dense(domain_, codomain_, table_);
  std::vector<GroupElement> values(n);
  for (std::uint64_t i = 0; i < n; ++i) values[i] = (*this)(domain_->element_at(i));
  FunctionTable f = FunctionTable::dense(domain_, codomain_, std::move(values));
  f.set_certified_distance(Rational(0));
  return f;
}

FunctionTable FunctionTable::dense(GroupPtr domain, GroupPtr codomain, std::vector<GroupElement> values) {
  const std::uint64_t n = dense_order(*domain);
  if (values.size() != n) throw DomainError("dense table has the wrong length");
  FunctionTable f;
  f.domain_ = std::move(domain);
  f.codomain_ = std::move(codomain);
  f.values_ = std::move(values);
  return f;
}

FunctionTable FunctionTable::implicit(Homomorphism base, std::uint64_t key, double rate) {
  if (!base.domain()->is_vector_space()) throw DomainError("implicit tables need a vector-space domain");
  if (!(rate >= 0.0 && rate <= 1.0)) throw DomainError("noise rate must lie in [0, 1]");
  FunctionTable f;
  f.domain_ = base.domain();
  f.codomain_ = base.codomain();
  f.codomain_order_ = f.codomain_->order();
  if (rate > 0.0 && f.codomain_order_ < 2) throw DomainError("noise needs a codomain with two or more elements");
  f.key_ = key;
  f.rate_ = rate;
  f.base_ = std::move(base);
  return f;
}

GroupElement FunctionTable::eval(const GroupElement& x) const {
  if (!values_.empty()) return values_[domain_->index_of(x)];
  GroupElement y = (*base_)(x);
  if (rate_ <= 0.0) return y;
  const std::uint64_t h = mix64(key_ ^ GroupElementHash{}(x));
  if (static_cast<double>(h >> 11) * 0x1.0p-53 >= rate_) return y;
  const std::uint64_t pick = 1 + mix64_alt(h ^ 0xA24BAED4963EE407ULL) % (codomain_order_ - 1);
  return codomain_->op(y, codomain_->element_at(pick));
}

const std::vector<GroupElement>& FunctionTable::values() const {
  if (values_.empty()) throw DomainError("implicit table has no value array");
  return values_;
}

void FunctionTable::write_binary(std::ostream& out) const {
  if (!is_dense()) throw DomainError("only dense tables serialize");
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put_string(out, domain_->to_string());
  put_string(out, codomain_->to_string());
  put<std::uint64_t>(out, values_.size());
  const auto width = static_cast<std::streamsize>(codomain_->byte_size());
  for (const auto& v : values_) out.write(reinterpret_cast<const char*>(v.bytes.data()), width);
}

FunctionTable FunctionTable::read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) throw DomainError("not a function table");
  if (get<std::uint32_t>(in) != kVersion) throw DomainError("unsupported function table version");
  GroupPtr g = Group::parse(get_string(in));
  GroupPtr h = Group::parse(get_string(in));
  auto n = get<std::uint64_t>(in);
  if (n != dense_order(*g)) throw DomainError("function table length does not match its domain");
  std::vector<GroupElement> values(n);
  const auto width = static_cast<std::streamsize>(h->byte_size());
  for (auto& v : values) {
    if (!in.read(reinterpret_cast<char*>(v.bytes.data()), width)) throw DomainError("truncated function table");
    h->validate(v);
  }
  return dense(std::move(g), std::move(h), std::move(values));
}

std::string FunctionTable::to_json() const {
  if (!is_dense() || values_.size() > 256) throw DomainError("JSON form is limited to dense tables with |G| <= 256");
  nlohmann::json j;
  j["domain"] = domain_->to_string();
  j["codomain"] = codomain_->to_string();
  auto& vals = j["values"] = nlohmann::json::array();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    vals.push_back({domain_->format(domain_->element_at(i)), codomain_->format(values_[i])});
  }
  if (certified_) j["certified_distance"] = certified_->to_string();
  return j.dump();
}

bool is_homomorphism(const FunctionTable& f) {
  const Group& g = *f.domain();
  const Group& h = *f.codomain();
  const auto& vals = f.values();
  const std::uint64_t n = vals.size();
  if (!(vals[g.index_of(g.identity())] == h.identity())) return false;
  if (n * n <= (std::uint64_t{1} << 26)) {
    std::vector<GroupElement> elems(n);
    for (std::uint64_t i = 0; i < n; ++i) elems[i] = g.element_at(i);
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = 0; b < n; ++b) {
        if (!(vals[g.index_of(g.op(elems[a], elems[b]))] == h.op(vals[a], vals[b]))) return false;
      }
    }
    return true;
  }
  if (!g.is_vector_space()) throw ResourceError("exhaustive homomorphism check too large for " + g.to_string());
  // A map on F_p^n is a homomorphism iff it agrees with the map its unit-vector images define.
  std::vector<GroupElement> images;
  for (std::uint32_t i = 0; i < g.dimension(); ++i) images.push_back(vals[g.index_of(g.unit_vector(i))]);
  std::optional<Homomorphism> hom;
  try {
    hom = Homomorphism::from_basis_images(f.domain(), f.codomain(), images);
  } catch (const DomainError&) {
    return false;
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!((*hom)(g.element_at(i)) == vals[i])) return false;
  }
  return true;
}

std::vector<Homomorphism> enumerate_homomorphisms(const GroupPtr& gp, const GroupPtr& hp, std::uint64_t cap) {
  const Group& g = *gp;
  const Group& h = *hp;
  const std::uint64_t n = dense_order(g);
  if (!h.order_fits()) throw ResourceError("codomain " + h.to_string() + " too large to enumerate");
  const std::uint64_t hn = h.order();

  // Greedy generating sequence in canonical order.
  std::vector<GroupElement> gens;
  std::vector<std::uint8_t> in_closure(n, 0);
  in_closure[g.index_of(g.identity())] = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (in_closure[i]) continue;
    gens.push_back(g.element_at(i));
    for (const auto& x : generated_subgroup(g, gens, kDenseCap)) in_closure[g.index_of(x)] = 1;
  }
  const std::size_t d = gens.size();
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (combos > cap / std::max<std::uint64_t>(hn, 1)) {
      throw ResourceError("|H|^d exceeds the enumeration cap for " + g.to_string() + " -> " + h.to_string());
    }
    combos *= hn;
  }
  if (combos > cap) throw ResourceError("|H|^d exceeds the enumeration cap");

  std::vector<std::uint32_t> nbr(n * d);
  for (std::uint64_t x = 0; x < n; ++x) {
    GroupElement ex = g.element_at(x);
    for (std::size_t i = 0; i < d; ++i) nbr[x * d + i] = static_cast<std::uint32_t>(g.index_of(g.op(ex, gens[i])));
  }
  std::optional<CayleyTable> htab;
  if (hn <= CayleyTable::kMaxOrder) htab.emplace(hp);
  const std::uint32_t e_g = static_cast<std::uint32_t>(g.index_of(g.identity()));
  const std::uint64_t e_h = h.index_of(h.identity());

  std::vector<Homomorphism> out;
  std::vector<std::uint64_t> assign(d, 0);
  std::vector<std::uint64_t> val(n);
  std::vector<std::uint32_t> queue;
  queue.reserve(n);
  constexpr std::uint64_t kUnset = UINT64_MAX;
  for (std::uint64_t combo = 0; combo < combos; ++combo) {
    std::uint64_t c = combo;
    for (std::size_t i = 0; i < d; ++i) {
      assign[i] = c % hn;
      c /= hn;
    }
    std::fill(val.begin(), val.end(), kUnset);
    val[e_g] = e_h;
    queue.assign(1, e_g);
    bool ok = true;
    for (std::size_t head = 0; ok && head < queue.size(); ++head) {
      const std::uint32_t x = queue[head];
      for (std::size_t i = 0; i < d; ++i) {
        const std::uint32_t y = nbr[x * d + i];
        std::uint64_t v = htab ? htab->op(static_cast<std::uint32_t>(val[x]), static_cast<std::uint32_t>(assign[i]))
                               : h.index_of(h.op(h.element_at(val[x]), h.element_at(assign[i])));
        if (val[y] == kUnset) {
          val[y] = v;
          queue.push_back(y);
        } else if (val[y] != v) {
          ok = false;
          break;
        }
      }
    }
    if (!ok || queue.size() != n) continue;
    std::vector<GroupElement> table(n);
    for (std::uint64_t x = 0; x < n; ++x) table[x] = htab ? htab->element(static_cast<std::uint32_t>(val[x])) : h.element_at(val[x]);
    out.push_back(Homomorphism::trusted_table(gp, hp, std::move(table)));
  }
  return out;
}

Rational distance(const FunctionTable& f, const FunctionTable& g) {
  if (!f.is_dense() || !g.is_dense()) throw DomainError("exact distance needs dense tables");
  if (f.domain()->to_string() != g.domain()->to_string() || f.codomain()->to_string() != g.codomain()->to_string()) {
    throw DomainError("distance between functions on different groups");
  }
  const auto& a = f.values();
  const auto& b = g.values();
  std::int64_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += !(a[i] == b[i]);
  return Rational(diff, static_cast<std::int64_t>(a.size()));
}

DistanceResult distance_to_hom_by_enumeration(const FunctionTable& f) {
  const auto& vals = f.values();
  auto homs = enumerate_homomorphisms(f.domain(), f.codomain());
  std::size_t best = 0;
  std::int64_t best_diff = INT64_MAX;
  for (std::size_t k = 0; k < homs.size(); ++k) {
    const auto& t = homs[k].table();
    std::int64_t diff = 0;
    for (std::size_t i = 0; i < vals.size() && diff < best_diff; ++i) diff += !(vals[i] == t[i]);
    if (diff < best_diff) {
      best_diff = diff;
      best = k;
    }
  }
  return {Rational(best_diff, static_cast<std::int64_t>(vals.size())), homs[best]};
}

std::optional<DistanceResult> distance_to_hom_by_transform(const FunctionTable& f) {
  const GroupPtr& gp = f.domain();
  const GroupPtr& hp = f.codomain();
  const Group& g = *gp;
  const Group& h = *hp;
  if (!f.is_dense() || !g.is_vector_space() || g.prime() != 2 || !h.abelian()) return std::nullopt;
  if (!h.order_fits() || h.order() > kDenseCap) return std::nullopt;
  auto two_torsion = torsion(h, 2);
  if (two_torsion.size() > 2) return std::nullopt;
  const GroupElement e = h.identity();
  const auto& vals = f.values();
  const std::size_t n = vals.size();
  const std::uint32_t dim = g.dimension();

  if (two_torsion.size() == 1) {
    std::int64_t diff = 0;
    for (const auto& v : vals) diff += !(v == e);
    std::vector<GroupElement> zero(dim, e);
    return DistanceResult{Rational(diff, static_cast<std::int64_t>(n)),
                          Homomorphism::from_basis_images(gp, hp, std::move(zero))};
  }
  const GroupElement z = two_torsion[0] == e ? two_torsion[1] : two_torsion[0];
  // w = [f = e] - [f = z]; agreement with x -> (a.x) z is (#{f in {e,z}} + W^(a)) / 2.
  std::vector<std::int32_t> w(n);
  std::int64_t in_torsion = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (vals[x] == e) {
      w[x] = 1;
      ++in_torsion;
    } else if (vals[x] == z) {
      w[x] = -1;
      ++in_torsion;
    } else {
      w[x] = 0;
    }
  }
  kernels::active().walsh_hadamard(w.data(), n);
  std::size_t best = 0;
  for (std::size_t a = 1; a < n; ++a) {
    if (w[a] > w[best]) best = a;
  }
  const std::int64_t agree = (in_torsion + w[best]) / 2;
  std::vector<GroupElement> images(dim);
  for (std::uint32_t i = 0; i < dim; ++i) images[i] = ((best >> i) & 1u) ? z : e;
  return DistanceResult{Rational(static_cast<std::int64_t>(n) - agree, static_cast<std::int64_t>(n)),
                        Homomorphism::from_basis_images(gp, hp, std::move(images))};
}

DistanceResult distance_to_hom(const FunctionTable& f) {
  if (!f.is_dense()) throw DomainError("exact distance needs a dense table");
  if (auto fast = distance_to_hom_by_transform(f)) return std::move(*fast);
  return distance_to_hom_by_enumeration(f);
}

double estimate_disagreement(const FunctionTable& f, const Homomorphism& h, std::uint64_t samples, Rng& rng) {
  if (samples == 0) return 0.0;
  std::uint64_t diff = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    GroupElement x = f.domain()->sample(rng);
    diff += !(f.eval(x) == h(x));
  }
  return static_cast<double>(diff) / static_cast<double>(samples);
}

std::string instance_kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::RandomHom: return "random_hom";
    case InstanceKind::ShiftedHom: return "shifted_hom";
    case InstanceKind::RandomFunction: return "random_function";
    case InstanceKind::PlantedFar: return "planted_far";
    case InstanceKind::ImplicitPlanted: return "implicit_planted";
  }
  return {};
}

InstanceKind parse_instance_kind(std::string_view name) {
  for (auto k : {InstanceKind::RandomHom, InstanceKind::ShiftedHom, InstanceKind::RandomFunction,
                 InstanceKind::PlantedFar, InstanceKind::ImplicitPlanted}) {
    if (instance_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown instance kind '" + std::string(name) + "'");
}

Homomorphism random_homomorphism(const GroupPtr& g, const GroupPtr& h, Rng& rng) {
  if (g->is_vector_space() && h->abelian()) {
    const std::uint32_t p = g->prime();
    std::vector<GroupElement> images(g->dimension());
    if (h->is_vector_space() && h->prime() == p) {
      for (auto& img : images) img = h->sample(rng);
    } else {
      auto pool = torsion(*h, p);
      for (auto& img : images) img = pool[rng.below(pool.size())];
    }
    return Homomorphism::from_basis_images(g, h, std::move(images));
  }
  auto homs = enumerate_homomorphisms(g, h);
  return homs[rng.below(homs.size())];
}

FunctionTable gen_instance(const InstanceSpec& spec, const GroupPtr& g, const GroupPtr& h, Rng& rng) {
  const bool small = g->order_fits() && g->order() <= kDenseCap;
  switch (spec.kind) {
    case InstanceKind::RandomHom: {
      Homomorphism hom = random_homomorphism(g, h, rng);
      if (small) {
        FunctionTable f = hom.to_function();
        f.set_certified_distance(Rational(0));
        return f;
      }
      FunctionTable f = FunctionTable::implicit(std::move(hom), spec.key, 0.0);
      f.set_certified_distance(Rational(0));
      return f;
    }
    case InstanceKind::ShiftedHom: {
      FunctionTable base = random_homomorphism(g, h, rng).to_function();
      GroupElement s = spec.shift ? *spec.shift : random_non_identity(*h, rng);
      h->validate(s);
      std::vector<GroupElement> vals = base.values();
      for (auto& v : vals) v = h->op(v, s);
      return FunctionTable::dense(g, h, std::move(vals));
    }
    case InstanceKind::RandomFunction: {
      const std::uint64_t n = dense_order(*g);
      std::vector<GroupElement> vals(n);
      for (auto& v : vals) v = h->sample(rng);
      return FunctionTable::dense(g, h, std::move(vals));
    }
    case InstanceKind::PlantedFar: {
      if (spec.epsilon < Rational(0) || spec.epsilon > Rational(1)) throw DomainError("planted rate must lie in [0, 1]");
      FunctionTable base = random_homomorphism(g, h, rng).to_function();
      const std::uint64_t n = base.values().size();
      const std::uint64_t flips = static_cast<std::uint64_t>((spec.epsilon * Rational(static_cast<std::int64_t>(n))).ceil());
      std::vector<GroupElement> vals = base.values();
      if (flips > 0) {
        const std::uint64_t hn = h->order();
        if (hn < 2) throw DomainError("cannot flip values in a trivial codomain");
        std::vector<std::uint32_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0u);
        for (std::uint64_t i = 0; i < flips; ++i) {
          std::swap(idx[i], idx[i + rng.below(n - i)]);
          GroupElement& v = vals[idx[i]];
          v = h->element_at((h->index_of(v) + 1 + rng.below(hn - 1)) % hn);
        }
      }
      FunctionTable f = FunctionTable::dense(g, h, std::move(vals));
      f.set_certified_distance(distance_to_hom(f).distance);
      return f;
    }
    case InstanceKind::ImplicitPlanted: {
      Homomorphism hom = random_homomorphism(g, h, rng);
      return FunctionTable::implicit(std::move(hom), spec.key, spec.epsilon.to_double());
    }
  }
  throw DomainError("unknown instance kind");
}

}  // namespace homtest
