#include "hors/cpo.hpp"

#include <algorithm>
#include <cctype>

#include "hors/error.hpp"

namespace hors {

namespace {

// Largest poset whose order is stored as a table.
constexpr std::size_t kDenseLimit = 4096;

}  // namespace

struct FinitePoset::Pointwise {
  std::vector<MonotoneTable> maps;
  FinitePoset cod;
  std::map<MonotoneTable, Element> index;
};

bool FinitePoset::pointwise_leq(Element a, Element b) const {
  const auto& fa = pointwise_->maps[a];
  const auto& fb = pointwise_->maps[b];
  for (std::size_t x = 0; x < fa.size(); ++x) {
    if (!pointwise_->cod.leq(fa[x], fb[x])) return false;
  }
  return true;
}

std::optional<Element> FinitePoset::pointwise_combine(Element a, Element b, bool join) const {
  const auto& fa = pointwise_->maps[a];
  const auto& fb = pointwise_->maps[b];
  MonotoneTable t(fa.size());
  for (std::size_t x = 0; x < fa.size(); ++x) {
    auto v = join ? pointwise_->cod.join(fa[x], fb[x]) : pointwise_->cod.meet(fa[x], fb[x]);
    if (!v) return std::nullopt;
    t[x] = *v;
  }
  auto it = pointwise_->index.find(t);
  if (it == pointwise_->index.end()) return std::nullopt;
  return it->second;
}

FinitePoset FinitePoset::pointwise(std::vector<MonotoneTable> maps, const FinitePoset& q) {
  std::size_t n = maps.size();
  if (n <= kDenseLimit) {
    std::vector<bool> leq(n * n);
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        bool below = true;
        for (std::size_t x = 0; x < maps[a].size() && below; ++x) below = q.leq(maps[a][x], maps[b][x]);
        leq[a * n + b] = below;
      }
    }
    return FinitePoset(n, std::move(leq));
  }
  auto pw = std::make_shared<Pointwise>();
  pw->cod = q;
  for (Element e = 0; e < n; ++e) pw->index.emplace(maps[e], e);
  std::size_t width = maps.empty() ? 0 : maps[0].size();
  auto bottom = pw->index.find(MonotoneTable(width, q.bottom()));
  if (bottom == pw->index.end()) throw InvariantError("pointwise poset lacks the constant-bottom map");
  pw->maps = std::move(maps);
  FinitePoset p;
  p.size_ = n;
  p.dense_ = false;
  p.bottom_ = bottom->second;
  p.pointwise_ = std::move(pw);
  return p;
}

FinitePoset::FinitePoset(std::size_t size, std::vector<bool> leq) : size_(size), leq_(std::move(leq)) {
  if (size_ == 0) throw InvariantError("poset must be non-empty");
  if (leq_.size() != size_ * size_) throw InvariantError("poset order table has the wrong size");
  for (Element a = 0; a < size_; ++a) {
    if (!this->leq(a, a)) throw InvariantError("poset order is not reflexive");
    for (Element b = 0; b < size_; ++b) {
      if (a != b && this->leq(a, b) && this->leq(b, a)) throw InvariantError("poset order is not antisymmetric");
      if (!this->leq(a, b)) continue;
      for (Element c = 0; c < size_; ++c) {
        if (this->leq(b, c) && !this->leq(a, c)) throw InvariantError("poset order is not transitive");
      }
    }
  }
  bool found = false;
  for (Element a = 0; a < size_ && !found; ++a) {
    bool least = true;
    for (Element b = 0; b < size_ && least; ++b) least = this->leq(a, b);
    if (least) {
      bottom_ = a;
      found = true;
    }
  }
  if (!found) throw InvariantError("poset has no least element");
}

FinitePoset FinitePoset::chain(std::size_t n) {
  std::vector<bool> leq(n * n);
  for (Element a = 0; a < n; ++a) {
    for (Element b = a; b < n; ++b) leq[a * n + b] = true;
  }
  return FinitePoset(n, std::move(leq));
}

namespace {

std::optional<Element> least_of(const FinitePoset& p, const std::vector<Element>& set, bool greatest) {
  for (Element u : set) {
    bool extreme = true;
    for (Element v : set) {
      if (!(greatest ? p.leq(v, u) : p.leq(u, v))) {
        extreme = false;
        break;
      }
    }
    if (extreme) return u;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Element> FinitePoset::join(Element a, Element b) const {
  if (!dense_) return pointwise_combine(a, b, true);
  std::vector<Element> upper;
  for (Element u = 0; u < size_; ++u) {
    if (leq(a, u) && leq(b, u)) upper.push_back(u);
  }
  return least_of(*this, upper, false);
}

std::optional<Element> FinitePoset::meet(Element a, Element b) const {
  if (!dense_) return pointwise_combine(a, b, false);
  std::vector<Element> lower;
  for (Element u = 0; u < size_; ++u) {
    if (leq(u, a) && leq(u, b)) lower.push_back(u);
  }
  return least_of(*this, lower, true);
}

std::optional<Element> FinitePoset::top() const {
  if (!dense_) {
    auto t = pointwise_->cod.top();
    if (!t) return std::nullopt;
    std::size_t width = pointwise_->maps[0].size();
    auto it = pointwise_->index.find(MonotoneTable(width, *t));
    if (it == pointwise_->index.end()) return std::nullopt;
    return it->second;
  }
  std::vector<Element> all(size_);
  for (Element e = 0; e < size_; ++e) all[e] = e;
  return least_of(*this, all, true);
}

std::size_t FinitePoset::height() const {
  // Raising one point at a time along a longest chain of the codomain,
  // topmost points first, gives a longest chain of monotone maps.
  if (!dense_) return pointwise_->maps[0].size() * pointwise_->cod.height();
  // Longest chain above each element, filled in an order where every
  // strictly larger element comes first.
  std::vector<Element> order(size_);
  for (Element e = 0; e < size_; ++e) order[e] = e;
  std::vector<std::size_t> above(size_, 0);
  for (Element e = 0; e < size_; ++e) {
    for (Element f = 0; f < size_; ++f) above[e] += (e != f && leq(e, f)) ? 1 : 0;
  }
  std::sort(order.begin(), order.end(), [&](Element a, Element b) { return above[a] < above[b]; });
  std::vector<std::size_t> h(size_, 0);
  for (Element e : order) {
    for (Element f = 0; f < size_; ++f) {
      if (e != f && leq(e, f)) h[e] = std::max(h[e], h[f] + 1);
    }
  }
  return h[bottom_];
}

bool is_monotone(const MonotoneTable& f, const FinitePoset& p, const FinitePoset& q) {
  if (f.size() != p.size()) return false;
  for (Element x : f) {
    if (x >= q.size()) return false;
  }
  for (Element a = 0; a < p.size(); ++a) {
    for (Element b = 0; b < p.size(); ++b) {
      if (p.leq(a, b) && !q.leq(f[a], f[b])) return false;
    }
  }
  return true;
}

std::vector<MonotoneTable> enumerate_monotone(const FinitePoset& p, const FinitePoset& q) {
  std::vector<MonotoneTable> out;
  MonotoneTable current(p.size());
  auto extend = [&](auto&& self, Element x) -> void {
    if (x == p.size()) {
      out.push_back(current);
      return;
    }
    for (Element v = 0; v < q.size(); ++v) {
      bool ok = true;
      for (Element y = 0; y < x && ok; ++y) {
        if (p.leq(y, x) && !q.leq(current[y], v)) ok = false;
        if (p.leq(x, y) && !q.leq(v, current[y])) ok = false;
      }
      if (!ok) continue;
      current[x] = v;
      self(self, x + 1);
    }
  };
  extend(extend, 0);
  return out;
}

std::optional<Element> Model::find_map(std::size_t n, const MonotoneTable& table) const {
  const auto& idx = index_.at(n);
  auto it = idx.find(table);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

Element Model::app(Element a, Element b) const {
  std::size_t k = rank() - 1;
  return embed_[k][maps_[k][a][project_[k][b]]];
}

Element Model::fold(const std::function<Element(Element)>& f) const {
  std::size_t k = rank() - 1;
  MonotoneTable table(levels_[k].size());
  for (Element x = 0; x < table.size(); ++x) table[x] = project_[k][f(embed_[k][x])];
  auto found = find_map(k, table);
  if (!found) throw ModelError("fold applied to a non-monotone function");
  return *found;
}

Element Model::fold(const MonotoneTable& f) const {
  return fold([&](Element x) { return f.at(x); });
}

MonotoneTable Model::unfold(Element d) const {
  std::size_t k = rank() - 1;
  MonotoneTable out(size());
  for (Element y = 0; y < out.size(); ++y) out[y] = embed_[k][maps_[k][d][project_[k][y]]];
  return out;
}

Element Model::apply_op(const std::string& symbol, const std::vector<Element>& args) const {
  auto it = ops_.find(symbol);
  if (it == ops_.end()) throw ModelError("model has no table for operation '" + symbol + "'");
  const OpTable& op = it->second;
  if (args.size() != op.arity) throw ModelError("operation '" + symbol + "' applied to the wrong number of arguments");
  std::size_t row = 0;
  for (Element a : args) row = row * size() + a;
  return op.values[row];
}

Model build_tower(std::size_t n, std::size_t base) {
  if (n == 0) throw ModelError("tower rank must be at least 1");
  if (base == 0) throw ModelError("base chain must be non-empty");
  Model m;
  m.levels_.push_back(FinitePoset::chain(base));
  for (std::size_t k = 0; k < n; ++k) {
    const FinitePoset d = m.levels_[k];
    m.maps_.push_back(enumerate_monotone(d, d));
    const auto& maps = m.maps_[k];
    m.levels_.push_back(FinitePoset::pointwise(maps, d));
    std::map<MonotoneTable, Element> idx;
    for (Element e = 0; e < maps.size(); ++e) idx.emplace(maps[e], e);
    m.index_.push_back(std::move(idx));

    std::vector<Element> e(d.size());
    std::vector<Element> j(maps.size());
    if (k == 0) {
      for (Element x = 0; x < d.size(); ++x) e[x] = m.index_[0].at(MonotoneTable(d.size(), x));
      for (Element f = 0; f < maps.size(); ++f) j[f] = maps[f][d.bottom()];
    } else {
      const auto& lower = m.maps_[k - 1];
      const auto& e_prev = m.embed_[k - 1];
      const auto& j_prev = m.project_[k - 1];
      // e_k(f) = e_{k-1} . f . j_{k-1} for f in D_k
      for (Element f = 0; f < d.size(); ++f) {
        MonotoneTable t(d.size());
        for (Element x = 0; x < d.size(); ++x) t[x] = e_prev[lower[f][j_prev[x]]];
        e[f] = m.index_[k].at(t);
      }
      // j_k(g) = j_{k-1} . g . e_{k-1} for g in D_{k+1}
      for (Element g = 0; g < maps.size(); ++g) {
        MonotoneTable t(m.levels_[k - 1].size());
        for (Element x = 0; x < t.size(); ++x) t[x] = j_prev[maps[g][e_prev[x]]];
        j[g] = m.index_[k - 1].at(t);
      }
    }
    m.embed_.push_back(std::move(e));
    m.project_.push_back(std::move(j));
  }
  return m;
}

std::string element_name(Element e) { return "#" + std::to_string(e); }

Element parse_element(const std::string& text, std::size_t size) {
  if (text.size() < 2 || text[0] != '#' ||
      !std::all_of(text.begin() + 1, text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ModelError("malformed element '" + text + "'");
  }
  if (text.size() > 20) throw ModelError("element '" + text + "' out of range");
  Element e = std::stoull(text.substr(1));
  if (e >= size) throw ModelError("element '" + text + "' out of range (model has " + std::to_string(size) + ")");
  return e;
}

}  // namespace hors
