#pragma once

// Finite CPOs and the function-space tower D_0, D_1 = [D_0 -> D_0], ...
//
// At finite rank the retraction runs the other way round from the infinite
// model: fold . unfold = id on D and unfold . fold <= id on [D -> D].

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hors {

using Element = std::size_t;

// A total table P -> Q given by the image of each element of P.
using MonotoneTable = std::vector<Element>;

class FinitePoset {
 public:
  FinitePoset() = default;
  // `leq` is row-major, size*size. Throws InvariantError unless it is a
  // partial order with least element.
  FinitePoset(std::size_t size, std::vector<bool> leq);

  static FinitePoset chain(std::size_t n);
  // Distinct monotone tables into `q` under the pointwise order. Small posets
  // get a materialized order table; large ones compare tables on demand.
  static FinitePoset pointwise(std::vector<MonotoneTable> maps, const FinitePoset& q);

  std::size_t size() const { return size_; }
  bool leq(Element a, Element b) const { return dense_ ? leq_[a * size_ + b] : pointwise_leq(a, b); }
  Element bottom() const { return bottom_; }
  std::optional<Element> join(Element a, Element b) const;
  std::optional<Element> meet(Element a, Element b) const;
  std::optional<Element> top() const;
  // Edges on a longest chain.
  std::size_t height() const;

 private:
  struct Pointwise;
  bool pointwise_leq(Element a, Element b) const;
  std::optional<Element> pointwise_combine(Element a, Element b, bool join) const;

  std::size_t size_ = 0;
  bool dense_ = true;
  std::vector<bool> leq_;
  Element bottom_ = 0;
  std::shared_ptr<const Pointwise> pointwise_;
};

bool is_monotone(const MonotoneTable& f, const FinitePoset& p, const FinitePoset& q);

// Every monotone map P -> Q exactly once, in lexicographic order of the
// output sequences. The constant-bottom map comes first when Q's bottom is
// element 0.
std::vector<MonotoneTable> enumerate_monotone(const FinitePoset& p, const FinitePoset& q);

struct OpTable {
  std::size_t arity = 0;
  // Row-major over D^arity, first argument most significant.
  std::vector<Element> values;
};

class Model {
 public:
  std::size_t rank() const { return levels_.size() - 1; }
  const FinitePoset& level(std::size_t n) const { return levels_.at(n); }
  const FinitePoset& domain() const { return levels_.back(); }
  std::size_t size() const { return domain().size(); }

  // Elements of D_{n+1} as tables over D_n.
  const std::vector<MonotoneTable>& maps(std::size_t n) const { return maps_.at(n); }
  // e_n : D_n -> D_{n+1} and j_n : D_{n+1} -> D_n.
  const std::vector<Element>& embed(std::size_t n) const { return embed_.at(n); }
  const std::vector<Element>& project(std::size_t n) const { return project_.at(n); }

  // Index of the D_{n+1} element with the given table, if it is one.
  std::optional<Element> find_map(std::size_t n, const MonotoneTable& table) const;

  Element app(Element a, Element b) const;
  // fold(f) for f : D -> D; only the values of f at the embedded points
  // e(x), x in D_{N-1}, are consulted.
  Element fold(const std::function<Element(Element)>& f) const;
  Element fold(const MonotoneTable& f) const;
  MonotoneTable unfold(Element d) const;

  std::map<std::string, OpTable>& ops() { return ops_; }
  const std::map<std::string, OpTable>& ops() const { return ops_; }
  Element apply_op(const std::string& symbol, const std::vector<Element>& args) const;

  friend Model build_tower(std::size_t n, std::size_t base);

 private:
  std::vector<FinitePoset> levels_;
  std::vector<std::vector<MonotoneTable>> maps_;
  std::vector<std::map<MonotoneTable, Element>> index_;
  std::vector<std::vector<Element>> embed_;
  std::vector<std::vector<Element>> project_;
  std::map<std::string, OpTable> ops_;
};

// D_0 is the `base`-element chain. Throws ModelError for n = 0.
Model build_tower(std::size_t n, std::size_t base = 2);

std::string element_name(Element e);
// Parses `#i`; throws ModelError when malformed or out of range.
Element parse_element(const std::string& text, std::size_t size);

}  // namespace hors
