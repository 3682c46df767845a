#include "recollab/sparse_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "recollab/errors.hpp"

namespace recollab {

SparseTensor3::SparseTensor3(std::size_t di, std::size_t dj, std::size_t dt)
    : dims_{di, dj, dt} {}

SparseTensor3 SparseTensor3::from_entries(std::size_t di, std::size_t dj, std::size_t dt,
                                          std::vector<TensorEntry> entries) {
  for (const auto& e : entries) {
    if (e.i >= di || e.j >= dj || e.t >= dt)
      throw std::invalid_argument("tensor entry (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + "," + std::to_string(e.t) +
                                  ") outside dims");
    if (!std::isfinite(e.value)) throw ComputeError("non-finite tensor value");
  }
  std::sort(entries.begin(), entries.end(), [](const TensorEntry& a, const TensorEntry& b) {
    return std::tie(a.i, a.j, a.t) < std::tie(b.i, b.j, b.t);
  });
  // Merge duplicate coordinates, then drop anything that cancelled to zero.
  std::vector<TensorEntry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j &&
        merged.back().t == e.t) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const TensorEntry& e) { return e.value == 0.0; });

  SparseTensor3 tensor(di, dj, dt);
  tensor.entries_ = std::move(merged);
  return tensor;
}

double SparseTensor3::sum() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.value;
  return total;
}

double SparseTensor3::norm() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.value * e.value;
  return std::sqrt(total);
}

double SparseTensor3::at(std::size_t i, std::size_t j, std::size_t t) const {
  TensorEntry probe{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                    static_cast<std::uint32_t>(t), 0.0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), probe,
                             [](const TensorEntry& a, const TensorEntry& b) {
                               return std::tie(a.i, a.j, a.t) < std::tie(b.i, b.j, b.t);
                             });
  if (it != entries_.end() && it->i == probe.i && it->j == probe.j && it->t == probe.t)
    return it->value;
  return 0.0;
}

void SparseTensor3::dump(std::ostream& out) const {
  out << "dims " << dims_[0] << ' ' << dims_[1] << ' ' << dims_[2] << '\n';
  char buf[64];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.value);
    out << e.i << ' ' << e.j << ' ' << e.t << ' ' << buf << '\n';
  }
}

SparseTensor3 SparseTensor3::load(std::istream& in) {
  std::string header;
  std::size_t di = 0, dj = 0, dt = 0;
  if (!(in >> header >> di >> dj >> dt) || header != "dims")
    throw ParseError("tensor dump must start with a \"dims I J T\" header");
  std::vector<TensorEntry> entries;
  TensorEntry e;
  while (in >> e.i >> e.j >> e.t >> e.value) entries.push_back(e);
  if (!in.eof() && in.fail()) throw ParseError("malformed tensor dump line");
  return from_entries(di, dj, dt, std::move(entries));
}

}  // namespace recollab
