#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace recollab {

struct TensorEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t t = 0;
  double value = 0.0;

  bool operator==(const TensorEntry&) const = default;
};

/// 3-way sparse tensor in canonical coordinate-list form: entries sorted by
/// (i,j,t), one entry per coordinate, no explicit zeros, all values finite.
class SparseTensor3 {
 public:
  SparseTensor3() = default;
  SparseTensor3(std::size_t di, std::size_t dj, std::size_t dt);

  /// Canonicalize a raw coordinate list: bounds-check, sort, sum duplicates,
  /// drop zeros. Throws on out-of-range coordinates or non-finite values.
  static SparseTensor3 from_entries(std::size_t di, std::size_t dj, std::size_t dt,
                                    std::vector<TensorEntry> entries);

  const std::array<std::size_t, 3>& dims() const { return dims_; }
  std::size_t dim(int mode) const { return dims_[static_cast<std::size_t>(mode)]; }
  const std::vector<TensorEntry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  double sum() const;
  double norm() const;  // Frobenius
  double at(std::size_t i, std::size_t j, std::size_t t) const;

  /// Debug text format: header "dims I J T", then one "i j t value" per line.
  void dump(std::ostream& out) const;
  static SparseTensor3 load(std::istream& in);

  bool operator==(const SparseTensor3&) const = default;

 private:
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::vector<TensorEntry> entries_;
};

}  // namespace recollab
