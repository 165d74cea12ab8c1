#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fmopt {

/// Dense 0/1 input vector of the problem dimension N. Validated on
/// construction; immutable afterwards. Lexicographic ordering (0 before 1)
/// is the tie-break order used throughout.
class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(std::vector<std::uint8_t> bits);

  static BinaryVector zeros(std::size_t n);
  static BinaryVector from_string(std::string_view s);  // e.g. "0101"

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  std::string to_string() const;

  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;
  friend auto operator<=>(const BinaryVector&, const BinaryVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace fmopt
