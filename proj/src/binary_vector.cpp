#include "fmopt/binary_vector.hpp"

#include "fmopt/errors.hpp"

namespace fmopt {

BinaryVector::BinaryVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1) {
      throw Error(ErrorKind::InvalidArgument,
                  "BinaryVector: element " + std::to_string(i) + " is not 0/1");
    }
  }
}

BinaryVector BinaryVector::zeros(std::size_t n) {
  return BinaryVector(std::vector<std::uint8_t>(n, 0));
}

BinaryVector BinaryVector::from_string(std::string_view s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("BinaryVector: bad character '") + c + "' in bitstring");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BinaryVector(std::move(bits));
}

std::string BinaryVector::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (std::uint8_t b : bits_) {
    s.push_back(b ? '1' : '0');
  }
  return s;
}

}  // namespace fmopt
