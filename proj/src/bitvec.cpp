#include "xorcount/bitvec.hpp"

#include "xorcount/error.hpp"

namespace xorcount {

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw ParseError("bit string may only contain 0 and 1");
    }
  }
  return v;
}

BitVector BitVector::from_word(std::uint64_t value, std::size_t size) {
  if (size > 64) throw DimensionError("from_word: size above 64");
  BitVector v(size);
  if (size > 0) v.words_[0] = size == 64 ? value : value & ((std::uint64_t{1} << size) - 1);
  return v;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

}  // namespace xorcount
