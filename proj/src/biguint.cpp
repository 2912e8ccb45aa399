#include "bbg/biguint.hpp"

#include <algorithm>
#include <stdexcept>

namespace bbg {

BigUint::BigUint(uint64_t v) {
  if (v != 0)
    limbs_.push_back(v);
}

BigUint BigUint::from_u128(unsigned __int128 v) {
  BigUint r;
  if (v != 0) {
    r.limbs_.push_back(static_cast<uint64_t>(v));
    uint64_t hi = static_cast<uint64_t>(v >> 64);
    if (hi != 0)
      r.limbs_.push_back(hi);
  }
  return r;
}

BigUint BigUint::from_decimal(std::string_view s) {
  if (s.empty())
    throw std::invalid_argument("BigUint: empty decimal string");
  BigUint r;
  for (char c : s) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("BigUint: bad decimal digit");
    // r = r*10 + digit
    unsigned __int128 carry = static_cast<unsigned>(c - '0');
    for (auto &w : r.limbs_) {
      unsigned __int128 t = static_cast<unsigned __int128>(w) * 10 + carry;
      w = static_cast<uint64_t>(t);
      carry = t >> 64;
    }
    while (carry != 0) {
      r.limbs_.push_back(static_cast<uint64_t>(carry));
      carry >>= 64;
    }
  }
  return r;
}

std::string BigUint::to_decimal() const {
  if (is_zero())
    return "0";
  std::vector<uint64_t> tmp = limbs_;
  std::string out;
  while (!tmp.empty()) {
    unsigned __int128 rem = 0;
    for (size_t i = tmp.size(); i-- > 0;) {
      unsigned __int128 cur = (rem << 64) | tmp[i];
      tmp[i] = static_cast<uint64_t>(cur / 10);
      rem = cur % 10;
    }
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(rem)));
    while (!tmp.empty() && tmp.back() == 0)
      tmp.pop_back();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void BigUint::trim() {
  while (!limbs_.empty() && limbs_.back() == 0)
    limbs_.pop_back();
}

size_t BigUint::bit_length() const {
  if (limbs_.empty())
    return 0;
  uint64_t top = limbs_.back();
  size_t bits = (limbs_.size() - 1) * 64;
  while (top != 0) {
    ++bits;
    top >>= 1;
  }
  return bits;
}

bool BigUint::bit(size_t i) const {
  size_t limb = i / 64;
  if (limb >= limbs_.size())
    return false;
  return (limbs_[limb] >> (i % 64)) & 1u;
}

size_t BigUint::two_adic_valuation() const {
  if (is_zero())
    return 0;
  size_t v = 0;
  for (uint64_t w : limbs_) {
    if (w == 0) {
      v += 64;
      continue;
    }
    v += static_cast<size_t>(__builtin_ctzll(w));
    break;
  }
  return v;
}

BigUint BigUint::operator+(const BigUint &rhs) const {
  BigUint r;
  size_t n = std::max(limbs_.size(), rhs.limbs_.size());
  r.limbs_.resize(n, 0);
  unsigned __int128 carry = 0;
  for (size_t i = 0; i < n; ++i) {
    unsigned __int128 t = carry;
    if (i < limbs_.size())
      t += limbs_[i];
    if (i < rhs.limbs_.size())
      t += rhs.limbs_[i];
    r.limbs_[i] = static_cast<uint64_t>(t);
    carry = t >> 64;
  }
  if (carry != 0)
    r.limbs_.push_back(static_cast<uint64_t>(carry));
  return r;
}

BigUint BigUint::operator-(const BigUint &rhs) const {
  if (compare(rhs) < 0)
    throw std::invalid_argument("BigUint: negative subtraction result");
  BigUint r;
  r.limbs_.resize(limbs_.size(), 0);
  unsigned __int128 borrow = 0;
  for (size_t i = 0; i < limbs_.size(); ++i) {
    unsigned __int128 sub = borrow;
    if (i < rhs.limbs_.size())
      sub += rhs.limbs_[i];
    if (limbs_[i] >= sub) {
      r.limbs_[i] = static_cast<uint64_t>(limbs_[i] - sub);
      borrow = 0;
    } else {
      r.limbs_[i] = static_cast<uint64_t>((static_cast<unsigned __int128>(1) << 64) + limbs_[i] - sub);
      borrow = 1;
    }
  }
  r.trim();
  return r;
}

BigUint BigUint::operator*(const BigUint &rhs) const {
  if (is_zero() || rhs.is_zero())
    return BigUint();
  BigUint r;
  r.limbs_.assign(limbs_.size() + rhs.limbs_.size(), 0);
  for (size_t i = 0; i < limbs_.size(); ++i) {
    unsigned __int128 carry = 0;
    for (size_t j = 0; j < rhs.limbs_.size(); ++j) {
      unsigned __int128 t = static_cast<unsigned __int128>(limbs_[i]) * rhs.limbs_[j] +
                            r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<uint64_t>(t);
      carry = t >> 64;
    }
    size_t k = i + rhs.limbs_.size();
    while (carry != 0) {
      unsigned __int128 t = static_cast<unsigned __int128>(r.limbs_[k]) + carry;
      r.limbs_[k] = static_cast<uint64_t>(t);
      carry = t >> 64;
      ++k;
    }
  }
  r.trim();
  return r;
}

BigUint BigUint::shifted_right(size_t bits) const {
  size_t limbshift = bits / 64;
  size_t bitshift = bits % 64;
  if (limbshift >= limbs_.size())
    return BigUint();
  BigUint r;
  r.limbs_.assign(limbs_.begin() + static_cast<long>(limbshift), limbs_.end());
  if (bitshift != 0) {
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
      uint64_t lo = r.limbs_[i] >> bitshift;
      uint64_t hi = (i + 1 < r.limbs_.size()) ? (r.limbs_[i + 1] << (64 - bitshift)) : 0;
      r.limbs_[i] = lo | hi;
    }
  }
  r.trim();
  return r;
}

BigUint BigUint::shifted_left(size_t bits) const {
  if (is_zero())
    return BigUint();
  size_t limbshift = bits / 64;
  size_t bitshift = bits % 64;
  BigUint r;
  r.limbs_.assign(limbshift, 0);
  r.limbs_.insert(r.limbs_.end(), limbs_.begin(), limbs_.end());
  if (bitshift != 0) {
    uint64_t carry = 0;
    for (size_t i = limbshift; i < r.limbs_.size(); ++i) {
      uint64_t nw = (r.limbs_[i] << bitshift) | carry;
      carry = r.limbs_[i] >> (64 - bitshift);
      r.limbs_[i] = nw;
    }
    if (carry != 0)
      r.limbs_.push_back(carry);
  }
  return r;
}

uint64_t BigUint::mod_u64(uint64_t m) const {
  if (m == 0)
    throw std::invalid_argument("BigUint: mod by zero");
  unsigned __int128 rem = 0;
  for (size_t i = limbs_.size(); i-- > 0;)
    rem = ((rem << 64) | limbs_[i]) % m;
  return static_cast<uint64_t>(rem);
}

BigUint BigUint::div_u64(uint64_t d) const {
  if (d == 0)
    throw std::invalid_argument("BigUint: division by zero");
  BigUint r;
  r.limbs_.resize(limbs_.size(), 0);
  unsigned __int128 rem = 0;
  for (size_t i = limbs_.size(); i-- > 0;) {
    unsigned __int128 cur = (rem << 64) | limbs_[i];
    r.limbs_[i] = static_cast<uint64_t>(cur / d);
    rem = cur % d;
  }
  r.trim();
  return r;
}

std::pair<BigUint, BigUint> BigUint::divmod(const BigUint &d) const {
  if (d.is_zero())
    throw std::invalid_argument("BigUint: division by zero");
  if (compare(d) < 0)
    return {BigUint(), *this};
  if (d.limbs_.size() == 1) {
    BigUint q = div_u64(d.limbs_[0]);
    return {q, BigUint(mod_u64(d.limbs_[0]))};
  }
  size_t shift = bit_length() - d.bit_length();
  BigUint rem = *this;
  BigUint quot;
  quot.limbs_.assign(shift / 64 + 1, 0);
  BigUint cur = d.shifted_left(shift);
  for (size_t i = shift + 1; i-- > 0;) {
    if (rem.compare(cur) >= 0) {
      rem = rem - cur;
      quot.limbs_[i / 64] |= (1ull << (i % 64));
    }
    cur = cur.shifted_right(1);
  }
  quot.trim();
  return {quot, rem};
}

BigUint BigUint::gcd(BigUint a, BigUint b) {
  if (a.is_zero())
    return b;
  if (b.is_zero())
    return a;
  size_t av = a.two_adic_valuation();
  size_t bv = b.two_adic_valuation();
  size_t common = std::min(av, bv);
  a = a.shifted_right(av);
  b = b.shifted_right(bv);
  while (a != b) {
    if (a.compare(b) > 0) {
      a = a - b;
      a = a.shifted_right(a.two_adic_valuation());
    } else {
      b = b - a;
      b = b.shifted_right(b.two_adic_valuation());
    }
  }
  return a.shifted_left(common);
}

BigUint BigUint::lcm(const BigUint &a, const BigUint &b) {
  if (a.is_zero() || b.is_zero())
    return BigUint();
  return a.divmod(gcd(a, b)).first * b;
}

int BigUint::compare(const BigUint &rhs) const {
  if (limbs_.size() != rhs.limbs_.size())
    return limbs_.size() < rhs.limbs_.size() ? -1 : 1;
  for (size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != rhs.limbs_[i])
      return limbs_[i] < rhs.limbs_[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace bbg
