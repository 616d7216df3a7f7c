#include "qbundle/perm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qbundle/errors.hpp"

namespace qbundle {

Permutation::Permutation(const std::vector<int>& one_based_images) {
  const int n = static_cast<int>(one_based_images.size());
  img_.resize(n);
  std::vector<bool> seen(n, false);
  for (int k = 0; k < n; ++k) {
    const int v = one_based_images[k];
    if (v < 1 || v > n || seen[v - 1])
      throw SizeError("permutation image table is not a bijection of {1..N}");
    seen[v - 1] = true;
    img_[k] = v - 1;
  }
}

Permutation Permutation::identity(int n) {
  Permutation p;
  p.img_.resize(n);
  std::iota(p.img_.begin(), p.img_.end(), 0);
  return p;
}

Permutation Permutation::transposition(int n, int a, int b) {
  if (a < 1 || a > n || b < 1 || b > n || a == b)
    throw SizeError("transposition needs two distinct points of {1..N}");
  Permutation p = identity(n);
  std::swap(p.img_[a - 1], p.img_[b - 1]);
  return p;
}

std::vector<Permutation> Permutation::all(int n) {
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 1);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(images));
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.img_.resize(img_.size());
  for (std::size_t k = 0; k < img_.size(); ++k) p.img_[img_[k]] = static_cast<int>(k);
  return p;
}

int Permutation::sign() const {
  // (-1)^(n - number of cycles)
  const int n = size();
  std::vector<bool> seen(n, false);
  int cycles = 0;
  for (int k = 0; k < n; ++k) {
    if (seen[k]) continue;
    ++cycles;
    int j = k;
    while (!seen[j]) {
      seen[j] = true;
      j = img_[j];
    }
  }
  return ((n - cycles) % 2 == 0) ? 1 : -1;
}

bool Permutation::is_identity() const {
  for (std::size_t k = 0; k < img_.size(); ++k)
    if (img_[k] != static_cast<int>(k)) return false;
  return true;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw SizeError("composing permutations of different sizes");
  std::vector<int> images(p.size());
  for (int k = 1; k <= p.size(); ++k) images[k - 1] = p(q(k));
  return Permutation(images);
}

int block_sign(const Permutation& p, int d) {
  if (d < 1) throw DomainError("block_sign needs d >= 1");
  return (d % 2 == 0) ? 1 : p.sign();
}

BraidWord::BraidWord(int strands, std::vector<BraidLetter> letters)
    : strands_(strands), letters_(std::move(letters)) {
  if (strands_ < 2) throw SizeError("braid words need at least two strands");
  for (const auto& l : letters_) {
    if (l.generator < 1 || l.generator >= strands_)
      throw SizeError("braid generator index out of range");
    if (l.exponent != 1 && l.exponent != -1)
      throw SizeError("braid letter exponent must be +1 or -1");
  }
}

BraidWord BraidWord::concat(const BraidWord& tail) const {
  if (strands_ != tail.strands_) throw SizeError("concatenating braid words on different strand counts");
  std::vector<BraidLetter> letters = letters_;
  letters.insert(letters.end(), tail.letters_.begin(), tail.letters_.end());
  return BraidWord(strands_, std::move(letters));
}

int BraidWord::exponent_sum() const {
  int s = 0;
  for (const auto& l : letters_) s += l.exponent;
  return s;
}

Permutation braid_to_permutation(const BraidWord& w) {
  Permutation p = Permutation::identity(w.strands());
  for (const auto& l : w.letters())
    p = compose(p, Permutation::transposition(w.strands(), l.generator, l.generator + 1));
  return p;
}

std::complex<double> braid_character(const BraidWord& w, double beta) {
  const double phase = beta * w.exponent_sum();
  return {std::cos(phase), std::sin(phase)};
}

}
