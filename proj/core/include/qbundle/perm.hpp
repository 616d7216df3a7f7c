#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qbundle {

// Permutation of {1..N}. The public interface is 1-based; storage is 0-based.
// Composition follows function application: compose(p, q) maps k to p(q(k)).
class Permutation {
 public:
  Permutation() = default;

  // images are 1-based: images[k-1] = p(k); rejects non-bijections
  explicit Permutation(const std::vector<int>& one_based_images);

  static Permutation identity(int n);
  // transposition (a b) in S_n, 1-based
  static Permutation transposition(int n, int a, int b);
  // all n! elements, lexicographic by image table
  static std::vector<Permutation> all(int n);

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int k) const { return img_[k - 1] + 1; }  // 1-based
  int image0(int k) const { return img_[k]; }              // 0-based

  Permutation inverse() const;
  int sign() const;
  bool is_identity() const;

  // apply to a tuple: result[k] = v[p(k)], matching the action on
  // configuration tuples used throughout the library
  template <typename T>
  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> out(v.size());
    for (std::size_t k = 0; k < img_.size(); ++k) out[k] = v[img_[k]];
    return out;
  }

  bool operator==(const Permutation& o) const { return img_ == o.img_; }
  bool operator!=(const Permutation& o) const { return img_ != o.img_; }
  bool operator<(const Permutation& o) const { return img_ < o.img_; }

 private:
  std::vector<int> img_;  // 0-based images
};

// p after q: (compose(p,q))(k) = p(q(k))
Permutation compose(const Permutation& p, const Permutation& q);

// Sign of the permutation acting block-wise on d-dimensional slots: each of
// the N slots carries d coordinates, so the blocked permutation of N*d letters
// has sign(p)^d.
int block_sign(const Permutation& p, int d);

// One braid generator or its inverse: generator index i in [1, strands-1],
// exponent +1 or -1.
struct BraidLetter {
  int generator = 1;
  int exponent = 1;
};

// Word in the braid group on a fixed number of strands.
class BraidWord {
 public:
  BraidWord(int strands, std::vector<BraidLetter> letters);

  int strands() const { return strands_; }
  const std::vector<BraidLetter>& letters() const { return letters_; }

  BraidWord concat(const BraidWord& tail) const;
  int exponent_sum() const;

 private:
  int strands_ = 2;
  std::vector<BraidLetter> letters_;
};

// Underlying permutation: the letters are multiplied left to right, i.e.
// word (l1 l2 ... lk) maps to compose(t(l1), compose(t(l2), ... t(lk))),
// so concatenation of words maps to composition in the same order.
Permutation braid_to_permutation(const BraidWord& w);

// Abelian exchange character: exp(i * beta * exponent_sum). beta = 0 and
// beta = pi give the two sign characters of the symmetric group.
std::complex<double> braid_character(const BraidWord& w, double beta);

}
