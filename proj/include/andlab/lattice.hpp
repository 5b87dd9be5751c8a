#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Finite box on the d-dimensional integer lattice with periodic wrap, i.e.
// the discrete torus (Z/LZ)^d shifted so the box is centered at a chosen
// origin.  Sites are enumerated row-major; all geometry (neighbors, residues,
// displacements) goes through SiteIndex so the rest of the code never touches
// raw coordinates.

namespace andlab {

// Dense eigensolves are cubic in the volume; keep a hard ceiling so a typo in
// L cannot wedge the machine.  Callers may raise it explicitly.
inline constexpr long kDefaultVolumeCap = 4096;

class SiteIndex {
 public:
  SiteIndex(int d, int L, std::vector<long> origin)
      : d_(d), side_(L), origin_(std::move(origin)) {
    volume_ = 1;
    for (int k = 0; k < d_; ++k) volume_ *= side_;
    base_.resize(d_);
    for (int k = 0; k < d_; ++k) base_[k] = origin_[k] - side_ / 2;
  }

  int dim() const { return d_; }
  int side() const { return side_; }
  long volume() const { return volume_; }
  const std::vector<long>& origin() const { return origin_; }

  // Coordinates of site i, in the window [origin - L/2, origin + L/2) per
  // axis.  For origin 0 these are the minimal-image representatives, so a
  // coordinate vector doubles as the displacement from the lattice point 0.
  std::vector<long> coord(long i) const {
    std::vector<long> c(d_);
    for (int k = d_ - 1; k >= 0; --k) {
      c[k] = base_[k] + (i % side_);
      i /= side_;
    }
    return c;
  }

  // Inverse of coord(); accepts any integer vector and wraps it onto the
  // torus.
  long index(const std::vector<long>& c) const {
    if (static_cast<int>(c.size()) != d_)
      throw std::invalid_argument("coordinate dimension mismatch");
    long i = 0;
    for (int k = 0; k < d_; ++k) {
      long u = (c[k] - base_[k]) % side_;
      if (u < 0) u += side_;
      i = i * side_ + u;
    }
    return i;
  }

  // Site reached from i by one step along the given axis (direction +1/-1).
  long neighbor(long i, int axis, int dir) const {
    long stride = 1;
    for (int k = axis + 1; k < d_; ++k) stride *= side_;
    long u = (i / stride) % side_;
    long v = (u + dir + side_) % side_;
    return i + (v - u) * stride;
  }

  // All 2d nearest neighbors of i.
  std::vector<long> neighbors(long i) const {
    std::vector<long> out;
    out.reserve(2 * d_);
    for (int k = 0; k < d_; ++k) {
      out.push_back(neighbor(i, k, +1));
      out.push_back(neighbor(i, k, -1));
    }
    return out;
  }

  // Residue of the site's coordinates mod 4, mapped into {0,1,2,3}^d.  Only
  // meaningful as a torus invariant when 4 divides L.
  std::vector<int> residue4(long i) const {
    std::vector<long> c = coord(i);
    std::vector<int> r(d_);
    for (int k = 0; k < d_; ++k) {
      long m = c[k] % 4;
      r[k] = static_cast<int>(m < 0 ? m + 4 : m);
    }
    return r;
  }

  // Squared Euclidean length of the site's coordinate vector.  With origin 0
  // this is the squared distance from the lattice point 0 in the minimal
  // image.
  long norm2(long i) const {
    long s = 0;
    for (long c : coord(i)) s += c * c;
    return s;
  }

 private:
  int d_;
  int side_;
  long volume_;
  std::vector<long> origin_;
  std::vector<long> base_;
};

inline SiteIndex build_box(int d, int L, std::vector<long> origin = {},
                           long volume_cap = kDefaultVolumeCap) {
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (L < 2) throw std::invalid_argument("side length must be at least 2");
  if (origin.empty()) origin.assign(d, 0);
  if (static_cast<int>(origin.size()) != d)
    throw std::invalid_argument("origin dimension mismatch");
  double vol = 1.0;
  for (int k = 0; k < d; ++k) vol *= L;
  if (vol > static_cast<double>(volume_cap))
    throw std::invalid_argument("volume cap exceeded: " +
                                std::to_string(static_cast<long long>(vol)) +
                                " > " + std::to_string(volume_cap));
  return SiteIndex(d, L, std::move(origin));
}

// Sublattice offset + 4Z^d, stored by its residue class mod 4 together with
// the sites it must avoid.
struct SublatticeSpec {
  std::vector<int> offset;           // residue class in {0,1,2,3}^d
  std::vector<long> excluded_sites;  // box indices the class was chosen to miss

  bool contains(const SiteIndex& box, long i) const {
    return box.residue4(i) == offset;
  }

  std::vector<long> sites(const SiteIndex& box) const {
    std::vector<long> out;
    for (long i = 0; i < box.volume(); ++i)
      if (contains(box, i)) out.push_back(i);
    return out;
  }
};

// Picks the lexicographically smallest residue class mod 4 whose sublattice
// avoids both the lattice point 0 and the given site.  Requires 4 | L so that
// membership is well defined on the torus and the class hits exactly 4^{-d}
// of the box.
inline SublatticeSpec choose_decoupling_sublattice(const SiteIndex& box,
                                                   long avoid_site) {
  if (box.side() % 4 != 0)
    throw std::invalid_argument("L must be divisible by 4");
  long zero = box.index(std::vector<long>(box.dim(), 0));
  std::vector<int> r0 = box.residue4(zero);
  std::vector<int> rk = box.residue4(avoid_site);
  std::vector<int> cand(box.dim(), 0);
  while (true) {
    if (cand != r0 && cand != rk)
      return SublatticeSpec{cand, {zero, avoid_site}};
    int k = box.dim() - 1;
    while (k >= 0 && cand[k] == 3) cand[k--] = 0;
    if (k < 0) break;
    ++cand[k];
  }
  throw std::logic_error("no residue class avoids both sites");
}

}  // namespace andlab
