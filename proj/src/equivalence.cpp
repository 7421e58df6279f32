#include "whichway/equivalence.hpp"

#include <algorithm>
#include <numeric>

namespace whichway {

namespace {

std::vector<RankOneElement> rank_one_view(const Measurement& m) {
  if (auto r = m.as_rank_one()) return *r;
  if (m.dim() != 2) throw DimensionMismatch("equivalence: qubit measurements only");
  return rank_one_refine(m).rank_one();
}

bool same_multiset(const std::vector<RankOneElement>& a, const std::vector<RankOneElement>& b,
                   double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool found = false;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      if (std::abs(x.weight - b[k].weight) <= tol && (x.direction - b[k].direction).norm() <= tol) {
        used[k] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::vector<RankOneElement> merged_elements(const Measurement& m, double direction_tol,
                                            double weight_floor) {
  auto elements = rank_one_view(m);
  std::stable_sort(elements.begin(), elements.end(),
                   [](const auto& l, const auto& r) { return l.weight > r.weight; });
  std::vector<RankOneElement> clusters;
  std::vector<BlochVector> sums;
  for (const auto& e : elements) {
    bool merged = false;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      if ((clusters[k].direction - e.direction).norm() <= direction_tol) {
        clusters[k].weight += e.weight;
        sums[k] += e.weight * e.direction;
        clusters[k].direction = sums[k].normalized();
        merged = true;
        break;
      }
    }
    if (!merged) {
      clusters.push_back(e);
      sums.push_back(e.weight * e.direction);
    }
  }
  std::erase_if(clusters, [&](const auto& c) { return c.weight < weight_floor; });
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const auto& l, const auto& r) { return l.weight > r.weight; });
  return clusters;
}

std::vector<Eigen::Matrix3d> ensemble_symmetries(const DetectorEnsemble& e, double tol) {
  const auto& n = e.bloch_vectors();
  const auto& zeta = e.populations();
  std::vector<Eigen::Matrix3d> found{Eigen::Matrix3d::Identity()};
  auto known = [&](const Eigen::Matrix3d& o) {
    return std::any_of(found.begin(), found.end(),
                       [&](const auto& f) { return (f - o).cwiseAbs().maxCoeff() <= 1e-8; });
  };

  std::vector<std::size_t> perm(n.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool populations_match = true;
    Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (std::abs(zeta[i] - zeta[perm[i]]) > tol) populations_match = false;
      cross += n[perm[i]] * n[i].transpose();
    }
    if (!populations_match) continue;
    // Orthogonal Procrustes; with coplanar vectors the component normal to
    // the plane is free, so both signs are tried.
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    for (double sign : {1.0, -1.0}) {
      Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
      flip(2, 2) = sign;
      const Eigen::Matrix3d o = svd.matrixU() * flip * svd.matrixV().transpose();
      bool maps = true;
      for (std::size_t i = 0; i < n.size() && maps; ++i) {
        maps = (o * n[i] - n[perm[i]]).norm() <= std::max(tol, 1e-9);
      }
      if (maps && !known(o)) found.push_back(o);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

bool equivalent(const Measurement& a, const Measurement& b, double tol,
                std::span<const Eigen::Matrix3d> symmetries) {
  const auto lhs = merged_elements(a, tol, tol);
  const auto rhs = merged_elements(b, tol, tol);
  if (same_multiset(lhs, rhs, tol)) return true;
  for (const auto& o : symmetries) {
    auto mapped = rhs;
    for (auto& e : mapped) e.direction = o * e.direction;
    if (same_multiset(lhs, mapped, tol)) return true;
  }
  return false;
}

}  // namespace whichway
