#include "whichway/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "whichway/equivalence.hpp"

namespace whichway {

namespace {

constexpr double kPlaneTolerance = 1e-12;

std::vector<RankOneElement> require_rank_one(const Measurement& m, const char* where) {
  auto r = m.as_rank_one();
  if (!r) throw InvalidMeasurement(std::string(where) + ": rank-one qubit measurement required");
  return *r;
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

BlochVector mirror_z_axis(const BlochVector& v) { return {-v.x(), v.y(), v.z()}; }

double information(const Measurement& m, const DetectorEnsemble& e, const Criterion& c) {
  return average_information(c, posteriors(e, m)).average;
}

}  // namespace

BlochVector ensemble_plane_normal(const DetectorEnsemble& e) {
  const auto& n = e.bloch_vectors();
  if (std::all_of(n.begin(), n.end(), [](const auto& v) { return std::abs(v.y()) <= kPlaneTolerance; })) {
    return BlochVector::UnitY();
  }
  Eigen::Matrix3Xd columns(3, static_cast<Eigen::Index>(n.size()));
  for (std::size_t i = 0; i < n.size(); ++i) columns.col(static_cast<Eigen::Index>(i)) = n[i];
  Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(columns, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  if (sv.size() >= 3 && sv(2) > 1e-9) {
    throw NonCoplanarEnsemble("detector Bloch vectors are not coplanar");
  }
  BlochVector normal = svd.matrixU().col(2);
  // Sign: first clearly nonzero component positive.
  for (int k = 0; k < 3; ++k) {
    if (std::abs(normal(k)) > 1e-12) {
      if (normal(k) < 0.0) normal = -normal;
      break;
    }
  }
  return normal.normalized();
}

Measurement mirror_about_plane(const Measurement& m, const BlochVector& normal) {
  std::vector<RankOneElement> out;
  for (const auto& e : require_rank_one(m, "mirror_about_plane")) {
    const double off = e.direction.dot(normal);
    if (std::abs(off) <= kPlaneTolerance) {
      out.push_back(e);
      continue;
    }
    out.push_back({0.5 * e.weight, e.direction});
    out.push_back({0.5 * e.weight, (e.direction - 2.0 * off * normal).normalized()});
  }
  return Measurement::from_rank_one(std::move(out));
}

Measurement symmetrize_to_plane(const Measurement& m, const DetectorEnsemble& e) {
  const BlochVector normal = ensemble_plane_normal(e);
  // In-plane reference direction for elements that project to the origin.
  BlochVector reference = BlochVector::UnitX();
  if (std::abs(reference.dot(normal)) > 0.9) reference = BlochVector::UnitZ();
  reference = (reference - reference.dot(normal) * normal).normalized();

  const auto mirrored = mirror_about_plane(m, normal).rank_one();
  std::vector<RankOneElement> out;
  for (std::size_t k = 0; k < mirrored.size(); ++k) {
    const auto& el = mirrored[k];
    const double off = el.direction.dot(normal);
    if (std::abs(off) <= kPlaneTolerance) {
      out.push_back(el);
      continue;
    }
    // el and mirrored[k + 1] form a mirror pair sharing this projection.
    const BlochVector p = el.direction - off * normal;
    const double p_norm = p.norm();
    const double t = std::sqrt(std::max(0.0, 1.0 - p_norm * p_norm));
    const BlochVector across = p_norm > 1e-12 ? BlochVector(normal.cross(p / p_norm)) : reference;
    out.push_back({el.weight, (p + t * across).normalized()});
    out.push_back({el.weight, (p - t * across).normalized()});
    ++k;
  }
  return Measurement::from_rank_one(std::move(out));
}

SymmetricPovm::SymmetricPovm(std::vector<MirrorPair> pairs) : pairs_(std::move(pairs)) {
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    if (defect_of(pairs_[k]) > kValidityTolerance) {
      std::ostringstream msg;
      msg << "symmetric POVM: pair " << k << " is not mirror symmetric about the z axis";
      throw ValidationError(msg.str());
    }
  }
}

double SymmetricPovm::defect_of(const MirrorPair& p) {
  return std::abs(p.primed.weight - p.double_primed.weight) +
         (p.double_primed.direction - mirror_z_axis(p.primed.direction)).norm() +
         std::abs(p.primed.direction.y());
}

double SymmetricPovm::symmetry_defect() const {
  double worst = 0.0;
  for (const auto& p : pairs_) worst = std::max(worst, defect_of(p));
  return worst;
}

Measurement SymmetricPovm::flatten() const {
  std::vector<RankOneElement> out;
  for (const auto& p : pairs_) {
    out.push_back(p.primed);
    out.push_back(p.double_primed);
  }
  return Measurement::from_rank_one(std::move(out));
}

SymmetricPovm symmetrize_about_axis(const Measurement& m) {
  std::vector<MirrorPair> pairs;
  for (const auto& e : require_rank_one(m, "symmetrize_about_axis")) {
    if (std::abs(e.direction.y()) > kValidityTolerance) {
      throw ValidationError("symmetrize_about_axis: element outside the xz plane");
    }
    if (e.weight < kEigenvalueFloor) continue;
    const BlochVector in_plane = BlochVector(e.direction.x(), 0.0, e.direction.z()).normalized();
    pairs.push_back({{0.5 * e.weight, in_plane}, {0.5 * e.weight, mirror_z_axis(in_plane)}});
  }
  return SymmetricPovm(std::move(pairs));
}

Measurement durr_doubling(const Measurement& m) {
  std::vector<RankOneElement> out;
  for (const auto& e : require_rank_one(m, "durr_doubling")) {
    out.push_back({0.5 * e.weight, e.direction});
    out.push_back({0.5 * e.weight, -e.direction});
  }
  return Measurement::from_rank_one(std::move(out));
}

double g_function(double x, double theta) {
  if (!(std::abs(x) <= 1.0)) throw ValidationError("g_function: |x| must not exceed 1");
  const double a = 1.0 + x * std::cos(theta);
  const double b = std::sqrt(std::max(0.0, 1.0 - x * x)) * std::sin(theta);
  return xlogx(a) - xlogx(0.5 * (a + b)) - xlogx(0.5 * (a - b));
}

SymmetricPovm reduce_pair(const SymmetricPovm& s, std::size_t i, std::size_t j) {
  if (i >= s.size() || j >= s.size()) throw std::out_of_range("reduce_pair: pair index out of range");
  if (i == j) throw std::out_of_range("reduce_pair: pair indices must differ");
  const double wi = s.weight(i);
  const double wj = s.weight(j);
  const double w = wi + wj;
  const double uz = std::clamp((wi * s.height(i) + wj * s.height(j)) / w, -1.0, 1.0);
  const double ux = std::sqrt(std::max(0.0, 1.0 - uz * uz));
  const MirrorPair merged{{w, BlochVector(ux, 0.0, uz)}, {w, BlochVector(-ux, 0.0, uz)}};

  std::vector<MirrorPair> pairs;
  const std::size_t keep = std::min(i, j);
  const std::size_t drop = std::max(i, j);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k == keep) pairs.push_back(merged);
    else if (k != drop) pairs.push_back(s.pairs()[k]);
  }
  return SymmetricPovm(std::move(pairs));
}

ReductionTrace reduce_to_pvm(const Measurement& m, double theta) {
  const auto ensemble = symmetric_pair(theta);
  const auto shannon = Criterion::shannon();
  if (!validate(m).valid) throw InvalidMeasurement("reduce_to_pvm: input is not a valid POVM");
  require_rank_one(m, "reduce_to_pvm");

  std::vector<ReductionStep> steps;
  steps.push_back({"input", m, information(m, ensemble, shannon)});
  auto record = [&](const std::string& stage, const Measurement& snapshot) {
    if (equivalent(snapshot, steps.back().snapshot, 1e-9)) return;
    steps.push_back({stage, snapshot, information(snapshot, ensemble, shannon)});
  };

  const auto planar = symmetrize_to_plane(m, ensemble);
  record("plane_symmetrized", planar);
  auto symmetric = symmetrize_about_axis(planar);
  record("axis_symmetrized", symmetric.flatten());

  while (symmetric.size() > 1) {
    std::vector<std::size_t> order(symmetric.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return symmetric.weight(a) > symmetric.weight(b); });
    symmetric = reduce_pair(symmetric, order[0], order[1]);
    record("pair_reduced", symmetric.flatten());
  }
  return ReductionTrace{std::move(steps), symmetric.flatten()};
}

std::vector<double> rescore_trace(const ReductionTrace& trace, const DetectorEnsemble& e,
                                  const Criterion& c) {
  std::vector<double> out;
  for (const auto& s : trace.steps) out.push_back(information(s.snapshot, e, c));
  return out;
}

}  // namespace whichway
