#include "eigensr/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "eigensr/errors.hpp"
#include "eigensr/parallel.hpp"

namespace eigensr {

namespace {

std::vector<Sample> sorted_samples(std::vector<Sample> samples) {
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.user != b.user ? a.user < b.user : a.index < b.index;
  });
  return samples;
}

std::vector<std::vector<Sample>> group_by_user(const std::vector<Sample>& sorted) {
  std::vector<std::vector<Sample>> groups;
  for (const auto& s : sorted) {
    if (groups.empty() || groups.back().front().user != s.user) groups.emplace_back();
    groups.back().push_back(s);
  }
  return groups;
}

}  // namespace

ScoreSet run_verification(const std::vector<Sample>& samples, const Comparator& compare,
                          ScorePolarity polarity, int* skipped_users) {
  if (samples.empty()) throw ArgumentError("run_verification: empty sample set");
  const auto groups = group_by_user(sorted_samples(samples));

  std::vector<std::pair<Sample, Sample>> genuine_pairs;
  for (const auto& g : groups)
    for (size_t i = 0; i < g.size(); ++i)
      for (size_t j = i + 1; j < g.size(); ++j) genuine_pairs.emplace_back(g[i], g[j]);

  std::vector<std::pair<Sample, Sample>> impostor_pairs;
  std::set<std::string> skipped;
  for (size_t u = 0; u < groups.size(); ++u) {
    for (size_t v = 0; v < groups.size(); ++v) {
      if (u == v) continue;
      if (groups[v].size() < 2) {
        skipped.insert(groups[v].front().user);
        continue;
      }
      impostor_pairs.emplace_back(groups[u].front(), groups[v][1]);
    }
  }
  if (skipped_users) *skipped_users = static_cast<int>(skipped.size());

  ScoreSet scores;
  scores.polarity = polarity;
  scores.genuine.resize(genuine_pairs.size());
  scores.impostor.resize(impostor_pairs.size());
  parallel_for(static_cast<int>(genuine_pairs.size()), [&](int i) {
    scores.genuine[static_cast<size_t>(i)] =
        compare(genuine_pairs[static_cast<size_t>(i)].first, genuine_pairs[static_cast<size_t>(i)].second);
  });
  parallel_for(static_cast<int>(impostor_pairs.size()), [&](int i) {
    scores.impostor[static_cast<size_t>(i)] =
        compare(impostor_pairs[static_cast<size_t>(i)].first, impostor_pairs[static_cast<size_t>(i)].second);
  });
  return scores;
}

PairCounts count_verification_pairs(const std::vector<Sample>& samples) {
  const auto groups = group_by_user(sorted_samples(samples));
  PairCounts counts;
  long with_second = 0;
  for (const auto& g : groups) {
    const long n = static_cast<long>(g.size());
    counts.genuine += n * (n - 1) / 2;
    if (n >= 2) ++with_second;
  }
  for (const auto& g : groups) {
    const long others = with_second - (g.size() >= 2 ? 1 : 0);
    counts.impostor += others;
  }
  return counts;
}

EerResult compute_eer(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.impostor.empty())
    throw ArgumentError("compute_eer: both score classes must be non-empty");

  // Work in distance convention; similarity scores are negated.
  const double flip = scores.polarity == ScorePolarity::kDistance ? 1.0 : -1.0;
  std::vector<double> gen(scores.genuine), imp(scores.impostor);
  for (double& v : gen) v *= flip;
  for (double& v : imp) v *= flip;
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());

  std::vector<double> thresholds;
  thresholds.reserve(gen.size() + imp.size() + 2);
  for (double v : gen) thresholds.push_back(v);
  for (double v : imp) thresholds.push_back(v);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  const double lo = thresholds.front() - 1.0;
  const double hi = thresholds.back() + 1.0;
  thresholds.insert(thresholds.begin(), lo);
  thresholds.push_back(hi);

  // Staircase operating points: accept when score <= threshold.
  struct Op {
    double t, far, frr;
  };
  std::vector<Op> ops;
  ops.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto fa = std::upper_bound(imp.begin(), imp.end(), t) - imp.begin();
    const auto ga = std::upper_bound(gen.begin(), gen.end(), t) - gen.begin();
    const double far = static_cast<double>(fa) / static_cast<double>(imp.size());
    const double frr = 1.0 - static_cast<double>(ga) / static_cast<double>(gen.size());
    ops.push_back({t, far, frr});
  }

  EerResult result;
  for (size_t i = 1; i + 1 < ops.size(); ++i)
    result.det_points.push_back({flip * ops[i].t, ops[i].far, ops[i].frr});

  // Lower convex hull of (FAR, FRR), FAR ascending. The EER is where
  // the hull crosses FAR = FRR.
  // FRR is non-increasing in threshold order, so keeping the last
  // point per distinct FAR keeps the dominant (lowest-FRR) one.
  std::vector<Op> unique_ops;
  for (const Op& p : ops) {
    if (!unique_ops.empty() && p.far == unique_ops.back().far)
      unique_ops.back() = p;
    else
      unique_ops.push_back(p);
  }

  std::vector<Op> hull;
  for (const Op& p : unique_ops) {
    while (hull.size() >= 2) {
      const Op& a = hull[hull.size() - 2];
      const Op& b = hull.back();
      const double cross = (b.far - a.far) * (p.frr - a.frr) - (b.frr - a.frr) * (p.far - a.far);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }

  for (size_t i = 0; i < hull.size(); ++i) {
    const double d = hull[i].frr - hull[i].far;
    if (d > 0.0) continue;
    if (d == 0.0 || i == 0) {
      result.eer = hull[i].far;
      result.threshold = flip * hull[i].t;
      return result;
    }
    const Op& a = hull[i - 1];
    const Op& b = hull[i];
    const double s = (a.frr - a.far) / ((b.far - a.far) - (b.frr - a.frr));
    result.eer = a.far + s * (b.far - a.far);
    result.threshold = flip * (a.t + s * (b.t - a.t));
    return result;
  }
  // FRR stays above FAR everywhere (degenerate); report the last point.
  result.eer = hull.back().far;
  result.threshold = flip * hull.back().t;
  return result;
}

IdentificationResult run_identification(const std::vector<Sample>& samples,
                                        const Comparator& compare, ScorePolarity polarity) {
  const auto groups = group_by_user(sorted_samples(samples));
  std::vector<Sample> gallery;
  std::vector<Sample> probes;
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    gallery.push_back(g.front());
    for (size_t i = 1; i < g.size(); ++i) probes.push_back(g[i]);
  }
  if (gallery.size() < 2)
    throw ArgumentError("run_identification: need >= 2 users with >= 2 samples");

  const int k_users = static_cast<int>(gallery.size());
  IdentificationResult result;
  result.gallery_size = k_users;
  result.probe_count = static_cast<int>(probes.size());

  std::vector<int> ranks(probes.size());
  std::vector<uint8_t> tied(probes.size(), 0);
  parallel_for(static_cast<int>(probes.size()), [&](int p) {
    const Sample& probe = probes[static_cast<size_t>(p)];
    std::vector<std::pair<double, int>> scored(gallery.size());
    for (int g = 0; g < k_users; ++g) {
      double s = compare(gallery[static_cast<size_t>(g)], probe);
      if (polarity == ScorePolarity::kSimilarity) s = -s;
      scored[static_cast<size_t>(g)] = {s, g};
    }
    // Stable sort keeps user-id order on score ties.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    int rank = 0;
    double true_score = 0.0;
    for (int i = 0; i < k_users; ++i) {
      if (gallery[static_cast<size_t>(scored[static_cast<size_t>(i)].second)].user == probe.user) {
        rank = i + 1;
        true_score = scored[static_cast<size_t>(i)].first;
        break;
      }
    }
    ranks[static_cast<size_t>(p)] = rank;
    for (int i = 0; i < k_users; ++i) {
      if (i + 1 != rank && scored[static_cast<size_t>(i)].first == true_score) {
        tied[static_cast<size_t>(p)] = 1;
        break;
      }
    }
  });

  result.cmc.assign(static_cast<size_t>(k_users), 0.0);
  for (int r : ranks)
    for (int k = r; k <= k_users; ++k) result.cmc[static_cast<size_t>(k - 1)] += 1.0;
  for (double& v : result.cmc) v /= static_cast<double>(probes.size());
  for (uint8_t t : tied) result.tie_count += t;
  result.top_k[1] = result.cmc.front();
  if (k_users >= 5) result.top_k[5] = result.cmc[4];
  return result;
}

}  // namespace eigensr
