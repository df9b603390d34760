#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace eigensr {

enum class ScorePolarity { kDistance, kSimilarity };

struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
  ScorePolarity polarity = ScorePolarity::kDistance;
};

/// One biometric sample with precomputed templates for both roles:
/// `enroll` is the enrolment-side template (HR original in scenario 1,
/// super-resolved in scenario 2), `query` the query-side template
/// (always super-resolved). The comparator receives opaque indices.
struct Sample {
  std::string user;
  int index = 0;  // acquisition order within the user, starting at 1
};

/// score(enroll_sample, query_sample) -> comparison score.
using Comparator = std::function<double(const Sample&, const Sample&)>;

/// Genuine: every unordered intra-user pair (enrolment side = earlier
/// sample). Impostor: the 1st sample of each user against the 2nd
/// sample of every other user; users lacking a 2nd sample are skipped
/// (count returned in skipped_users). Enumeration order is sorted by
/// user id then index.
ScoreSet run_verification(const std::vector<Sample>& samples, const Comparator& compare,
                          ScorePolarity polarity, int* skipped_users = nullptr);

/// Closed-form pair counts for the verification rules above.
struct PairCounts {
  long genuine = 0;
  long impostor = 0;
};
PairCounts count_verification_pairs(const std::vector<Sample>& samples);

struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  std::vector<DetPoint> det_points;  // one per distinct threshold
};

/// EER from the convex hull of the DET staircase, intersected with the
/// FAR = FRR diagonal (linear interpolation between the bracketing
/// operating points).
EerResult compute_eer(const ScoreSet& scores);

struct IdentificationResult {
  int gallery_size = 0;  // K
  int probe_count = 0;
  std::vector<double> cmc;          // cmc[k-1] = accuracy at rank k
  std::map<int, double> top_k;      // selected ranks (1, 5, ...)
  int tie_count = 0;                // probes whose ranking hit a score tie
};

/// Gallery: first sample of each user with >= 2 samples; probes: their
/// remaining samples. Candidates are ranked by score (polarity-aware),
/// ties broken by user id order.
IdentificationResult run_identification(const std::vector<Sample>& samples,
                                        const Comparator& compare, ScorePolarity polarity);

}  // namespace eigensr
