#include "gtda/synthetic.hpp"

#include <cmath>
#include <random>

#include "gtda/errors.hpp"

namespace gtda {

namespace {

// Box-Muller over explicit 53-bit uniforms. mt19937_64 output is fully
// specified by the standard, so the stream is identical across platforms.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

constexpr double kBlobStd = 0.15;

}  // namespace

ShiftDataset generate_synthetic_shift(const SyntheticConfig& cfg) {
  if (cfg.classes < 2) throw ConfigError("generate_synthetic_shift: need at least 2 classes");
  if (cfg.dim < 2) throw ConfigError("generate_synthetic_shift: need at least 2 dimensions");
  if (cfg.n_per_class < 1) throw ConfigError("generate_synthetic_shift: n_per_class must be >= 1");
  if (cfg.noise < 0.0) throw ConfigError("generate_synthetic_shift: noise must be >= 0");

  const int m = cfg.classes;
  const int d = cfg.dim;
  const int npc = cfg.n_per_class;
  const Eigen::Index rows = static_cast<Eigen::Index>(m) * npc;

  // Centers on scaled basis vectors: distinct classes sit at unit distance
  // (cycling with a growing radius when there are more classes than axes).
  Matrix centers = Matrix::Zero(m, d);
  for (int h = 0; h < m; ++h) {
    centers(h, h % d) = (1.0 + h / d) / std::sqrt(2.0);
  }

  // Fixed unit direction with a different projection onto every center axis,
  // so the translation actually crosses between-class boundaries and a
  // source-only classifier degrades as `shift` grows.
  Vector shift_dir(d);
  for (int j = 0; j < d; ++j) shift_dir(j) = j + 1;
  shift_dir /= shift_dir.norm();

  NormalSampler sampler(cfg.seed);
  ShiftDataset data;
  data.source.resize(rows, d);
  data.target.resize(rows, d);
  data.source_labels.resize(static_cast<std::size_t>(rows));
  data.target_labels.resize(static_cast<std::size_t>(rows));

  Eigen::Index r = 0;
  for (int h = 0; h < m; ++h) {
    for (int i = 0; i < npc; ++i, ++r) {
      for (int j = 0; j < d; ++j) {
        data.source(r, j) = centers(h, j) + kBlobStd * sampler.next();
      }
      data.source_labels[static_cast<std::size_t>(r)] = h + 1;
    }
  }
  r = 0;
  for (int h = 0; h < m; ++h) {
    for (int i = 0; i < npc; ++i, ++r) {
      for (int j = 0; j < d; ++j) {
        data.target(r, j) = centers(h, j) + kBlobStd * sampler.next() +
                            cfg.shift * shift_dir(j) + cfg.noise * sampler.next();
      }
      data.target_labels[static_cast<std::size_t>(r)] = h + 1;
    }
  }
  return data;
}

}  // namespace gtda
